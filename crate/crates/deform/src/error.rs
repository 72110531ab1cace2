use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("polynomial {0:?} is reducible over the prime field")]
    ReduciblePolynomial(Vec<u32>),
    #[error("invalid ring parameters: {0}")]
    InvalidRing(String),
    #[error("operands belong to different rings")]
    RingMismatch,
    #[error("element is not a unit")]
    NotAUnit,
    #[error("small extensions are not defined for {0}")]
    UnsupportedKind(String),
    #[error("linear system has no solution")]
    NoSolution,
    #[error("operation requires a field, got {0}")]
    NotAField(String),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("vector is not in the span")]
    NotInSpan,
    #[error("columns are dependent over the residue field")]
    DependentColumnsOverResidueField,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("degree {0} exceeds the supported maximum of 4")]
    DegreeTooLarge(usize),
    #[error("group closure exceeded bound {0}")]
    BoundExceeded(usize),
    #[error("generator {0} is singular")]
    SingularGenerator(usize),
    #[error("ideal is not invariant under element {0}")]
    IdealNotInvariant(usize),
    #[error("representations are not lifts of the same representation")]
    NotLiftsOfSamePoint,
    #[error("naive lift does not reduce to a homomorphism")]
    NaiveDoesNotReduce,
    #[error("class is not invariant under element {0}")]
    NotInvariantClass(usize),
    #[error("generators are dependent over the residue field")]
    DependentGenerators,
    #[error("prime {0} is not supported by the Hermitian fixture")]
    UnsupportedPrime(u64),
    #[error("malformed input: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
