//! Coefficient rings: finite fields and the Artin local rings k[t]/(t^n), Z/p^n.

mod field;
mod small_ext;

pub use field::{find_irreducible, is_irreducible, is_prime, Field};
pub use small_ext::SmallExtension;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingKind {
    PrimeField,
    ExtField,
    TruncatedSeries,
    IntegersModPn,
}

impl RingKind {
    pub fn name(self) -> &'static str {
        match self {
            RingKind::PrimeField => "prime-field",
            RingKind::ExtField => "ext-field",
            RingKind::TruncatedSeries => "truncated-series",
            RingKind::IntegersModPn => "integers-mod-p^n",
        }
    }

    pub fn parse(s: &str) -> Result<RingKind> {
        match s {
            "prime-field" => Ok(RingKind::PrimeField),
            "ext-field" => Ok(RingKind::ExtField),
            "truncated-series" => Ok(RingKind::TruncatedSeries),
            "integers-mod-p^n" | "integers-mod" => Ok(RingKind::IntegersModPn),
            other => Err(Error::Schema(format!("unknown ring kind {other:?}"))),
        }
    }
}

/// Largest truncation order for k[t]/(t^n): each coefficient takes 16 bits.
pub const MAX_SERIES_ORDER: u32 = 8;

/// A packed ring element. Interpretation depends on the owning [`Ring`]:
/// a field index, 16-bit coefficient slots for k[t]/(t^n), or an integer
/// residue for Z/p^n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Elem(pub(crate) u128);

#[derive(Debug)]
struct RingData {
    kind: RingKind,
    n: u32,
    modulus: u128,
    field: Arc<Field>,
}

/// Descriptor of a coefficient ring; cheap to clone.
#[derive(Clone)]
pub struct Ring(Arc<RingData>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.kind == other.0.kind && self.0.n == other.0.n && *self.0.field == *other.0.field)
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.p();
        let m = self.m();
        match self.kind() {
            RingKind::PrimeField => write!(f, "GF({p})"),
            RingKind::ExtField => write!(f, "GF({p}^{m})"),
            RingKind::TruncatedSeries if m == 1 => write!(f, "GF({p})[t]/(t^{})", self.n()),
            RingKind::TruncatedSeries => write!(f, "GF({p}^{m})[t]/(t^{})", self.n()),
            RingKind::IntegersModPn => write!(f, "Z/{p}^{}", self.n()),
        }
    }
}

/// Build a ring descriptor. Characteristic 2 is rejected.
pub fn make_ring(kind: RingKind, p: u64, m: u32, n: u32) -> Result<Ring> {
    make_ring_with_poly(kind, p, m, n, None)
}

/// As [`make_ring`], with an explicit irreducible polynomial for the residue field.
pub fn make_ring_with_poly(
    kind: RingKind,
    p: u64,
    m: u32,
    n: u32,
    poly: Option<Vec<u32>>,
) -> Result<Ring> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Err(Error::EvenCharacteristic);
    }
    Ring::build(kind, p, m, n, poly)
}

impl Ring {
    fn build(kind: RingKind, p: u64, m: u32, n: u32, poly: Option<Vec<u32>>) -> Result<Ring> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > u16::MAX as u64 {
            return Err(Error::InvalidRing(format!("characteristic {p} is too large")));
        }
        let p32 = p as u32;
        match kind {
            RingKind::PrimeField | RingKind::IntegersModPn if m != 1 => {
                return Err(Error::InvalidRing(format!("{} requires m = 1", kind.name())))
            }
            _ => {}
        }
        let field = Arc::new(Field::new(p32, m, poly)?);
        let field_kind = if m == 1 { RingKind::PrimeField } else { RingKind::ExtField };
        let (kind, n) = match kind {
            RingKind::PrimeField | RingKind::ExtField => (field_kind, 1),
            RingKind::TruncatedSeries | RingKind::IntegersModPn if n == 0 => {
                return Err(Error::InvalidRing("truncation order must be at least 1".into()))
            }
            RingKind::TruncatedSeries | RingKind::IntegersModPn if n == 1 => (field_kind, 1),
            RingKind::TruncatedSeries => {
                if n > MAX_SERIES_ORDER {
                    return Err(Error::InvalidRing(format!(
                        "truncation order {n} exceeds {MAX_SERIES_ORDER}"
                    )));
                }
                (kind, n)
            }
            RingKind::IntegersModPn => {
                let modulus = (p as u128).checked_pow(n);
                if modulus.map_or(true, |v| v >= 1u128 << 62) {
                    return Err(Error::InvalidRing(format!("{p}^{n} is too large")));
                }
                (kind, n)
            }
        };
        let modulus = if kind == RingKind::IntegersModPn {
            (p as u128).pow(n)
        } else {
            0
        };
        Ok(Ring(Arc::new(RingData { kind, n, modulus, field })))
    }

    /// GF(p^m) for any prime p, including 2. Used where characteristic 2 is
    /// meaningful (group cohomology); symmetric-matrix operations still
    /// reject it.
    pub fn field_any(p: u64, m: u32) -> Result<Ring> {
        let kind = if m == 1 { RingKind::PrimeField } else { RingKind::ExtField };
        Ring::build(kind, p, m, 1, None)
    }

    /// The ring of `kind` (a truncated kind) over this ring's residue field with order n.
    pub fn truncation(&self, kind: RingKind, n: u32) -> Result<Ring> {
        if n == 1 {
            return Ok(self.residue_field());
        }
        Ring::build(kind, self.p() as u64, self.m(), n, Some(self.field().poly().to_vec()))
    }

    pub fn kind(&self) -> RingKind {
        self.0.kind
    }

    pub fn p(&self) -> u32 {
        self.0.field.p()
    }

    pub fn m(&self) -> u32 {
        self.0.field.m()
    }

    /// Length of the m-adic filtration (1 for fields).
    pub fn n(&self) -> u32 {
        self.0.n
    }

    pub fn field(&self) -> &Field {
        &self.0.field
    }

    pub fn is_field(&self) -> bool {
        self.0.n == 1
    }

    /// Number of elements.
    pub fn size(&self) -> u128 {
        (self.field().order() as u128).pow(self.n())
    }

    pub fn residue_field(&self) -> Ring {
        if self.is_field() {
            return self.clone();
        }
        let kind = if self.m() == 1 { RingKind::PrimeField } else { RingKind::ExtField };
        Ring(Arc::new(RingData {
            kind,
            n: 1,
            modulus: 0,
            field: self.0.field.clone(),
        }))
    }

    pub fn check_char_not_two(&self) -> Result<()> {
        if self.p() == 2 {
            Err(Error::EvenCharacteristic)
        } else {
            Ok(())
        }
    }

    pub fn zero(&self) -> Elem {
        Elem(0)
    }

    pub fn one(&self) -> Elem {
        Elem(1)
    }

    pub fn from_int(&self, v: i64) -> Elem {
        match self.kind() {
            RingKind::IntegersModPn => Elem((v as i128).rem_euclid(self.0.modulus as i128) as u128),
            _ => Elem(self.field().from_int(v) as u128),
        }
    }

    /// Embed a residue-field element coefficient-wise (the set-theoretic section).
    pub fn from_residue(&self, a: u32) -> Elem {
        Elem(a as u128)
    }

    /// Element whose i-th filtration coefficient is `c[i]` (t-adic or p-adic digits).
    pub fn from_coeffs(&self, c: &[u32]) -> Elem {
        let n = self.n() as usize;
        match self.kind() {
            RingKind::PrimeField | RingKind::ExtField => Elem(c.first().copied().unwrap_or(0) as u128),
            RingKind::TruncatedSeries => {
                let mut v = 0u128;
                for (i, &ci) in c.iter().take(n).enumerate() {
                    v |= (ci as u128) << (16 * i);
                }
                Elem(v)
            }
            RingKind::IntegersModPn => {
                let p = self.p() as u128;
                let mut v = 0u128;
                for &ci in c.iter().take(n).rev() {
                    v = v * p + (ci as u128 % p);
                }
                Elem(v)
            }
        }
    }

    /// Filtration coefficients, always of length n.
    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        let n = self.n() as usize;
        match self.kind() {
            RingKind::PrimeField | RingKind::ExtField => vec![a.0 as u32],
            RingKind::TruncatedSeries => (0..n).map(|i| ((a.0 >> (16 * i)) & 0xffff) as u32).collect(),
            RingKind::IntegersModPn => {
                let p = self.p() as u128;
                let mut v = a.0;
                (0..n)
                    .map(|_| {
                        let d = (v % p) as u32;
                        v /= p;
                        d
                    })
                    .collect()
            }
        }
    }

    /// Validate a packed element read from outside.
    pub fn contains(&self, a: Elem) -> bool {
        match self.kind() {
            RingKind::PrimeField | RingKind::ExtField => a.0 < self.field().order() as u128,
            RingKind::TruncatedSeries => {
                let q = self.field().order() as u128;
                (a.0 >> (16 * self.n())) == 0
                    && (0..self.n()).all(|i| ((a.0 >> (16 * i)) & 0xffff) < q)
            }
            RingKind::IntegersModPn => a.0 < self.0.modulus,
        }
    }

    pub fn is_zero(&self, a: Elem) -> bool {
        a.0 == 0
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let f = self.field();
        match self.kind() {
            RingKind::PrimeField | RingKind::ExtField => Elem(f.add(a.0 as u32, b.0 as u32) as u128),
            RingKind::TruncatedSeries => {
                let mut v = 0u128;
                for i in 0..self.n() {
                    let x = ((a.0 >> (16 * i)) & 0xffff) as u32;
                    let y = ((b.0 >> (16 * i)) & 0xffff) as u32;
                    v |= (f.add(x, y) as u128) << (16 * i);
                }
                Elem(v)
            }
            RingKind::IntegersModPn => Elem((a.0 + b.0) % self.0.modulus),
        }
    }

    pub fn neg(&self, a: Elem) -> Elem {
        let f = self.field();
        match self.kind() {
            RingKind::PrimeField | RingKind::ExtField => Elem(f.neg(a.0 as u32) as u128),
            RingKind::TruncatedSeries => {
                let mut v = 0u128;
                for i in 0..self.n() {
                    let x = ((a.0 >> (16 * i)) & 0xffff) as u32;
                    v |= (f.neg(x) as u128) << (16 * i);
                }
                Elem(v)
            }
            RingKind::IntegersModPn => Elem((self.0.modulus - a.0) % self.0.modulus),
        }
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let f = self.field();
        match self.kind() {
            RingKind::PrimeField | RingKind::ExtField => Elem(f.mul(a.0 as u32, b.0 as u32) as u128),
            RingKind::TruncatedSeries => {
                let n = self.n() as usize;
                let ca = self.coeffs(a);
                let cb = self.coeffs(b);
                let mut out = vec![0u32; n];
                for i in 0..n {
                    if ca[i] == 0 {
                        continue;
                    }
                    for j in 0..n - i {
                        out[i + j] = f.add(out[i + j], f.mul(ca[i], cb[j]));
                    }
                }
                self.from_coeffs(&out)
            }
            RingKind::IntegersModPn => Elem(a.0 * b.0 % self.0.modulus),
        }
    }

    /// Reduction to the residue field.
    pub fn residue(&self, a: Elem) -> u32 {
        match self.kind() {
            RingKind::PrimeField | RingKind::ExtField => a.0 as u32,
            RingKind::TruncatedSeries => (a.0 & 0xffff) as u32,
            RingKind::IntegersModPn => (a.0 % self.p() as u128) as u32,
        }
    }

    pub fn is_unit(&self, a: Elem) -> bool {
        self.residue(a) != 0
    }

    /// Inverse of a unit: residue-field inverse refined by Newton steps
    /// b <- b(2 - ab), each of which doubles the correct precision.
    pub fn inv(&self, a: Elem) -> Result<Elem> {
        let r = self.field().inv(self.residue(a)).ok_or(Error::NotAUnit)?;
        let mut b = self.from_residue(r);
        let two = self.from_int(2);
        let mut prec = 1;
        while prec < self.n() {
            b = self.mul(b, self.sub(two, self.mul(a, b)));
            prec *= 2;
        }
        debug_assert_eq!(self.mul(a, b), self.one());
        Ok(b)
    }

    /// Largest v with a in m^v; `None` for zero.
    pub fn valuation(&self, a: Elem) -> Option<u32> {
        if a.0 == 0 {
            return None;
        }
        self.coeffs(a).iter().position(|&c| c != 0).map(|v| v as u32)
    }

    /// Generator of the maximal ideal (zero for fields).
    pub fn uniformizer(&self) -> Elem {
        match self.kind() {
            RingKind::PrimeField | RingKind::ExtField => Elem(0),
            RingKind::TruncatedSeries => Elem(1 << 16),
            RingKind::IntegersModPn => Elem(self.p() as u128),
        }
    }

    pub fn pi_pow(&self, k: u32) -> Elem {
        if k >= self.n() {
            return Elem(0);
        }
        let mut c = vec![0u32; self.n() as usize];
        c[k as usize] = 1;
        self.from_coeffs(&c)
    }

    /// a / pi^k for a in m^k; the undetermined top coefficients are set to zero.
    pub fn div_pi(&self, a: Elem, k: u32) -> Elem {
        let c = self.coeffs(a);
        debug_assert!(c.iter().take(k as usize).all(|&x| x == 0));
        let shifted: Vec<u32> = c.iter().skip(k as usize).copied().collect();
        self.from_coeffs(&shifted)
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut acc = self.one();
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// Unpacks an element into a value carrying its ring.
    pub fn elem(&self, a: Elem) -> RingElem {
        RingElem { ring: self.clone(), value: a }
    }

    pub fn format_elem(&self, a: Elem) -> String {
        let f = self.field();
        let fmt_field = |x: u32| -> String {
            if f.m() == 1 {
                x.to_string()
            } else {
                format!("{:?}", f.digits(x))
            }
        };
        match self.kind() {
            RingKind::PrimeField | RingKind::ExtField => fmt_field(a.0 as u32),
            _ => {
                let parts: Vec<String> = self.coeffs(a).into_iter().map(fmt_field).collect();
                format!("[{}]", parts.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// An element bundled with its ring, for checked arithmetic at API boundaries.
#[derive(Clone, PartialEq, Eq)]
pub struct RingElem {
    pub ring: Ring,
    pub value: Elem,
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self.ring.format_elem(self.value), self.ring)
    }
}

impl RingElem {
    pub fn coeffs(&self) -> Vec<u32> {
        self.ring.coeffs(self.value)
    }
}

pub fn arith(a: &RingElem, b: &RingElem, op: ArithOp) -> Result<RingElem> {
    if a.ring != b.ring {
        return Err(Error::RingMismatch);
    }
    let r = &a.ring;
    let value = match op {
        ArithOp::Add => r.add(a.value, b.value),
        ArithOp::Sub => r.sub(a.value, b.value),
        ArithOp::Mul => r.mul(a.value, b.value),
    };
    Ok(RingElem { ring: r.clone(), value })
}

pub fn invert(a: &RingElem) -> Result<RingElem> {
    Ok(RingElem { ring: a.ring.clone(), value: a.ring.inv(a.value)? })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts(p: u64, n: u32) -> Ring {
        make_ring(RingKind::TruncatedSeries, p, 1, n).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert_eq!(make_ring(RingKind::PrimeField, 2, 1, 1).unwrap_err(), Error::EvenCharacteristic);
        assert_eq!(make_ring(RingKind::PrimeField, 9, 1, 1).unwrap_err(), Error::NotPrime(9));
        assert!(make_ring(RingKind::IntegersModPn, 5, 2, 3).is_err());
        assert_eq!(
            make_ring_with_poly(RingKind::ExtField, 5, 2, 1, Some(vec![1, 0, 1])).unwrap_err(),
            Error::ReduciblePolynomial(vec![1, 0, 1])
        );
        assert!(Ring::field_any(2, 1).is_ok());
    }

    #[test]
    fn gf25_has_sixth_root() {
        let r = make_ring(RingKind::ExtField, 5, 2, 1).unwrap();
        let z = r.field().root_of_unity(6).unwrap();
        assert_eq!(r.field().element_order(z), Some(6));
    }

    #[test]
    fn spot_arith() {
        let f = make_ring(RingKind::PrimeField, 5, 1, 1).unwrap();
        assert_eq!(f.mul(f.from_int(2), f.from_int(3)), f.one());
        assert_eq!(f.inv(f.from_int(2)).unwrap(), f.from_int(3));

        let d = ts(5, 2);
        let t = d.uniformizer();
        let a = d.add(d.one(), t);
        let b = d.sub(d.one(), t);
        assert_eq!(d.mul(a, b), d.one());
        assert_eq!(d.inv(t), Err(Error::NotAUnit));

        let t3 = ts(5, 3);
        let u = t3.uniformizer();
        let inv = t3.inv(t3.add(t3.one(), u)).unwrap();
        assert_eq!(inv, t3.from_coeffs(&[1, 4, 1]));

        let z = make_ring(RingKind::IntegersModPn, 5, 1, 2).unwrap();
        assert_eq!(z.mul(z.from_int(5), z.from_int(5)), z.zero());
        assert_eq!(z.inv(z.from_int(7)).unwrap(), z.from_int(18));
    }

    #[test]
    fn characteristic() {
        let p = 5;
        for r in [ts(5, 3), make_ring(RingKind::ExtField, 5, 2, 1).unwrap()] {
            assert_eq!(r.from_int(p), r.zero());
        }
        let z = make_ring(RingKind::IntegersModPn, 5, 1, 3).unwrap();
        assert_ne!(z.from_int(5), z.zero());
    }

    #[test]
    fn order_one_truncations_are_fields() {
        let r = make_ring(RingKind::TruncatedSeries, 7, 1, 1).unwrap();
        assert_eq!(r.kind(), RingKind::PrimeField);
        let z = make_ring(RingKind::IntegersModPn, 7, 1, 1).unwrap();
        assert_eq!(z, make_ring(RingKind::PrimeField, 7, 1, 1).unwrap());
    }

    #[test]
    fn arith_checks_ring() {
        let a = ts(5, 2).elem(Elem(1));
        let b = ts(5, 3).elem(Elem(1));
        assert_eq!(arith(&a, &b, ArithOp::Add), Err(Error::RingMismatch));
        let c = arith(&a, &a, ArithOp::Add).unwrap();
        assert_eq!(c.coeffs(), vec![2, 0]);
    }

    #[test]
    fn valuations_and_division() {
        let r = ts(3, 4);
        let x = r.from_coeffs(&[0, 0, 2, 1]);
        assert_eq!(r.valuation(x), Some(2));
        assert_eq!(r.div_pi(x, 2), r.from_coeffs(&[2, 1]));
        let z = make_ring(RingKind::IntegersModPn, 3, 1, 3).unwrap();
        assert_eq!(z.valuation(z.from_int(18)), Some(2));
        assert_eq!(z.div_pi(z.from_int(18), 2), z.from_int(2));
    }
}
