use super::{Elem, Ring, RingKind};
use crate::error::{Error, Result};

/// A small extension 0 -> E*k -> source -> target -> 0 with E = pi^{n-1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallExtension {
    pub source: Ring,
    pub target: Ring,
    pub e: Elem,
}

impl SmallExtension {
    /// k[t]/(t^n) -> k[t]/(t^{n-1}) or Z/p^n -> Z/p^{n-1}.
    pub fn new(kind: RingKind, p: u64, m: u32, n: u32) -> Result<SmallExtension> {
        match kind {
            RingKind::TruncatedSeries | RingKind::IntegersModPn => {}
            other => return Err(Error::UnsupportedKind(other.name().into())),
        }
        if n < 2 {
            return Err(Error::InvalidRing("a small extension needs n >= 2".into()));
        }
        let source = super::make_ring(kind, p, m, n)?;
        SmallExtension::from_source(&source)
    }

    /// The small extension whose source is `source` (which must not be a field).
    pub fn from_source(source: &Ring) -> Result<SmallExtension> {
        if source.is_field() {
            return Err(Error::UnsupportedKind(source.kind().name().into()));
        }
        let n = source.n();
        let target = source.truncation(source.kind(), n - 1)?;
        let e = source.pi_pow(n - 1);
        let ext = SmallExtension { source: source.clone(), target, e };
        debug_assert!(ext.kills_maximal_ideal());
        Ok(ext)
    }

    /// The extension of `target` by one more order of the given truncated kind.
    pub fn over(target: &Ring, kind: RingKind) -> Result<SmallExtension> {
        let kind = if target.is_field() { kind } else { target.kind() };
        if kind == RingKind::IntegersModPn && target.m() != 1 {
            return Err(Error::UnsupportedKind("integers-mod-p^n over GF(p^m), m > 1".into()));
        }
        let source = target.truncation(kind, target.n() + 1)?;
        SmallExtension::from_source(&source)
    }

    pub fn residue_field(&self) -> Ring {
        self.source.residue_field()
    }

    pub fn reduce(&self, a: Elem) -> Elem {
        let c = self.source.coeffs(a);
        self.target.from_coeffs(&c[..c.len() - 1])
    }

    /// Coefficient-wise lift; not a ring homomorphism for Z/p^n.
    pub fn section(&self, a: Elem) -> Elem {
        self.source.from_coeffs(&self.target.coeffs(a))
    }

    /// E * c for a residue-field element c.
    pub fn e_times(&self, c: u32) -> Elem {
        self.source.mul(self.e, self.source.from_residue(c))
    }

    /// The residue-field c with a = E*c, if a lies in the kernel.
    pub fn div_e(&self, a: Elem) -> Option<u32> {
        let c = self.source.coeffs(a);
        let (last, rest) = c.split_last().expect("nonempty");
        if rest.iter().all(|&x| x == 0) {
            Some(*last)
        } else {
            None
        }
    }

    /// E * m = 0, checked on every generator of m (the uniformizer).
    pub fn kills_maximal_ideal(&self) -> bool {
        self.source.is_zero(self.source.mul(self.e, self.source.uniformizer()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_numbers_to_field() {
        let ext = SmallExtension::new(RingKind::TruncatedSeries, 5, 1, 2).unwrap();
        assert!(ext.target.is_field());
        assert_eq!(ext.e, ext.source.uniformizer());
        assert!(ext.kills_maximal_ideal());
    }

    #[test]
    fn shapes() {
        let ext = SmallExtension::new(RingKind::TruncatedSeries, 5, 1, 3).unwrap();
        assert_eq!(ext.target.n(), 2);
        assert_eq!(ext.e, ext.source.from_coeffs(&[0, 0, 1]));
        let z = SmallExtension::new(RingKind::IntegersModPn, 3, 1, 2).unwrap();
        assert_eq!(z.e, z.source.from_int(3));
        assert_eq!(z.target.kind(), RingKind::PrimeField);
        assert_eq!(
            SmallExtension::new(RingKind::PrimeField, 5, 1, 2).unwrap_err(),
            Error::UnsupportedKind("prime-field".into())
        );
    }

    #[test]
    fn section_and_kernel() {
        let ext = SmallExtension::new(RingKind::IntegersModPn, 5, 1, 3).unwrap();
        for v in 0..25 {
            let x = ext.target.from_int(v);
            assert_eq!(ext.reduce(ext.section(x)), x);
        }
        let k = ext.e_times(3);
        assert_eq!(ext.reduce(k), ext.target.zero());
        assert_eq!(ext.div_e(k), Some(3));
        assert_eq!(ext.div_e(ext.source.from_int(5)), None);
    }
}
