//! The Hermitian curve y^p - y = 1/x^{p+1}: holomorphic differential basis
//! indices, the diagonal automorphism x -> zeta x on them, its quadric
//! generators on the special fibre and the first-order family in x_1.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::deform::{quad_matrix, CanonicalIdealModel};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{Matrix, SigmaBasis, Subspace};
use crate::rep::Representation;
use crate::ring::{is_prime, make_ring, Ring, RingKind, SmallExtension};

/// The differential w_{N,mu} = x^{N - 2 mu} X^{p - 1 - mu} dx on the special fibre.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct DifferentialIndex {
    pub n: i64,
    pub mu: i64,
}

impl DifferentialIndex {
    /// Exponents (a, b) of x^a X^b.
    pub fn exponents(&self, p: i64) -> (i64, i64) {
        (self.n - 2 * self.mu, p - 1 - self.mu)
    }
}

fn check_prime(p: u64) -> Result<()> {
    if p < 5 || !is_prime(p) {
        return Err(Error::UnsupportedPrime(p));
    }
    Ok(())
}

/// Indices 1 <= mu <= p-1, floor(mu (p-1) / p) <= N <= 2 mu - 2, ordered by (mu, N).
pub fn basis_indices(p: u64) -> Result<Vec<DifferentialIndex>> {
    check_prime(p)?;
    let p = p as i64;
    let mut out = Vec::new();
    for mu in 1..p {
        for n in (mu * (p - 1)) / p..=2 * mu - 2 {
            out.push(DifferentialIndex { n, mu });
        }
    }
    Ok(out)
}

/// Exponent c with sigma(w_{N,mu}) = zeta_{p+1}^c w_{N,mu}: N - 2 mu + 1 mod p + 1.
pub fn sigma_character(p: u64, idx: &DifferentialIndex) -> u64 {
    (idx.n - 2 * idx.mu + 1).rem_euclid(p as i64 + 1) as u64
}

/// Role of a quadric generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Binomial from two products with the same monomial on the special fibre.
    Coincidence,
    /// w w' - w'' w''' - (surviving term) from the Artin-Schreier relation.
    ArtinSchreier,
}

/// A kept generator with its character data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorInfo {
    pub kind: GeneratorKind,
    /// The leading product (a, b) of basis indices.
    pub lead: (usize, usize),
    /// Character of every term of the special-fibre generator.
    pub character: u64,
    /// The product multiplying x_1 in the first-order family, if any.
    pub eps_term: Option<(usize, usize)>,
    pub eps_character: Option<u64>,
}

/// The fixture for one prime: basis, characters, generators and representation.
#[derive(Debug, Clone)]
pub struct HermitianFixture {
    pub p: u64,
    pub indices: Vec<DifferentialIndex>,
    /// Characters of the basis elements.
    pub characters: Vec<u64>,
    /// GF(p^2), which contains the (p+1)-th roots of unity.
    pub field: Ring,
    /// A primitive (p+1)-th root of unity in `field`.
    pub zeta: u32,
    pub info: Vec<GeneratorInfo>,
    pub special: CanonicalIdealModel,
    /// E-parts (x_1 coefficients) of the kept generators.
    pub e_parts: Vec<Matrix>,
    /// Number of Artin-Schreier relations emitted before independence reduction.
    pub artin_schreier_emitted: usize,
}

/// Verdict of the character test for the first-order family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonLiftVerdict {
    /// The generator's x_1 term has a character different from its main
    /// terms, so no eigenvector of sigma lifts it.
    DoesNotLift { generator: usize, main_character: u64, eps_character: u64, offset: i64 },
    /// Every x_1 term shares the character of its generator.
    Lifts,
}

impl HermitianFixture {
    pub fn new(p: u64) -> Result<HermitianFixture> {
        let indices = basis_indices(p)?;
        let field = make_ring(RingKind::ExtField, p, 2, 1)?;
        let zeta = field.field().root_of_unity(p + 1).ok_or(Error::UnsupportedPrime(p))?;
        let g = indices.len();
        let characters: Vec<u64> = indices.iter().map(|i| sigma_character(p, i)).collect();
        let sigma = SigmaBasis::new(g);
        let pairs: Vec<(usize, usize)> = sigma.pairs().to_vec();
        let pi = p as i64;
        // Products grouped by (N + N', mu + mu'); equal sums give equal monomials.
        let sums = |&(a, b): &(usize, usize)| (indices[a].n + indices[b].n, indices[a].mu + indices[b].mu);
        let mut by_sum: BTreeMap<(i64, i64), Vec<(usize, usize)>> = BTreeMap::new();
        for pr in &pairs {
            by_sum.entry(sums(pr)).or_default().push(*pr);
        }
        let pair_char = |(a, b): (usize, usize)| (characters[a] + characters[b]) % (p + 1);
        let nmono = pairs.len();
        let fld = field.field();
        let unit = |pr: (usize, usize), c: u32, v: &mut Vec<u32>| {
            let i = sigma.index(pr.0, pr.1);
            v[i] = fld.add(v[i], c);
        };
        let minus_one = fld.neg(1);
        let mut candidates: Vec<(Vec<u32>, Option<Vec<u32>>, GeneratorInfo)> = Vec::new();
        // Pair sums are not ordered by BTreeMap in pair order; follow pair order.
        let mut seen_sums = std::collections::HashSet::new();
        for pr in &pairs {
            let key = sums(pr);
            if !seen_sums.insert(key) {
                continue;
            }
            let class = &by_sum[&key];
            for other in &class[1..] {
                let mut v = vec![0u32; nmono];
                unit(class[0], 1, &mut v);
                unit(*other, minus_one, &mut v);
                let info = GeneratorInfo {
                    kind: GeneratorKind::Coincidence,
                    lead: class[0],
                    character: pair_char(class[0]),
                    eps_term: None,
                    eps_character: None,
                };
                candidates.push((v, None, info));
            }
        }
        let mut artin_schreier_emitted = 0;
        for pr in &pairs {
            let (s, m) = sums(pr);
            let t2 = by_sum.get(&(s + pi - 1, m + pi));
            let tj = by_sum.get(&(s + 2 * pi - 2, m + pi - 1));
            let (Some(t2), Some(tj)) = (t2, tj) else { continue };
            artin_schreier_emitted += 1;
            let mut v = vec![0u32; nmono];
            unit(*pr, 1, &mut v);
            unit(t2[0], minus_one, &mut v);
            unit(tj[0], minus_one, &mut v);
            let te = by_sum.get(&(s + 2 * pi - 3, m + pi - 1)).map(|l| l[0]);
            let eps = te.map(|t| {
                let mut e = vec![0u32; nmono];
                unit(t, 1, &mut e);
                e
            });
            let info = GeneratorInfo {
                kind: GeneratorKind::ArtinSchreier,
                lead: *pr,
                character: pair_char(*pr),
                eps_term: te,
                eps_character: te.map(pair_char),
            };
            candidates.push((v, eps, info));
        }
        // Keep generators greedily while they enlarge the span.
        let mut span = Subspace::new(&field, nmono);
        let mut gens = Vec::new();
        let mut e_parts = Vec::new();
        let mut info = Vec::new();
        for (v, eps, inf) in candidates {
            if span.insert(v.clone()) {
                gens.push(quad_matrix(&field, g, &v));
                e_parts.push(match eps {
                    Some(e) => quad_matrix(&field, g, &e),
                    None => Matrix::zeros(&field, g, g),
                });
                info.push(inf);
            }
        }
        let special = CanonicalIdealModel::new(&field, g, gens)?;
        Ok(HermitianFixture { p, indices, characters, field, zeta, info, special, e_parts, artin_schreier_emitted })
    }

    pub fn g(&self) -> usize {
        self.indices.len()
    }

    /// diag(zeta^{c_i}) as an element of GL_g(GF(p^2)).
    pub fn sigma_matrix(&self) -> Matrix {
        let f = self.field.field();
        let diag: Vec<_> = self.characters.iter().map(|&c| self.field.from_residue(f.pow(self.zeta, c))).collect();
        Matrix::diagonal(&self.field, &diag)
    }

    /// The cyclic group generated by sigma with its defining representation.
    pub fn sigma_representation(&self) -> Result<Representation> {
        let group = Arc::new(FiniteGroup::close(&[self.sigma_matrix()], self.p as usize + 2)?);
        Ok(Representation::inclusion(group))
    }

    /// Generators with x_1 = scale * E over GF(p^2)[E]/(E^2). Scale 0 gives
    /// the trivial deformation of the special fibre.
    pub fn first_order_family(&self, scale: u32) -> Result<CanonicalIdealModel> {
        let ext = SmallExtension::over(&self.field, RingKind::TruncatedSeries)?;
        let c = self.field.from_residue(scale);
        let parts: Vec<Matrix> = self.e_parts.iter().map(|m| m.scale(c)).collect();
        self.special.lift(&ext, &parts)
    }

    /// The dual numbers over the fixture field.
    pub fn dual_numbers(&self) -> Result<SmallExtension> {
        SmallExtension::over(&self.field, RingKind::TruncatedSeries)
    }

    /// Character test: a generator with an x_1 term of a different character
    /// cannot be kept an eigenvector, so sigma does not lift.
    pub fn non_lift_verdict(&self) -> NonLiftVerdict {
        let m = self.p as i64 + 1;
        for (i, inf) in self.info.iter().enumerate() {
            if let Some(ec) = inf.eps_character {
                if ec != inf.character {
                    let offset = (ec as i64 - inf.character as i64).rem_euclid(m);
                    let offset = if offset > m / 2 { offset - m } else { offset };
                    return NonLiftVerdict::DoesNotLift {
                        generator: i,
                        main_character: inf.character,
                        eps_character: ec,
                        offset,
                    };
                }
            }
        }
        NonLiftVerdict::Lifts
    }
}

pub fn special_fibre_ideal(p: u64) -> Result<CanonicalIdealModel> {
    Ok(HermitianFixture::new(p)?.special)
}

/// The first-order family and the character verdict.
pub fn first_order_family(p: u64) -> Result<(CanonicalIdealModel, NonLiftVerdict)> {
    let fx = HermitianFixture::new(p)?;
    Ok((fx.first_order_family(1)?, fx.non_lift_verdict()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deform::{check_invariance, Invariance};
    use crate::rep::{naive_lift, rigid_diagonal_lift};

    #[test]
    fn indices_for_five() {
        let idx = basis_indices(5).unwrap();
        let pairs: Vec<(i64, i64)> = idx.iter().map(|i| (i.n, i.mu)).collect();
        assert_eq!(pairs, vec![(0, 1), (1, 2), (2, 2), (2, 3), (3, 3), (4, 3), (3, 4), (4, 4), (5, 4), (6, 4)]);
        assert_eq!(basis_indices(7).unwrap().len(), 21);
        assert_eq!(basis_indices(3), Err(Error::UnsupportedPrime(3)));
        assert_eq!(basis_indices(9), Err(Error::UnsupportedPrime(9)));
    }

    #[test]
    fn characters() {
        assert_eq!(sigma_character(5, &DifferentialIndex { n: 0, mu: 1 }), 5);
        assert_eq!(sigma_character(5, &DifferentialIndex { n: 1, mu: 1 }), 0);
    }

    #[test]
    fn generators_are_eigenvectors() {
        let fx = HermitianFixture::new(5).unwrap();
        assert_eq!(fx.special.r(), 28);
        for (a, inf) in fx.special.generators().iter().zip(&fx.info) {
            for i in 0..fx.g() {
                for j in 0..fx.g() {
                    if a.get(i, j) != fx.field.zero() {
                        assert_eq!((fx.characters[i] + fx.characters[j]) % 6, inf.character);
                    }
                }
            }
        }
    }

    #[test]
    fn sigma_rep_is_rigid_and_preserves_special_fibre() {
        let fx = HermitianFixture::new(5).unwrap();
        let rho = fx.sigma_representation().unwrap();
        assert_eq!(rho.group().order(), 6);
        assert!(rho.is_verified());
        assert!(rigid_diagonal_lift(&fx.sigma_matrix()).unwrap().rigid);
        let s = rho.group().generator_indices()[0];
        assert!(check_invariance(&fx.special, &rho, s).unwrap().is_invariant());

        let ext = fx.dual_numbers().unwrap();
        let lifted = Representation::from_images(rho.group().clone(), &ext.source, naive_lift(&rho, &ext).unwrap()).unwrap();
        assert!(lifted.is_verified());
        let trivial = fx.first_order_family(0).unwrap();
        assert!(check_invariance(&trivial, &lifted, s).unwrap().is_invariant());
        let family = fx.first_order_family(1).unwrap();
        match check_invariance(&family, &lifted, s).unwrap() {
            Invariance::NotInvariant { level, .. } => assert_eq!(level, 1),
            other => panic!("{other:?}"),
        }
        match fx.non_lift_verdict() {
            NonLiftVerdict::DoesNotLift { offset, .. } => assert_eq!(offset, -1),
            other => panic!("{other:?}"),
        }
    }
}
