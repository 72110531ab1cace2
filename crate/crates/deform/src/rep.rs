//! Representations of finite matrix groups over coefficient rings.

use std::sync::Arc;

use crate::deform::CanonicalIdealModel;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{span_membership, vectorize_sym, Matrix, SigmaBasis, Subspace};
use crate::ring::{Ring, SmallExtension};

/// Above this order homomorphism checks use generators instead of all pairs.
pub const EXHAUSTIVE_CHECK_LIMIT: usize = 500;

/// rho: G -> GL_g(ring), stored for every group element.
#[derive(Debug, Clone)]
pub struct Representation {
    group: Arc<FiniteGroup>,
    ring: Ring,
    images: Vec<Matrix>,
    inverses: Vec<Matrix>,
    verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomomorphismCheck {
    pub ok: bool,
    /// First pair (a, b) with rho(a) rho(b) != rho(ab).
    pub witness: Option<(usize, usize)>,
}

impl Representation {
    /// Images given for every element, in the group's element order.
    pub fn from_images(group: Arc<FiniteGroup>, ring: &Ring, images: Vec<Matrix>) -> Result<Representation> {
        if images.len() != group.order() {
            return Err(Error::Shape(format!("{} images for a group of order {}", images.len(), group.order())));
        }
        let dim = images[0].rows();
        for m in &images {
            if m.ring() != ring {
                return Err(Error::RingMismatch);
            }
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::Shape("images must be square of equal size".into()));
            }
        }
        let inverses = images.iter().map(Matrix::inverse).collect::<Result<Vec<_>>>()?;
        let mut rep = Representation { group, ring: ring.clone(), images, inverses, verified: false };
        rep.verified = rep.verify().ok;
        Ok(rep)
    }

    /// Extend generator images along the group's closure tree:
    /// rho(gen_s * h) = rho(gen_s) rho(h).
    pub fn from_generator_images(group: Arc<FiniteGroup>, ring: &Ring, gens: &[Matrix]) -> Result<Representation> {
        if gens.len() != group.generators().len() {
            return Err(Error::Shape(format!(
                "{} generator images for {} generators",
                gens.len(),
                group.generators().len()
            )));
        }
        let dim = gens.first().map_or(group.dim(), Matrix::rows);
        let mut images: Vec<Matrix> = Vec::with_capacity(group.order());
        images.push(Matrix::identity(ring, dim));
        for e in 1..group.order() {
            let (s, h) = group.parent(e).expect("non-identity element has a parent");
            let m = gens[s].try_mul(&images[h])?;
            images.push(m);
        }
        Representation::from_images(group, ring, images)
    }

    /// The defining representation of a matrix group.
    pub fn inclusion(group: Arc<FiniteGroup>) -> Representation {
        let ring = group.ring().clone();
        let images = group.elements().to_vec();
        Representation::from_images(group, &ring, images).expect("group elements are invertible")
    }

    pub fn trivial(group: Arc<FiniteGroup>, ring: &Ring, dim: usize) -> Representation {
        let images = vec![Matrix::identity(ring, dim); group.order()];
        Representation::from_images(group, ring, images).expect("identity images")
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.images[0].rows()
    }

    pub fn image(&self, e: usize) -> &Matrix {
        &self.images[e]
    }

    pub fn images(&self) -> &[Matrix] {
        &self.images
    }

    pub fn inverse_image(&self, e: usize) -> &Matrix {
        &self.inverses[e]
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    /// Images of the group generators.
    pub fn generator_images(&self) -> Vec<Matrix> {
        self.group.generator_indices().iter().map(|&e| self.images[e].clone()).collect()
    }

    fn verify(&self) -> HomomorphismCheck {
        let g = &self.group;
        let n = g.order();
        if !self.images[0].is_identity() {
            return HomomorphismCheck { ok: false, witness: Some((0, 0)) };
        }
        let lefts: Vec<usize> = if n <= EXHAUSTIVE_CHECK_LIMIT {
            (0..n).collect()
        } else {
            g.generator_indices().to_vec()
        };
        for &a in &lefts {
            for b in 0..n {
                if self.images[a].mul(&self.images[b]) != self.images[g.mul(a, b)] {
                    return HomomorphismCheck { ok: false, witness: Some((a, b)) };
                }
            }
        }
        HomomorphismCheck { ok: true, witness: None }
    }
}

/// Exhaustive pair check (generators against all elements for large groups,
/// which suffices by induction on word length).
pub fn verify_homomorphism(rho: &Representation) -> HomomorphismCheck {
    rho.verify()
}

/// Ad(sigma) M = rho(sigma) M rho(sigma)^{-1}.
pub fn adjoint(rho: &Representation, sigma: usize, m: &Matrix) -> Matrix {
    rho.image(sigma).mul(m).mul(rho.inverse_image(sigma))
}

/// T(sigma) A = rho(sigma^{-1})^t A rho(sigma^{-1}).
pub fn t_action(rho: &Representation, sigma: usize, a: &Matrix) -> Result<Matrix> {
    if !a.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let inv = rho.inverse_image(sigma);
    Ok(inv.transpose().mul(a).mul(inv))
}

/// rho(sigma)^t A rho(sigma), the substitution action on the quadric of A.
pub fn substitute(rho: &Representation, sigma: usize, a: &Matrix) -> Matrix {
    let m = rho.image(sigma);
    m.transpose().mul(a).mul(m)
}

/// lambda(sigma) with rho(sigma)^t A_i rho(sigma) = sum_j lambda_ij(sigma) A_j,
/// for every group element. Then lambda(st) = lambda(s) lambda(t).
pub fn induced_on_quadrics(rho: &Representation, ideal: &CanonicalIdealModel) -> Result<Vec<Matrix>> {
    if rho.ring() != ideal.ring() {
        return Err(Error::RingMismatch);
    }
    let sigma = SigmaBasis::new(ideal.g());
    let cols = ideal.columns();
    let r = ideal.r();
    (0..rho.group().order())
        .map(|e| {
            let mut lambda = Matrix::zeros(ideal.ring(), r, r);
            for (i, a) in ideal.generators().iter().enumerate() {
                let v = vectorize_sym(&substitute(rho, e, a), &sigma)?;
                let coeffs = span_membership(ideal.ring(), &cols, &v).map_err(|err| match err {
                    Error::NotInSpan => Error::IdealNotInvariant(e),
                    other => other,
                })?;
                for (j, c) in coeffs.into_iter().enumerate() {
                    lambda.set(i, j, c);
                }
            }
            Ok(lambda)
        })
        .collect()
}

/// Entrywise reduction of a representation along a small extension.
pub fn reduce_rep(rho: &Representation, ext: &SmallExtension) -> Result<Representation> {
    if rho.ring() != &ext.source {
        return Err(Error::RingMismatch);
    }
    let images = rho.images().iter().map(|m| m.reduce(ext)).collect::<Result<Vec<_>>>()?;
    Representation::from_images(rho.group().clone(), &ext.target, images)
}

/// Entrywise coefficient lift via the section; not necessarily a homomorphism.
pub fn naive_lift(rho: &Representation, ext: &SmallExtension) -> Result<Vec<Matrix>> {
    if rho.ring() != &ext.target {
        return Err(Error::RingMismatch);
    }
    rho.images().iter().map(|m| m.section(ext)).collect()
}

/// Lifts of a finite-order matrix D over k to k[e]: D + eB with (D + eB)^m = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RigidLiftReport {
    pub order: usize,
    /// dim {B : sum_i D^i B D^{m-1-i} = 0}.
    pub lift_space_dim: usize,
    /// dim {QD - DQ}, the first-order conjugates of the trivial lift.
    pub conjugation_dim: usize,
    /// Every lift is conjugate to the trivial lift.
    pub rigid: bool,
}

/// Compare the first-order lift space of a matrix of order m (coprime to p)
/// with the space of first-order conjugations. They agree, so every lift of
/// the cyclic group generated by D is conjugate to the trivial lift.
pub fn rigid_diagonal_lift(d: &Matrix) -> Result<RigidLiftReport> {
    let k = d.ring().clone();
    if !k.is_field() {
        return Err(Error::NotAField(k.to_string()));
    }
    let g = d.rows();
    let id = Matrix::identity(&k, g);
    let mut order = 1;
    let mut pw = d.clone();
    while !pw.is_identity() {
        pw = pw.mul(d);
        order += 1;
        if order > 1 << 20 {
            return Err(Error::NotAUnit);
        }
    }
    let powers: Vec<Matrix> = std::iter::successors(Some(id), |m| Some(m.mul(d))).take(order).collect();
    let unit = |idx: usize| {
        let mut b = Matrix::zeros(&k, g, g);
        b.set(idx / g, idx % g, k.one());
        b
    };
    let flat = |m: &Matrix| m.field_entries();
    let mut lift_rows = Subspace::new(&k, g * g);
    let mut images = Vec::with_capacity(g * g);
    let mut conj = Subspace::new(&k, g * g);
    for idx in 0..g * g {
        let b = unit(idx);
        let mut acc = Matrix::zeros(&k, g, g);
        for i in 0..order {
            acc = acc.add(&powers[i].mul(&b).mul(&powers[order - 1 - i]));
        }
        images.push(flat(&acc));
        conj.insert(flat(&b.mul(d).sub(&d.mul(&b))));
    }
    // Row space of the linear map B -> sum D^i B D^{m-1-i}, for its kernel.
    for row in 0..g * g {
        lift_rows.insert(images.iter().map(|col| col[row]).collect());
    }
    let kernel = lift_rows.null_space();
    let lift_space_dim = kernel.len();
    let kernel_space = Subspace::spanned_by(&k, g * g, &kernel);
    let contained = conj.basis().iter().all(|v| kernel_space.contains(v));
    Ok(RigidLiftReport {
        order,
        lift_space_dim,
        conjugation_dim: conj.rank(),
        rigid: contained && conj.rank() == lift_space_dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::close;
    use crate::ring::{make_ring, RingKind};

    fn affine() -> Arc<FiniteGroup> {
        let k = make_ring(RingKind::PrimeField, 5, 1, 1).unwrap();
        let s = Matrix::from_ints(&k, &[vec![2, 0], vec![0, 1]]);
        let t = Matrix::from_ints(&k, &[vec![1, 1], vec![0, 1]]);
        Arc::new(close(&[s, t], 100).unwrap())
    }

    #[test]
    fn inclusion_and_trivial_are_homomorphisms() {
        let g = affine();
        assert!(verify_homomorphism(&Representation::inclusion(g.clone())).ok);
        let triv = Representation::trivial(g.clone(), g.ring(), 3);
        assert!(triv.is_verified());
    }

    #[test]
    fn perturbed_rep_fails_with_witness() {
        let g = affine();
        let d = make_ring(RingKind::TruncatedSeries, 5, 1, 2).unwrap();
        let mut images: Vec<Matrix> = g.elements().iter().map(|m| m.lift_residue(&d)).collect();
        let t = g.generator_indices()[1];
        let v = images[t].get(0, 1);
        images[t].set(0, 1, d.add(v, d.uniformizer()));
        let rho = Representation::from_images(g, &d, images).unwrap();
        let check = verify_homomorphism(&rho);
        assert!(!check.ok);
        assert!(check.witness.is_some());
    }

    #[test]
    fn generator_extension_matches_inclusion() {
        let g = affine();
        let rho = Representation::from_generator_images(g.clone(), g.ring(), g.generators()).unwrap();
        assert!(rho.is_verified());
        assert_eq!(rho.images(), g.elements());
    }

    #[test]
    fn adjoint_on_diagonal() {
        let g = affine();
        let rho = Representation::inclusion(g.clone());
        let k = g.ring().clone();
        let s = g.generator_indices()[0];
        let m = Matrix::from_ints(&k, &[vec![1, 2], vec![3, 4]]);
        let ad = adjoint(&rho, s, &m);
        // diag(2, 1): entry (0,1) scales by 2, entry (1,0) by 2^{-1} = 3.
        assert_eq!(ad, Matrix::from_ints(&k, &[vec![1, 4], vec![9, 4]]));
        assert!(adjoint(&rho, s, &Matrix::identity(&k, 2)).is_identity());
        assert_eq!(adjoint(&rho, 0, &m), m);
    }

    #[test]
    fn t_action_is_a_left_action() {
        let g = affine();
        let rho = Representation::inclusion(g.clone());
        let k = g.ring().clone();
        let a = Matrix::from_ints(&k, &[vec![1, 2], vec![2, 3]]);
        for x in 0..g.order() {
            for y in 0..g.order() {
                let lhs = t_action(&rho, g.mul(x, y), &a).unwrap();
                let rhs = t_action(&rho, x, &t_action(&rho, y, &a).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
                assert!(lhs.is_symmetric());
            }
        }
        let ns = Matrix::from_ints(&k, &[vec![1, 2], vec![3, 3]]);
        assert_eq!(t_action(&rho, 0, &ns), Err(Error::NotSymmetric));
    }

    #[test]
    fn lifts_and_reductions() {
        let g = affine();
        let rho = Representation::inclusion(g.clone());
        let ext = SmallExtension::new(RingKind::TruncatedSeries, 5, 1, 2).unwrap();
        let lifted = naive_lift(&rho, &ext).unwrap();
        let lifted = Representation::from_images(g.clone(), &ext.source, lifted).unwrap();
        assert!(lifted.is_verified());
        let back = reduce_rep(&lifted, &ext).unwrap();
        assert_eq!(back.images(), rho.images());
        assert!(matches!(reduce_rep(&rho, &ext), Err(Error::RingMismatch)));
    }

    #[test]
    fn diagonal_order_six_lift_is_rigid() {
        let k = make_ring(RingKind::ExtField, 5, 2, 1).unwrap();
        let z = k.field().root_of_unity(6).unwrap();
        let zeta = |e: u64| k.from_residue(k.field().pow(z, e));
        let d = Matrix::diagonal(&k, &[zeta(1), zeta(5), zeta(1), zeta(3)]);
        let rep = rigid_diagonal_lift(&d).unwrap();
        assert_eq!(rep.order, 6);
        assert!(rep.rigid);
        // Off-diagonal entries between distinct eigenvalues: 16 - (4 + 2) = 10.
        assert_eq!(rep.lift_space_dim, 10);
        // The coefficient-wise lift of D over k[e] is still of order 6.
        let ext = SmallExtension::over(&k, RingKind::TruncatedSeries).unwrap();
        let lifted = d.section(&ext).unwrap();
        assert!(lifted.pow(6).is_identity());
    }
}
