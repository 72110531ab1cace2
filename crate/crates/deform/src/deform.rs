//! Canonical ideals as families of symmetric matrices: the invariance test
//! across small extensions, the psi-map, the degree-2 model of the normal
//! module and its tangent quotient, the cocycle B_sigma[f] of an invariant
//! tangent class, and the compatibility identity for lifted actions.

use rayon::prelude::*;

use crate::cohomology::{cocycle1_defect, cocycle2_defect, matrix_mod_scalars, Cochain1, Cochain2, GModule};
use crate::error::{Error, Result};
use crate::linalg::{
    null_space_of_rows, solve, span_membership_detailed, vectorize_sym, Column, Matrix, Membership, SigmaBasis,
    Subspace,
};
use crate::poly::{binomial, QuadricIdeal};
use crate::rep::{induced_on_quadrics, substitute, t_action, Representation};
use crate::ring::{Elem, Ring, SmallExtension};

/// An ideal generated by quadrics w^t A_i w, with A_i symmetric over a ring.
#[derive(Debug, Clone)]
pub struct CanonicalIdealModel {
    ring: Ring,
    g: usize,
    generators: Vec<Matrix>,
}

impl CanonicalIdealModel {
    /// Generators must be symmetric g x g matrices whose reductions to the
    /// residue field are linearly independent.
    pub fn new(ring: &Ring, g: usize, generators: Vec<Matrix>) -> Result<CanonicalIdealModel> {
        ring.check_char_not_two()?;
        for a in &generators {
            if a.ring() != ring {
                return Err(Error::RingMismatch);
            }
            if a.rows() != g || a.cols() != g {
                return Err(Error::Shape(format!("generator is {}x{}, expected {g}x{g}", a.rows(), a.cols())));
            }
            if !a.is_symmetric() {
                return Err(Error::NotSymmetric);
            }
        }
        let model = CanonicalIdealModel { ring: ring.clone(), g, generators };
        let k = ring.residue_field();
        let residues: Vec<Vec<u32>> = model.columns().iter().map(|c| c.iter().map(|&x| ring.residue(x)).collect()).collect();
        if Subspace::spanned_by(&k, SigmaBasis::new(g).len(), &residues).rank() < residues.len() {
            return Err(Error::DependentGenerators);
        }
        Ok(model)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn r(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    /// F(A_i) for every generator.
    pub fn columns(&self) -> Vec<Column> {
        let sigma = SigmaBasis::new(self.g);
        self.generators.iter().map(|a| vectorize_sym(a, &sigma).expect("symmetric")).collect()
    }

    /// The special fibre over the residue field.
    pub fn residue(&self) -> CanonicalIdealModel {
        let k = self.ring.residue_field();
        let generators = self.generators.iter().map(Matrix::residue).collect();
        CanonicalIdealModel { ring: k, g: self.g, generators }
    }

    /// Generators i(A_i) + E B_i over the source of a small extension.
    pub fn lift(&self, ext: &SmallExtension, e_parts: &[Matrix]) -> Result<CanonicalIdealModel> {
        if self.ring != ext.target {
            return Err(Error::RingMismatch);
        }
        if e_parts.len() != self.r() {
            return Err(Error::Shape(format!("{} E-parts for {} generators", e_parts.len(), self.r())));
        }
        let k = ext.residue_field();
        let gens = self
            .generators
            .iter()
            .zip(e_parts)
            .map(|(a, b)| {
                if b.ring() != &k {
                    return Err(Error::RingMismatch);
                }
                Ok(a.section(ext)?.add(&Matrix::e_times(b, ext)))
            })
            .collect::<Result<Vec<_>>>()?;
        CanonicalIdealModel::new(&ext.source, self.g, gens)
    }

    /// Degree-2 and degree-3 data of the ideal over a field.
    pub fn quadric_ideal(&self) -> Result<QuadricIdeal> {
        if !self.ring.is_field() {
            return Err(Error::NotAField(self.ring.to_string()));
        }
        Ok(QuadricIdeal::from_vectors(&self.ring, self.g, self.generators.iter().map(quad_vector).collect()))
    }

    /// Compare with the numerics of a canonical ideal of genus g.
    pub fn canonical_check(&self) -> Result<CanonicalCheck> {
        let qi = self.residue().quadric_ideal()?;
        let g = self.g;
        let expected_r = if g >= 2 { binomial(g - 2, 2) } else { 0 };
        let check = CanonicalCheck {
            g,
            r: qi.i2.rank(),
            expected_r,
            hilbert2: qi.hilbert(2),
            hilbert3: qi.hilbert(3),
            expected_hilbert2: 3 * g.saturating_sub(1),
            expected_hilbert3: 5 * g.saturating_sub(1),
            canonical: qi.looks_canonical(),
        };
        Ok(check)
    }
}

/// Numerical invariants of the ideal against those of a canonical curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalCheck {
    pub g: usize,
    pub r: usize,
    pub expected_r: usize,
    pub hilbert2: usize,
    pub hilbert3: usize,
    pub expected_hilbert2: usize,
    pub expected_hilbert3: usize,
    pub canonical: bool,
}

/// Coefficients of the quadric w^t A w in the degree-2 monomial basis.
pub fn quad_vector(a: &Matrix) -> Vec<u32> {
    let k = a.ring();
    let g = a.rows();
    let mut v = Vec::with_capacity(g * (g + 1) / 2);
    for i in 0..g {
        for j in i..g {
            let x = if i == j { a.get(i, i) } else { k.add(a.get(i, j), a.get(j, i)) };
            v.push(k.residue(x));
        }
    }
    v
}

/// The symmetric matrix of a quadric coefficient vector over a field.
pub fn quad_matrix(k: &Ring, g: usize, v: &[u32]) -> Matrix {
    let f = k.field();
    let half = f.inv(f.from_int(2)).expect("odd characteristic");
    let mut a = Matrix::zeros(k, g, g);
    let mut idx = 0;
    for i in 0..g {
        for j in i..g {
            if i == j {
                a.set(i, i, k.from_residue(v[idx]));
            } else {
                let x = k.from_residue(f.mul(half, v[idx]));
                a.set(i, j, x);
                a.set(j, i, x);
            }
            idx += 1;
        }
    }
    a
}

// ---------------------------------------------------------------- invariance

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Invariance {
    /// rho(s)^t A_i rho(s) = sum_j lambda_ij A_j.
    Invariant { lambda: Matrix },
    /// The transformed generator is outside the span: its leading residual at
    /// filtration `level` is nonzero modulo the residue span of the generators,
    /// so the rank of the generator columns with that residual is r + 1.
    NotInvariant { generator: usize, level: u32, residual: Vec<u32>, rank: usize },
}

impl Invariance {
    pub fn is_invariant(&self) -> bool {
        matches!(self, Invariance::Invariant { .. })
    }
}

/// Rank-r test: every column F(rho(s)^t A_i rho(s)) must be a combination of
/// the columns F(A_j) over the coefficient ring.
pub fn check_invariance(ideal: &CanonicalIdealModel, rho: &Representation, sigma: usize) -> Result<Invariance> {
    if ideal.ring() != rho.ring() {
        return Err(Error::RingMismatch);
    }
    if rho.dim() != ideal.g() {
        return Err(Error::Shape("representation and ideal have different dimensions".into()));
    }
    let ring = ideal.ring();
    let sig = SigmaBasis::new(ideal.g());
    let cols = ideal.columns();
    let r = ideal.r();
    let mut lambda = Matrix::zeros(ring, r, r);
    for (i, a) in ideal.generators().iter().enumerate() {
        let v = vectorize_sym(&substitute(rho, sigma, a), &sig)?;
        match span_membership_detailed(ring, &cols, &v).map_err(|e| match e {
            Error::DependentColumnsOverResidueField => Error::DependentGenerators,
            other => other,
        })? {
            Membership::Member(x) => {
                for (j, c) in x.into_iter().enumerate() {
                    lambda.set(i, j, c);
                }
            }
            Membership::NotMember { level, residual } => {
                return Ok(Invariance::NotInvariant { generator: i, level, residual, rank: r + 1 });
            }
        }
    }
    Ok(Invariance::Invariant { lambda })
}

/// check_invariance for every group element, evaluated in parallel.
pub fn check_invariance_all(ideal: &CanonicalIdealModel, rho: &Representation) -> Result<Vec<Invariance>> {
    (0..rho.group().order()).into_par_iter().map(|s| check_invariance(ideal, rho, s)).collect()
}

// ---------------------------------------------------------------- normal maps

/// A map A_i -> B_i on generators with symmetric values over the field,
/// understood modulo the span of the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalMapRep {
    pub values: Vec<Matrix>,
}

impl NormalMapRep {
    pub fn new(values: Vec<Matrix>) -> Result<NormalMapRep> {
        if values.iter().any(|b| !b.is_symmetric()) {
            return Err(Error::NotSymmetric);
        }
        Ok(NormalMapRep { values })
    }

    pub fn zero(ideal: &CanonicalIdealModel) -> NormalMapRep {
        NormalMapRep { values: vec![Matrix::zeros(ideal.ring(), ideal.g(), ideal.g()); ideal.r()] }
    }
}

/// Linear data of an ideal over a field for the psi-map and the normal module.
#[derive(Debug, Clone)]
pub struct NormalSpace {
    model: CanonicalIdealModel,
    ideal: QuadricIdeal,
    free2: Vec<usize>,
    /// psi(E_ab) as class vectors, indexed a * g + b.
    psi_cols: Vec<Vec<u32>>,
}

/// Kernel and image of psi.
#[derive(Debug, Clone)]
pub struct PsiData {
    pub kernel: Vec<Matrix>,
    pub image_dim: usize,
    /// The kernel is spanned by the identity matrix.
    pub kernel_is_scalars: bool,
}

/// H^0(N) in the degree-2 model and its quotient by the image of psi.
#[derive(Debug, Clone)]
pub struct TangentSpace {
    /// Dimension of the syzygy-compatible classes (B_i) mod span A.
    pub normal_dim: usize,
    pub image_dim: usize,
    pub image_in_normal: bool,
    pub dim: usize,
    /// Representatives of a basis of the quotient.
    pub basis: Vec<NormalMapRep>,
}

impl NormalSpace {
    pub fn new(model: &CanonicalIdealModel) -> Result<NormalSpace> {
        let ideal = model.quadric_ideal()?;
        let free2 = ideal.i2.free_columns();
        let mut space = NormalSpace { model: model.clone(), ideal, free2, psi_cols: Vec::new() };
        let g = model.g();
        let k = model.ring().clone();
        space.psi_cols = (0..g * g)
            .into_par_iter()
            .map(|idx| {
                let mut b = Matrix::zeros(&k, g, g);
                b.set(idx / g, idx % g, k.one());
                space.class(&space.psi_raw(&b))
            })
            .collect();
        Ok(space)
    }

    pub fn model(&self) -> &CanonicalIdealModel {
        &self.model
    }

    pub fn quadric_ideal(&self) -> &QuadricIdeal {
        &self.ideal
    }

    /// Dimension of S_2 / I_2.
    pub fn quotient_dim(&self) -> usize {
        self.free2.len()
    }

    /// Length of a class vector: r * dim(S_2 / I_2).
    pub fn class_len(&self) -> usize {
        self.model.r() * self.quotient_dim()
    }

    /// Coordinates of a symmetric matrix modulo the span of the generators.
    pub fn sym_class(&self, x: &Matrix) -> Vec<u32> {
        let w = self.ideal.i2.reduce(&quad_vector(x));
        self.free2.iter().map(|&c| w[c]).collect()
    }

    /// The normal form of a symmetric matrix modulo the span of the generators.
    pub fn reduce_sym(&self, x: &Matrix) -> Matrix {
        quad_matrix(self.model.ring(), self.model.g(), &self.ideal.i2.reduce(&quad_vector(x)))
    }

    pub fn class(&self, f: &NormalMapRep) -> Vec<u32> {
        f.values.iter().flat_map(|b| self.sym_class(b)).collect()
    }

    /// The normal map with values in the complement spanned by free monomials.
    pub fn from_class(&self, v: &[u32]) -> NormalMapRep {
        let c = self.quotient_dim();
        let nmono = self.ideal.mono2.len();
        let values = v
            .chunks(c)
            .map(|chunk| {
                let mut q = vec![0u32; nmono];
                for (&col, &x) in self.free2.iter().zip(chunk) {
                    q[col] = x;
                }
                quad_matrix(self.model.ring(), self.model.g(), &q)
            })
            .collect();
        NormalMapRep { values }
    }

    fn psi_raw(&self, b: &Matrix) -> NormalMapRep {
        let bt = b.transpose();
        NormalMapRep { values: self.model.generators().iter().map(|a| a.mul(b).add(&bt.mul(a))).collect() }
    }

    /// psi_B: A_i -> A_i B + B^t A_i, reduced modulo the span of the generators.
    pub fn psi(&self, b: &Matrix) -> NormalMapRep {
        let raw = self.psi_raw(b);
        NormalMapRep { values: raw.values.iter().map(|x| self.reduce_sym(x)).collect() }
    }

    pub fn psi_class(&self, b: &Matrix) -> Vec<u32> {
        let f = self.model.ring().field();
        let g = self.model.g();
        let mut out = vec![0u32; self.class_len()];
        for (idx, col) in self.psi_cols.iter().enumerate() {
            let x = self.model.ring().residue(b.get(idx / g, idx % g));
            if x != 0 {
                f.axpy(&mut out, x, col);
            }
        }
        out
    }

    pub fn image_space(&self) -> Subspace {
        Subspace::spanned_by(self.model.ring(), self.class_len(), &self.psi_cols)
    }

    pub fn psi_kernel_and_image(&self) -> PsiData {
        let k = self.model.ring();
        let g = self.model.g();
        let n = self.class_len();
        let rows = (0..n).map(|r| self.psi_cols.iter().map(|c| c[r]).collect::<Vec<u32>>());
        let kernel: Vec<Matrix> =
            null_space_of_rows(k, g * g, rows).iter().map(|v| crate::cohomology::vector_to_matrix(k, g, v)).collect();
        let image_dim = self.image_space().rank();
        let kernel_is_scalars = kernel.len() == 1 && is_scalar(&kernel[0]);
        PsiData { kernel, image_dim, kernel_is_scalars }
    }

    /// Class vectors of (B_i) satisfying the degree-3 syzygy constraints:
    /// sum_i h_i q(B_i) lies in I_3 for every syzygy (h_i).
    pub fn normal_basis(&self) -> Vec<Vec<u32>> {
        let qi = &self.ideal;
        let k = self.model.ring();
        let g = self.model.g();
        let r = self.model.r();
        let c = self.quotient_dim();
        let f = k.field();
        let mut i3 = qi.i3.clone();
        i3.make_reduced();
        let free3 = i3.free_columns();
        let cubic_class = |idx: usize| -> Vec<u32> {
            let mut unit = vec![0u32; qi.mono3.len()];
            unit[idx] = 1;
            let w = i3.reduce(&unit);
            free3.iter().map(|&col| w[col]).collect()
        };
        let cubic_classes: Vec<Vec<u32>> = (0..qi.mono3.len()).map(cubic_class).collect();
        let c3 = free3.len();
        let nsyz = qi.syzygies.len();
        // One column per unknown (generator i, free monomial t), blocks per syzygy.
        let columns: Vec<Vec<u32>> = (0..r * c)
            .into_par_iter()
            .map(|u| {
                let (i, t) = (u / c, u % c);
                let m = self.free2[t];
                let mut col = vec![0u32; nsyz * c3];
                for (s, syz) in qi.syzygies.iter().enumerate() {
                    let block = &mut col[s * c3..(s + 1) * c3];
                    for l in 0..g {
                        let h = syz[i * g + l];
                        if h != 0 {
                            f.axpy(block, h, &cubic_classes[qi.times[m * g + l]]);
                        }
                    }
                }
                col
            })
            .collect();
        let rows = (0..nsyz * c3).map(|row| columns.iter().map(|col| col[row]).collect::<Vec<u32>>());
        null_space_of_rows(k, r * c, rows)
    }

    pub fn is_syzygy_compatible(&self, f: &NormalMapRep) -> bool {
        let basis = self.normal_basis();
        Subspace::spanned_by(self.model.ring(), self.class_len(), &basis).contains(&self.class(f))
    }

    pub fn tangent_space_basis(&self) -> TangentSpace {
        let normal = self.normal_basis();
        let image = self.image_space();
        let normal_space = Subspace::spanned_by(self.model.ring(), self.class_len(), &normal);
        let image_in_normal = image.basis().iter().all(|v| normal_space.contains(v));
        let mut quotient = image.clone();
        let basis: Vec<NormalMapRep> =
            normal.iter().filter(|v| quotient.insert((*v).clone())).map(|v| self.from_class(v)).collect();
        TangentSpace {
            normal_dim: normal.len(),
            image_dim: image.rank(),
            image_in_normal,
            dim: basis.len(),
            basis,
        }
    }
}

fn is_scalar(m: &Matrix) -> bool {
    let d = m.get(0, 0);
    (0..m.rows()).all(|i| (0..m.cols()).all(|j| m.get(i, j) == if i == j { d } else { m.ring().zero() }))
}

/// psi_B for an ideal over a field, reduced modulo the span of the generators.
pub fn psi_map(ideal: &CanonicalIdealModel, b: &Matrix) -> Result<NormalMapRep> {
    Ok(NormalSpace::new(ideal)?.psi(b))
}

pub fn psi_kernel_and_image(ideal: &CanonicalIdealModel) -> Result<PsiData> {
    Ok(NormalSpace::new(ideal)?.psi_kernel_and_image())
}

pub fn tangent_space_basis(ideal: &CanonicalIdealModel) -> Result<TangentSpace> {
    Ok(NormalSpace::new(ideal)?.tangent_space_basis())
}

// ---------------------------------------------------------------- equivariance

/// An ideal over a field together with a representation leaving it invariant.
#[derive(Debug, Clone)]
pub struct EquivariantIdeal {
    space: NormalSpace,
    rho: Representation,
    /// lambda(s) with rho(s)^t A_i rho(s) = sum_j lambda_ij(s) A_j.
    lambda: Vec<Matrix>,
    psi_matrix: Matrix,
    extra_kernel: usize,
}

/// B_sigma[f] in the gauge of the reduced echelon solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BSigma {
    pub b: Matrix,
    /// Kernel dimension of psi beyond the scalars.
    pub extra_kernel: usize,
}

/// The family s -> B_s[f] with its scalar 2-cocycle.
#[derive(Debug, Clone)]
pub struct DeltaG {
    pub b: Vec<Matrix>,
    /// lambda(s, t) with B_st = B_s + Ad(s) B_t + lambda(s, t) I, at s * |G| + t.
    /// None where the difference is not scalar.
    pub lambda: Vec<Option<Elem>>,
    /// The cochain s -> [B_s] in M_g(k)/<I> fails the cocycle law here.
    pub cocycle_defect: Option<(usize, usize)>,
    /// lambda fails the normalized scalar 2-cocycle identity here.
    pub scalar_defect: Option<(usize, usize, usize)>,
}

impl DeltaG {
    pub fn holds(&self) -> bool {
        self.cocycle_defect.is_none() && self.scalar_defect.is_none() && self.lambda.iter().all(Option::is_some)
    }
}

impl EquivariantIdeal {
    pub fn new(model: &CanonicalIdealModel, rho: &Representation) -> Result<EquivariantIdeal> {
        if model.ring() != rho.ring() {
            return Err(Error::RingMismatch);
        }
        let space = NormalSpace::new(model)?;
        let lambda = induced_on_quadrics(rho, model)?;
        let k = model.ring();
        let g = model.g();
        let n = space.class_len();
        let mut psi_matrix = Matrix::zeros(k, n, g * g);
        for (j, col) in space.psi_cols.iter().enumerate() {
            for (i, &x) in col.iter().enumerate() {
                if x != 0 {
                    psi_matrix.set(i, j, k.from_residue(x));
                }
            }
        }
        let kernel = space.psi_kernel_and_image().kernel.len();
        Ok(EquivariantIdeal { space, rho: rho.clone(), lambda, psi_matrix, extra_kernel: kernel.saturating_sub(1) })
    }

    pub fn space(&self) -> &NormalSpace {
        &self.space
    }

    pub fn rho(&self) -> &Representation {
        &self.rho
    }

    pub fn lambda(&self, s: usize) -> &Matrix {
        &self.lambda[s]
    }

    /// (^s f)(A_i) = sum_j lambda_ij(s) T(s) f(A_j).
    pub fn act(&self, s: usize, f: &NormalMapRep) -> Result<NormalMapRep> {
        let k = self.space.model.ring();
        let moved = f.values.iter().map(|b| t_action(&self.rho, s, b)).collect::<Result<Vec<_>>>()?;
        let lam = &self.lambda[s];
        let values = (0..lam.rows())
            .map(|i| {
                moved.iter().enumerate().fold(Matrix::zeros(k, self.space.model.g(), self.space.model.g()), |acc, (j, m)| {
                    acc.add(&m.scale(lam.get(i, j)))
                })
            })
            .collect();
        Ok(NormalMapRep { values })
    }

    /// (^s f - f) as exact matrices (not reduced).
    pub fn delta(&self, s: usize, f: &NormalMapRep) -> Result<NormalMapRep> {
        let moved = self.act(s, f)?;
        Ok(NormalMapRep { values: moved.values.iter().zip(&f.values).map(|(a, b)| a.sub(b)).collect() })
    }

    /// ^s f - f lies in the image of psi for every generator s.
    pub fn is_invariant_class(&self, f: &NormalMapRep) -> Result<bool> {
        let image = self.space.image_space();
        for &s in self.rho.group().generator_indices() {
            if !image.contains(&self.space.class(&self.delta(s, f)?)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Tangent classes fixed by the group: combinations f of the tangent
    /// basis with ^s f - f in the image of psi for every generator s.
    pub fn invariant_tangent_classes(&self, tangent: &TangentSpace) -> Result<Vec<NormalMapRep>> {
        let k = self.space.model.ring();
        let mut image = self.space.image_space();
        image.make_reduced();
        let gens = self.rho.group().generator_indices();
        let columns = tangent
            .basis
            .iter()
            .map(|t| {
                let mut col = Vec::new();
                for &s in gens {
                    col.extend(image.reduce(&self.space.class(&self.delta(s, t)?)));
                }
                Ok(col)
            })
            .collect::<Result<Vec<_>>>()?;
        let nrows = columns.first().map_or(0, Vec::len);
        let rows = (0..nrows).map(|r| columns.iter().map(|c| c[r]).collect::<Vec<u32>>());
        let f = k.field();
        let combos = null_space_of_rows(k, tangent.basis.len(), rows);
        Ok(combos
            .iter()
            .map(|c| {
                let mut v = vec![0u32; self.space.class_len()];
                for (t, &x) in tangent.basis.iter().zip(c) {
                    if x != 0 {
                        f.axpy(&mut v, x, &self.space.class(t));
                    }
                }
                self.space.from_class(&v)
            })
            .collect())
    }

    /// Solve psi_B = ^s f - f modulo the span of the generators. The solution
    /// is the pivot solution of the reduced echelon form, so B_1 = 0.
    pub fn extract_b_sigma(&self, f: &NormalMapRep, s: usize) -> Result<BSigma> {
        let k = self.space.model.ring();
        let target = self.space.class(&self.delta(s, f)?);
        let rhs: Vec<Elem> = target.iter().map(|&x| k.from_residue(x)).collect();
        let x = solve(&self.psi_matrix, &rhs).map_err(|e| match e {
            Error::NoSolution => Error::NotInvariantClass(s),
            other => other,
        })?;
        let g = self.space.model.g();
        let b = Matrix::from_elems(k, g, g, x)?;
        Ok(BSigma { b, extra_kernel: self.extra_kernel })
    }

    /// The family s -> B_s[f] for all group elements, checked against
    /// B_st = B_s + Ad(s) B_t + lambda(s,t) I and as a 1-cocycle in M_g(k)/<I>.
    pub fn delta_g_cocycle(&self, f: &NormalMapRep) -> Result<DeltaG> {
        let group = self.rho.group();
        let n = group.order();
        let b: Vec<Matrix> =
            (0..n).into_par_iter().map(|s| self.extract_b_sigma(f, s).map(|x| x.b)).collect::<Result<Vec<_>>>()?;
        let lambda: Vec<Option<Elem>> = (0..n * n)
            .into_par_iter()
            .map(|idx| {
                let (s, t) = (idx / n, idx % n);
                let ad = crate::rep::adjoint(&self.rho, s, &b[t]);
                let r = b[group.mul(s, t)].sub(&b[s]).sub(&ad);
                is_scalar(&r).then(|| r.get(0, 0))
            })
            .collect();
        let module = GModule::adjoint_mod_scalars(&self.rho)?;
        let cochain: Cochain1 = b.iter().map(matrix_mod_scalars).collect();
        let cocycle_defect = cocycle1_defect(&module, &cochain);
        let scalar_defect = if lambda.iter().all(Option::is_some) {
            let k = self.space.model.ring();
            let trivial = GModule::trivial(group.clone(), k, 1);
            let c: Cochain2 = lambda.iter().map(|x| vec![k.residue(x.expect("checked"))]).collect();
            cocycle2_defect(&trivial, &c)
        } else {
            None
        };
        Ok(DeltaG { b, lambda, cocycle_defect, scalar_defect })
    }
}

pub fn extract_b_sigma(eq: &EquivariantIdeal, f: &NormalMapRep, s: usize) -> Result<BSigma> {
    eq.extract_b_sigma(f, s)
}

pub fn delta_g_cocycle(eq: &EquivariantIdeal, f: &NormalMapRep) -> Result<DeltaG> {
    eq.delta_g_cocycle(f)
}

// ---------------------------------------------------------------- compatibility

/// First-order lift data over a small extension of the residue field:
/// rho'(s) = lift(s) + E tau(s) and A'_i = i(A_i) + E B_i.
#[derive(Debug, Clone)]
pub struct LiftData {
    pub ext: SmallExtension,
    /// Per-element lifts over the source ring reducing to rho.
    pub rho_lift: Vec<Matrix>,
    /// Per-element perturbations over the residue field.
    pub tau: Vec<Matrix>,
    /// Per-generator E-parts over the residue field.
    pub b: Vec<Matrix>,
}

impl LiftData {
    /// The coefficient-wise lift with the given perturbations.
    pub fn from_section(eq: &EquivariantIdeal, ext: &SmallExtension, tau: Vec<Matrix>, b: Vec<Matrix>) -> Result<LiftData> {
        let rho_lift = eq.rho.images().iter().map(|m| m.section(ext)).collect::<Result<Vec<_>>>()?;
        Ok(LiftData { ext: ext.clone(), rho_lift, tau, b })
    }
}

#[derive(Debug, Clone)]
pub enum Compatibility {
    Pass(CompatibilityPass),
    /// psi_{D_s}(A_i) - (^s f - f)(A_i) is nonzero modulo span A; `residual`
    /// is its normal form.
    Fail { sigma: usize, generator: usize, residual: Matrix, membership_agrees: bool },
}

#[derive(Debug, Clone)]
pub struct CompatibilityPass {
    /// mu(s) with lambda~(s) = i(lambda(s)) + E mu(s).
    pub mu: Vec<Matrix>,
    pub b_sigma: Vec<Matrix>,
    /// D^(1)(s) = mu(s) lambda(s^{-1}), the matrix of A_i -> T(s) sum_j mu_ij A_j.
    pub d1: Vec<Matrix>,
    /// psi_{D_s}(A_i) - (^s f - f)(A_i) - sum_k D^(1)_ik(s) A_k = 0 exactly.
    pub identity_exact: bool,
    /// D_s - B_s[f] lies in the kernel of psi, so psi_{D_s} - psi_{B_s[f]}
    /// takes values in span A.
    pub quotient_zero: bool,
}

impl Compatibility {
    pub fn is_pass(&self) -> bool {
        matches!(self, Compatibility::Pass(_))
    }
}

/// Decide whether the lifted generators are invariant under the lifted
/// action, and on success verify the compatibility identity linking
/// D_s = tau(s) rho(s)^{-1}, B_s[f] and D^(1).
pub fn compatibility_check(eq: &EquivariantIdeal, lift: &LiftData) -> Result<Compatibility> {
    let model = eq.space.model();
    let k = model.ring();
    let ext = &lift.ext;
    if ext.target != *k {
        return Err(Error::RingMismatch);
    }
    let group = eq.rho.group();
    let order = group.order();
    let g = model.g();
    if lift.rho_lift.len() != order || lift.tau.len() != order || lift.b.len() != model.r() {
        return Err(Error::Shape("lift data sizes do not match the group and ideal".into()));
    }
    if lift.rho_lift.iter().chain(&lift.tau).chain(&lift.b).any(|m| m.rows() != g || m.cols() != g) {
        return Err(Error::Shape("lift data matrices must be g x g".into()));
    }
    if lift.tau.iter().chain(&lift.b).any(|m| m.ring() != k) || lift.rho_lift.iter().any(|m| m.ring() != &ext.source) {
        return Err(Error::RingMismatch);
    }
    // Full perturbation: rho'(s) = i(rho(s)) + E tau'(s).
    let rho_prime: Vec<Matrix> =
        lift.rho_lift.iter().zip(&lift.tau).map(|(m, t)| m.add(&Matrix::e_times(t, ext))).collect();
    let mut tau_total = Vec::with_capacity(order);
    for (e, m) in rho_prime.iter().enumerate() {
        let diff = m.sub(&eq.rho.image(e).section(ext)?);
        tau_total.push(diff.div_e(ext).ok_or(Error::NotLiftsOfSamePoint)?);
    }
    let d: Vec<Matrix> = tau_total.iter().enumerate().map(|(e, t)| t.mul(eq.rho.inverse_image(e))).collect();
    let f = NormalMapRep::new(lift.b.clone())?;
    let lifted_model = model.lift(ext, &lift.b)?;
    let rho_lifted = Representation::from_images(group.clone(), &ext.source, rho_prime)?;

    // Residue-level test for every element.
    for s in 0..order {
        let psi_d = eq.space.psi_raw(&d[s]);
        let delta = eq.delta(s, &f)?;
        for i in 0..model.r() {
            let residual = eq.space.reduce_sym(&psi_d.values[i].sub(&delta.values[i]));
            if !residual.is_zero() {
                let membership_agrees = !check_invariance(&lifted_model, &rho_lifted, s)?.is_invariant();
                return Ok(Compatibility::Fail { sigma: s, generator: i, residual, membership_agrees });
            }
        }
    }

    let mut mu = Vec::with_capacity(order);
    let mut d1 = Vec::with_capacity(order);
    let mut b_sigma = Vec::with_capacity(order);
    let mut identity_exact = true;
    let mut quotient_zero = true;
    for s in 0..order {
        let Invariance::Invariant { lambda: lt } = check_invariance(&lifted_model, &rho_lifted, s)? else {
            return Err(Error::Shape("membership test disagrees with the residue-level residual".into()));
        };
        let m = lt.sub(&eq.lambda[s].section(ext)?).div_e(ext).ok_or(Error::NotLiftsOfSamePoint)?;
        let d1s = m.mul(&eq.lambda[group.inv(s)]);
        let psi_d = eq.space.psi_raw(&d[s]);
        let delta = eq.delta(s, &f)?;
        for i in 0..model.r() {
            let span_part = model.generators().iter().enumerate().fold(Matrix::zeros(k, g, g), |acc, (j, a)| {
                acc.add(&a.scale(d1s.get(i, j)))
            });
            if !psi_d.values[i].sub(&delta.values[i]).sub(&span_part).is_zero() {
                identity_exact = false;
            }
        }
        let bs = eq.extract_b_sigma(&f, s)?.b;
        if eq.space.class(&eq.space.psi_raw(&d[s].sub(&bs))).iter().any(|&x| x != 0) {
            quotient_zero = false;
        }
        mu.push(m);
        d1.push(d1s);
        b_sigma.push(bs);
    }
    Ok(Compatibility::Pass(CompatibilityPass { mu, b_sigma, d1, identity_exact, quotient_zero }))
}
