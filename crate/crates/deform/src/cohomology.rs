//! Cocycles, coboundaries and low-degree cohomology of finite groups with
//! coefficients in matrix modules, plus obstruction theory for lifting
//! representations across small extensions.
//!
//! Conventions are the standard left ones: a 1-cocycle satisfies
//! d(st) = d(s) + s.d(t), coboundaries are d(s) = Q - s.Q, a 2-cocycle
//! satisfies s1.c(s2,s3) - c(s1 s2,s3) + c(s1,s2 s3) - c(s1,s2) = 0 and
//! (df)(a,b) = a.f(b) - f(ab) + f(a). Differences of lifts taken as
//! rho2^{-1} rho1 instead of rho1 rho2^{-1} are cocycles for the right action
//! X.t = t^{-1}.X, with law e(st) = e(t) + t^{-1}.e(s); see [`to_right_cochain`].

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{solve, Matrix, Subspace};
use crate::rep::Representation;
use crate::ring::{Ring, SmallExtension};

/// Values per group element, each a coordinate vector of the module.
pub type Cochain1 = Vec<Vec<u32>>;
/// Values per ordered pair (a, b), stored at a * |G| + b.
pub type Cochain2 = Vec<Vec<u32>>;

/// Dense constraint data above this many entries is refused.
const MAX_DENSE_ENTRIES: usize = 1 << 26;

/// A finite-dimensional left module over a field.
#[derive(Debug, Clone)]
pub struct GModule {
    ring: Ring,
    group: Arc<FiniteGroup>,
    dim: usize,
    /// Row-major N x N action matrix per group element.
    action: Vec<Vec<u32>>,
}

impl GModule {
    /// Action matrices for every element, in the group's element order.
    pub fn new(group: Arc<FiniteGroup>, ring: &Ring, action: Vec<Matrix>) -> Result<GModule> {
        if !ring.is_field() {
            return Err(Error::NotAField(ring.to_string()));
        }
        if action.len() != group.order() {
            return Err(Error::Shape(format!("{} action matrices for a group of order {}", action.len(), group.order())));
        }
        let dim = action[0].rows();
        if action.iter().any(|m| m.ring() != ring || m.rows() != dim || m.cols() != dim) {
            return Err(Error::Shape("action matrices must be square of equal size over the module ring".into()));
        }
        let module = GModule { ring: ring.clone(), group, dim, action: action.iter().map(Matrix::field_entries).collect() };
        module.check_action()?;
        Ok(module)
    }

    /// Extend generator actions along the closure tree of the group.
    pub fn from_generators(group: Arc<FiniteGroup>, ring: &Ring, gens: &[Matrix]) -> Result<GModule> {
        let rho = Representation::from_generator_images(group.clone(), ring, gens)?;
        GModule::new(group, ring, rho.images().to_vec())
    }

    pub fn trivial(group: Arc<FiniteGroup>, ring: &Ring, dim: usize) -> GModule {
        let id = Matrix::identity(ring, dim).field_entries();
        GModule { ring: ring.clone(), action: vec![id; group.order()], group, dim }
    }

    /// M_g(k) with Ad(s) M = rho(s) M rho(s)^{-1}, in row-major coordinates
    /// i * g + j. A representation over a local ring acts through its residue.
    pub fn adjoint(rho: &Representation) -> Result<GModule> {
        let k = rho.ring().residue_field();
        let g = rho.dim();
        let action = (0..rho.group().order())
            .map(|e| {
                let a = rho.image(e).residue();
                let ai = rho.inverse_image(e).residue();
                let mut m = Matrix::zeros(&k, g * g, g * g);
                for i in 0..g {
                    for j in 0..g {
                        for x in 0..g {
                            for y in 0..g {
                                m.set(i * g + j, x * g + y, k.mul(a.get(i, x), ai.get(y, j)));
                            }
                        }
                    }
                }
                m
            })
            .collect();
        GModule::new(rho.group().clone(), &k, action)
    }

    /// M_g(k) / <I> with the induced adjoint action, in the coordinates of
    /// [`matrix_mod_scalars`].
    pub fn adjoint_mod_scalars(rho: &Representation) -> Result<GModule> {
        let k = rho.ring().residue_field();
        let g = rho.dim();
        if g == 0 {
            return Err(Error::Shape("empty representation".into()));
        }
        let n = g * g - 1;
        let action = (0..rho.group().order())
            .map(|e| {
                let a = rho.image(e).residue();
                let ai = rho.inverse_image(e).residue();
                let mut m = Matrix::zeros(&k, n, n);
                for col in 0..n {
                    let mut unit = vec![0u32; n];
                    unit[col] = 1;
                    let img = matrix_mod_scalars(&a.mul(&matrix_from_mod_scalars(&k, g, &unit)).mul(&ai));
                    for (row, &v) in img.iter().enumerate() {
                        m.set(row, col, k.from_residue(v));
                    }
                }
                m
            })
            .collect();
        GModule::new(rho.group().clone(), &k, action)
    }

    /// The module with action P a(s) P^{-1}, isomorphic to this one.
    pub fn conjugate(&self, p: &Matrix) -> Result<GModule> {
        let pi = p.inverse()?;
        let action = (0..self.group.order()).map(|e| p.mul(&self.action_matrix(e)).mul(&pi)).collect();
        GModule::new(self.group.clone(), &self.ring, action)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action_matrix(&self, e: usize) -> Matrix {
        let data = self.action[e].iter().map(|&x| self.ring.from_residue(x)).collect();
        Matrix::from_elems(&self.ring, self.dim, self.dim, data).expect("stored shape")
    }

    /// s.v
    pub fn apply(&self, e: usize, v: &[u32]) -> Vec<u32> {
        let f = self.ring.field();
        let n = self.dim;
        let a = &self.action[e];
        (0..n).map(|i| (0..n).fold(0, |acc, j| f.add(acc, f.mul(a[i * n + j], v[j])))).collect()
    }

    fn check_action(&self) -> Result<()> {
        let n = self.dim;
        let id = Matrix::identity(&self.ring, n).field_entries();
        if self.action[0] != id {
            return Err(Error::Shape("module action of the identity is not the identity".into()));
        }
        let g = &self.group;
        for &s in g.generator_indices() {
            let a = self.action_matrix(s);
            for h in 0..g.order() {
                if a.mul(&self.action_matrix(h)).field_entries() != self.action[g.mul(s, h)] {
                    return Err(Error::Shape(format!("module action is not a homomorphism at ({s}, {h})")));
                }
            }
        }
        Ok(())
    }

    fn zero(&self) -> Vec<u32> {
        vec![0; self.dim]
    }
}

/// Coordinates of the class of M in M_g(k) / <I>: the entries of
/// M - M_{g-1,g-1} I in row-major order with the last entry dropped.
pub fn matrix_mod_scalars(m: &Matrix) -> Vec<u32> {
    let k = m.ring();
    let g = m.rows();
    let last = m.get(g - 1, g - 1);
    let mut v = Vec::with_capacity(g * g - 1);
    for i in 0..g {
        for j in 0..g {
            if i == g - 1 && j == g - 1 {
                continue;
            }
            let x = if i == j { k.sub(m.get(i, j), last) } else { m.get(i, j) };
            v.push(k.residue(x));
        }
    }
    v
}

/// The representative with last diagonal entry zero of a class in M_g(k) / <I>.
pub fn matrix_from_mod_scalars(k: &Ring, g: usize, v: &[u32]) -> Matrix {
    let mut m = Matrix::zeros(k, g, g);
    for (idx, &x) in v.iter().enumerate() {
        m.set(idx / g, idx % g, k.from_residue(x));
    }
    m
}

/// Row-major coordinates of a matrix over a field.
pub fn matrix_to_vector(m: &Matrix) -> Vec<u32> {
    m.field_entries()
}

pub fn vector_to_matrix(k: &Ring, g: usize, v: &[u32]) -> Matrix {
    Matrix::from_elems(k, g, g, v.iter().map(|&x| k.from_residue(x)).collect()).expect("length g * g")
}

fn add(k: &Ring, a: &[u32], b: &[u32]) -> Vec<u32> {
    let f = k.field();
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

fn sub(k: &Ring, a: &[u32], b: &[u32]) -> Vec<u32> {
    let f = k.field();
    a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect()
}

#[cfg(test)]
fn is_zero(v: &[u32]) -> bool {
    v.iter().all(|&x| x == 0)
}

// ---------------------------------------------------------------- degree 1

/// First failing pair (a, b) of d(ab) = d(a) + a.d(b), if any.
pub fn cocycle1_defect(m: &GModule, d: &Cochain1) -> Option<(usize, usize)> {
    let g = &m.group;
    let n = g.order();
    (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).find(|&(a, b)| {
        let rhs = add(&m.ring, &d[a], &m.apply(a, &d[b]));
        d[g.mul(a, b)] != rhs
    })
}

/// e(s) = s^{-1}.d(s). For the adjoint module this turns the difference
/// rho1 rho2^{-1} = I + E d into rho2^{-1} rho1 = I + E e.
pub fn to_right_cochain(m: &GModule, d: &Cochain1) -> Cochain1 {
    (0..m.group.order()).map(|s| m.apply(m.group.inv(s), &d[s])).collect()
}

/// First failing pair (a, b) of e(ab) = e(b) + b^{-1}.e(a), the cocycle law
/// for the right action; e is a right cocycle iff its left form is a cocycle.
pub fn right_cocycle1_defect(m: &GModule, e: &Cochain1) -> Option<(usize, usize)> {
    let g = &m.group;
    let n = g.order();
    (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).find(|&(a, b)| {
        let rhs = add(&m.ring, &e[b], &m.apply(g.inv(b), &e[a]));
        e[g.mul(a, b)] != rhs
    })
}

/// d(s) = Q - s.Q
pub fn coboundary1(m: &GModule, q: &[u32]) -> Cochain1 {
    (0..m.group.order()).map(|e| sub(&m.ring, q, &m.apply(e, q))).collect()
}

/// Q with d = coboundary1(Q), if d is a coboundary.
pub fn is_coboundary1(m: &GModule, d: &Cochain1) -> Option<Vec<u32>> {
    let k = &m.ring;
    let n = m.dim;
    let order = m.group.order();
    // Rows (I - a(e)) Q = d(e) for every element.
    let mut mat = Matrix::zeros(k, order * n, n);
    let mut rhs = Vec::with_capacity(order * n);
    for e in 0..order {
        let a = &m.action[e];
        for i in 0..n {
            for j in 0..n {
                let delta = if i == j { 1 } else { 0 };
                mat.set(e * n + i, j, k.from_residue(k.field().sub(delta, a[i * n + j])));
            }
            rhs.push(k.from_residue(d[e][i]));
        }
    }
    solve(&mat, &rhs).ok().map(|x| x.into_iter().map(|v| k.residue(v)).collect())
}

/// Cocycle from its values on the generators via d(s h) = d(s) + s.d(h)
/// along the closure tree. The result is a cocycle iff it passes the
/// generator-edge constraints.
pub fn expand_cocycle1(m: &GModule, gen_values: &[Vec<u32>]) -> Cochain1 {
    let g = &m.group;
    let mut d = vec![m.zero(); g.order()];
    for e in 1..g.order() {
        let (s, h) = g.parent(e).expect("tree");
        d[e] = add(&m.ring, &gen_values[s], &m.apply(g.generator_indices()[s], &d[h]));
    }
    d
}

fn split(v: &[u32], n: usize) -> Vec<Vec<u32>> {
    v.chunks(n).map(<[u32]>::to_vec).collect()
}

/// Z^1, B^1 and a complement of B^1 in Z^1.
#[derive(Debug, Clone)]
pub struct H1 {
    pub z1_dim: usize,
    pub b1_dim: usize,
    pub h1_dim: usize,
    /// Basis of Z^1.
    pub z1_basis: Vec<Cochain1>,
    /// Cocycles whose classes form a basis of H^1.
    pub representatives: Vec<Cochain1>,
}

/// Basis of the 1-cocycles, parametrized by their values on generators.
pub fn z1_basis(m: &GModule) -> Vec<Cochain1> {
    z1_generator_basis(m).iter().map(|x| expand_cocycle1(m, &split(x, m.dim))).collect()
}

fn z1_generator_basis(m: &GModule) -> Vec<Vec<u32>> {
    let g = &m.group;
    let n = m.dim;
    let k = g.generators().len();
    let unknowns = k * n;
    // Expand each unit generator assignment and record its edge residuals.
    let columns: Vec<Vec<u32>> = (0..unknowns)
        .into_par_iter()
        .map(|j| {
            let mut x = vec![0u32; unknowns];
            x[j] = 1;
            let d = expand_cocycle1(m, &split(&x, n));
            let mut col = Vec::with_capacity(k * g.order() * n);
            for (s, &se) in g.generator_indices().iter().enumerate() {
                for h in 0..g.order() {
                    let lhs = &d[g.mul(se, h)];
                    let rhs = add(&m.ring, &x[s * n..(s + 1) * n], &m.apply(se, &d[h]));
                    col.extend(sub(&m.ring, lhs, &rhs));
                }
            }
            col
        })
        .collect();
    let nrows = columns.first().map_or(0, Vec::len);
    let rows = (0..nrows).map(|r| columns.iter().map(|c| c[r]).collect::<Vec<u32>>());
    crate::linalg::null_space_of_rows(&m.ring, unknowns, rows)
}

pub fn h1(m: &GModule) -> H1 {
    let n = m.dim;
    let k = m.group.generators().len();
    let z = z1_generator_basis(m);
    let mut space = Subspace::new(&m.ring, k * n);
    for j in 0..n {
        let mut q = vec![0u32; n];
        q[j] = 1;
        let d = coboundary1(m, &q);
        let gens: Vec<u32> = m.group.generator_indices().iter().flat_map(|&s| d[s].clone()).collect();
        space.insert(gens);
    }
    let b1_dim = space.rank();
    let reps: Vec<Vec<u32>> = z.iter().filter(|x| space.insert((*x).clone())).cloned().collect();
    H1 {
        z1_dim: z.len(),
        b1_dim,
        h1_dim: reps.len(),
        z1_basis: z.iter().map(|x| expand_cocycle1(m, &split(x, n))).collect(),
        representatives: reps.iter().map(|x| expand_cocycle1(m, &split(x, n))).collect(),
    }
}

// ---------------------------------------------------------------- degree 2

/// First failing triple of s1.c(s2,s3) - c(s1 s2,s3) + c(s1,s2 s3) - c(s1,s2) = 0.
pub fn cocycle2_defect(m: &GModule, c: &Cochain2) -> Option<(usize, usize, usize)> {
    let g = &m.group;
    let n = g.order();
    let k = &m.ring;
    for a in 0..n {
        for b in 0..n {
            let ab = g.mul(a, b);
            for x in 0..n {
                let lhs = add(k, &m.apply(a, &c[b * n + x]), &c[a * n + g.mul(b, x)]);
                let rhs = add(k, &c[ab * n + x], &c[a * n + b]);
                if lhs != rhs {
                    return Some((a, b, x));
                }
            }
        }
    }
    None
}

/// (df)(a, b) = a.f(b) - f(ab) + f(a)
pub fn coboundary2(m: &GModule, f: &Cochain1) -> Cochain2 {
    let g = &m.group;
    let n = g.order();
    let k = &m.ring;
    let mut c = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            c.push(add(k, &sub(k, &m.apply(a, &f[b]), &f[g.mul(a, b)]), &f[a]));
        }
    }
    c
}

/// f with c = df, if c is a coboundary.
///
/// f is written as an affine function of f(1) and the generator values by
/// solving df = c along the closure tree, then every pair is imposed.
pub fn is_coboundary2(m: &GModule, c: &Cochain2) -> Option<Cochain1> {
    let g = &m.group;
    let order = g.order();
    let n = m.dim;
    let k = &m.ring;
    let f_ = k.field();
    let ngen = g.generators().len();
    let unknowns = (ngen + 1) * n;
    // f(e) = F_e x + h_e with F_e stored as n rows of length `unknowns`.
    let mut lin: Vec<Vec<Vec<u32>>> = vec![vec![vec![0; unknowns]; n]; order];
    let mut cst: Vec<Vec<u32>> = vec![vec![0; n]; order];
    for i in 0..n {
        lin[0][i][i] = 1;
    }
    let apply_rows = |e: usize, rows: &[Vec<u32>]| -> Vec<Vec<u32>> {
        let a = &m.action[e];
        (0..n)
            .map(|i| {
                let mut out = vec![0u32; unknowns];
                for j in 0..n {
                    let x = a[i * n + j];
                    if x != 0 {
                        f_.axpy(&mut out, x, &rows[j]);
                    }
                }
                out
            })
            .collect()
    };
    for e in 1..order {
        let (s, h) = g.parent(e).expect("tree");
        let se = g.generator_indices()[s];
        // f(s h) = s.f(h) + f(s) - c(s, h), with f(s) the free unknowns of s.
        let mut rows = apply_rows(se, &lin[h]);
        for (i, row) in rows.iter_mut().enumerate() {
            row[(s + 1) * n + i] = f_.add(row[(s + 1) * n + i], 1);
        }
        let val = sub(k, &m.apply(se, &cst[h]), &c[se * order + h]);
        lin[e] = rows;
        cst[e] = val;
    }
    // Generator unknowns must agree with the tree values at generator elements.
    let mut eqs: Vec<(Vec<u32>, u32)> = Vec::new();
    for (s, &se) in g.generator_indices().iter().enumerate() {
        for i in 0..n {
            let mut row = lin[se][i].clone();
            row[(s + 1) * n + i] = f_.sub(row[(s + 1) * n + i], 1);
            eqs.push((row, f_.neg(cst[se][i])));
        }
    }
    for a in 0..order {
        for b in 0..order {
            let ab = g.mul(a, b);
            let ab_rows = apply_rows(a, &lin[b]);
            let ab_const = m.apply(a, &cst[b]);
            for i in 0..n {
                // a.f(b) - f(ab) + f(a) - c(a,b) = 0
                let mut row = ab_rows[i].clone();
                f_.axpy(&mut row, f_.neg(1), &lin[ab][i]);
                f_.axpy(&mut row, 1, &lin[a][i]);
                let constant = f_.sub(f_.add(f_.sub(ab_const[i], cst[ab][i]), cst[a][i]), c[a * order + b][i]);
                eqs.push((row, f_.neg(constant)));
            }
        }
    }
    let mut mat = Matrix::zeros(k, eqs.len(), unknowns);
    let mut rhs = Vec::with_capacity(eqs.len());
    for (r, (row, b)) in eqs.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            if x != 0 {
                mat.set(r, j, k.from_residue(x));
            }
        }
        rhs.push(k.from_residue(*b));
    }
    let x: Vec<u32> = solve(&mat, &rhs).ok()?.into_iter().map(|v| k.residue(v)).collect();
    let f: Cochain1 = (0..order)
        .map(|e| {
            (0..n)
                .map(|i| lin[e][i].iter().zip(&x).fold(cst[e][i], |acc, (&l, &xv)| f_.add(acc, f_.mul(l, xv))))
                .collect()
        })
        .collect();
    debug_assert_eq!(&coboundary2(m, &f), c);
    Some(f)
}

/// Second cohomology with representatives.
#[derive(Debug, Clone)]
pub struct H2 {
    /// Dimension of the gauge-fixed normalized cocycles (see [`h2`]).
    pub z2_gauge_dim: usize,
    pub b2_gauge_dim: usize,
    pub h2_dim: usize,
    pub representatives: Vec<Cochain2>,
}

/// Positions (s, h), h != 1, that are not closure-tree edges. Normalized
/// cocycles vanishing on tree edges are parametrized by their values there.
fn gauge_positions(g: &FiniteGroup) -> Vec<(usize, usize)> {
    let mut pos = Vec::new();
    for (s, &se) in g.generator_indices().iter().enumerate() {
        for h in 1..g.order() {
            if g.parent(g.mul(se, h)) != Some((s, h)) {
                pos.push((s, h));
            }
        }
    }
    pos
}

/// Expand gauge values into a full normalized 2-cochain via
/// c(s b, h) = s.c(b, h) + c(s, b h) - c(s, b).
fn expand_cocycle2(m: &GModule, positions: &[(usize, usize)], x: &[u32]) -> Cochain2 {
    let g = &m.group;
    let order = g.order();
    let n = m.dim;
    let k = &m.ring;
    let ngen = g.generators().len();
    let mut gen_vals = vec![m.zero(); ngen * order];
    for (p, &(s, h)) in positions.iter().enumerate() {
        gen_vals[s * order + h] = x[p * n..(p + 1) * n].to_vec();
    }
    let mut c = vec![m.zero(); order * order];
    for a in 1..order {
        let (s, b) = g.parent(a).expect("tree");
        let se = g.generator_indices()[s];
        for h in 0..order {
            let v = m.apply(se, &c[b * order + h]);
            let v = add(k, &v, &gen_vals[s * order + g.mul(b, h)]);
            c[a * order + h] = sub(k, &v, &gen_vals[s * order + b]);
        }
    }
    c
}

/// H^2 through normalized cocycles that vanish on closure-tree edges.
/// Every class has such a representative, and such a cocycle is a
/// coboundary exactly when it is df for f determined along the tree by its
/// values on generators; both spaces are computed in gauge coordinates.
pub fn h2(m: &GModule, bound: usize) -> Result<H2> {
    let g = &m.group;
    let order = g.order();
    if order > bound {
        return Err(Error::BoundExceeded(bound));
    }
    let n = m.dim;
    let positions = gauge_positions(g);
    let unknowns = positions.len() * n;
    if unknowns.saturating_mul(order * order * n) > MAX_DENSE_ENTRIES {
        return Err(Error::BoundExceeded(order));
    }
    let k = &m.ring;
    let ngen = g.generators().len();
    // Constraint residuals at non-tree generator edges (s, b) for every h.
    let edges: Vec<(usize, usize)> = (0..ngen)
        .flat_map(|s| (0..order).map(move |b| (s, b)))
        .filter(|&(s, b)| g.parent(g.mul(g.generator_indices()[s], b)) != Some((s, b)))
        .collect();
    let residual = |c: &Cochain2| -> Vec<u32> {
        let mut out = Vec::with_capacity(edges.len() * order * n);
        for &(s, b) in &edges {
            let se = g.generator_indices()[s];
            let sb = g.mul(se, b);
            for h in 0..order {
                let lhs = add(k, &m.apply(se, &c[b * order + h]), &c[se * order + g.mul(b, h)]);
                let rhs = add(k, &c[sb * order + h], &c[se * order + b]);
                out.extend(sub(k, &lhs, &rhs));
            }
        }
        out
    };
    let columns: Vec<Vec<u32>> = (0..unknowns)
        .into_par_iter()
        .map(|j| {
            let mut x = vec![0u32; unknowns];
            x[j] = 1;
            residual(&expand_cocycle2(m, &positions, &x))
        })
        .collect();
    let nrows = columns.first().map_or(0, Vec::len);
    let rows = (0..nrows).map(|r| columns.iter().map(|col| col[r]).collect::<Vec<u32>>());
    let z2 = crate::linalg::null_space_of_rows(k, unknowns, rows);

    // Coboundaries of tree-determined normalized f.
    let mut space = Subspace::new(k, unknowns);
    for j in 0..ngen * n {
        let mut x = vec![0u32; ngen * n];
        x[j] = 1;
        let f = expand_cocycle1(m, &split(&x, n));
        let c = coboundary2(m, &f);
        let v: Vec<u32> = positions.iter().flat_map(|&(s, h)| c[g.generator_indices()[s] * order + h].clone()).collect();
        space.insert(v);
    }
    let b2 = space.rank();
    let reps: Vec<Vec<u32>> = z2.iter().filter(|x| space.insert((*x).clone())).cloned().collect();
    Ok(H2 {
        z2_gauge_dim: z2.len(),
        b2_gauge_dim: b2,
        h2_dim: reps.len(),
        representatives: reps.iter().map(|x| expand_cocycle2(m, &positions, x)).collect(),
    })
}

// ---------------------------------------------------------------- lifting

fn check_over(ring: &Ring, ext_ring: &Ring) -> Result<()> {
    if ring != ext_ring {
        return Err(Error::RingMismatch);
    }
    Ok(())
}

/// d(s) with rho1(s) rho2(s)^{-1} = I + E d(s), as matrices over the residue
/// field. For homomorphisms this is a 1-cocycle in the adjoint module.
pub fn difference_cocycle(rho1: &Representation, rho2: &Representation, ext: &SmallExtension) -> Result<Vec<Matrix>> {
    check_over(rho1.ring(), &ext.source)?;
    check_over(rho2.ring(), &ext.source)?;
    if !Arc::ptr_eq(rho1.group(), rho2.group()) && rho1.group().elements() != rho2.group().elements() {
        return Err(Error::NotLiftsOfSamePoint);
    }
    let g = rho1.dim();
    (0..rho1.group().order())
        .map(|e| {
            if rho1.image(e).reduce(ext)? != rho2.image(e).reduce(ext)? {
                return Err(Error::NotLiftsOfSamePoint);
            }
            let q = rho1.image(e).mul(rho2.inverse_image(e)).sub(&Matrix::identity(&ext.source, g));
            q.div_e(ext).ok_or(Error::NotLiftsOfSamePoint)
        })
        .collect()
}

/// Matrices over the residue field as a cochain of the adjoint module.
pub fn matrices_to_cochain(ms: &[Matrix]) -> Cochain1 {
    ms.iter().map(matrix_to_vector).collect()
}

pub fn cochain_to_matrices(k: &Ring, g: usize, c: &[Vec<u32>]) -> Vec<Matrix> {
    c.iter().map(|v| vector_to_matrix(k, g, v)).collect()
}

/// The obstruction of a naive lift and, when it vanishes, a true lift.
#[derive(Debug, Clone)]
pub struct Obstruction {
    /// c(a, b) with phi(a, b) = I + E c(a, b), indexed a * |G| + b.
    pub cocycle: Vec<Matrix>,
    /// f with c = df when the class vanishes.
    pub witness: Option<Vec<Matrix>>,
    /// (I - E f(s)) naive(s), a homomorphism over the source ring.
    pub corrected: Option<Vec<Matrix>>,
}

impl Obstruction {
    pub fn vanishes(&self) -> bool {
        self.witness.is_some()
    }
}

/// phi(a, b) = naive(a) naive(b) naive(ab)^{-1} = I + E c(a, b); the class of
/// c in H^2 of the adjoint module decides whether rho lifts across ext.
pub fn obstruction_class(naive: &[Matrix], rho: &Representation, ext: &SmallExtension) -> Result<Obstruction> {
    check_over(rho.ring(), &ext.target)?;
    let group = rho.group();
    let order = group.order();
    if naive.len() != order {
        return Err(Error::Shape("one naive image per group element is required".into()));
    }
    for (e, m) in naive.iter().enumerate() {
        if m.ring() != &ext.source || m.reduce(ext)? != *rho.image(e) {
            return Err(Error::NaiveDoesNotReduce);
        }
    }
    if !rho.is_verified() {
        return Err(Error::NaiveDoesNotReduce);
    }
    let g = rho.dim();
    let id = Matrix::identity(&ext.source, g);
    let inverses = naive.iter().map(Matrix::inverse).collect::<Result<Vec<_>>>()?;
    let cocycle = (0..order * order)
        .into_par_iter()
        .map(|idx| {
            let (a, b) = (idx / order, idx % order);
            let phi = naive[a].mul(&naive[b]).mul(&inverses[group.mul(a, b)]);
            phi.sub(&id).div_e(ext).ok_or(Error::NaiveDoesNotReduce)
        })
        .collect::<Result<Vec<_>>>()?;
    let module = GModule::adjoint(rho)?;
    let k = module.ring().clone();
    let c = matrices_to_cochain(&cocycle);
    let Some(f) = is_coboundary2(&module, &c) else {
        return Ok(Obstruction { cocycle, witness: None, corrected: None });
    };
    let witness = cochain_to_matrices(&k, g, &f);
    let corrected: Vec<Matrix> = witness
        .iter()
        .zip(naive)
        .map(|(fm, n)| id.sub(&Matrix::e_times(fm, ext)).mul(n))
        .collect();
    Ok(Obstruction { cocycle, witness: Some(witness), corrected: Some(corrected) })
}

/// One step of a lift search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftStep {
    /// Name of the ring lifted to.
    pub ring: String,
    pub frontier: usize,
    pub lifted: usize,
    pub obstructed: usize,
    /// The branch bound cut the set of lifts kept for the next step.
    pub truncated: bool,
}

/// Certificate of an obstructed branch: the obstruction 2-cocycle values.
#[derive(Debug, Clone)]
pub struct ObstructionCertificate {
    pub branch: usize,
    pub cocycle: Vec<Matrix>,
}

#[derive(Debug, Clone)]
pub enum LiftVerdict {
    /// A homomorphic lift to the last ring of the chain.
    Lifted { depth: usize, lift: Vec<Matrix> },
    /// Every lift kept at the previous step is obstructed here, and no lift
    /// was ever discarded by the branch bound.
    ObstructedAtDepth { depth: usize, certificates: Vec<ObstructionCertificate> },
    /// All kept branches are obstructed but the branch bound discarded some.
    Exhausted { depth: usize, certificates: Vec<ObstructionCertificate> },
}

#[derive(Debug, Clone)]
pub struct LiftSearch {
    pub verdict: LiftVerdict,
    pub h1_dim: usize,
    pub steps: Vec<LiftStep>,
}

/// Chain of small extensions k[t]/(t^2) -> k, ..., k[t]/(t^depth) -> k[t]/(t^{depth-1})
/// (or Z/p^i for the integer kind) over the residue field of `k`.
pub fn truncation_chain(k: &Ring, kind: crate::ring::RingKind, depth: u32) -> Result<Vec<SmallExtension>> {
    let mut chain = Vec::new();
    let mut target = k.clone();
    for n in 2..=depth {
        let source = k.truncation(kind, n)?;
        let ext = SmallExtension::from_source(&source)?;
        if ext.target != target {
            return Err(Error::RingMismatch);
        }
        target = source;
        chain.push(ext);
    }
    Ok(chain)
}

/// Breadth-first search for lifts of a representation over a field through a
/// chain of small extensions. At each step every kept lift is tested for its
/// obstruction; unobstructed ones are corrected and twisted by all H^1 classes
/// of the adjoint module (lifts differing by coboundaries are conjugate), and
/// at most `branch_bound` lifts are kept.
pub fn lift_search(rho: &Representation, chain: &[SmallExtension], branch_bound: usize) -> Result<LiftSearch> {
    let k = rho.ring();
    if !k.is_field() {
        return Err(Error::NotAField(k.to_string()));
    }
    if !rho.is_verified() {
        return Err(Error::NaiveDoesNotReduce);
    }
    let branch_bound = branch_bound.max(1);
    let group = rho.group().clone();
    let module = GModule::adjoint(rho)?;
    let reps = h1(&module).representatives;
    let g = rho.dim();
    let q = k.size();
    let twists: Vec<Vec<u32>> = coefficient_vectors(k.field().order(), reps.len(), branch_bound as u128 * q);
    let mut frontier = vec![rho.clone()];
    let mut truncated_ever = false;
    let mut steps = Vec::new();
    for (depth, ext) in chain.iter().enumerate() {
        check_over(frontier[0].ring(), &ext.target)?;
        let mut next: Vec<Representation> = Vec::new();
        let mut certificates = Vec::new();
        let mut truncated = false;
        let mut lifted = 0;
        for (branch, cur) in frontier.iter().enumerate() {
            let naive = cur.images().iter().map(|m| m.section(ext)).collect::<Result<Vec<_>>>()?;
            let obs = obstruction_class(&naive, cur, ext)?;
            let Some(base) = obs.corrected else {
                certificates.push(ObstructionCertificate { branch, cocycle: obs.cocycle });
                continue;
            };
            lifted += 1;
            for coeffs in &twists {
                if next.len() == branch_bound {
                    truncated = true;
                    break;
                }
                let images: Vec<Matrix> = (0..group.order())
                    .map(|e| {
                        let mut z = vec![0u32; g * g];
                        for (c, rep) in coeffs.iter().zip(&reps) {
                            k.field().axpy(&mut z, *c, &rep[e]);
                        }
                        let z = vector_to_matrix(k, g, &z);
                        Matrix::identity(&ext.source, g).add(&Matrix::e_times(&z, ext)).mul(&base[e])
                    })
                    .collect();
                next.push(Representation::from_images(group.clone(), &ext.source, images)?);
            }
            if (twists.len() as u128) < (q as u128).saturating_pow(reps.len() as u32) {
                truncated = true;
            }
        }
        truncated_ever |= truncated;
        steps.push(LiftStep {
            ring: ext.source.to_string(),
            frontier: frontier.len(),
            lifted,
            obstructed: certificates.len(),
            truncated,
        });
        if next.is_empty() {
            let depth = depth + 1;
            let verdict = if truncated_ever {
                LiftVerdict::Exhausted { depth, certificates }
            } else {
                LiftVerdict::ObstructedAtDepth { depth, certificates }
            };
            return Ok(LiftSearch { verdict, h1_dim: reps.len(), steps });
        }
        debug_assert!(next.iter().all(Representation::is_verified));
        frontier = next;
    }
    let lift = frontier[0].images().to_vec();
    Ok(LiftSearch { verdict: LiftVerdict::Lifted { depth: chain.len(), lift }, h1_dim: reps.len(), steps })
}

/// The first `limit` coefficient vectors of length `len` over a field with
/// q elements, in lexicographic order starting with zero.
fn coefficient_vectors(q: u32, len: usize, limit: u128) -> Vec<Vec<u32>> {
    let total = (q as u128).saturating_pow(len as u32);
    let count = total.min(limit.max(1)) as usize;
    (0..count)
        .map(|mut i| {
            let mut v = vec![0u32; len];
            for x in v.iter_mut().rev() {
                *x = (i % q as usize) as u32;
                i /= q as usize;
            }
            v
        })
        .collect()
}
