//! Fixtures and brute-force oracles shared by integration tests.
#![allow(dead_code)]

use std::collections::HashSet;
use std::sync::Arc;

use petri_deform::cohomology::{GModule, Cochain1};
use petri_deform::deform::{CanonicalIdealModel, EquivariantIdeal, LiftData};
use petri_deform::group::FiniteGroup;
use petri_deform::linalg::Matrix;
use petri_deform::rep::Representation;
use petri_deform::ring::{make_ring, Ring, RingKind, SmallExtension};
use rand::Rng;

pub fn gf(p: u64) -> Ring {
    make_ring(RingKind::PrimeField, p, 1, 1).unwrap()
}

pub fn close(gens: &[Matrix]) -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::close(gens, 2000).unwrap())
}

/// C_5 x| C_4 generated by diag(2, 1) and [[1,1],[0,1]] over GF(5).
pub fn affine_group() -> Arc<FiniteGroup> {
    let k = gf(5);
    close(&[Matrix::from_ints(&k, &[vec![2, 0], vec![0, 1]]), Matrix::from_ints(&k, &[vec![1, 1], vec![0, 1]])])
}

/// A cyclic subgroup of GL_2(GF(5)) of the given order (2, 3, 4 or 6).
pub fn cyclic_gl2(order: usize) -> Arc<FiniteGroup> {
    let k = gf(5);
    let m = match order {
        2 => Matrix::from_ints(&k, &[vec![-1, 0], vec![0, 1]]),
        3 => Matrix::from_ints(&k, &[vec![0, -1], vec![1, -1]]),
        4 => Matrix::from_ints(&k, &[vec![2, 0], vec![0, 1]]),
        6 => Matrix::from_ints(&k, &[vec![0, -1], vec![1, 1]]),
        _ => panic!("no fixture for order {order}"),
    };
    let g = close(&[m]);
    assert_eq!(g.order(), order);
    g
}

pub fn perm_matrix(k: &Ring, perm: &[usize]) -> Matrix {
    let n = perm.len();
    let mut m = Matrix::zeros(k, n, n);
    for (i, &j) in perm.iter().enumerate() {
        m.set(j, i, k.one());
    }
    m
}

/// Every group of order at most 6, as permutation matrices over GF(3).
pub fn small_groups() -> Vec<(&'static str, Arc<FiniteGroup>)> {
    let k = gf(3);
    let p = |perm: &[usize]| perm_matrix(&k, perm);
    vec![
        ("C1", close(&[p(&[0])])),
        ("C2", close(&[p(&[1, 0])])),
        ("C3", close(&[p(&[1, 2, 0])])),
        ("C4", close(&[p(&[1, 2, 3, 0])])),
        ("C2xC2", close(&[p(&[1, 0, 3, 2]), p(&[2, 3, 0, 1])])),
        ("C5", close(&[p(&[1, 2, 3, 4, 0])])),
        ("C6", close(&[p(&[1, 2, 0, 4, 3])])),
        ("S3", close(&[p(&[1, 0, 2]), p(&[1, 2, 0])])),
    ]
}

/// All invertible n x n matrices over a prime field.
pub fn gl(k: &Ring, n: usize) -> Vec<Matrix> {
    let q = k.size() as i64;
    let total = (q as usize).pow((n * n) as u32);
    (0..total)
        .filter_map(|mut idx| {
            let rows: Vec<Vec<i64>> = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| {
                            let x = (idx % q as usize) as i64;
                            idx /= q as usize;
                            x
                        })
                        .collect()
                })
                .collect();
            let m = Matrix::from_ints(k, &rows);
            m.is_invertible().then_some(m)
        })
        .collect()
}

/// Every module structure on k^n: all homomorphisms G -> GL_n(k).
pub fn all_modules(group: &Arc<FiniteGroup>, k: &Ring, n: usize) -> Vec<GModule> {
    let gl = gl(k, n);
    let ngen = group.generators().len();
    let mut out = Vec::new();
    let mut choice = vec![0usize; ngen];
    loop {
        let gens: Vec<Matrix> = choice.iter().map(|&i| gl[i].clone()).collect();
        if let Ok(m) = GModule::from_generators(group.clone(), k, &gens) {
            out.push(m);
        }
        let mut pos = 0;
        loop {
            if pos == ngen {
                return out;
            }
            choice[pos] += 1;
            if choice[pos] < gl.len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

fn log_q(count: usize, q: usize) -> usize {
    let mut d = 0;
    let mut x = 1;
    while x < count {
        x *= q;
        d += 1;
    }
    assert_eq!(x, count, "count {count} is not a power of {q}");
    d
}

/// (dim Z^1, dim B^1, dim H^1) by enumerating every cochain with d(1) = 0.
pub fn brute_force_h1(m: &GModule) -> (usize, usize, usize) {
    let g = m.group();
    let order = g.order();
    let n = m.dim();
    let q = m.ring().size() as u32;
    let f = m.ring().field();
    let vectors: Vec<Vec<u32>> = (0..(q as usize).pow(n as u32))
        .map(|mut i| {
            (0..n)
                .map(|_| {
                    let x = (i % q as usize) as u32;
                    i /= q as usize;
                    x
                })
                .collect()
        })
        .collect();
    let nv = vectors.len();
    // act[e][v] = index of e.v; add[v][w] = index of v + w.
    let index = |v: &[u32]| v.iter().rev().fold(0usize, |acc, &x| acc * q as usize + x as usize);
    let act: Vec<Vec<usize>> = (0..order).map(|e| vectors.iter().map(|v| index(&m.apply(e, v))).collect()).collect();
    let add: Vec<Vec<usize>> = vectors
        .iter()
        .map(|v| vectors.iter().map(|w| index(&v.iter().zip(w).map(|(&a, &b)| f.add(a, b)).collect::<Vec<_>>())).collect())
        .collect();
    let mut d = vec![0usize; order];
    let mut z1 = 0;
    'outer: loop {
        let ok = (0..order).all(|a| (0..order).all(|b| d[g.mul(a, b)] == add[d[a]][act[a][d[b]]]));
        if ok {
            z1 += 1;
        }
        let mut pos = 1;
        loop {
            if pos >= order {
                break 'outer;
            }
            d[pos] += 1;
            if d[pos] < nv {
                break;
            }
            d[pos] = 0;
            pos += 1;
        }
    }
    if order == 1 {
        z1 = 1;
    }
    let mut boundaries = HashSet::new();
    for (qi, qv) in vectors.iter().enumerate() {
        let b: Vec<usize> = (0..order)
            .map(|e| {
                let gq = &vectors[act[e][qi]];
                index(&qv.iter().zip(gq).map(|(&a, &b)| f.sub(a, b)).collect::<Vec<_>>())
            })
            .collect();
        boundaries.insert(b);
    }
    let zd = log_q(z1, q as usize);
    let bd = log_q(boundaries.len(), q as usize);
    (zd, bd, zd - bd)
}

pub fn random_matrix(k: &Ring, rows: usize, cols: usize, rng: &mut impl Rng) -> Matrix {
    let q = k.size() as u32;
    let data = (0..rows * cols).map(|_| k.from_residue(rng.gen_range(0..q))).collect();
    Matrix::from_elems(k, rows, cols, data).unwrap()
}

pub fn random_vector(k: &Ring, n: usize, rng: &mut impl Rng) -> Vec<u32> {
    let q = k.size() as u32;
    (0..n).map(|_| rng.gen_range(0..q)).collect()
}

/// Random element of the span of the given cochains.
pub fn random_combination(k: &Ring, basis: &[Cochain1], rng: &mut impl Rng) -> Cochain1 {
    let f = k.field();
    let q = k.size() as u32;
    let mut out: Cochain1 = basis.first().map(|b| vec![vec![0; b[0].len()]; b.len()]).unwrap_or_default();
    for b in basis {
        let c = rng.gen_range(0..q);
        for (o, v) in out.iter_mut().zip(b) {
            f.axpy(o, c, v);
        }
    }
    out
}

/// The lift (I + E z(s)) i(rho(s)) for a cochain z of the adjoint module.
pub fn twisted_lift(rho: &Representation, ext: &SmallExtension, z: &Cochain1) -> Representation {
    let g = rho.dim();
    let k = ext.residue_field();
    let id = Matrix::identity(&ext.source, g);
    let images = rho
        .images()
        .iter()
        .zip(z)
        .map(|(m, zv)| {
            let zm = Matrix::from_elems(&k, g, g, zv.iter().map(|&x| k.from_residue(x)).collect()).unwrap();
            id.add(&Matrix::e_times(&zm, ext)).mul(&m.section(ext).unwrap())
        })
        .collect();
    Representation::from_images(rho.group().clone(), &ext.source, images).unwrap()
}

/// The canonical genus-5 curve sum x_i^2 = sum a_i x_i^2 = sum a_i^2 x_i^2 = 0
/// over GF(11) with the sign changes of the coordinates.
pub fn genus5() -> (CanonicalIdealModel, Representation) {
    let k = gf(11);
    let a = [0i64, 1, 2, 3, 4];
    let diag = |f: &dyn Fn(i64) -> i64| {
        let d: Vec<_> = a.iter().map(|&x| k.from_int(f(x))).collect();
        Matrix::diagonal(&k, &d)
    };
    let gens = vec![diag(&|_| 1), diag(&|x| x), diag(&|x| x * x)];
    let ideal = CanonicalIdealModel::new(&k, 5, gens).unwrap();
    let signs: Vec<Matrix> = (0..4)
        .map(|i| {
            let d: Vec<_> = (0..5).map(|j| k.from_int(if j == i { -1 } else { 1 })).collect();
            Matrix::diagonal(&k, &d)
        })
        .collect();
    let group = close(&signs);
    (ideal, Representation::inclusion(group))
}

/// A first-order deformation obtained by conjugating an invariant ideal:
/// P = I + E Q, A'_i = sum_j (delta_ij + E N_ij) P^t A_j P, rho' = P^{-1} rho P.
pub fn synthetic_pass(eq: &EquivariantIdeal, ext: &SmallExtension, rng: &mut impl Rng) -> LiftData {
    let model = eq.space().model();
    let k = model.ring().clone();
    let g = model.g();
    let r = model.r();
    let q = random_matrix(&k, g, g, rng);
    let nmat = random_matrix(&k, r, r, rng);
    let b: Vec<Matrix> = (0..r)
        .map(|i| {
            let a = &model.generators()[i];
            let mut bi = q.transpose().mul(a).add(&a.mul(&q));
            for (j, aj) in model.generators().iter().enumerate() {
                bi = bi.add(&aj.scale(nmat.get(i, j)));
            }
            bi
        })
        .collect();
    let tau: Vec<Matrix> = eq.rho().images().iter().map(|m| m.mul(&q).sub(&q.mul(m))).collect();
    LiftData::from_section(eq, ext, tau, b).unwrap()
}
