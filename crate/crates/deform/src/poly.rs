//! Graded pieces of k[x_0, .., x_{g-1}] in degrees up to 4, and the
//! degree-2 and degree-3 linear algebra of ideals generated by quadrics.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::{null_space_of_rows, Column, Matrix, Subspace};
use crate::ring::{Elem, Ring};

pub const MAX_DEGREE: usize = 4;

/// The monomials of one degree, each a sorted multiset of variable indices,
/// in ascending lexicographic order. This is graded lex order on exponent
/// tuples (x_0^2 first), and in degree 2 it is the pair order of the
/// symmetric-matrix basis.
#[derive(Debug, Clone)]
pub struct MonomialBasis {
    g: usize,
    degree: usize,
    monos: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl MonomialBasis {
    pub fn new(g: usize, degree: usize) -> MonomialBasis {
        let mut monos = Vec::new();
        let mut cur = Vec::with_capacity(degree);
        fn rec(g: usize, left: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if left == 0 {
                out.push(cur.clone());
                return;
            }
            for v in start..g {
                cur.push(v);
                rec(g, left - 1, v, cur, out);
                cur.pop();
            }
        }
        rec(g, degree, 0, &mut cur, &mut monos);
        let index = monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        MonomialBasis { g, degree, monos, index }
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn monomial(&self, i: usize) -> &[usize] {
        &self.monos[i]
    }

    pub fn monomials(&self) -> &[Vec<usize>] {
        &self.monos
    }

    /// Index of a multiset given in any order.
    pub fn index_of(&self, vars: &[usize]) -> usize {
        let mut key = vars.to_vec();
        key.sort_unstable();
        self.index[&key]
    }

    /// Exponent tuple of monomial i.
    pub fn exponents(&self, i: usize) -> Vec<u32> {
        let mut e = vec![0u32; self.g];
        for &v in &self.monos[i] {
            e[v] += 1;
        }
        e
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut acc = 1usize;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// A homogeneous form: dense coefficients over the monomials of its degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedForm {
    ring: Ring,
    g: usize,
    degree: usize,
    coeffs: Vec<Elem>,
}

impl GradedForm {
    pub fn zero(ring: &Ring, g: usize, degree: usize) -> Result<GradedForm> {
        if degree > MAX_DEGREE {
            return Err(Error::DegreeTooLarge(degree));
        }
        Ok(GradedForm { ring: ring.clone(), g, degree, coeffs: vec![ring.zero(); binomial(g + degree - 1, degree)] })
    }

    pub fn from_coeffs(ring: &Ring, g: usize, degree: usize, coeffs: Vec<Elem>) -> Result<GradedForm> {
        if degree > MAX_DEGREE {
            return Err(Error::DegreeTooLarge(degree));
        }
        if coeffs.len() != binomial(g + degree - 1, degree) {
            return Err(Error::Shape(format!("{} coefficients for degree {degree} in {g} variables", coeffs.len())));
        }
        Ok(GradedForm { ring: ring.clone(), g, degree, coeffs })
    }

    /// c * x_{vars[0]} * x_{vars[1]} * ...
    pub fn monomial(ring: &Ring, g: usize, vars: &[usize], c: Elem) -> Result<GradedForm> {
        let mut f = GradedForm::zero(ring, g, vars.len())?;
        let basis = MonomialBasis::new(g, vars.len());
        f.coeffs[basis.index_of(vars)] = c;
        Ok(f)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, vars: &[usize]) -> Elem {
        let basis = MonomialBasis::new(self.g, self.degree);
        self.coeffs[basis.index_of(vars)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| self.ring.is_zero(c))
    }

    pub fn add(&self, other: &GradedForm) -> Result<GradedForm> {
        self.check_compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::Shape("adding forms of different degrees".into()));
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| self.ring.add(a, b)).collect();
        Ok(GradedForm { coeffs, ..self.clone() })
    }

    pub fn scale(&self, c: Elem) -> GradedForm {
        let coeffs = self.coeffs.iter().map(|&a| self.ring.mul(c, a)).collect();
        GradedForm { coeffs, ..self.clone() }
    }

    fn check_compatible(&self, other: &GradedForm) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        if self.g != other.g {
            return Err(Error::Shape(format!("{} vs {} variables", self.g, other.g)));
        }
        Ok(())
    }

    /// (exponent tuple, coefficient) for every nonzero term, in basis order.
    pub fn terms(&self) -> Vec<(Vec<u32>, Elem)> {
        let basis = MonomialBasis::new(self.g, self.degree);
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| !self.ring.is_zero(c))
            .map(|(i, &c)| (basis.exponents(i), c))
            .collect()
    }
}

/// Exact product of two forms; total degree at most 4.
pub fn multiply(f: &GradedForm, h: &GradedForm) -> Result<GradedForm> {
    f.check_compatible(h)?;
    let d = f.degree + h.degree;
    if d > MAX_DEGREE {
        return Err(Error::DegreeTooLarge(d));
    }
    let r = &f.ring;
    let bf = MonomialBasis::new(f.g, f.degree);
    let bh = MonomialBasis::new(f.g, h.degree);
    let bo = MonomialBasis::new(f.g, d);
    let mut out = GradedForm::zero(r, f.g, d)?;
    let mut key = Vec::with_capacity(d);
    for (i, &a) in f.coeffs.iter().enumerate() {
        if r.is_zero(a) {
            continue;
        }
        for (j, &b) in h.coeffs.iter().enumerate() {
            if r.is_zero(b) {
                continue;
            }
            key.clear();
            key.extend_from_slice(bf.monomial(i));
            key.extend_from_slice(bh.monomial(j));
            let k = bo.index_of(&key);
            out.coeffs[k] = r.add(out.coeffs[k], r.mul(a, b));
        }
    }
    Ok(out)
}

/// The quadric w^t A w. Off-diagonal entries contribute A_ij + A_ji.
pub fn quadric_from_matrix(a: &Matrix) -> Result<GradedForm> {
    if !a.is_square() {
        return Err(Error::Shape("quadric of a non-square matrix".into()));
    }
    let r = a.ring();
    r.check_char_not_two()?;
    let g = a.rows();
    let mut f = GradedForm::zero(r, g, 2)?;
    let mut k = 0;
    for i in 0..g {
        for j in i..g {
            f.coeffs[k] = if i == j { a.get(i, i) } else { r.add(a.get(i, j), a.get(j, i)) };
            k += 1;
        }
    }
    Ok(f)
}

/// The symmetric matrix of a quadric: A_ii = c_ii and A_ij = c_ij / 2.
pub fn matrix_from_quadric(f: &GradedForm) -> Result<Matrix> {
    if f.degree != 2 {
        return Err(Error::Shape(format!("degree {} form is not a quadric", f.degree)));
    }
    let r = &f.ring;
    r.check_char_not_two()?;
    let half = r.inv(r.from_int(2))?;
    let g = f.g;
    let mut a = Matrix::zeros(r, g, g);
    let mut k = 0;
    for i in 0..g {
        for j in i..g {
            if i == j {
                a.set(i, i, f.coeffs[k]);
            } else {
                let v = r.mul(half, f.coeffs[k]);
                a.set(i, j, v);
                a.set(j, i, v);
            }
            k += 1;
        }
    }
    Ok(a)
}

/// (A + A^t) / 2.
pub fn symmetrize(a: &Matrix) -> Result<Matrix> {
    matrix_from_quadric(&quadric_from_matrix(a)?)
}

fn field_coeffs(f: &GradedForm) -> Result<Vec<u32>> {
    if !f.ring.is_field() {
        return Err(Error::NotAField(f.ring.to_string()));
    }
    Ok(f.coeffs.iter().map(|&c| f.ring.residue(c)).collect())
}

fn check_quadrics(gens: &[GradedForm]) -> Result<()> {
    if let Some(q) = gens.iter().find(|q| q.degree != 2) {
        return Err(Error::Shape(format!("generator of degree {}", q.degree)));
    }
    if let Some(first) = gens.first() {
        for q in gens {
            first.check_compatible(q)?;
        }
    }
    Ok(())
}

/// Basis of the degree-d piece (d = 2 or 3) of the ideal generated by quadrics,
/// as coordinate columns over the degree-d monomials.
pub fn graded_ideal_piece(gens: &[GradedForm], d: usize) -> Result<Vec<Column>> {
    let Some(first) = gens.first() else {
        return Ok(Vec::new());
    };
    let ideal = QuadricIdeal::new(first.ring(), first.g(), gens)?;
    let piece = match d {
        2 => &ideal.i2,
        3 => &ideal.i3,
        _ => return Err(Error::Shape(format!("ideal pieces are available in degrees 2 and 3, not {d}"))),
    };
    Ok(piece.basis().iter().map(|v| v.iter().map(|&x| Elem(x as u128)).collect()).collect())
}

/// Basis of the linear syzygies {(h_1..h_r) : sum h_i q_i = 0}.
pub fn syzygies_deg3(gens: &[GradedForm]) -> Result<Vec<Vec<GradedForm>>> {
    let Some(first) = gens.first() else {
        return Ok(Vec::new());
    };
    let ideal = QuadricIdeal::new(first.ring(), first.g(), gens)?;
    let g = ideal.g;
    ideal
        .syzygies
        .iter()
        .map(|s| {
            (0..gens.len())
                .map(|i| {
                    let c = s[i * g..(i + 1) * g].iter().map(|&x| Elem(x as u128)).collect();
                    GradedForm::from_coeffs(&ideal.ring, g, 1, c)
                })
                .collect()
        })
        .collect()
}

/// dim (S/I)_d for d in 1..=3.
pub fn hilbert_dims(ring: &Ring, g: usize, gens: &[GradedForm], d: usize) -> Result<usize> {
    let total = binomial(g + d - 1, d);
    match d {
        1 => Ok(total),
        2 | 3 => Ok(total - graded_ideal_piece_dim(ring, g, gens, d)?),
        _ => Err(Error::Shape(format!("Hilbert dimensions are available in degrees 1..3, not {d}"))),
    }
}

fn graded_ideal_piece_dim(ring: &Ring, g: usize, gens: &[GradedForm], d: usize) -> Result<usize> {
    let ideal = QuadricIdeal::new(ring, g, gens)?;
    Ok(if d == 2 { ideal.i2.rank() } else { ideal.i3.rank() })
}

/// Degree-2 and degree-3 data of an ideal generated by quadrics over a field.
#[derive(Debug, Clone)]
pub struct QuadricIdeal {
    pub ring: Ring,
    pub g: usize,
    pub mono2: MonomialBasis,
    pub mono3: MonomialBasis,
    /// Generators as degree-2 coefficient vectors.
    pub gens: Vec<Vec<u32>>,
    pub i2: Subspace,
    pub i3: Subspace,
    /// Kernel of (h_i) -> sum h_i q_i, as vectors indexed by i * g + l.
    pub syzygies: Vec<Vec<u32>>,
    /// times[m * g + l] = index of x_l * (quadratic monomial m).
    pub times: Vec<usize>,
}

impl QuadricIdeal {
    pub fn new(ring: &Ring, g: usize, gens: &[GradedForm]) -> Result<QuadricIdeal> {
        check_quadrics(gens)?;
        if !ring.is_field() {
            return Err(Error::NotAField(ring.to_string()));
        }
        if gens.iter().any(|q| q.g != g || q.ring != *ring) {
            return Err(Error::Shape("generator does not match the ambient ring".into()));
        }
        let vecs = gens.iter().map(field_coeffs).collect::<Result<Vec<_>>>()?;
        Ok(QuadricIdeal::from_vectors(ring, g, vecs))
    }

    pub fn from_matrices(ring: &Ring, g: usize, mats: &[Matrix]) -> Result<QuadricIdeal> {
        let forms = mats.iter().map(quadric_from_matrix).collect::<Result<Vec<_>>>()?;
        QuadricIdeal::new(ring, g, &forms)
    }

    pub fn from_vectors(ring: &Ring, g: usize, gens: Vec<Vec<u32>>) -> QuadricIdeal {
        let mono2 = MonomialBasis::new(g, 2);
        let mono3 = MonomialBasis::new(g, 3);
        let mut times = vec![0usize; mono2.len() * g];
        for (m, vars) in mono2.monomials().iter().enumerate() {
            for l in 0..g {
                times[m * g + l] = mono3.index_of(&[vars[0], vars[1], l]);
            }
        }
        let i2 = Subspace::spanned_by(ring, mono2.len(), &gens);
        let mut ideal = QuadricIdeal {
            ring: ring.clone(),
            g,
            mono2,
            mono3,
            gens,
            i2,
            i3: Subspace::new(ring, 0),
            syzygies: Vec::new(),
            times,
        };
        let products = ideal.linear_multiples();
        ideal.i3 = Subspace::spanned_by(ring, ideal.mono3.len(), &products);
        // Multiplication map as rows over the cubic monomials, columns i * g + l.
        let ncols = products.len();
        let rows = (0..ideal.mono3.len()).map(|row| products.iter().map(|v| v[row]).collect::<Vec<u32>>());
        ideal.syzygies = null_space_of_rows(ring, ncols, rows);
        ideal
    }

    /// x_l * q_i for every generator i and variable l, in order i * g + l.
    fn linear_multiples(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::with_capacity(self.gens.len() * self.g);
        for q in &self.gens {
            for l in 0..self.g {
                out.push(self.times_variable(q, l));
            }
        }
        out
    }

    /// x_l * q for a quadric coefficient vector q.
    pub fn times_variable(&self, q: &[u32], l: usize) -> Vec<u32> {
        let f = self.ring.field();
        let mut w = vec![0u32; self.mono3.len()];
        for (m, &c) in q.iter().enumerate() {
            if c != 0 {
                let k = self.times[m * self.g + l];
                w[k] = f.add(w[k], c);
            }
        }
        w
    }

    pub fn r(&self) -> usize {
        self.gens.len()
    }

    pub fn hilbert(&self, d: usize) -> usize {
        match d {
            1 => self.g,
            2 => self.mono2.len() - self.i2.rank(),
            3 => self.mono3.len() - self.i3.rank(),
            _ => panic!("degree {d} is out of range"),
        }
    }

    /// Dimension check of a canonical ideal: r = C(g-2, 2) and (S/I)_d = (2d-1)(g-1).
    pub fn looks_canonical(&self) -> bool {
        let g = self.g;
        g >= 4
            && self.i2.rank() == binomial(g - 2, 2)
            && self.hilbert(2) == 3 * (g - 1)
            && self.hilbert(3) == 5 * (g - 1)
    }
}
