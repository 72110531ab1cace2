use super::dense::Subspace;
use super::{Column, Matrix};
use crate::error::{Error, Result};
use crate::ring::{Elem, Ring};

/// A row left without a unit pivot by [`echelon`], with the valuation of its
/// smallest entry (`None` if the row vanished).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionRow {
    pub row: usize,
    pub valuation: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Echelon {
    pub matrix: Matrix,
    /// Pivot column of each of the first `rank` rows.
    pub pivots: Vec<usize>,
    /// Number of unit pivots, which is the rank of the residue-field reduction.
    pub rank: usize,
    /// Rows below the pivots whose entries all lie in the maximal ideal.
    pub torsion: Vec<TorsionRow>,
}

/// Reduced row echelon form using unit pivots only: leftmost column first,
/// topmost unit entry within it. Pivots are scaled to 1 and cleared above
/// and below.
pub fn echelon(m: &Matrix) -> Echelon {
    let r = m.ring().clone();
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut cur = 0;
    for c in 0..a.cols() {
        if cur == a.rows() {
            break;
        }
        let Some(p) = (cur..a.rows()).find(|&i| r.is_unit(a.get(i, c))) else {
            continue;
        };
        a.swap_rows(cur, p);
        let s = r.inv(a.get(cur, c)).expect("unit pivot");
        a.scale_row(cur, s);
        for i in 0..a.rows() {
            if i != cur {
                let f = a.get(i, c);
                if !r.is_zero(f) {
                    a.axpy_row(i, r.neg(f), cur);
                }
            }
        }
        pivots.push(c);
        cur += 1;
    }
    let rank = pivots.len();
    let torsion = if r.is_field() {
        Vec::new()
    } else {
        (rank..a.rows())
            .map(|i| TorsionRow {
                row: i,
                valuation: a.row(i).iter().filter_map(|&x| r.valuation(x)).min(),
            })
            .collect()
    };
    Echelon { matrix: a, pivots, rank, torsion }
}

/// Basis of the right null space over a field.
pub fn kernel_basis(m: &Matrix) -> Result<Vec<Column>> {
    let r = m.ring();
    if !r.is_field() {
        return Err(Error::NotAField(r.to_string()));
    }
    let e = echelon(m);
    let free: Vec<usize> = (0..m.cols()).filter(|c| !e.pivots.contains(c)).collect();
    Ok(free
        .into_iter()
        .map(|fc| {
            let mut x = vec![r.zero(); m.cols()];
            x[fc] = r.one();
            for (i, &pc) in e.pivots.iter().enumerate() {
                x[pc] = r.neg(e.matrix.get(i, fc));
            }
            x
        })
        .collect())
}

/// Some x with Mx = b.
///
/// Over a field this is the pivot solution of the reduced echelon form with
/// free variables set to zero. Over k[t]/(t^n) or Z/p^n the matrix is brought
/// to diagonal form U M V = diag(pi^{v_i} u_i) by pivoting on entries of least
/// valuation, which decides solvability exactly even when the residue
/// reduction is rank deficient.
pub fn solve(m: &Matrix, b: &[Elem]) -> Result<Column> {
    if b.len() != m.rows() {
        return Err(Error::Shape(format!("rhs length {} for {} rows", b.len(), m.rows())));
    }
    let r = m.ring();
    if r.is_field() {
        solve_field(m, b)
    } else {
        solve_local(m, b)
    }
}

fn solve_field(m: &Matrix, b: &[Elem]) -> Result<Column> {
    let r = m.ring();
    let mut aug = Matrix::zeros(r, m.rows(), m.cols() + 1);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            aug.set(i, j, m.get(i, j));
        }
        aug.set(i, m.cols(), b[i]);
    }
    let e = echelon(&aug);
    if e.pivots.last() == Some(&m.cols()) {
        return Err(Error::NoSolution);
    }
    let mut x = vec![r.zero(); m.cols()];
    for (i, &pc) in e.pivots.iter().enumerate() {
        x[pc] = e.matrix.get(i, m.cols());
    }
    Ok(x)
}

fn solve_local(m: &Matrix, b: &[Elem]) -> Result<Column> {
    let r = m.ring().clone();
    let mut a = m.clone();
    let mut rhs = b.to_vec();
    let mut v = Matrix::identity(&r, m.cols());
    let steps = m.rows().min(m.cols());
    let mut diag = Vec::new();
    for k in 0..steps {
        // Least valuation in the trailing block; ties go leftmost, then topmost.
        let mut best: Option<(u32, usize, usize)> = None;
        for j in k..a.cols() {
            for i in k..a.rows() {
                if let Some(val) = r.valuation(a.get(i, j)) {
                    if best.map_or(true, |(bv, _, _)| val < bv) {
                        best = Some((val, i, j));
                    }
                }
            }
        }
        let Some((val, pi, pj)) = best else { break };
        a.swap_rows(k, pi);
        rhs.swap(k, pi);
        a.swap_cols(k, pj);
        v.swap_cols(k, pj);
        let unit = r.div_pi(a.get(k, k), val);
        let unit_inv = r.inv(unit).expect("pivot unit part");
        for i in k + 1..a.rows() {
            let x = a.get(i, k);
            if !r.is_zero(x) {
                let f = r.mul(r.div_pi(x, val), unit_inv);
                a.axpy_row(i, r.neg(f), k);
                rhs[i] = r.sub(rhs[i], r.mul(f, rhs[k]));
            }
        }
        for j in k + 1..a.cols() {
            let x = a.get(k, j);
            if !r.is_zero(x) {
                let f = r.mul(r.div_pi(x, val), unit_inv);
                a.axpy_col(j, r.neg(f), k);
                v.axpy_col(j, r.neg(f), k);
            }
        }
        diag.push((val, unit_inv));
    }
    let mut y = vec![r.zero(); m.cols()];
    for (k, &(val, unit_inv)) in diag.iter().enumerate() {
        match r.valuation(rhs[k]) {
            None => {}
            Some(w) if w >= val => y[k] = r.mul(r.div_pi(rhs[k], val), unit_inv),
            Some(_) => return Err(Error::NoSolution),
        }
    }
    if rhs[diag.len()..].iter().any(|&x| !r.is_zero(x)) {
        return Err(Error::NoSolution);
    }
    let x = v.mul_vec(&y);
    debug_assert_eq!(m.mul_vec(&x), b);
    Ok(x)
}

/// Coefficients c with sum_j c_j cols[j] = v.
///
/// Over a local ring the columns must be independent modulo the maximal
/// ideal; the coefficients are then unique and are found one filtration
/// level at a time: solve the leading residual over the residue field, lift
/// coefficient-wise, and repeat on the new residual.
pub fn span_membership(ring: &Ring, cols: &[Column], v: &[Elem]) -> Result<Column> {
    match span_membership_detailed(ring, cols, v)? {
        Membership::Member(x) => Ok(x),
        Membership::NotMember { .. } => Err(Error::NotInSpan),
    }
}

/// Outcome of a span membership test with a certificate on failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Member(Column),
    /// The leading residual at filtration `level` (coefficient of pi^level,
    /// over the residue field) is outside the residue span of the columns;
    /// `residual` is that vector reduced modulo the span, hence nonzero.
    NotMember { level: u32, residual: Vec<u32> },
}

pub fn span_membership_detailed(ring: &Ring, cols: &[Column], v: &[Elem]) -> Result<Membership> {
    let n = v.len();
    if cols.iter().any(|c| c.len() != n) {
        return Err(Error::Shape("column lengths differ".into()));
    }
    let m = Matrix::from_columns(ring, n, cols);
    let not_member = |level: u32, lead: Vec<u32>| {
        let k = ring.residue_field();
        let residue_cols: Vec<Vec<u32>> = cols.iter().map(|c| c.iter().map(|&e| ring.residue(e)).collect()).collect();
        let span = Subspace::spanned_by(&k, n, &residue_cols);
        Membership::NotMember { level, residual: span.reduce(&lead) }
    };
    if ring.is_field() {
        return Ok(match solve_field(&m, v) {
            Ok(x) => Membership::Member(x),
            Err(_) => not_member(0, v.iter().map(|&e| ring.residue(e)).collect()),
        });
    }
    let res = ResidueSolver::new(&m)?;
    let mut x = vec![ring.zero(); cols.len()];
    let mut level = 0;
    loop {
        let resid: Vec<Elem> = m.mul_vec(&x).iter().zip(v).map(|(&a, &b)| ring.sub(b, a)).collect();
        let Some(val) = resid.iter().filter_map(|&e| ring.valuation(e)).min() else {
            return Ok(Membership::Member(x));
        };
        debug_assert!(val >= level);
        level = val;
        let lead: Vec<u32> = resid.iter().map(|&e| ring.residue(ring.div_pi(e, level))).collect();
        let Some(y) = res.solve(&lead) else {
            return Ok(not_member(level, lead));
        };
        let pk = ring.pi_pow(level);
        for (xi, yi) in x.iter_mut().zip(y) {
            *xi = ring.add(*xi, ring.mul(pk, ring.from_residue(yi)));
        }
    }
}

/// Solves C y = b over the residue field for a matrix C of full column rank.
struct ResidueSolver {
    ring: Ring,
    residue: Vec<Vec<u32>>,
    pivot_rows: Vec<usize>,
    inverse: Matrix,
}

impl ResidueSolver {
    fn new(m: &Matrix) -> Result<ResidueSolver> {
        let k = m.ring().residue_field();
        let residue: Vec<Vec<u32>> = (0..m.rows()).map(|i| m.row(i).iter().map(|&x| m.ring().residue(x)).collect()).collect();
        // Independent rows of the residue matrix, found greedily top to bottom.
        let mut span = Subspace::new(&k, m.cols());
        let mut pivot_rows = Vec::new();
        for (i, row) in residue.iter().enumerate() {
            if span.insert(row.clone()) {
                pivot_rows.push(i);
            }
        }
        if pivot_rows.len() < m.cols() {
            return Err(Error::DependentColumnsOverResidueField);
        }
        let mut sq = Matrix::zeros(&k, m.cols(), m.cols());
        for (a, &i) in pivot_rows.iter().enumerate() {
            for j in 0..m.cols() {
                sq.set(a, j, k.from_residue(residue[i][j]));
            }
        }
        let inverse = sq.inverse()?;
        Ok(ResidueSolver { ring: k, residue, pivot_rows, inverse })
    }

    fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        let f = self.ring.field();
        let bp: Vec<Elem> = self.pivot_rows.iter().map(|&i| self.ring.from_residue(b[i])).collect();
        let y: Vec<u32> = self.inverse.mul_vec(&bp).into_iter().map(|e| self.ring.residue(e)).collect();
        for (row, &bi) in self.residue.iter().zip(b) {
            let lhs = row.iter().zip(&y).fold(0, |acc, (&a, &c)| f.add(acc, f.mul(a, c)));
            if lhs != bi {
                return None;
            }
        }
        Some(y)
    }
}
