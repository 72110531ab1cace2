//! Dense exact linear algebra over fields and Artin local rings.

mod dense;
mod echelon;
mod sigma;

pub use dense::{null_space_of_rows, Subspace};
pub use echelon::{echelon, kernel_basis, solve, span_membership, span_membership_detailed, Echelon, Membership, TorsionRow};
pub use sigma::{unvectorize_sym, vectorize_sym, SigmaBasis};

use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{Elem, Ring, SmallExtension};

/// A column vector over a ring, stored without its ring.
pub type Column = Vec<Elem>;

/// Dense row-major matrix over a [`Ring`].
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.ring)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.ring.format_elem(self.get(i, j))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> Matrix {
        Matrix { ring: ring.clone(), rows, cols, data: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: &Ring, n: usize) -> Matrix {
        let mut m = Matrix::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn from_elems(ring: &Ring, rows: usize, cols: usize, data: Vec<Elem>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        if let Some(bad) = data.iter().find(|&&e| !ring.contains(e)) {
            return Err(Error::Schema(format!("{bad:?} is not an element of {ring}")));
        }
        Ok(Matrix { ring: ring.clone(), rows, cols, data })
    }

    /// Matrix with integer entries mapped through Z -> ring.
    pub fn from_ints(ring: &Ring, rows: &[Vec<i64>]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let data = rows
            .iter()
            .flat_map(|row| {
                assert_eq!(row.len(), c, "ragged rows");
                row.iter().map(|&v| ring.from_int(v))
            })
            .collect();
        Matrix { ring: ring.clone(), rows: r, cols: c, data }
    }

    pub fn diagonal(ring: &Ring, d: &[Elem]) -> Matrix {
        let mut m = Matrix::zeros(ring, d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }

    pub fn from_columns(ring: &Ring, rows: usize, cols: &[Column]) -> Matrix {
        let mut m = Matrix::zeros(ring, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Column {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| self.ring.is_zero(x))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| self.get(i, j) == if i == j { self.ring.one() } else { self.ring.zero() })
            })
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    fn check_same(&self, other: &Matrix) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.check_same(other).expect("matrix addition operands");
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| self.ring.add(a, b)).collect();
        Matrix { data, ..self.clone() }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.check_same(other).expect("matrix subtraction operands");
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| self.ring.sub(a, b)).collect();
        Matrix { data, ..self.clone() }
    }

    pub fn neg(&self) -> Matrix {
        let data = self.data.iter().map(|&a| self.ring.neg(a)).collect();
        Matrix { data, ..self.clone() }
    }

    pub fn scale(&self, c: Elem) -> Matrix {
        let data = self.data.iter().map(|&a| self.ring.mul(c, a)).collect();
        Matrix { data, ..self.clone() }
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let r = &self.ring;
        let mut out = Matrix::zeros(r, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if r.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !r.is_zero(b) {
                        let cur = out.get(i, j);
                        out.set(i, j, r.add(cur, r.mul(a, b)));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        self.try_mul(other).expect("matrix product operands")
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Column {
        assert_eq!(v.len(), self.cols, "vector length");
        let r = &self.ring;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(r.zero(), |acc, (&a, &b)| r.add(acc, r.mul(a, b)))
            })
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Inverse over a local ring by Gauss-Jordan with unit pivots.
    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let r = &self.ring;
        let mut a = self.clone();
        let mut inv = Matrix::identity(r, n);
        for c in 0..n {
            let piv = (c..n).find(|&i| r.is_unit(a.get(i, c))).ok_or(Error::NotAUnit)?;
            a.swap_rows(c, piv);
            inv.swap_rows(c, piv);
            let s = r.inv(a.get(c, c))?;
            a.scale_row(c, s);
            inv.scale_row(c, s);
            for i in 0..n {
                if i != c {
                    let f = a.get(i, c);
                    if !r.is_zero(f) {
                        a.axpy_row(i, r.neg(f), c);
                        inv.axpy_row(i, r.neg(f), c);
                    }
                }
            }
        }
        Ok(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.residue().inverse().is_ok()
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    pub(crate) fn scale_row(&mut self, i: usize, s: Elem) {
        for j in 0..self.cols {
            let v = self.get(i, j);
            self.set(i, j, self.ring.mul(s, v));
        }
    }

    /// row[dst] += f * row[src]
    pub(crate) fn axpy_row(&mut self, dst: usize, f: Elem, src: usize) {
        for j in 0..self.cols {
            let s = self.get(src, j);
            if !self.ring.is_zero(s) {
                let d = self.get(dst, j);
                self.set(dst, j, self.ring.add(d, self.ring.mul(f, s)));
            }
        }
    }

    /// col[dst] += f * col[src]
    pub(crate) fn axpy_col(&mut self, dst: usize, f: Elem, src: usize) {
        for i in 0..self.rows {
            let s = self.get(i, src);
            if !self.ring.is_zero(s) {
                let d = self.get(i, dst);
                self.set(i, dst, self.ring.add(d, self.ring.mul(f, s)));
            }
        }
    }

    /// Apply a coefficient map into another ring.
    pub fn map_to(&self, ring: &Ring, f: impl Fn(Elem) -> Elem) -> Matrix {
        Matrix { ring: ring.clone(), rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| f(x)).collect() }
    }

    /// Entrywise reduction to the residue field.
    pub fn residue(&self) -> Matrix {
        let k = self.ring.residue_field();
        self.map_to(&k, |x| k.from_residue(self.ring.residue(x)))
    }

    /// Entrywise reduction along a small extension.
    pub fn reduce(&self, ext: &SmallExtension) -> Result<Matrix> {
        if self.ring != ext.source {
            return Err(Error::RingMismatch);
        }
        Ok(self.map_to(&ext.target, |x| ext.reduce(x)))
    }

    /// Entrywise coefficient-wise lift along a small extension.
    pub fn section(&self, ext: &SmallExtension) -> Result<Matrix> {
        if self.ring != ext.target {
            return Err(Error::RingMismatch);
        }
        Ok(self.map_to(&ext.source, |x| ext.section(x)))
    }

    /// E * X for a matrix X over the residue field.
    pub fn e_times(x: &Matrix, ext: &SmallExtension) -> Matrix {
        x.map_to(&ext.source, |v| ext.e_times(x.ring.residue(v)))
    }

    /// The residue-field X with self = E * X, if every entry lies in E*k.
    pub fn div_e(&self, ext: &SmallExtension) -> Option<Matrix> {
        let k = ext.residue_field();
        let mut data = Vec::with_capacity(self.data.len());
        for &x in &self.data {
            data.push(k.from_residue(ext.div_e(x)?));
        }
        Some(Matrix { ring: k, rows: self.rows, cols: self.cols, data })
    }

    /// Embed a residue-field matrix into a ring with that residue field.
    pub fn lift_residue(&self, ring: &Ring) -> Matrix {
        self.map_to(ring, |x| ring.from_residue(self.ring.residue(x)))
    }

    /// Entries as residue-field indices (for the fast field kernels).
    pub fn field_entries(&self) -> Vec<u32> {
        self.data.iter().map(|&x| self.ring.residue(x)).collect()
    }

    pub fn commutator(&self, other: &Matrix) -> Matrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        let mut acc = Matrix::identity(&self.ring, self.rows);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{make_ring, RingKind};

    #[test]
    fn inverse_over_local_ring() {
        let r = make_ring(RingKind::TruncatedSeries, 5, 1, 3).unwrap();
        let t = r.uniformizer();
        let mut m = Matrix::from_ints(&r, &[vec![1, 2], vec![2, 1]]);
        m.set(0, 1, r.add(m.get(0, 1), t));
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(inv.mul(&m).is_identity());
        let mut sing = Matrix::identity(&r, 2);
        sing.set(1, 1, t);
        assert_eq!(sing.inverse().unwrap_err(), Error::NotAUnit);
    }

    #[test]
    fn transpose_and_products() {
        let r = make_ring(RingKind::PrimeField, 7, 1, 1).unwrap();
        let a = Matrix::from_ints(&r, &[vec![1, 2, 3], vec![4, 5, 6]]);
        let b = a.transpose();
        assert_eq!(b.rows(), 3);
        let c = a.mul(&b);
        assert_eq!(c, Matrix::from_ints(&r, &[vec![14, 32], vec![32, 77]]));
        assert!(c.is_symmetric());
        assert_eq!(a.mul_vec(&[r.one(), r.one(), r.one()]), vec![r.from_int(6), r.from_int(15)]);
    }
}
