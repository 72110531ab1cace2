use super::{Column, Matrix};
use crate::error::{Error, Result};
use crate::ring::Ring;

/// Ordered basis of symmetric g x g matrices: the pairs (i, j), i <= j, in
/// lexicographic order. The pair (i, j) stands for the matrix with ones at
/// (i, j) and (j, i).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaBasis {
    g: usize,
    pairs: Vec<(usize, usize)>,
}

impl SigmaBasis {
    pub fn new(g: usize) -> SigmaBasis {
        let pairs = (0..g).flat_map(|i| (i..g).map(move |j| (i, j))).collect();
        SigmaBasis { g, pairs }
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Position of the pair {i, j} in the ordering.
    pub fn index(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        // Rows 0..i contribute g + (g-1) + ... + (g-i+1) pairs.
        i * self.g - i * i.saturating_sub(1) / 2 + (j - i)
    }

    /// The basis matrix for position `k`.
    pub fn element(&self, ring: &Ring, k: usize) -> Matrix {
        let (i, j) = self.pairs[k];
        let mut m = Matrix::zeros(ring, self.g, self.g);
        m.set(i, j, ring.one());
        m.set(j, i, ring.one());
        m
    }
}

/// Coordinates of a symmetric matrix in the basis: the coordinate of (i, j) is A_ij.
pub fn vectorize_sym(a: &Matrix, sigma: &SigmaBasis) -> Result<Column> {
    if a.rows() != sigma.g() || a.cols() != sigma.g() {
        return Err(Error::Shape(format!("{}x{} matrix for g = {}", a.rows(), a.cols(), sigma.g())));
    }
    if !a.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    Ok(sigma.pairs().iter().map(|&(i, j)| a.get(i, j)).collect())
}

pub fn unvectorize_sym(v: &[crate::ring::Elem], sigma: &SigmaBasis, ring: &Ring) -> Matrix {
    assert_eq!(v.len(), sigma.len(), "coordinate vector length");
    let mut m = Matrix::zeros(ring, sigma.g(), sigma.g());
    for (&x, &(i, j)) in v.iter().zip(sigma.pairs()) {
        m.set(i, j, x);
        m.set(j, i, x);
    }
    m
}
