//! Fast row reduction over a finite field on raw element indices.

use crate::ring::Ring;

/// A subspace of k^n held as echelon rows with normalized pivots.
///
/// Rows are triangular in insertion order: row j vanishes at the pivots of
/// all earlier rows, so reducing against rows in order clears every pivot.
#[derive(Clone, Debug)]
pub struct Subspace {
    ring: Ring,
    dim: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
    pivot_of_col: Vec<Option<usize>>,
    reduced: bool,
}

impl Subspace {
    /// The zero subspace of `ring^dim`; `ring` must be a field.
    pub fn new(ring: &Ring, dim: usize) -> Subspace {
        assert!(ring.is_field(), "Subspace requires a field");
        Subspace {
            ring: ring.clone(),
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
            pivot_of_col: vec![None; dim],
            reduced: true,
        }
    }

    pub fn spanned_by<'a>(ring: &Ring, dim: usize, vecs: impl IntoIterator<Item = &'a Vec<u32>>) -> Subspace {
        let mut s = Subspace::new(ring, dim);
        for v in vecs {
            s.insert(v.clone());
        }
        s
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn codim(&self) -> usize {
        self.dim - self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// Columns that are not pivots, in increasing order; they index a
    /// complement and hence coordinates on the quotient.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.dim).filter(|&c| self.pivot_of_col[c].is_none()).collect()
    }

    /// Subtract pivot multiples so that `v` vanishes on all pivot columns.
    pub fn reduce_in_place(&self, v: &mut [u32]) {
        let f = self.ring.field();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let x = v[c];
            if x != 0 {
                f.axpy(v, f.neg(x), row);
            }
        }
    }

    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let mut w = v.to_vec();
        self.reduce_in_place(&mut w);
        w
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Coordinates of the class of `v` in the quotient, on the free columns.
    pub fn quotient_coords(&self, v: &[u32]) -> Vec<u32> {
        let w = self.reduce(v);
        self.free_columns().into_iter().map(|c| w[c]).collect()
    }

    /// Insert a vector; returns true if it enlarged the subspace.
    pub fn insert(&mut self, mut v: Vec<u32>) -> bool {
        assert_eq!(v.len(), self.dim, "vector length");
        self.reduce_in_place(&mut v);
        let Some(c) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let f = self.ring.field();
        let s = f.inv(v[c]).expect("nonzero");
        f.scale(&mut v, s);
        self.pivot_of_col[c] = Some(self.rows.len());
        self.rows.push(v);
        self.pivots.push(c);
        self.reduced = false;
        true
    }

    /// Bring the basis to reduced row echelon form sorted by pivot column.
    pub fn make_reduced(&mut self) {
        if self.reduced {
            return;
        }
        let ring = self.ring.clone();
        let f = ring.field();
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.pivots[i]);
        let mut rows: Vec<Vec<u32>> = order.iter().map(|&i| std::mem::take(&mut self.rows[i])).collect();
        let pivots: Vec<usize> = order.iter().map(|&i| self.pivots[i]).collect();
        // Back substitution from the last pivot upward.
        for i in (0..rows.len()).rev() {
            let (head, tail) = rows.split_at_mut(i);
            let pr = &tail[0];
            let c = pivots[i];
            for r in head.iter_mut() {
                let x = r[c];
                if x != 0 {
                    f.axpy(r, f.neg(x), pr);
                }
            }
        }
        self.rows = rows;
        self.pivots = pivots;
        self.pivot_of_col = vec![None; self.dim];
        for (i, &c) in self.pivots.iter().enumerate() {
            self.pivot_of_col[c] = Some(i);
        }
        self.reduced = true;
    }

    /// Basis of the null space {x : r.x = 0 for all basis rows r}, one vector
    /// per free column with a 1 in that column.
    pub fn null_space(&mut self) -> Vec<Vec<u32>> {
        self.make_reduced();
        let f = self.ring.field();
        self.free_columns()
            .into_iter()
            .map(|fc| {
                let mut x = vec![0u32; self.dim];
                x[fc] = 1;
                for (row, &pc) in self.rows.iter().zip(&self.pivots) {
                    x[pc] = f.neg(row[fc]);
                }
                x
            })
            .collect()
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }
}

/// Null space of a matrix given by rows over a field.
pub fn null_space_of_rows(ring: &Ring, ncols: usize, rows: impl IntoIterator<Item = Vec<u32>>) -> Vec<Vec<u32>> {
    let mut s = Subspace::new(ring, ncols);
    for r in rows {
        if s.rank() == ncols {
            break;
        }
        s.insert(r);
    }
    s.null_space()
}
