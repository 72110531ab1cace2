//! Finite matrix groups over a field, closed from generators.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::ring::{Elem, Ring};

/// Default closure bound for first-cohomology workloads.
pub const DEFAULT_BOUND_H1: usize = 2000;
/// Default closure bound for second-cohomology workloads.
pub const DEFAULT_BOUND_H2: usize = 200;

#[derive(Debug, Clone)]
pub struct FiniteGroup {
    ring: Ring,
    dim: usize,
    elements: Vec<Matrix>,
    index: HashMap<Vec<Elem>, usize>,
    table: Vec<u32>,
    inverse: Vec<usize>,
    generators: Vec<Matrix>,
    generator_index: Vec<usize>,
    /// For each non-identity element e: (generator position s, element h) with e = gen_s * h.
    parent: Vec<Option<(usize, usize)>>,
}

impl FiniteGroup {
    /// Breadth-first closure: element 0 is the identity and new elements are
    /// numbered in discovery order, expanding each element by the
    /// generators in the order given.
    pub fn close(generators: &[Matrix], bound: usize) -> Result<FiniteGroup> {
        let Some(first) = generators.first() else {
            return Err(Error::Schema("a group needs at least one generator (use the identity)".into()));
        };
        let ring = first.ring().clone();
        if !ring.is_field() {
            return Err(Error::NotAField(ring.to_string()));
        }
        let dim = first.rows();
        for (i, s) in generators.iter().enumerate() {
            if s.ring() != &ring || s.rows() != dim || s.cols() != dim {
                return Err(Error::Shape(format!("generator {i} has a different shape or ring")));
            }
            if !s.is_invertible() {
                return Err(Error::SingularGenerator(i));
            }
        }
        let id = Matrix::identity(&ring, dim);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::new();
        index.insert(id.data().to_vec(), 0);
        let mut parent = vec![None];
        let mut head = 0;
        while head < elements.len() {
            for (s, gen) in generators.iter().enumerate() {
                let x = gen.mul(&elements[head]);
                if !index.contains_key(x.data()) {
                    if elements.len() == bound {
                        return Err(Error::BoundExceeded(bound));
                    }
                    index.insert(x.data().to_vec(), elements.len());
                    elements.push(x);
                    parent.push(Some((s, head)));
                }
            }
            head += 1;
        }
        let n = elements.len();
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let prod = elements[a].mul(&elements[b]);
                table[a * n + b] = index[prod.data()] as u32;
            }
        }
        let mut inverse = vec![0usize; n];
        for a in 0..n {
            inverse[a] = (0..n).find(|&b| table[a * n + b] == 0).expect("finite group");
        }
        let generator_index = generators.iter().map(|s| index[s.data()]).collect();
        Ok(FiniteGroup {
            ring,
            dim,
            elements,
            index,
            table,
            inverse,
            generators: generators.to_vec(),
            generator_index,
            parent,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Size of the matrices.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, i: usize) -> &Matrix {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn index_of(&self, m: &Matrix) -> Option<usize> {
        self.index.get(m.data()).copied()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    /// Element index of each generator.
    pub fn generator_indices(&self) -> &[usize] {
        &self.generator_index
    }

    /// (generator position, element) with e = gen * element, for e != identity.
    pub fn parent(&self, e: usize) -> Option<(usize, usize)> {
        self.parent[e]
    }

    /// Generator positions s_1..s_k with e = gen_{s_1} ... gen_{s_k}.
    pub fn word(&self, mut e: usize) -> Vec<usize> {
        let mut w = Vec::new();
        while let Some((s, h)) = self.parent[e] {
            w.push(s);
            e = h;
        }
        w
    }

    pub fn product(&self, word: &[usize]) -> usize {
        word.iter().fold(0, |acc, &x| self.mul(acc, x))
    }

    pub fn is_abelian(&self) -> bool {
        let gens = &self.generator_index;
        gens.iter().all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Subgroup generated by the given elements, as sorted element indices.
    pub fn subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut out = vec![0];
        let mut head = 0;
        while head < out.len() {
            for &s in gens {
                let x = self.mul(s, out[head]);
                if !seen[x] {
                    seen[x] = true;
                    out.push(x);
                }
            }
            head += 1;
        }
        out.sort_unstable();
        out
    }
}

pub fn close(generators: &[Matrix], bound: usize) -> Result<FiniteGroup> {
    FiniteGroup::close(generators, bound)
}

/// Least n >= 1 with g^n = 1.
pub fn element_order(group: &FiniteGroup, idx: usize) -> usize {
    let mut x = idx;
    let mut n = 1;
    while x != 0 {
        x = group.mul(x, idx);
        n += 1;
    }
    n
}

/// Whether the products of two words of element indices agree.
pub fn verify_relation(group: &FiniteGroup, word1: &[usize], word2: &[usize]) -> bool {
    group.product(word1) == group.product(word2)
}

/// Order of GL_n over a field with q elements.
pub fn gl_order(n: u32, q: u128) -> u128 {
    let qn = q.pow(n);
    (0..n).map(|i| qn - q.pow(i)).product()
}
