//! Exact sparse linear algebra over a [`Field`].
//!
//! Vectors are sorted `(index, value)` lists with no stored zeros. Matrices are
//! stored column-major, since boundary matrices are assembled one basis chain
//! (column) at a time.

mod dense;
mod echelon;
mod rank;
mod sparse;

pub use dense::DenseMatrix;
pub use echelon::{
    complement_reps, image_basis, induced_quotient_map, kernel_basis, solve_in_span, subspace_leq,
    QuotientSpace, Rref, Subspace,
};
pub use rank::{rank, rank_capped, rank_mod_p};
pub use sparse::SparseMatrix;

use std::collections::BTreeMap;

use crate::scalar::{Field, Scalar};

/// Sparse coordinate vector: strictly increasing indices, nonzero values.
pub type SparseVec = Vec<(usize, Scalar)>;

/// Collects `index -> value` contributions and drops cancelled entries.
#[derive(Debug, Default, Clone)]
pub struct Accumulator {
    map: BTreeMap<usize, Scalar>,
}

impl Accumulator {
    pub fn new() -> Self {
        Accumulator { map: BTreeMap::new() }
    }

    pub fn add(&mut self, index: usize, value: &Scalar) {
        if value.is_zero() {
            return;
        }
        match self.map.get_mut(&index) {
            Some(v) => *v += value,
            None => {
                self.map.insert(index, value.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, v: &[(usize, Scalar)], coeff: &Scalar) {
        if coeff.is_zero() {
            return;
        }
        for (i, x) in v {
            self.add(*i, &(x * coeff));
        }
    }

    pub fn finish(self) -> SparseVec {
        self.map.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }
}

pub fn sparse_from_dense(dense: &[Scalar]) -> SparseVec {
    dense
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| (i, v.clone()))
        .collect()
}

pub fn sparse_to_dense(field: Field, v: &[(usize, Scalar)], len: usize) -> Vec<Scalar> {
    let mut out = vec![field.zero(); len];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// `y + coeff * x`.
pub fn axpy(y: &[(usize, Scalar)], coeff: &Scalar, x: &[(usize, Scalar)]) -> SparseVec {
    if coeff.is_zero() {
        return y.to_vec();
    }
    let mut out = Vec::with_capacity(y.len() + x.len());
    let (mut i, mut j) = (0, 0);
    while i < y.len() || j < x.len() {
        let take_y = j >= x.len() || (i < y.len() && y[i].0 < x[j].0);
        let take_x = i >= y.len() || (j < x.len() && x[j].0 < y[i].0);
        if take_y {
            out.push(y[i].clone());
            i += 1;
        } else if take_x {
            out.push((x[j].0, coeff * &x[j].1));
            j += 1;
        } else {
            let v = &y[i].1 + &(coeff * &x[j].1);
            if !v.is_zero() {
                out.push((y[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale(v: &[(usize, Scalar)], coeff: &Scalar) -> SparseVec {
    if coeff.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, x * coeff)).collect()
}

pub fn unit_vector(field: Field, index: usize) -> SparseVec {
    vec![(index, field.one())]
}

pub fn entry(v: &[(usize, Scalar)], index: usize) -> Option<&Scalar> {
    v.binary_search_by_key(&index, |(i, _)| *i).ok().map(|k| &v[k].1)
}

/// Tensor product of sparse vectors under mixed-radix indexing, most
/// significant factor first.
pub fn tensor_expand(field: Field, factors: &[&[(usize, Scalar)]], radices: &[usize]) -> SparseVec {
    debug_assert_eq!(factors.len(), radices.len());
    let mut terms: Vec<(usize, Scalar)> = vec![(0, field.one())];
    for (factor, &radix) in factors.iter().zip(radices) {
        if factor.is_empty() {
            return Vec::new();
        }
        let mut next = Vec::with_capacity(terms.len() * factor.len());
        for (idx, c) in &terms {
            for (f, x) in factor.iter() {
                next.push((idx * radix + f, c * x));
            }
        }
        terms = next;
    }
    terms.sort_by_key(|(i, _)| *i);
    terms
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axpy_cancels() {
        let f = Field::Rational;
        let y = vec![(0, f.one()), (2, f.from_i64(3))];
        let x = vec![(1, f.one()), (2, f.from_i64(1))];
        let z = axpy(&y, &f.from_i64(-3), &x);
        assert_eq!(z, vec![(0, f.one()), (1, f.from_i64(-3))]);
    }

    #[test]
    fn tensor_indices_are_mixed_radix() {
        let f = Field::Rational;
        let a = vec![(1, f.from_i64(2))];
        let b = vec![(0, f.one()), (2, f.from_i64(5))];
        let t = tensor_expand(f, &[&a, &b], &[2, 3]);
        assert_eq!(t, vec![(3, f.from_i64(2)), (5, f.from_i64(10))]);
    }
}
