//! Rank without building a reduced basis.
//!
//! Over 𝔽ₚ the elimination runs on machine residues. Over ℚ every vector is
//! cleared of denominators and eliminated fraction-free, dividing out the
//! content after each step; the run starts on `i64` and restarts on `BigInt`
//! if an intermediate overflows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Result;
use crate::linalg::SparseMatrix;
use crate::scalar::{inv_mod, mul_mod, Field, Scalar};

pub fn rank(m: &SparseMatrix) -> Result<usize> {
    rank_capped(m, None)
}

/// Rank, stopping as soon as it reaches `cap` (the result is then `cap`).
pub fn rank_capped(m: &SparseMatrix, cap: Option<usize>) -> Result<usize> {
    m.check_field()?;
    let limit = cap.unwrap_or(usize::MAX).min(m.rows()).min(m.cols());
    if limit == 0 || m.is_zero() {
        return Ok(0);
    }
    let (ambient, vectors) = oriented(m);
    Ok(match m.field() {
        Field::Prime(p) => rank_fp(p, ambient, &vectors, limit),
        Field::Rational => {
            let ints: Vec<Vec<(usize, BigInt)>> = vectors.iter().map(|v| primitive_integer(v)).collect();
            let small: Option<Vec<Vec<(usize, i64)>>> = ints
                .iter()
                .map(|v| v.iter().map(|(i, x)| x.to_i64().map(|x| (*i, x))).collect())
                .collect();
            small
                .and_then(|s| rank_int::<i64>(ambient, s, limit))
                .unwrap_or_else(|| rank_int::<BigInt>(ambient, ints, limit).expect("bigint never overflows"))
        }
    })
}

/// Rank of the reduction of a rational matrix modulo `p`.
pub fn rank_mod_p(m: &SparseMatrix, p: u64) -> Result<usize> {
    rank(&m.reduce_mod(p)?)
}

/// Chooses the orientation with fewer vectors to insert, sparsest first.
fn oriented(m: &SparseMatrix) -> (usize, Vec<Vec<(usize, Scalar)>>) {
    let (ambient, mut vectors) = if m.cols() > m.rows() {
        (m.cols(), m.row_vectors())
    } else {
        (m.rows(), m.columns().to_vec())
    };
    vectors.retain(|v| !v.is_empty());
    vectors.sort_by_key(|v| (v.len(), v[0].0));
    (ambient, vectors)
}

fn rank_fp(p: u64, ambient: usize, vectors: &[Vec<(usize, Scalar)>], limit: usize) -> usize {
    let residue = |s: &Scalar| match s {
        Scalar::Fp(r) => r.value,
        Scalar::Q(_) => unreachable!("field checked"),
    };
    // pivot column -> normalized row with leading 1
    let mut pivot_of: Vec<Option<u32>> = vec![None; ambient];
    let mut basis: Vec<Vec<(usize, u64)>> = Vec::new();
    let mut dense = vec![0u64; ambient];
    let mut touched: Vec<usize> = Vec::new();
    for v in vectors {
        let mut heap = std::collections::BinaryHeap::new();
        for (i, x) in v {
            dense[*i] = residue(x);
            touched.push(*i);
            heap.push(std::cmp::Reverse(*i));
        }
        let mut lead = None;
        while let Some(std::cmp::Reverse(i)) = heap.pop() {
            while heap.peek() == Some(&std::cmp::Reverse(i)) {
                heap.pop();
            }
            let c = dense[i];
            if c == 0 {
                continue;
            }
            match pivot_of[i] {
                Some(b) => {
                    let factor = p - c;
                    for (j, y) in &basis[b as usize] {
                        let cur = dense[*j];
                        if cur == 0 {
                            touched.push(*j);
                            heap.push(std::cmp::Reverse(*j));
                        }
                        dense[*j] = (cur + mul_mod(factor, *y, p)) % p;
                    }
                }
                None => {
                    lead = Some(i);
                    break;
                }
            }
        }
        if let Some(i) = lead {
            let inv = inv_mod(dense[i], p);
            let mut row: Vec<(usize, u64)> = touched
                .iter()
                .copied()
                .filter(|&j| j >= i && dense[j] != 0)
                .map(|j| (j, mul_mod(dense[j], inv, p)))
                .collect();
            row.sort_unstable_by_key(|(j, _)| *j);
            row.dedup_by_key(|(j, _)| *j);
            pivot_of[i] = Some(basis.len() as u32);
            basis.push(row);
        }
        for j in touched.drain(..) {
            dense[j] = 0;
        }
        if basis.len() >= limit {
            break;
        }
    }
    basis.len()
}

/// Integer arithmetic that may report overflow.
trait ElimInt: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn combine(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self>;
    fn gcd(a: &Self, b: &Self) -> Self;
    fn div_exact(&self, d: &Self) -> Self;
    fn is_unit(&self) -> bool;
    fn normalize_sign(&self) -> Self;
}

impl ElimInt for i64 {
    fn zero() -> i64 {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    /// `a*x - b*y`
    fn combine(a: &i64, x: &i64, b: &i64, y: &i64) -> Option<i64> {
        let v = (*a as i128) * (*x as i128) - (*b as i128) * (*y as i128);
        i64::try_from(v).ok().filter(|v| *v != i64::MIN)
    }
    fn gcd(a: &i64, b: &i64) -> i64 {
        Integer::gcd(a, b)
    }
    fn div_exact(&self, d: &i64) -> i64 {
        self / d
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn normalize_sign(&self) -> i64 {
        self.abs()
    }
}

impl ElimInt for BigInt {
    fn zero() -> BigInt {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn combine(a: &BigInt, x: &BigInt, b: &BigInt, y: &BigInt) -> Option<BigInt> {
        Some(a * x - b * y)
    }
    fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
        Integer::gcd(a, b)
    }
    fn div_exact(&self, d: &BigInt) -> BigInt {
        self / d
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn normalize_sign(&self) -> BigInt {
        self.abs()
    }
}

/// Fraction-free echelon rank; `None` on overflow.
fn rank_int<T: ElimInt>(ambient: usize, vectors: Vec<Vec<(usize, T)>>, limit: usize) -> Option<usize> {
    let mut pivot_of: Vec<Option<u32>> = vec![None; ambient];
    let mut basis: Vec<Vec<(usize, T)>> = Vec::new();
    for mut v in vectors {
        // only the leading entry has to avoid existing pivots
        while let Some((i, c)) = v.first().cloned() {
            let Some(b) = pivot_of[i] else { break };
            let row = &basis[b as usize];
            let lead = &row[0].1;
            let g = T::gcd(lead, &c);
            let (s, t) = (lead.div_exact(&g), c.div_exact(&g));
            v = merge(&v, &s, row, &t)?;
            primitive_in_place(&mut v);
        }
        if let Some((i, _)) = v.first() {
            pivot_of[*i] = Some(basis.len() as u32);
            basis.push(v);
            if basis.len() >= limit {
                break;
            }
        }
    }
    Some(basis.len())
}

/// `s*v - t*row` on sorted sparse vectors.
fn merge<T: ElimInt>(v: &[(usize, T)], s: &T, row: &[(usize, T)], t: &T) -> Option<Vec<(usize, T)>> {
    let mut out = Vec::with_capacity(v.len() + row.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < row.len() {
        let take_v = j >= row.len() || (i < v.len() && v[i].0 < row[j].0);
        let take_r = i >= v.len() || (j < row.len() && row[j].0 < v[i].0);
        if take_v {
            let x = T::combine(s, &v[i].1, t, &T::zero())?;
            out.push((v[i].0, x));
            i += 1;
        } else if take_r {
            let x = T::combine(s, &T::zero(), t, &row[j].1)?;
            out.push((row[j].0, x));
            j += 1;
        } else {
            let x = T::combine(s, &v[i].1, t, &row[j].1)?;
            if !x.is_zero() {
                out.push((v[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

fn primitive_in_place<T: ElimInt>(v: &mut [(usize, T)]) {
    let Some(first) = v.first() else { return };
    let mut g = first.1.normalize_sign();
    for (_, x) in v.iter().skip(1) {
        if g.is_unit() {
            return;
        }
        g = T::gcd(&g, x);
    }
    if !g.is_unit() {
        for (_, x) in v.iter_mut() {
            *x = x.div_exact(&g);
        }
    }
}

/// Clears denominators and divides by the content.
fn primitive_integer(v: &[(usize, Scalar)]) -> Vec<(usize, BigInt)> {
    let mut lcm = BigInt::one();
    for (_, x) in v {
        let (_, d) = x.as_ratio();
        lcm = lcm.lcm(&d);
    }
    let mut out: Vec<(usize, BigInt)> = v
        .iter()
        .map(|(i, x)| {
            let (n, d) = x.as_ratio();
            (*i, n * (&lcm / d))
        })
        .collect();
    primitive_in_place(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Scalar {
        Field::Rational.from_i64(n)
    }

    fn mat(field: Field, rows: usize, cols: usize, dense: &[i64]) -> SparseMatrix {
        let t = dense.iter().enumerate().map(|(k, &v)| (k / cols, k % cols, field.from_i64(v)));
        SparseMatrix::from_triplets(field, rows, cols, t).unwrap()
    }

    #[test]
    fn small_ranks() {
        let f = Field::Rational;
        assert_eq!(rank(&mat(f, 2, 2, &[1, 2, 2, 4])).unwrap(), 1);
        assert_eq!(rank(&mat(f, 3, 3, &[1, 2, 3, 4, 5, 6, 7, 8, 9])).unwrap(), 2);
        assert_eq!(rank(&mat(f, 2, 3, &[1, 0, 1, 0, 1, 1])).unwrap(), 2);
        assert_eq!(rank(&SparseMatrix::zero(f, 3, 4)).unwrap(), 0);
    }

    #[test]
    fn rank_drops_mod_p() {
        let m = mat(Field::Rational, 2, 2, &[1, 1, 1, 6]);
        assert_eq!(rank(&m).unwrap(), 2);
        assert_eq!(rank_mod_p(&m, 5).unwrap(), 1);
        assert_eq!(rank_mod_p(&m, 7).unwrap(), 2);
    }

    #[test]
    fn fractions_and_overflow_restart() {
        let f = Field::Rational;
        let big = i64::MAX / 3;
        let m = SparseMatrix::from_triplets(
            f,
            2,
            2,
            [(0, 0, q(big)), (0, 1, q(big - 1)), (1, 0, q(big - 2)), (1, 1, q(big - 3))],
        )
        .unwrap();
        assert_eq!(rank(&m).unwrap(), 2);
        let half = f.parse("1/2").unwrap();
        let m = SparseMatrix::from_triplets(f, 2, 2, [(0, 0, half.clone()), (0, 1, q(1)), (1, 0, q(1)), (1, 1, q(2))]).unwrap();
        assert_eq!(rank(&m).unwrap(), 1);
    }

    #[test]
    fn cap_stops_early() {
        assert_eq!(rank_capped(&SparseMatrix::identity(Field::Rational, 5), Some(3)).unwrap(), 3);
    }
}
