//! Test oracles written against raw structure constants only.
#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeMap;

use hochschild::algebra::{Bimodule, FiniteAlgebra, Triple};
use hochschild::{Field, Scalar};

pub type Dense = Vec<Scalar>;

pub fn basis(f: Field, d: usize, i: usize) -> Dense {
    (0..d).map(|k| if k == i { f.one() } else { f.zero() }).collect()
}

pub fn mul(a: &FiniteAlgebra, x: &Dense, y: &Dense) -> Dense {
    let f = a.field();
    let t = a.table();
    let mut out = vec![f.zero(); a.dim()];
    for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
        for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            let c = xi * yj;
            for (k, tk) in t[i][j].iter().enumerate() {
                if !tk.is_zero() {
                    out[k] = &out[k] + &(&c * tk);
                }
            }
        }
    }
    out
}

fn act(mats: &[hochschild::linalg::DenseMatrix], x: &Dense, v: &Dense) -> Dense {
    let f = x[0].field();
    let mut out = vec![f.zero(); v.len()];
    for (i, xi) in x.iter().enumerate().filter(|(_, s)| !s.is_zero()) {
        let w = mats[i].apply(v);
        for (o, wi) in out.iter_mut().zip(&w) {
            *o = &*o + &(xi * wi);
        }
    }
    out
}

/// `m ⊗` upper triangular array with `a_i` on the diagonal and `b_{k,l}` above it (1-based).
#[derive(Clone)]
struct Chain {
    m: Dense,
    diag: Vec<Dense>,
    upper: BTreeMap<(usize, usize), Dense>,
}

/// Face `i` via blocks: new position `p` collects a set of old positions, and
/// every new off-diagonal entry is the product of the old entries between blocks.
fn face(t: &Triple, m: &Bimodule, c: &Chain, n: usize, i: usize) -> Chain {
    let (a, b) = (&t.a, &t.b);
    let eps = |x: &Dense| t.eps.matrix().apply(x);
    let blocks: Vec<Vec<usize>> = (1..n)
        .map(|p| match i {
            0 => vec![p + 1],
            _ if i == n => vec![p],
            _ if p < i => vec![p],
            _ if p == i => vec![i, i + 1],
            _ => vec![p + 1],
        })
        .collect();
    let mut upper = BTreeMap::new();
    for p in 1..n {
        for r in p + 1..n {
            let mut prod = b.unit().to_vec();
            for &x in &blocks[p - 1] {
                for &y in &blocks[r - 1] {
                    prod = mul(b, &prod, &c.upper[&(x, y)]);
                }
            }
            upper.insert((p, r), prod);
        }
    }
    let diag = blocks
        .iter()
        .map(|blk| match blk.as_slice() {
            [x] => c.diag[x - 1].clone(),
            [x, y] => mul(a, &mul(a, &c.diag[x - 1], &eps(&c.upper[&(*x, *y)])), &c.diag[y - 1]),
            _ => unreachable!(),
        })
        .collect();
    let new_m = if i == 0 {
        let mut prod = b.unit().to_vec();
        for l in 2..=n {
            prod = mul(b, &prod, &c.upper[&(1, l)]);
        }
        act(m.right(), &mul(a, &c.diag[0], &eps(&prod)), &c.m)
    } else if i == n {
        let mut prod = b.unit().to_vec();
        for k in 1..n {
            prod = mul(b, &prod, &c.upper[&(k, n)]);
        }
        act(m.left(), &mul(a, &c.diag[n - 1], &eps(&prod)), &c.m)
    } else {
        c.m.clone()
    };
    Chain { m: new_m, diag, upper }
}

/// Multilinear expansion into `(m, a_1..a_n, b_{1,2}, b_{1,3}, …)` index tuples.
fn expand(c: &Chain, sign: &Scalar, out: &mut BTreeMap<Vec<usize>, Scalar>) {
    let mut factors: Vec<&Dense> = vec![&c.m];
    factors.extend(c.diag.iter());
    factors.extend(c.upper.values());
    let mut partial: Vec<(Vec<usize>, Scalar)> = vec![(Vec::new(), sign.clone())];
    for fac in factors {
        let mut next = Vec::new();
        for (idx, coeff) in &partial {
            for (k, x) in fac.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                let mut idx = idx.clone();
                idx.push(k);
                next.push((idx, coeff * x));
            }
        }
        partial = next;
    }
    for (idx, coeff) in partial {
        let e = out.entry(idx).or_insert_with(|| coeff.field().zero());
        *e = &*e + &coeff;
    }
}

fn chain_count(dm: usize, da: usize, db: usize, n: usize) -> usize {
    dm * da.pow(n as u32) * db.pow((n * n.saturating_sub(1) / 2) as u32)
}

fn mixed_radix(idx: &[usize], radices: &[usize]) -> usize {
    idx.iter().zip(radices).fold(0, |acc, (x, r)| acc * r + x)
}

fn unmix(mut c: usize, radices: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for k in (0..radices.len()).rev() {
        out[k] = c % radices[k];
        c /= radices[k];
    }
    out
}

fn radices(dm: usize, da: usize, db: usize, n: usize) -> Vec<usize> {
    let mut r = vec![dm];
    r.extend(std::iter::repeat_n(da, n));
    r.extend(std::iter::repeat_n(db, n * n.saturating_sub(1) / 2));
    r
}

/// Dense matrix (rows = target chains) of the secondary boundary `∂_n`.
pub fn secondary_boundary_oracle(t: &Triple, m: &Bimodule, n: usize) -> Vec<Vec<Scalar>> {
    let f = t.field();
    let (dm, da, db) = (m.dim(), t.a.dim(), t.b.dim());
    let src_r = radices(dm, da, db, n);
    let tgt_r = radices(dm, da, db, n - 1);
    let rows = chain_count(dm, da, db, n - 1);
    let cols = chain_count(dm, da, db, n);
    let mut out = vec![vec![f.zero(); cols]; rows];
    for col in 0..cols {
        let idx = unmix(col, &src_r);
        let mut upper = BTreeMap::new();
        let mut pos = 1 + n;
        for k in 1..=n {
            for l in k + 1..=n {
                upper.insert((k, l), basis(f, db, idx[pos]));
                pos += 1;
            }
        }
        let c = Chain {
            m: basis(f, dm, idx[0]),
            diag: (1..=n).map(|k| basis(f, da, idx[k])).collect(),
            upper,
        };
        let mut acc = BTreeMap::new();
        for i in 0..=n {
            let sign = f.from_i64(if i % 2 == 0 { 1 } else { -1 });
            expand(&face(t, m, &c, n, i), &sign, &mut acc);
        }
        for (idx, x) in acc {
            out[mixed_radix(&idx, &tgt_r)][col] = x;
        }
    }
    out
}

/// Rank by plain Gauss–Jordan elimination over the scalars.
pub fn dense_rank(rows: &[Vec<Scalar>]) -> usize {
    let mut m: Vec<Vec<Scalar>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        let inv = m[rank][c].inv().expect("nonzero pivot");
        let pivot: Vec<Scalar> = m[rank].iter().map(|x| x * &inv).collect();
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let factor = m[r][c].clone();
                for k in c..ncols {
                    m[r][k] = &m[r][k] - &(&factor * &pivot[k]);
                }
            }
        }
        m[rank] = pivot;
        rank += 1;
    }
    rank
}

/// Homology dims in degrees `0..max` from oracle boundaries up to degree `max`.
pub fn homology_oracle(t: &Triple, m: &Bimodule, max: usize) -> Vec<usize> {
    let (dm, da, db) = (m.dim(), t.a.dim(), t.b.dim());
    let ranks: Vec<usize> = (1..=max).map(|n| dense_rank(&secondary_boundary_oracle(t, m, n))).collect();
    (0..max)
        .map(|n| chain_count(dm, da, db, n) - if n == 0 { 0 } else { ranks[n - 1] } - ranks[n])
        .collect()
}

pub fn secondary_dim(t: &Triple, m: &Bimodule, n: usize) -> usize {
    chain_count(m.dim(), t.a.dim(), t.b.dim(), n)
}

/// `dim M − dim span{v e_i − e_i v}`.
pub fn h0_oracle(a: &FiniteAlgebra, m: &Bimodule) -> usize {
    let f = a.field();
    let mut rows = Vec::new();
    for v in 0..m.dim() {
        for i in 0..a.dim() {
            let bv = basis(f, m.dim(), v);
            let r = m.right()[i].apply(&bv);
            let l = m.left()[i].apply(&bv);
            rows.push(r.iter().zip(&l).map(|(x, y)| x - y).collect());
        }
    }
    m.dim() - dense_rank(&rows)
}
