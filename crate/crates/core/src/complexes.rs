//! Classical and secondary Hochschild chain complexes.

use std::sync::OnceLock;

use serde::Serialize;

use crate::algebra::{Bimodule, FiniteAlgebra, Triple};
use crate::error::{Error, Result};
use crate::linalg::{
    complement_reps, image_basis, kernel_basis, rank, rank_capped, tensor_expand, Accumulator, SparseMatrix, SparseVec,
    Subspace,
};
use crate::parallel::map_range;
use crate::scalar::{Field, Scalar};

pub const DEFAULT_MAX_DEGREE: usize = 4;
pub const DEFAULT_GUARD_BYTES: u128 = 1 << 30;

/// A basis chain `(μ; α_1..α_n; β_{i,j})` with β-slots in lexicographic `(i, j)` order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisChain {
    pub m: usize,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

/// Mixed-radix indexing of degree-`n` basis chains: `μ` most significant, then
/// `α_1..α_n`, then the β-slots.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChainIndexScheme {
    pub degree: usize,
    pub dim_m: usize,
    pub dim_a: usize,
    pub dim_b: usize,
}

impl ChainIndexScheme {
    pub fn new(degree: usize, dim_m: usize, dim_a: usize, dim_b: usize) -> Self {
        ChainIndexScheme { degree, dim_m, dim_a, dim_b }
    }

    pub fn b_slots(&self) -> usize {
        pairs(self.degree)
    }

    /// Number of basis chains, or `None` if it does not fit in `u128`.
    pub fn count_u128(&self) -> Option<u128> {
        let mut total = self.dim_m as u128;
        for _ in 0..self.degree {
            total = total.checked_mul(self.dim_a as u128)?;
        }
        for _ in 0..self.b_slots() {
            total = total.checked_mul(self.dim_b as u128)?;
        }
        Some(total)
    }

    pub fn count(&self) -> usize {
        self.count_u128().and_then(|c| usize::try_from(c).ok()).expect("chain count fits in usize")
    }

    /// Position of `β_{i,j}` (1-based, `i < j`) among the β-slots.
    pub fn slot(&self, i: usize, j: usize) -> usize {
        slot(self.degree, i, j)
    }

    pub fn radices(&self) -> Vec<usize> {
        let mut r = Vec::with_capacity(1 + self.degree + self.b_slots());
        r.push(self.dim_m);
        r.extend(std::iter::repeat_n(self.dim_a, self.degree));
        r.extend(std::iter::repeat_n(self.dim_b, self.b_slots()));
        r
    }

    pub fn encode(&self, chain: &BasisChain) -> usize {
        debug_assert_eq!(chain.a.len(), self.degree);
        debug_assert_eq!(chain.b.len(), self.b_slots());
        let mut idx = chain.m;
        for &x in &chain.a {
            idx = idx * self.dim_a + x;
        }
        for &x in &chain.b {
            idx = idx * self.dim_b + x;
        }
        idx
    }

    pub fn decode(&self, mut idx: usize) -> BasisChain {
        let mut b = vec![0; self.b_slots()];
        for slot in b.iter_mut().rev() {
            *slot = idx % self.dim_b;
            idx /= self.dim_b;
        }
        let mut a = vec![0; self.degree];
        for slot in a.iter_mut().rev() {
            *slot = idx % self.dim_a;
            idx /= self.dim_a;
        }
        BasisChain { m: idx, a, b }
    }
}

fn pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// 1-based `(i, j)` with `i < j ≤ n` to lexicographic position.
fn slot(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(1 <= i && i < j && j <= n);
    (i - 1) * n - (i - 1) * i / 2 + (j - i - 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ComplexKind {
    Classical,
    Secondary,
}

impl std::fmt::Display for ComplexKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ComplexKind::Classical => "classical",
            ComplexKind::Secondary => "secondary",
        })
    }
}

impl std::str::FromStr for ComplexKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(ComplexKind::Classical),
            "secondary" => Ok(ComplexKind::Secondary),
            other => Err(Error::Parse(format!("unknown complex kind {other:?}"))),
        }
    }
}

/// Matrix of the classical Hochschild boundary `d_n`.
pub fn classical_boundary(a: &FiniteAlgebra, m: &Bimodule, n: usize) -> Result<SparseMatrix> {
    if n == 0 {
        return Err(Error::DegreeZero);
    }
    check_module(a, m)?;
    let f = a.field();
    let src = ChainIndexScheme::new(n, m.dim(), a.dim(), 1);
    let tgt = ChainIndexScheme::new(n - 1, m.dim(), a.dim(), 1);
    // β-slots have radix 1 and do not move the index
    let radices = tgt.radices()[..n].to_vec();
    let columns = map_range(src.count(), |col| {
        let c = src.decode(col);
        let unit = |i: usize| vec![(i, f.one())];
        let mut acc = Accumulator::new();
        // m a_1 ⊗ a_2 ⊗ ... ⊗ a_n
        let first = m.right_basis(c.m, c.a[0]).clone();
        let mut factors: Vec<SparseVec> = vec![first];
        factors.extend(c.a[1..].iter().map(|&x| unit(x)));
        add_tensor(&mut acc, f, &factors, &radices, &f.one());
        for i in 1..n {
            let mut factors: Vec<SparseVec> = vec![unit(c.m)];
            factors.extend(c.a[..i - 1].iter().map(|&x| unit(x)));
            factors.push(a.mul_basis(c.a[i - 1], c.a[i]).clone());
            factors.extend(c.a[i + 1..].iter().map(|&x| unit(x)));
            add_tensor(&mut acc, f, &factors, &radices, &sign(f, i));
        }
        // a_n m ⊗ a_1 ⊗ ... ⊗ a_{n-1}
        let mut factors: Vec<SparseVec> = vec![m.left_basis(c.a[n - 1], c.m).clone()];
        factors.extend(c.a[..n - 1].iter().map(|&x| unit(x)));
        add_tensor(&mut acc, f, &factors, &radices, &sign(f, n));
        acc.finish()
    });
    Ok(SparseMatrix::from_columns(f, tgt.count(), columns))
}

/// Matrix of the secondary boundary `∂_n^ε`.
pub fn secondary_boundary(t: &Triple, m: &Bimodule, n: usize) -> Result<SparseMatrix> {
    if n == 0 {
        return Err(Error::DegreeZero);
    }
    check_module(&t.a, m)?;
    let (a, b, f) = (&t.a, &t.b, t.field());
    let src = ChainIndexScheme::new(n, m.dim(), a.dim(), b.dim());
    let tgt = ChainIndexScheme::new(n - 1, m.dim(), a.dim(), b.dim());
    let radices = tgt.radices();
    let columns = map_range(src.count(), |col| {
        let c = src.decode(col);
        let unit = |i: usize| vec![(i, f.one())];
        let beta = |i: usize, j: usize| c.b[slot(n, i, j)];
        let b_product = |idx: &mut dyn Iterator<Item = usize>| -> SparseVec {
            let mut acc = b.unit_sparse();
            for k in idx {
                acc = b.mul(&acc, &unit(k));
            }
            acc
        };
        let mut acc = Accumulator::new();

        // face 0: m a_1 ε(b_{1,2} ⋯ b_{1,n})
        {
            let e = t.eps.apply(&b_product(&mut (2..=n).map(|j| beta(1, j))));
            let x = a.mul(&unit(c.a[0]), &e);
            let mut factors = vec![m.act_right(&unit(c.m), &x)];
            factors.extend(c.a[1..].iter().map(|&x| unit(x)));
            for i in 2..=n {
                for j in i + 1..=n {
                    factors.push(unit(beta(i, j)));
                }
            }
            add_tensor(&mut acc, f, &factors, &radices, &f.one());
        }

        // face i: merge slots i, i+1 through ε(b_{i,i+1})
        for i in 1..n {
            let mut factors = vec![unit(c.m)];
            factors.extend(c.a[..i - 1].iter().map(|&x| unit(x)));
            let mid = a.mul(&a.mul(&unit(c.a[i - 1]), t.eps.image_basis(beta(i, i + 1))), &unit(c.a[i]));
            factors.push(mid);
            factors.extend(c.a[i + 1..].iter().map(|&x| unit(x)));
            for k in 1..n {
                for l in k + 1..n {
                    let v = if l < i {
                        unit(beta(k, l))
                    } else if k < i && l == i {
                        b.mul_basis(beta(k, i), beta(k, i + 1)).clone()
                    } else if k < i {
                        unit(beta(k, l + 1))
                    } else if k == i {
                        b.mul_basis(beta(i, l + 1), beta(i + 1, l + 1)).clone()
                    } else {
                        unit(beta(k + 1, l + 1))
                    };
                    factors.push(v);
                }
            }
            add_tensor(&mut acc, f, &factors, &radices, &sign(f, i));
        }

        // face n: a_n ε(b_{n-1,n} ⋯ b_{1,n}) m
        {
            let e = t.eps.apply(&b_product(&mut (1..n).rev().map(|i| beta(i, n))));
            let x = a.mul(&unit(c.a[n - 1]), &e);
            let mut factors = vec![m.act_left(&x, &unit(c.m))];
            factors.extend(c.a[..n - 1].iter().map(|&x| unit(x)));
            for k in 1..n {
                for l in k + 1..n {
                    factors.push(unit(beta(k, l)));
                }
            }
            add_tensor(&mut acc, f, &factors, &radices, &sign(f, n));
        }
        acc.finish()
    });
    Ok(SparseMatrix::from_columns(f, tgt.count(), columns))
}

fn check_module(a: &FiniteAlgebra, m: &Bimodule) -> Result<()> {
    if m.algebra_dim() != a.dim() {
        return Err(Error::DimensionMismatch { context: "bimodule over algebra", left: m.algebra_dim(), right: a.dim() });
    }
    if m.field() != a.field() {
        return Err(Error::FieldMismatch { expected: a.field(), found: m.field() });
    }
    Ok(())
}

pub(crate) fn sign(f: Field, i: usize) -> Scalar {
    f.from_i64(if i.is_multiple_of(2) { 1 } else { -1 })
}

pub(crate) fn add_tensor(acc: &mut Accumulator, f: Field, factors: &[SparseVec], radices: &[usize], coeff: &Scalar) {
    let refs: Vec<&[(usize, Scalar)]> = factors.iter().map(|v| v.as_slice()).collect();
    for (i, x) in tensor_expand(f, &refs, radices) {
        acc.add(i, &(&x * coeff));
    }
}

/// Graded dimensions and boundaries `∂_1..∂_N`; ranks are cached on demand.
#[derive(Debug)]
pub struct ChainComplex {
    field: Field,
    dims: Vec<usize>,
    boundaries: Vec<SparseMatrix>,
    ranks: Vec<OnceLock<usize>>,
}

impl Clone for ChainComplex {
    fn clone(&self) -> Self {
        ChainComplex::from_parts(self.field, self.dims.clone(), self.boundaries.clone())
    }
}

/// Homology in one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homology {
    pub degree: usize,
    pub dim: usize,
    pub cycles: Subspace,
    pub boundaries: Subspace,
    /// Cycles whose classes form a basis of the homology.
    pub reps: Vec<SparseVec>,
}

impl ChainComplex {
    fn from_parts(field: Field, dims: Vec<usize>, boundaries: Vec<SparseMatrix>) -> Self {
        let ranks = (0..boundaries.len()).map(|_| OnceLock::new()).collect();
        ChainComplex { field, dims, boundaries, ranks }
    }

    /// Assembles a complex from explicit boundaries, checking shapes and `∂∂ = 0`.
    pub fn from_boundaries(field: Field, dims: Vec<usize>, boundaries: Vec<SparseMatrix>) -> Result<Self> {
        if boundaries.len() + 1 != dims.len() {
            return Err(Error::DimensionMismatch { context: "boundary count", left: boundaries.len(), right: dims.len() });
        }
        for (k, d) in boundaries.iter().enumerate() {
            if d.cols() != dims[k + 1] || d.rows() != dims[k] {
                return Err(Error::DimensionMismatch { context: "boundary shape", left: d.cols(), right: dims[k + 1] });
            }
            if d.field() != field {
                return Err(Error::FieldMismatch { expected: field, found: d.field() });
            }
        }
        for n in 1..boundaries.len() {
            if !boundaries[n - 1].mul(&boundaries[n])?.is_zero() {
                return Err(Error::ComplexInconsistency(n));
            }
        }
        Ok(ChainComplex::from_parts(field, dims, boundaries))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn max_degree(&self) -> usize {
        self.boundaries.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, n: usize) -> usize {
        self.dims[n]
    }

    /// `∂_n` for `1 ≤ n ≤ N`.
    pub fn boundary(&self, n: usize) -> Result<&SparseMatrix> {
        if n == 0 {
            return Err(Error::DegreeZero);
        }
        self.boundaries.get(n - 1).ok_or(Error::DegreeOutOfRange { degree: n, max: self.max_degree() })
    }

    /// Rank of `∂_n`, with `∂_0 = 0`.
    pub fn boundary_rank(&self, n: usize) -> Result<usize> {
        if n == 0 {
            return Ok(0);
        }
        let d = self.boundary(n)?;
        if let Some(r) = self.ranks[n - 1].get() {
            return Ok(*r);
        }
        // im ∂_n lies in ker ∂_{n-1}, which bounds the rank
        let cap = self.dims[n - 1] - self.boundary_rank(n - 1)?;
        let r = rank_capped(d, Some(cap))?;
        Ok(*self.ranks[n - 1].get_or_init(|| r))
    }

    fn check_homology_degree(&self, n: usize) -> Result<()> {
        if n + 1 > self.max_degree() {
            return Err(Error::DegreeOutOfRange { degree: n, max: self.max_degree().saturating_sub(1) });
        }
        Ok(())
    }

    /// `dim C_n − rank ∂_n − rank ∂_{n+1}`.
    pub fn homology_dim(&self, n: usize) -> Result<usize> {
        self.check_homology_degree(n)?;
        Ok(self.dims[n] - self.boundary_rank(n)? - self.boundary_rank(n + 1)?)
    }

    pub fn homology_dims(&self) -> Result<Vec<usize>> {
        (0..self.max_degree()).map(|n| self.homology_dim(n)).collect()
    }

    /// Homology with representative cycles (kernel basis vectors outside the image span).
    pub fn homology(&self, n: usize) -> Result<Homology> {
        self.check_homology_degree(n)?;
        let cycles = if n == 0 { Subspace::full(self.field, self.dims[0]) } else { kernel_basis(self.boundary(n)?)? };
        let boundaries = image_basis(self.boundary(n + 1)?)?;
        let reps = complement_reps(&cycles, &boundaries);
        Ok(Homology { degree: n, dim: reps.len(), cycles, boundaries, reps })
    }

    /// Homology dimensions of the reduction modulo `p`.
    pub fn homology_dims_mod_p(&self, p: u64) -> Result<Vec<usize>> {
        let reduced = self.boundaries.iter().map(|d| d.reduce_mod(p)).collect::<Result<Vec<_>>>()?;
        let ranks: Vec<usize> = reduced.iter().map(rank).collect::<Result<_>>()?;
        Ok((0..self.max_degree())
            .map(|n| self.dims[n] - if n == 0 { 0 } else { ranks[n - 1] } - ranks[n])
            .collect())
    }
}

/// Settings for [`build_complex`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    pub max_degree: usize,
    pub guard_bytes: u128,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { max_degree: DEFAULT_MAX_DEGREE, guard_bytes: DEFAULT_GUARD_BYTES }
    }
}

impl BuildOptions {
    pub fn degree(max_degree: usize) -> Self {
        BuildOptions { max_degree, ..Default::default() }
    }
}

/// Rough memory estimate: 64 bytes per stored entry, `n + 1` faces per column.
pub fn estimate_bytes(kind: ComplexKind, dim_m: usize, dim_a: usize, dim_b: usize, max_degree: usize) -> u128 {
    let dim_b = if kind == ComplexKind::Classical { 1 } else { dim_b };
    (0..=max_degree)
        .map(|n| {
            ChainIndexScheme::new(n, dim_m, dim_a, dim_b)
                .count_u128()
                .and_then(|c| c.checked_mul((n as u128 + 1) * 64))
                .unwrap_or(u128::MAX)
        })
        .fold(0u128, u128::saturating_add)
}

/// Builds `C_0..C_N` and verifies `∂∂ = 0`.
pub fn build_complex(kind: ComplexKind, t: &Triple, m: &Bimodule, opts: BuildOptions) -> Result<ChainComplex> {
    check_module(&t.a, m)?;
    let estimated = estimate_bytes(kind, m.dim(), t.a.dim(), t.b.dim(), opts.max_degree);
    if estimated > opts.guard_bytes {
        return Err(Error::SizeGuard { estimated, cap: opts.guard_bytes });
    }
    let dim_b = if kind == ComplexKind::Classical { 1 } else { t.b.dim() };
    let dims: Vec<usize> = (0..=opts.max_degree)
        .map(|n| ChainIndexScheme::new(n, m.dim(), t.a.dim(), dim_b).count())
        .collect();
    let mut boundaries = Vec::with_capacity(opts.max_degree);
    for n in 1..=opts.max_degree {
        boundaries.push(match kind {
            ComplexKind::Classical => classical_boundary(&t.a, m, n)?,
            ComplexKind::Secondary => secondary_boundary(t, m, n)?,
        });
    }
    for n in 1..boundaries.len() {
        if !boundaries[n - 1].mul(&boundaries[n])?.is_zero() {
            return Err(Error::ComplexInconsistency(n));
        }
    }
    Ok(ChainComplex::from_parts(t.field(), dims, boundaries))
}
