use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::linalg::{axpy, entry, Accumulator, SparseMatrix, SparseVec};
use crate::scalar::{Field, Scalar};

/// Incrementally maintained reduced row echelon form.
///
/// Each stored row has leading coefficient 1 at its pivot and zeros at every
/// other pivot, so the row list for a given span is unique.
#[derive(Clone, Debug)]
pub struct Rref {
    field: Field,
    ambient: usize,
    rows: Vec<SparseVec>,
    pivot_row: HashMap<usize, usize>,
}

impl Rref {
    pub fn new(field: Field, ambient: usize) -> Self {
        Rref { field, ambient, rows: Vec::new(), pivot_row: HashMap::new() }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Residue of `v` modulo the current span (zero at every pivot).
    pub fn reduce(&self, v: &[(usize, Scalar)]) -> SparseVec {
        let hits: Vec<(usize, &Scalar)> = v
            .iter()
            .filter_map(|(i, c)| self.pivot_row.get(i).map(|&r| (r, c)))
            .collect();
        match hits.len() {
            0 => v.to_vec(),
            1 => axpy(v, &-hits[0].1, &self.rows[hits[0].0]),
            _ => {
                let mut acc = Accumulator::new();
                for (i, c) in v {
                    acc.add(*i, c);
                }
                for (r, c) in hits {
                    acc.add_scaled(&self.rows[r], &-c);
                }
                acc.finish()
            }
        }
    }

    pub fn contains(&self, v: &[(usize, Scalar)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &[(usize, Scalar)]) -> bool {
        let r = self.reduce(v);
        let Some((pivot, lead)) = r.first().cloned() else {
            return false;
        };
        let inv = lead.inv().expect("nonzero leading coefficient");
        let r = super::scale(&r, &inv);
        for row in &mut self.rows {
            if let Some(c) = entry(row, pivot).cloned() {
                *row = axpy(row, &-c, &r);
            }
        }
        self.pivot_row.insert(pivot, self.rows.len());
        self.rows.push(r);
        true
    }

    pub fn pivots(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.pivot_row.keys().copied().collect();
        p.sort_unstable();
        p
    }

    /// Rows sorted by pivot.
    pub fn into_sorted_rows(self) -> Vec<SparseVec> {
        let mut rows = self.rows;
        rows.sort_by_key(|r| r[0].0);
        rows
    }
}

/// A subspace of `field^ambient`, stored as its canonical RREF basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    basis: Vec<SparseVec>,
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Self {
        Subspace { field, ambient, basis: Vec::new() }
    }

    pub fn full(field: Field, ambient: usize) -> Self {
        let basis = (0..ambient).map(|i| vec![(i, field.one())]).collect();
        Subspace { field, ambient, basis }
    }

    pub fn span<'a>(field: Field, ambient: usize, vectors: impl IntoIterator<Item = &'a SparseVec>) -> Self {
        let mut rref = Rref::new(field, ambient);
        for v in vectors {
            rref.insert(v);
        }
        Subspace::from_rref(rref)
    }

    pub fn from_rref(rref: Rref) -> Self {
        let field = rref.field;
        let ambient = rref.ambient;
        Subspace { field, ambient, basis: rref.into_sorted_rows() }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    pub fn to_rref(&self) -> Rref {
        let mut rref = Rref::new(self.field, self.ambient);
        for (k, row) in self.basis.iter().enumerate() {
            rref.pivot_row.insert(row[0].0, k);
            rref.rows.push(row.clone());
        }
        rref
    }

    pub fn contains(&self, v: &[(usize, Scalar)]) -> bool {
        self.to_rref().contains(v)
    }

    pub fn leq(&self, other: &Subspace) -> Result<bool> {
        subspace_leq(self, other)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        let mut rref = self.to_rref();
        for v in &other.basis {
            rref.insert(v);
        }
        Ok(Subspace::from_rref(rref))
    }

    /// Coordinates of a member vector in the RREF basis: its pivot entries.
    pub fn coordinates(&self, v: &[(usize, Scalar)]) -> Option<Vec<Scalar>> {
        if !self.contains(v) {
            return None;
        }
        Some(
            self.basis
                .iter()
                .map(|row| entry(v, row[0].0).cloned().unwrap_or_else(|| self.field.zero()))
                .collect(),
        )
    }
}

/// Basis of `{v : m v = 0}`.
pub fn kernel_basis(m: &SparseMatrix) -> Result<Subspace> {
    m.check_field()?;
    let field = m.field();
    let mut rref = Rref::new(field, m.cols());
    for row in m.row_vectors() {
        rref.insert(&row);
    }
    let rows = rref.into_sorted_rows();
    let pivots: Vec<usize> = rows.iter().map(|r| r[0].0).collect();
    let mut is_pivot = vec![false; m.cols()];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    // column index -> rows with a nonzero entry there
    let mut by_col: HashMap<usize, Vec<(usize, Scalar)>> = HashMap::new();
    for (k, row) in rows.iter().enumerate() {
        for (c, v) in row.iter().skip(1) {
            by_col.entry(*c).or_default().push((k, v.clone()));
        }
    }
    let mut vectors = Vec::new();
    for free in (0..m.cols()).filter(|&c| !is_pivot[c]) {
        let mut acc = Accumulator::new();
        acc.add(free, &field.one());
        if let Some(hits) = by_col.get(&free) {
            for (k, v) in hits {
                acc.add(pivots[*k], &-v);
            }
        }
        vectors.push(acc.finish());
    }
    Ok(Subspace::span(field, m.cols(), &vectors))
}

/// Canonical basis of the column space.
pub fn image_basis(m: &SparseMatrix) -> Result<Subspace> {
    m.check_field()?;
    Ok(Subspace::span(m.field(), m.rows(), m.columns()))
}

pub fn subspace_leq(u: &Subspace, v: &Subspace) -> Result<bool> {
    if u.ambient != v.ambient {
        return Err(Error::AmbientMismatch(u.ambient, v.ambient));
    }
    if u.dim() > v.dim() {
        return Ok(false);
    }
    let rref = v.to_rref();
    Ok(u.basis.iter().all(|b| rref.contains(b)))
}

/// Solves `W x = rhs_k` for every right-hand side, where the columns of `W`
/// are `spanning`. Returns `None` if any right-hand side is outside the span.
/// Free variables are set to zero, so the answer is canonical.
pub fn solve_in_span(
    field: Field,
    ambient: usize,
    spanning: &[SparseVec],
    rhs: &[SparseVec],
) -> Option<Vec<SparseVec>> {
    let k = spanning.len();
    let mut row_acc: Vec<SparseVec> = vec![Vec::new(); ambient];
    for (c, col) in spanning.iter().chain(rhs).enumerate() {
        for (r, v) in col {
            row_acc[*r].push((c, v.clone()));
        }
    }
    let mut rref = Rref::new(field, k + rhs.len());
    for row in &row_acc {
        if !row.is_empty() {
            rref.insert(row);
        }
    }
    let rows = rref.into_sorted_rows();
    if rows.iter().any(|r| r[0].0 >= k) {
        return None;
    }
    let mut out = vec![Vec::new(); rhs.len()];
    for row in &rows {
        let pivot = row[0].0;
        for (c, v) in row.iter().filter(|(c, _)| *c >= k) {
            out[c - k].push((pivot, v.clone()));
        }
    }
    for v in &mut out {
        v.sort_by_key(|(i, _)| *i);
    }
    Some(out)
}

/// Cycle representatives: basis vectors of `cycles` not in the span of
/// `boundaries` plus previously chosen representatives, in RREF order.
pub fn complement_reps(cycles: &Subspace, boundaries: &Subspace) -> Vec<SparseVec> {
    let mut span = boundaries.to_rref();
    let mut reps = Vec::new();
    for v in cycles.basis() {
        if span.insert(v) {
            reps.push(v.clone());
        }
    }
    reps
}

/// Matrix of the map induced by `f` on `src_cycles/src_boundaries →
/// tgt_cycles/tgt_boundaries`, in the complement bases of [`complement_reps`].
pub fn induced_quotient_map(
    f: &SparseMatrix,
    src_cycles: &Subspace,
    src_boundaries: &Subspace,
    tgt_cycles: &Subspace,
    tgt_boundaries: &Subspace,
) -> Result<SparseMatrix> {
    if f.cols() != src_cycles.ambient() || f.rows() != tgt_cycles.ambient() {
        return Err(Error::DimensionMismatch { context: "induced map", left: f.cols(), right: src_cycles.ambient() });
    }
    if !src_boundaries.leq(src_cycles)? || !tgt_boundaries.leq(tgt_cycles)? {
        return Err(Error::Invalid("boundaries must lie inside cycles".into()));
    }
    let tgt_z = tgt_cycles.to_rref();
    for z in src_cycles.basis() {
        if !tgt_z.contains(&f.apply(z)) {
            return Err(Error::NotAChainMap("a cycle maps outside the target cycles".into()));
        }
    }
    let tgt_b = tgt_boundaries.to_rref();
    for b in src_boundaries.basis() {
        if !tgt_b.contains(&f.apply(b)) {
            return Err(Error::NotAChainMap("a boundary maps outside the target boundaries".into()));
        }
    }
    let src_reps = complement_reps(src_cycles, src_boundaries);
    let tgt_reps = complement_reps(tgt_cycles, tgt_boundaries);
    let images: Vec<SparseVec> = src_reps.iter().map(|r| f.apply(r)).collect();
    let mut spanning: Vec<SparseVec> = tgt_boundaries.basis().to_vec();
    let nb = spanning.len();
    spanning.extend(tgt_reps.iter().cloned());
    let coords = solve_in_span(f.field(), f.rows(), &spanning, &images)
        .ok_or_else(|| Error::NotAChainMap("image not expressible in target homology".into()))?;
    let columns = coords
        .into_iter()
        .map(|c| c.into_iter().filter(|(i, _)| *i >= nb).map(|(i, v)| (i - nb, v)).collect())
        .collect();
    Ok(SparseMatrix::from_columns(f.field(), tgt_reps.len(), columns))
}

/// `ambient / relations`, with basis the non-pivot coordinates of the
/// relation RREF. Lifting a basis element gives a coordinate unit vector.
#[derive(Clone, Debug)]
pub struct QuotientSpace {
    relations: Subspace,
    basis_coords: Vec<usize>,
    position: HashMap<usize, usize>,
}

impl QuotientSpace {
    pub fn new(relations: Subspace) -> Self {
        let mut is_pivot = vec![false; relations.ambient()];
        for row in relations.basis() {
            is_pivot[row[0].0] = true;
        }
        let basis_coords: Vec<usize> = (0..relations.ambient()).filter(|&i| !is_pivot[i]).collect();
        let position = basis_coords.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        QuotientSpace { relations, basis_coords, position }
    }

    pub fn field(&self) -> Field {
        self.relations.field()
    }

    pub fn dim(&self) -> usize {
        self.basis_coords.len()
    }

    pub fn ambient(&self) -> usize {
        self.relations.ambient()
    }

    pub fn relations(&self) -> &Subspace {
        &self.relations
    }

    /// Ambient coordinate lifting quotient basis element `k`.
    pub fn lift_coord(&self, k: usize) -> usize {
        self.basis_coords[k]
    }

    pub fn lift(&self, k: usize) -> SparseVec {
        vec![(self.basis_coords[k], self.field().one())]
    }

    pub fn project(&self, v: &[(usize, Scalar)]) -> SparseVec {
        let reduced = self.relations.to_rref().reduce(v);
        reduced.into_iter().map(|(i, x)| (self.position[&i], x)).collect()
    }

    /// Projects many vectors while reusing one RREF.
    pub fn project_all(&self, vs: &[SparseVec]) -> Vec<SparseVec> {
        let rref = self.relations.to_rref();
        vs.iter()
            .map(|v| rref.reduce(v).into_iter().map(|(i, x)| (self.position[&i], x)).collect())
            .collect()
    }

    pub fn projection_matrix(&self) -> SparseMatrix {
        let rref = self.relations.to_rref();
        let columns = (0..self.ambient())
            .map(|i| {
                rref.reduce(&[(i, self.field().one())])
                    .into_iter()
                    .map(|(j, x)| (self.position[&j], x))
                    .collect()
            })
            .collect();
        SparseMatrix::from_columns(self.field(), self.dim(), columns)
    }
}
