use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{Accumulator, DenseMatrix, SparseVec};
use crate::scalar::{Field, Scalar};

/// Column-major sparse matrix over a single field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    columns: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Self {
        SparseMatrix { field, rows, cols, columns: vec![Vec::new(); cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let columns = (0..n).map(|i| vec![(i, field.one())]).collect();
        SparseMatrix { field, rows: n, cols: n, columns }
    }

    /// Builds from already-canonical columns (sorted, zero-free, in range).
    pub fn from_columns(field: Field, rows: usize, columns: Vec<SparseVec>) -> Self {
        debug_assert!(columns.iter().all(|c| {
            c.windows(2).all(|w| w[0].0 < w[1].0)
                && c.iter().all(|(r, v)| *r < rows && !v.is_zero() && v.field() == field)
        }));
        SparseMatrix { field, rows, cols: columns.len(), columns }
    }

    /// Validating constructor: duplicate entries are summed, zeros dropped.
    pub fn from_triplets(
        field: Field,
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Result<Self> {
        let mut acc: Vec<Accumulator> = vec![Accumulator::new(); cols];
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::IndexOutOfRange { row: r, col: c, rows, cols });
            }
            if v.field() != field {
                return Err(Error::FieldMismatch { expected: field, found: v.field() });
            }
            acc[c].add(r, &v);
        }
        Ok(SparseMatrix { field, rows, cols, columns: acc.into_iter().map(Accumulator::finish).collect() })
    }

    pub fn from_dense(m: &DenseMatrix) -> Self {
        let columns = (0..m.cols())
            .map(|c| {
                (0..m.rows())
                    .filter_map(|r| {
                        let v = m.get(r, c);
                        (!v.is_zero()).then(|| (r, v.clone()))
                    })
                    .collect()
            })
            .collect();
        SparseMatrix { field: m.field(), rows: m.rows(), cols: m.cols(), columns }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zero(self.field, self.rows, self.cols);
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                d.set(r.to_owned(), c, v.clone());
            }
        }
        d
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, c: usize) -> &SparseVec {
        &self.columns[c]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        super::entry(&self.columns[c], r).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Iterates `(row, col, value)` in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    /// Reports the first stored scalar that does not belong to the matrix field.
    pub fn check_field(&self) -> Result<()> {
        for (_, _, v) in self.entries() {
            if v.field() != self.field {
                return Err(Error::FieldMismatch { expected: self.field, found: v.field() });
            }
        }
        Ok(())
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut cols: Vec<SparseVec> = vec![Vec::new(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                cols[*r].push((c, v.clone()));
            }
        }
        SparseMatrix { field: self.field, rows: self.cols, cols: self.rows, columns: cols }
    }

    /// Rows as sparse vectors (row-major view).
    pub fn row_vectors(&self) -> Vec<SparseVec> {
        self.transpose().columns
    }

    pub fn apply(&self, v: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Accumulator::new();
        for (c, x) in v {
            acc.add_scaled(&self.columns[*c], x);
        }
        acc.finish()
    }

    pub fn mul(&self, rhs: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch { context: "matrix product", left: self.cols, right: rhs.rows });
        }
        self.same_field(rhs)?;
        let columns = rhs.columns.iter().map(|col| self.apply(col)).collect();
        Ok(SparseMatrix { field: self.field, rows: self.rows, cols: rhs.cols, columns })
    }

    pub fn add(&self, rhs: &SparseMatrix) -> Result<SparseMatrix> {
        self.combine(rhs, &self.field.one())
    }

    pub fn sub(&self, rhs: &SparseMatrix) -> Result<SparseMatrix> {
        self.combine(rhs, &self.field.from_i64(-1))
    }

    fn combine(&self, rhs: &SparseMatrix, coeff: &Scalar) -> Result<SparseMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch { context: "matrix sum", left: self.rows * self.cols, right: rhs.rows * rhs.cols });
        }
        self.same_field(rhs)?;
        let columns = self
            .columns
            .iter()
            .zip(&rhs.columns)
            .map(|(a, b)| super::axpy(a, coeff, b))
            .collect();
        Ok(SparseMatrix { field: self.field, rows: self.rows, cols: self.cols, columns })
    }

    pub fn scale(&self, coeff: &Scalar) -> SparseMatrix {
        let columns = self.columns.iter().map(|c| super::scale(c, coeff)).collect();
        SparseMatrix { field: self.field, rows: self.rows, cols: self.cols, columns }
    }

    fn same_field(&self, rhs: &SparseMatrix) -> Result<()> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch { expected: self.field, found: rhs.field });
        }
        Ok(())
    }

    /// Kronecker product; row/column indices of `self` are most significant.
    pub fn kronecker(&self, rhs: &SparseMatrix) -> SparseMatrix {
        let rows = self.rows * rhs.rows;
        let mut columns = Vec::with_capacity(self.cols * rhs.cols);
        for a in &self.columns {
            for b in &rhs.columns {
                let mut col: SparseVec = Vec::with_capacity(a.len() * b.len());
                for (ra, va) in a {
                    for (rb, vb) in b {
                        col.push((ra * rhs.rows + rb, va * vb));
                    }
                }
                columns.push(col);
            }
        }
        SparseMatrix { field: self.field, rows, cols: self.cols * rhs.cols, columns }
    }

    /// Image of a rational matrix in 𝔽ₚ.
    pub fn reduce_mod(&self, p: u64) -> Result<SparseMatrix> {
        let target = Field::prime(p)?;
        let mut columns = Vec::with_capacity(self.cols);
        for col in &self.columns {
            let mut out = Vec::with_capacity(col.len());
            for (r, v) in col {
                let x = v.reduce_mod(p).ok_or_else(|| Error::NotInvertibleMod {
                    value: v.to_string(),
                    modulus: p,
                })?;
                if !x.is_zero() {
                    out.push((*r, x));
                }
            }
            columns.push(out);
        }
        Ok(SparseMatrix { field: target, rows: self.rows, cols: self.cols, columns })
    }

    /// Entries as `row -> col -> value`, for diagnostics.
    pub fn to_map(&self) -> BTreeMap<(usize, usize), Scalar> {
        self.entries().map(|(r, c, v)| ((r, c), v.clone())).collect()
    }
}
