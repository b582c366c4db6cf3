//! Finite-dimensional algebras given by structure constants, triples
//! `(A, B, ε)` and bimodules.

use crate::error::{Error, Result};
use crate::linalg::{
    axpy, entry, kernel_basis, Accumulator, DenseMatrix, Rref, SparseMatrix, SparseVec, Subspace,
};
use crate::report::Report;
use crate::scalar::{Field, Scalar};

/// Algebra with basis `e_0..e_{d-1}` and `e_i e_j = Σ_k c[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAlgebra {
    field: Field,
    labels: Vec<String>,
    table: Vec<Vec<Vec<Scalar>>>,
    unit: Vec<Scalar>,
    products: Vec<Vec<SparseVec>>,
}

impl FiniteAlgebra {
    pub fn new(field: Field, labels: Vec<String>, table: Vec<Vec<Vec<Scalar>>>, unit: Vec<Scalar>) -> Result<Self> {
        let d = labels.len();
        let shape_ok = table.len() == d
            && table.iter().all(|row| row.len() == d && row.iter().all(|v| v.len() == d))
            && unit.len() == d;
        if !shape_ok {
            return Err(Error::Invalid(format!("structure table does not have shape {d}x{d}x{d}")));
        }
        for s in table.iter().flatten().flatten().chain(&unit) {
            if s.field() != field {
                return Err(Error::FieldMismatch { expected: field, found: s.field() });
            }
        }
        let products = table
            .iter()
            .map(|row| row.iter().map(|v| crate::linalg::sparse_from_dense(v)).collect())
            .collect();
        Ok(FiniteAlgebra { field, labels, table, unit, products })
    }

    /// Builds from sparse basis products `e_i e_j`.
    pub fn from_products(field: Field, labels: Vec<String>, products: Vec<Vec<SparseVec>>, unit: SparseVec) -> Result<Self> {
        let d = labels.len();
        let table = products
            .iter()
            .map(|row| row.iter().map(|v| crate::linalg::sparse_to_dense(field, v, d)).collect())
            .collect();
        FiniteAlgebra::new(field, labels, table, crate::linalg::sparse_to_dense(field, &unit, d))
    }

    /// The ground field as a one-dimensional algebra.
    pub fn ground(field: Field) -> Self {
        FiniteAlgebra::new(field, vec!["1".into()], vec![vec![vec![field.one()]]], vec![field.one()])
            .expect("ground field table")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn table(&self) -> &[Vec<Vec<Scalar>>] {
        &self.table
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn unit_sparse(&self) -> SparseVec {
        crate::linalg::sparse_from_dense(&self.unit)
    }

    pub fn basis(&self, i: usize) -> SparseVec {
        vec![(i, self.field.one())]
    }

    /// `e_i e_j` as a sparse vector.
    pub fn mul_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.products[i][j]
    }

    pub fn mul(&self, x: &[(usize, Scalar)], y: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Accumulator::new();
        for (i, a) in x {
            for (j, b) in y {
                acc.add_scaled(&self.products[*i][*j], &(a * b));
            }
        }
        acc.finish()
    }

    /// Product of a list of elements, left to right; the empty product is 1.
    pub fn product(&self, xs: &[&[(usize, Scalar)]]) -> SparseVec {
        let mut acc = self.unit_sparse();
        for x in xs {
            acc = self.mul(&acc, x);
        }
        acc
    }

    /// Matrix of `y ↦ x·y`.
    pub fn left_mult_matrix(&self, x: &[(usize, Scalar)]) -> SparseMatrix {
        let cols = (0..self.dim()).map(|j| self.mul(x, &self.basis(j))).collect();
        SparseMatrix::from_columns(self.field, self.dim(), cols)
    }

    /// Matrix of `y ↦ y·x`.
    pub fn right_mult_matrix(&self, x: &[(usize, Scalar)]) -> SparseMatrix {
        let cols = (0..self.dim()).map(|j| self.mul(&self.basis(j), x)).collect();
        SparseMatrix::from_columns(self.field, self.dim(), cols)
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim()).all(|i| (0..i).all(|j| self.products[i][j] == self.products[j][i]))
    }

    /// Reduction of a rational algebra modulo `p`.
    pub fn reduce_mod(&self, p: u64) -> Result<FiniteAlgebra> {
        let r = |s: &Scalar| {
            s.reduce_mod(p).ok_or_else(|| Error::NotInvertibleMod { value: s.to_string(), modulus: p })
        };
        let table = self
            .table
            .iter()
            .map(|row| row.iter().map(|v| v.iter().map(r).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let unit = self.unit.iter().map(r).collect::<Result<Vec<_>>>()?;
        FiniteAlgebra::new(Field::prime(p)?, self.labels.clone(), table, unit)
    }

    pub fn element_label(&self, x: &[(usize, Scalar)]) -> String {
        if x.is_empty() {
            return "0".into();
        }
        x.iter()
            .map(|(i, c)| if c.is_one() { self.labels[*i].clone() } else { format!("{c}*{}", self.labels[*i]) })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Linear map between algebras, `target_dim × source_dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraMorphism {
    matrix: DenseMatrix,
    columns: Vec<SparseVec>,
}

impl AlgebraMorphism {
    pub fn new(matrix: DenseMatrix) -> Self {
        let columns = (0..matrix.cols()).map(|c| crate::linalg::sparse_from_dense(&matrix.column(c))).collect();
        AlgebraMorphism { matrix, columns }
    }

    pub fn from_columns(field: Field, target_dim: usize, columns: Vec<SparseVec>) -> Self {
        let dense: Vec<Vec<Scalar>> =
            columns.iter().map(|c| crate::linalg::sparse_to_dense(field, c, target_dim)).collect();
        AlgebraMorphism::new(DenseMatrix::from_columns(field, target_dim, &dense))
    }

    pub fn identity(field: Field, dim: usize) -> Self {
        AlgebraMorphism::new(DenseMatrix::identity(field, dim))
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    pub fn source_dim(&self) -> usize {
        self.matrix.cols()
    }

    pub fn target_dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Image of basis element `i`.
    pub fn image_basis(&self, i: usize) -> &SparseVec {
        &self.columns[i]
    }

    pub fn apply(&self, x: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Accumulator::new();
        for (i, c) in x {
            acc.add_scaled(&self.columns[*i], c);
        }
        acc.finish()
    }

    pub fn compose(&self, inner: &AlgebraMorphism) -> Result<AlgebraMorphism> {
        Ok(AlgebraMorphism::new(self.matrix.mul(&inner.matrix)?))
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        SparseMatrix::from_columns(self.matrix.field(), self.target_dim(), self.columns.clone())
    }
}

/// Checks that `f: source → target` is a unital algebra morphism.
pub fn validate_morphism(name: &str, f: &AlgebraMorphism, source: &FiniteAlgebra, target: &FiniteAlgebra) -> Report {
    let mut report = Report::new(name);
    if f.source_dim() != source.dim() || f.target_dim() != target.dim() {
        report.check(
            "shape",
            false,
            format!("matrix is {}x{}, expected {}x{}", f.target_dim(), f.source_dim(), target.dim(), source.dim()),
        );
        return report;
    }
    let unit_ok = f.apply(&source.unit_sparse()) == target.unit_sparse();
    report.check("preserves unit", unit_ok, if unit_ok { "ok" } else { "image of 1 is not 1" });
    let mut bad = Vec::new();
    for i in 0..source.dim() {
        for j in 0..source.dim() {
            let lhs = f.apply(source.mul_basis(i, j));
            let rhs = target.mul(f.image_basis(i), f.image_basis(j));
            if lhs != rhs {
                bad.push(format!("({}, {})", source.labels[i], source.labels[j]));
            }
        }
    }
    report.violations("preserves products", &bad);
    report
}

/// `(A, B, ε)` with `B` commutative and `ε(B)` central in `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triple {
    pub a: FiniteAlgebra,
    pub b: FiniteAlgebra,
    pub eps: AlgebraMorphism,
}

impl Triple {
    pub fn new(a: FiniteAlgebra, b: FiniteAlgebra, eps: AlgebraMorphism) -> Result<Self> {
        if a.field() != b.field() || eps.matrix().field() != a.field() {
            return Err(Error::FieldMismatch { expected: a.field(), found: b.field() });
        }
        if eps.source_dim() != b.dim() || eps.target_dim() != a.dim() {
            return Err(Error::DimensionMismatch { context: "ε shape", left: eps.target_dim(), right: a.dim() });
        }
        Ok(Triple { a, b, eps })
    }

    /// `(A, k, unit map)`, whose secondary complex is the classical one.
    pub fn over_ground(a: FiniteAlgebra) -> Self {
        let field = a.field();
        let eps = AlgebraMorphism::from_columns(field, a.dim(), vec![a.unit_sparse()]);
        Triple { b: FiniteAlgebra::ground(field), a, eps }
    }

    /// `(A, A, id)` for commutative `A`.
    pub fn identity(a: FiniteAlgebra) -> Self {
        let eps = AlgebraMorphism::identity(a.field(), a.dim());
        Triple { b: a.clone(), a, eps }
    }

    pub fn field(&self) -> Field {
        self.a.field()
    }

    pub fn reduce_mod(&self, p: u64) -> Result<Triple> {
        let m = self
            .eps
            .matrix()
            .reduce_mod(p)
            .ok_or_else(|| Error::NotInvertibleMod { value: "ε entry".into(), modulus: p })?;
        Triple::new(self.a.reduce_mod(p)?, self.b.reduce_mod(p)?, AlgebraMorphism::new(m))
    }
}

/// A bimodule, by default over a single algebra `A`; the left and right
/// algebras may differ (as for Morita bimodules). `left[i]` is the matrix of
/// `v ↦ e_i·v`, `right[i]` that of `v ↦ v·e_i`, both acting on coordinate
/// columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimodule {
    field: Field,
    dim: usize,
    left: Vec<DenseMatrix>,
    right: Vec<DenseMatrix>,
    left_basis: Vec<Vec<SparseVec>>,
    right_basis: Vec<Vec<SparseVec>>,
}

impl Bimodule {
    pub fn new(field: Field, dim: usize, left: Vec<DenseMatrix>, right: Vec<DenseMatrix>) -> Result<Self> {
        for m in left.iter().chain(&right) {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::DimensionMismatch { context: "action matrix", left: m.rows(), right: dim });
            }
            if m.field() != field {
                return Err(Error::FieldMismatch { expected: field, found: m.field() });
            }
        }
        let cols = |ms: &[DenseMatrix]| -> Vec<Vec<SparseVec>> {
            ms.iter()
                .map(|m| (0..dim).map(|c| crate::linalg::sparse_from_dense(&m.column(c))).collect())
                .collect()
        };
        let left_basis = cols(&left);
        let right_basis = cols(&right);
        Ok(Bimodule { field, dim, left, right, left_basis, right_basis })
    }

    /// From tensors `l[i][m][m']` with `e_i·v_m = Σ l[i][m][m'] v_m'` (and
    /// `r` likewise for `v_m·e_i`).
    pub fn from_tensors(field: Field, dim: usize, l: &[Vec<Vec<Scalar>>], r: &[Vec<Vec<Scalar>>]) -> Result<Self> {
        let to_mats = |t: &[Vec<Vec<Scalar>>]| -> Result<Vec<DenseMatrix>> {
            t.iter()
                .map(|rows| {
                    if rows.len() != dim || rows.iter().any(|v| v.len() != dim) {
                        return Err(Error::DimensionMismatch { context: "action tensor", left: rows.len(), right: dim });
                    }
                    Ok(DenseMatrix::from_columns(field, dim, rows))
                })
                .collect()
        };
        Bimodule::new(field, dim, to_mats(l)?, to_mats(r)?)
    }

    /// `A` acting on itself by multiplication.
    pub fn regular(a: &FiniteAlgebra) -> Self {
        let d = a.dim();
        let left = (0..d).map(|i| a.left_mult_matrix(&a.basis(i)).to_dense()).collect();
        let right = (0..d).map(|i| a.right_mult_matrix(&a.basis(i)).to_dense()).collect();
        Bimodule::new(a.field(), d, left, right).expect("regular bimodule shapes")
    }

    /// Builds from sparse action tables: `left[i][v] = e_i·v`, `right[i][v] = v·e_i`.
    pub fn from_action_columns(field: Field, dim: usize, left: &[Vec<SparseVec>], right: &[Vec<SparseVec>]) -> Result<Self> {
        let mats = |t: &[Vec<SparseVec>]| -> Vec<DenseMatrix> {
            t.iter()
                .map(|cols| {
                    let dense: Vec<Vec<Scalar>> =
                        cols.iter().map(|c| crate::linalg::sparse_to_dense(field, c, dim)).collect();
                    DenseMatrix::from_columns(field, dim, &dense)
                })
                .collect()
        };
        Bimodule::new(field, dim, mats(left), mats(right))
    }

    pub fn zero(a: &FiniteAlgebra) -> Self {
        let mats = vec![DenseMatrix::zero(a.field(), 0, 0); a.dim()];
        Bimodule::new(a.field(), 0, mats.clone(), mats).expect("zero bimodule")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the algebra acting on the left.
    pub fn algebra_dim(&self) -> usize {
        self.left.len()
    }

    /// Dimension of the algebra acting on the right.
    pub fn right_algebra_dim(&self) -> usize {
        self.right.len()
    }

    pub fn left(&self) -> &[DenseMatrix] {
        &self.left
    }

    pub fn right(&self) -> &[DenseMatrix] {
        &self.right
    }

    /// `e_i · v_m`.
    pub fn left_basis(&self, i: usize, m: usize) -> &SparseVec {
        &self.left_basis[i][m]
    }

    /// `v_m · e_i`.
    pub fn right_basis(&self, m: usize, i: usize) -> &SparseVec {
        &self.right_basis[i][m]
    }

    pub fn act_left(&self, a: &[(usize, Scalar)], v: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Accumulator::new();
        for (i, x) in a {
            for (m, y) in v {
                acc.add_scaled(&self.left_basis[*i][*m], &(x * y));
            }
        }
        acc.finish()
    }

    pub fn act_right(&self, v: &[(usize, Scalar)], a: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Accumulator::new();
        for (m, y) in v {
            for (i, x) in a {
                acc.add_scaled(&self.right_basis[*i][*m], &(x * y));
            }
        }
        acc.finish()
    }

    /// Matrix of `v ↦ a·v`.
    pub fn left_matrix(&self, a: &[(usize, Scalar)]) -> SparseMatrix {
        let cols = (0..self.dim).map(|m| self.act_left(a, &[(m, self.field.one())])).collect();
        SparseMatrix::from_columns(self.field, self.dim, cols)
    }

    /// Matrix of `v ↦ v·a`.
    pub fn right_matrix(&self, a: &[(usize, Scalar)]) -> SparseMatrix {
        let cols = (0..self.dim).map(|m| self.act_right(&[(m, self.field.one())], a)).collect();
        SparseMatrix::from_columns(self.field, self.dim, cols)
    }

    /// `L_i = R_i` for every basis element.
    pub fn is_symmetric(&self) -> bool {
        self.left == self.right
    }

    pub fn reduce_mod(&self, p: u64) -> Result<Bimodule> {
        let r = |ms: &[DenseMatrix]| -> Result<Vec<DenseMatrix>> {
            ms.iter()
                .map(|m| m.reduce_mod(p).ok_or_else(|| Error::NotInvertibleMod { value: "action entry".into(), modulus: p }))
                .collect()
        };
        Bimodule::new(Field::prime(p)?, self.dim, r(&self.left)?, r(&self.right)?)
    }
}

pub fn validate_algebra(a: &FiniteAlgebra) -> Report {
    let mut report = Report::new("algebra");
    let d = a.dim();
    let mut bad = Vec::new();
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let lhs = a.mul(a.mul_basis(i, j), &a.basis(k));
                let rhs = a.mul(&a.basis(i), a.mul_basis(j, k));
                if lhs != rhs {
                    bad.push(format!("({}, {}, {})", a.labels[i], a.labels[j], a.labels[k]));
                }
            }
        }
    }
    report.violations("associativity", &bad);
    let unit = a.unit_sparse();
    let bad: Vec<String> = (0..d)
        .filter(|&i| a.mul(&unit, &a.basis(i)) != a.basis(i) || a.mul(&a.basis(i), &unit) != a.basis(i))
        .map(|i| a.labels[i].clone())
        .collect();
    report.violations("unit law", &bad);
    report
}

pub fn validate_triple(t: &Triple) -> Report {
    let mut report = Report::new("triple");
    let mut sub = validate_algebra(&t.a);
    sub.title = "A".into();
    report.extend(sub);
    let mut sub = validate_algebra(&t.b);
    sub.title = "B".into();
    report.extend(sub);
    let bad: Vec<String> = (0..t.b.dim())
        .flat_map(|i| (0..i).map(move |j| (i, j)))
        .filter(|&(i, j)| t.b.mul_basis(i, j) != t.b.mul_basis(j, i))
        .map(|(i, j)| format!("({}, {})", t.b.labels[i], t.b.labels[j]))
        .collect();
    report.violations("B commutative", &bad);
    report.extend(validate_morphism("ε", &t.eps, &t.b, &t.a));
    let mut bad = Vec::new();
    for j in 0..t.b.dim() {
        let e = t.eps.image_basis(j);
        for i in 0..t.a.dim() {
            if t.a.mul(e, &t.a.basis(i)) != t.a.mul(&t.a.basis(i), e) {
                bad.push(format!("ε({}) vs {}", t.b.labels[j], t.a.labels[i]));
            }
        }
    }
    report.violations("ε(B) central", &bad);
    report
}

pub fn validate_bimodule(m: &Bimodule, t: &Triple) -> Report {
    let mut report = validate_bimodule_over(m, &t.a, &t.a);
    report.title = "bimodule".into();
    if !report.passed() && report.checks.iter().any(|c| c.name == "shape") {
        return report;
    }
    let bad: Vec<String> = (0..t.b.dim())
        .filter(|&j| {
            let e = t.eps.image_basis(j);
            m.left_matrix(e) != m.right_matrix(e)
        })
        .map(|j| t.b.labels[j].clone())
        .collect();
    report.violations("B-symmetric", &bad);
    report
}

/// Bimodule axioms for a left `R`-, right `S`-action.
pub fn validate_bimodule_over(m: &Bimodule, r: &FiniteAlgebra, s: &FiniteAlgebra) -> Report {
    let mut report = Report::new("bimodule");
    if m.algebra_dim() != r.dim() || m.right_algebra_dim() != s.dim() || m.field() != r.field() {
        report.check(
            "shape",
            false,
            format!(
                "{}+{} action matrices for algebras of dimensions {} and {}",
                m.algebra_dim(),
                m.right_algebra_dim(),
                r.dim(),
                s.dim()
            ),
        );
        return report;
    }
    let f = m.field();
    let combo = |mats: &[DenseMatrix], x: &[(usize, Scalar)]| {
        let mut acc = DenseMatrix::zero(f, m.dim(), m.dim());
        for (k, c) in x {
            acc = acc.add(&mats[*k].scale(c));
        }
        acc
    };
    let id = DenseMatrix::identity(f, m.dim());
    report.check("left unital", combo(&m.left, &r.unit_sparse()) == id, "1·v = v");
    report.check("right unital", combo(&m.right, &s.unit_sparse()) == id, "v·1 = v");
    let (mut bad_l, mut bad_r, mut bad_c) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..r.dim() {
        for j in 0..r.dim() {
            if m.left[i].mul(&m.left[j]).expect("square") != combo(&m.left, r.mul_basis(i, j)) {
                bad_l.push(format!("({}, {})", r.labels[i], r.labels[j]));
            }
        }
    }
    for i in 0..s.dim() {
        for j in 0..s.dim() {
            if m.right[j].mul(&m.right[i]).expect("square") != combo(&m.right, s.mul_basis(i, j)) {
                bad_r.push(format!("({}, {})", s.labels[i], s.labels[j]));
            }
        }
    }
    for i in 0..r.dim() {
        for j in 0..s.dim() {
            if m.left[i].mul(&m.right[j]).expect("square") != m.right[j].mul(&m.left[i]).expect("square") {
                bad_c.push(format!("({}, {})", r.labels[i], s.labels[j]));
            }
        }
    }
    report.violations("left associative", &bad_l);
    report.violations("right associative", &bad_r);
    report.violations("actions commute", &bad_c);
    report
}

/// Solution space of `[z, e_i] = 0` for all `i`.
pub fn center(a: &FiniteAlgebra) -> Subspace {
    let d = a.dim();
    let mut triplets = Vec::new();
    for i in 0..d {
        for k in 0..d {
            let diff = axpy(a.mul_basis(k, i), &a.field().from_i64(-1), a.mul_basis(i, k));
            for (l, c) in diff {
                triplets.push((i * d + l, k, c));
            }
        }
    }
    let m = SparseMatrix::from_triplets(a.field(), d * d, d, triplets).expect("in range");
    kernel_basis(&m).expect("single field")
}

/// Span of `v·e_i − e_i·v` over basis pairs.
pub fn commutator_subspace(m: &Bimodule, a: &FiniteAlgebra) -> Subspace {
    let mut rref = Rref::new(m.field(), m.dim());
    let neg = a.field().from_i64(-1);
    for v in 0..m.dim() {
        for i in 0..a.dim() {
            rref.insert(&axpy(m.right_basis(v, i), &neg, m.left_basis(i, v)));
        }
    }
    Subspace::from_rref(rref)
}

/// `M_n(A)` with basis `E_rc ⊗ a_k` at index `(r·n + c)·dim A + k`.
pub fn matrix_algebra(a: &FiniteAlgebra, n: usize) -> Result<FiniteAlgebra> {
    if n == 0 {
        return Err(Error::ZeroSize);
    }
    let d = a.dim();
    let idx = |r: usize, c: usize, k: usize| (r * n + c) * d + k;
    let total = n * n * d;
    let mut labels = Vec::with_capacity(total);
    for r in 0..n {
        for c in 0..n {
            for k in 0..d {
                labels.push(format!("E{}{}⊗{}", r + 1, c + 1, a.labels[k]));
            }
        }
    }
    let mut products = vec![vec![Vec::new(); total]; total];
    for r in 0..n {
        for c in 0..n {
            for k in 0..d {
                for c2 in 0..n {
                    for k2 in 0..d {
                        products[idx(r, c, k)][idx(c, c2, k2)] =
                            a.mul_basis(k, k2).iter().map(|(l, v)| (idx(r, c2, *l), v.clone())).collect();
                    }
                }
            }
        }
    }
    let mut unit = Vec::new();
    for r in 0..n {
        for (k, v) in a.unit_sparse() {
            unit.push((idx(r, r, k), v));
        }
    }
    FiniteAlgebra::from_products(a.field(), labels, products, unit)
}

/// `(M_n(A), B, ε_*)` with `ε_*(β) = Σ_r E_rr ⊗ ε(β)`; `I_n(B)` is
/// identified with `B`.
pub fn matrix_triple(t: &Triple, n: usize) -> Result<Triple> {
    let a = matrix_algebra(&t.a, n)?;
    let d = t.a.dim();
    let cols = (0..t.b.dim())
        .map(|j| {
            let mut v: SparseVec = Vec::new();
            for r in 0..n {
                for (k, x) in t.eps.image_basis(j) {
                    v.push(((r * n + r) * d + k, x.clone()));
                }
            }
            v
        })
        .collect();
    let eps = AlgebraMorphism::from_columns(t.field(), a.dim(), cols);
    Triple::new(a, t.b.clone(), eps)
}

/// `M_n(M)` as an `M_n(A)`-bimodule, basis `E_rc ⊗ v_m` at `(r·n + c)·dim M + m`.
pub fn matrix_bimodule(m: &Bimodule, n: usize) -> Result<Bimodule> {
    if n == 0 {
        return Err(Error::ZeroSize);
    }
    let f = m.field();
    let (d, dm) = (m.algebra_dim(), m.dim());
    let total_m = n * n * dm;
    let midx = |r: usize, c: usize, v: usize| (r * n + c) * dm + v;
    let mut left = Vec::with_capacity(n * n * d);
    let mut right = Vec::with_capacity(n * n * d);
    for r in 0..n {
        for c in 0..n {
            for k in 0..d {
                // (E_rc ⊗ a_k)(E_{c c2} ⊗ v) = E_{r c2} ⊗ a_k v
                let mut l = Vec::new();
                // (E_{r2 r} ⊗ v)(E_rc ⊗ a_k) = E_{r2 c} ⊗ v a_k
                let mut rt = Vec::new();
                for x in 0..n {
                    for v in 0..dm {
                        for (w, s) in m.left_basis(k, v) {
                            l.push((midx(r, x, *w), midx(c, x, v), s.clone()));
                        }
                        for (w, s) in m.right_basis(v, k) {
                            rt.push((midx(x, c, *w), midx(x, r, v), s.clone()));
                        }
                    }
                }
                left.push(SparseMatrix::from_triplets(f, total_m, total_m, l)?.to_dense());
                right.push(SparseMatrix::from_triplets(f, total_m, total_m, rt)?.to_dense());
            }
        }
    }
    Bimodule::new(f, total_m, left, right)
}

/// The corner triple `(eAe, B, ε_e)` together with the embedding of its
/// basis into `A`.
#[derive(Clone, Debug)]
pub struct Corner {
    pub triple: Triple,
    pub idempotent: SparseVec,
    /// `basis[s]` is the `s`-th basis vector of `eAe`, as an element of `A`.
    pub basis: Vec<SparseVec>,
}

impl Corner {
    /// Coordinates in `eAe` of an element of `A` lying in `eAe`.
    pub fn coordinates(&self, x: &[(usize, Scalar)]) -> SparseVec {
        let f = self.triple.field();
        self.basis
            .iter()
            .enumerate()
            .filter_map(|(s, b)| {
                let c = entry(x, b[0].0).cloned().unwrap_or_else(|| f.zero());
                (!c.is_zero()).then_some((s, c))
            })
            .collect()
    }

    pub fn embed(&self, y: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Accumulator::new();
        for (s, c) in y {
            acc.add_scaled(&self.basis[*s], c);
        }
        acc.finish()
    }
}

pub fn corner_triple(t: &Triple, e: &[(usize, Scalar)]) -> Result<Corner> {
    let a = &t.a;
    if a.mul(e, e) != e {
        return Err(Error::NotIdempotent);
    }
    let d = a.dim();
    let mut full = Rref::new(a.field(), d);
    for i in 0..d {
        let ae = a.mul(&a.basis(i), e);
        for j in 0..d {
            full.insert(&a.mul(&ae, &a.basis(j)));
        }
    }
    if full.rank() != d {
        return Err(Error::NotFullIdempotent);
    }
    let sandwich = |x: &[(usize, Scalar)]| a.mul(&a.mul(e, x), e);
    let span = Subspace::span(a.field(), d, &(0..d).map(|i| sandwich(&a.basis(i))).collect::<Vec<_>>());
    let basis = span.basis().to_vec();
    let mut corner = Corner {
        triple: Triple::over_ground(FiniteAlgebra::ground(a.field())),
        idempotent: e.to_vec(),
        basis,
    };
    let k = corner.basis.len();
    let labels: Vec<String> = corner.basis.iter().map(|b| a.element_label(b)).collect();
    let products = (0..k)
        .map(|s| (0..k).map(|u| corner.coordinates(&a.mul(&corner.basis[s], &corner.basis[u]))).collect())
        .collect();
    let unit = corner.coordinates(e);
    let algebra = FiniteAlgebra::from_products(a.field(), labels, products, unit)?;
    let cols = (0..t.b.dim()).map(|j| corner.coordinates(&sandwich(t.eps.image_basis(j)))).collect();
    let eps = AlgebraMorphism::from_columns(a.field(), k, cols);
    corner.triple = Triple::new(algebra, t.b.clone(), eps)?;
    Ok(corner)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Scalar {
        Field::Rational.from_i64(n)
    }

    fn dual() -> FiniteAlgebra {
        let f = Field::Rational;
        let products = vec![vec![vec![(0, q(1))], vec![(1, q(1))]], vec![vec![(1, q(1))], vec![]]];
        FiniteAlgebra::from_products(f, vec!["1".into(), "x".into()], products, vec![(0, q(1))]).unwrap()
    }

    #[test]
    fn ground_and_dual_numbers_validate() {
        assert!(validate_algebra(&FiniteAlgebra::ground(Field::Rational)).passed());
        assert!(validate_algebra(&dual()).passed());
        assert!(validate_triple(&Triple::identity(dual())).passed());
    }

    #[test]
    fn wrong_unit_is_reported() {
        let f = Field::Rational;
        // e0 e0 = e0, everything else zero, unit claimed at e1
        let products = vec![vec![vec![(0, q(1))], vec![]], vec![vec![], vec![]]];
        let a = FiniteAlgebra::from_products(f, vec!["a".into(), "b".into()], products, vec![(1, q(1))]).unwrap();
        let r = validate_algebra(&a);
        assert!(!r.passed());
        assert!(r.failures().any(|c| c.name == "unit law"));
    }

    #[test]
    fn matrix_algebra_center_and_commutators() {
        let m2 = matrix_algebra(&FiniteAlgebra::ground(Field::Rational), 2).unwrap();
        assert!(validate_algebra(&m2).passed());
        assert_eq!(center(&m2).dim(), 1);
        assert!(center(&m2).contains(&m2.unit_sparse()));
        assert_eq!(commutator_subspace(&Bimodule::regular(&m2), &m2).dim(), 3);
        assert_eq!(center(&dual()).dim(), 2);
    }

    #[test]
    fn matrix_triple_dims() {
        let t = Triple::identity(dual());
        let t2 = matrix_triple(&t, 2).unwrap();
        assert_eq!((t2.a.dim(), t2.b.dim()), (8, 2));
        assert!(validate_triple(&t2).passed());
        let m2 = matrix_bimodule(&Bimodule::regular(&t.a), 2).unwrap();
        assert!(validate_bimodule(&m2, &t2).passed());
        assert_eq!(m2, Bimodule::regular(&t2.a));
        assert!(matches!(matrix_triple(&t, 0), Err(Error::ZeroSize)));
    }

    #[test]
    fn corner_of_matrix_algebra() {
        let t = Triple::over_ground(matrix_algebra(&FiniteAlgebra::ground(Field::Rational), 2).unwrap());
        let c = corner_triple(&t, &[(0, q(1))]).unwrap();
        assert_eq!(c.triple.a.dim(), 1);
        assert!(validate_triple(&c.triple).passed());
        assert!(matches!(corner_triple(&t, &[]), Err(Error::NotFullIdempotent)));
        assert!(matches!(corner_triple(&t, &[(0, q(2))]), Err(Error::NotIdempotent)));
        let whole = corner_triple(&t, &t.a.unit_sparse()).unwrap();
        assert_eq!(whole.triple.a.dim(), 4);
    }
}
