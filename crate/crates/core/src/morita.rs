//! Morita equivalence of triples: data, validation, constructions, and the
//! explicit chain maps `ψ`, `φ` with presimplicial homotopies `h`, `l`.

use crate::algebra::{
    corner_triple, matrix_triple, validate_bimodule, validate_bimodule_over, validate_morphism, validate_triple,
    AlgebraMorphism, Bimodule, FiniteAlgebra, Triple,
};
use crate::complexes::{add_tensor, build_complex, sign, BuildOptions, ChainComplex, ChainIndexScheme, ComplexKind};
use crate::error::{Error, Result};
use crate::linalg::{
    induced_quotient_map, rank, solve_in_span, tensor_expand, Accumulator, QuotientSpace, SparseMatrix, SparseVec,
    Subspace,
};
use crate::parallel::map_range;
use crate::report::Report;
use crate::scalar::{Field, Scalar};

/// Morita data from `source = (A, B, ε)` to `target = (A', B', ε')`.
///
/// `p` is an `(A, A')`-bimodule and `q` an `(A', A)`-bimodule. `f` and `g` are
/// stored on the unquotiented tensor spaces: column `i·dim Q + j` of `f` is
/// `f(p_i ⊗ q_j)`, column `j·dim P + i` of `g` is `g(q_j ⊗ p_i)`.
#[derive(Clone, Debug)]
pub struct MoritaData {
    pub source: Triple,
    pub target: Triple,
    pub p: Bimodule,
    pub q: Bimodule,
    pub f: SparseMatrix,
    pub g: SparseMatrix,
    pub eta: AlgebraMorphism,
    pub p_dual: Vec<SparseVec>,
    pub q_dual: Vec<SparseVec>,
    pub pprime_dual: Vec<SparseVec>,
    pub qprime_dual: Vec<SparseVec>,
}

impl MoritaData {
    pub fn field(&self) -> Field {
        self.source.field()
    }

    pub fn f_apply(&self, p: &[(usize, Scalar)], q: &[(usize, Scalar)]) -> SparseVec {
        bilinear(&self.f, self.q.dim(), p, q)
    }

    pub fn g_apply(&self, q: &[(usize, Scalar)], p: &[(usize, Scalar)]) -> SparseVec {
        bilinear(&self.g, self.p.dim(), q, p)
    }

    pub fn eta_inverse(&self) -> Result<AlgebraMorphism> {
        let inv = self
            .eta
            .matrix()
            .inverse()
            .ok_or_else(|| Error::Invalid("η is not invertible".into()))?;
        Ok(AlgebraMorphism::new(inv))
    }

    /// `P = Q = A`, `f = g =` multiplication, dual bases `{1}`.
    pub fn identity(t: &Triple) -> Self {
        let a = &t.a;
        let f = multiplication_matrix(a);
        let one = vec![a.unit_sparse()];
        MoritaData {
            source: t.clone(),
            target: t.clone(),
            p: Bimodule::regular(a),
            q: Bimodule::regular(a),
            f: f.clone(),
            g: f,
            eta: AlgebraMorphism::identity(a.field(), t.b.dim()),
            p_dual: one.clone(),
            q_dual: one.clone(),
            pprime_dual: one.clone(),
            qprime_dual: one,
        }
    }
}

fn multiplication_matrix(a: &FiniteAlgebra) -> SparseMatrix {
    let d = a.dim();
    let cols = (0..d * d).map(|c| a.mul_basis(c / d, c % d).clone()).collect();
    SparseMatrix::from_columns(a.field(), d, cols)
}

fn bilinear(m: &SparseMatrix, inner: usize, x: &[(usize, Scalar)], y: &[(usize, Scalar)]) -> SparseVec {
    let mut acc = Accumulator::new();
    for (i, a) in x {
        for (j, b) in y {
            acc.add_scaled(m.column(i * inner + j), &(a * b));
        }
    }
    acc.finish()
}

fn sum_pairs(values: impl Iterator<Item = SparseVec>) -> SparseVec {
    let mut acc = Accumulator::new();
    for v in values {
        for (i, x) in v {
            acc.add(i, &x);
        }
    }
    acc.finish()
}

/// `X ⊗_A Y` realized as a quotient of `X ⊗ Y` (index `x·dim Y + y`).
#[derive(Clone, Debug)]
pub struct TensorOver {
    pub dim_x: usize,
    pub dim_y: usize,
    pub quotient: QuotientSpace,
}

impl TensorOver {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    /// Class of `x ⊗ y`.
    pub fn class_of(&self, x: &[(usize, Scalar)], y: &[(usize, Scalar)]) -> SparseVec {
        let f = self.quotient.field();
        self.quotient.project(&tensor_expand(f, &[x, y], &[self.dim_x, self.dim_y]))
    }

    /// Basis tensor `(x, y)` lifting quotient basis element `k`.
    pub fn lift_pair(&self, k: usize) -> (usize, usize) {
        let c = self.quotient.lift_coord(k);
        (c / self.dim_y, c % self.dim_y)
    }
}

/// Quotient of `X ⊗ Y` by `x·a ⊗ y − x ⊗ a·y`, using the right action on `x`
/// and the left action on `y`.
pub fn tensor_over_algebra(x: &Bimodule, y: &Bimodule, a: &FiniteAlgebra) -> Result<TensorOver> {
    if x.right_algebra_dim() != a.dim() || y.algebra_dim() != a.dim() {
        return Err(Error::DimensionMismatch { context: "tensor over algebra", left: x.right_algebra_dim(), right: a.dim() });
    }
    let f = a.field();
    let (dx, dy) = (x.dim(), y.dim());
    let neg = f.from_i64(-1);
    let mut relations = Vec::with_capacity(dx * dy * a.dim());
    for xi in 0..dx {
        for k in 0..a.dim() {
            let xa = x.right_basis(xi, k);
            for yj in 0..dy {
                let ay = y.left_basis(k, yj);
                let lhs = tensor_expand(f, &[xa, &[(yj, f.one())]], &[dx, dy]);
                let rhs = tensor_expand(f, &[&[(xi, f.one())], ay], &[dx, dy]);
                let r = crate::linalg::axpy(&lhs, &neg, &rhs);
                if !r.is_empty() {
                    relations.push(r);
                }
            }
        }
    }
    let quotient = QuotientSpace::new(Subspace::span(f, dx * dy, &relations));
    Ok(TensorOver { dim_x: dx, dim_y: dy, quotient })
}

/// Matrices of a left action `left` and right action `right` on the
/// unquotiented space, pushed to the quotient.
fn quotient_bimodule(
    quotient: &QuotientSpace,
    left_dim: usize,
    right_dim: usize,
    left: impl Fn(usize, usize) -> SparseVec + Sync,
    right: impl Fn(usize, usize) -> SparseVec + Sync,
) -> Result<Bimodule> {
    let f = quotient.field();
    let dim = quotient.dim();
    let project = |v: SparseVec| quotient.project(&v);
    let l: Vec<Vec<SparseVec>> = (0..left_dim)
        .map(|i| (0..dim).map(|k| project(left(i, quotient.lift_coord(k)))).collect())
        .collect();
    let r: Vec<Vec<SparseVec>> = (0..right_dim)
        .map(|i| (0..dim).map(|k| project(right(i, quotient.lift_coord(k)))).collect())
        .collect();
    Bimodule::from_action_columns(f, dim, &l, &r)
}

/// `Q ⊗_A M ⊗_A P` as an `A'`-bimodule, unquotiented index `(q·dim M + m)·dim P + p`.
#[derive(Clone, Debug)]
pub struct InducedModule {
    pub module: Bimodule,
    pub quotient: QuotientSpace,
    pub dim_q: usize,
    pub dim_m: usize,
    pub dim_p: usize,
}

impl InducedModule {
    pub fn class_of(&self, q: &[(usize, Scalar)], m: &[(usize, Scalar)], p: &[(usize, Scalar)]) -> SparseVec {
        let f = self.quotient.field();
        self.quotient.project(&tensor_expand(f, &[q, m, p], &[self.dim_q, self.dim_m, self.dim_p]))
    }

    /// Basis tensor `(q, m, p)` lifting quotient basis element `k`.
    pub fn lift_triple(&self, k: usize) -> (usize, usize, usize) {
        let c = self.quotient.lift_coord(k);
        (c / (self.dim_m * self.dim_p), (c / self.dim_p) % self.dim_m, c % self.dim_p)
    }
}

pub fn induced_coefficients(d: &MoritaData, m: &Bimodule) -> Result<InducedModule> {
    let a = &d.source.a;
    if m.algebra_dim() != a.dim() || m.right_algebra_dim() != a.dim() {
        return Err(Error::DimensionMismatch { context: "coefficients over source", left: m.algebra_dim(), right: a.dim() });
    }
    let f = d.field();
    let (dq, dm, dp) = (d.q.dim(), m.dim(), d.p.dim());
    let radices = [dq, dm, dp];
    let unit = |i: usize| vec![(i, f.one())];
    let neg = f.from_i64(-1);
    let mut relations = Vec::new();
    for qi in 0..dq {
        for mi in 0..dm {
            for pi in 0..dp {
                for k in 0..a.dim() {
                    let r1 = crate::linalg::axpy(
                        &tensor_expand(f, &[d.q.right_basis(qi, k), &unit(mi), &unit(pi)], &radices),
                        &neg,
                        &tensor_expand(f, &[&unit(qi), m.left_basis(k, mi), &unit(pi)], &radices),
                    );
                    let r2 = crate::linalg::axpy(
                        &tensor_expand(f, &[&unit(qi), m.right_basis(mi, k), &unit(pi)], &radices),
                        &neg,
                        &tensor_expand(f, &[&unit(qi), &unit(mi), d.p.left_basis(k, pi)], &radices),
                    );
                    relations.extend([r1, r2].into_iter().filter(|r| !r.is_empty()));
                }
            }
        }
    }
    let quotient = QuotientSpace::new(Subspace::span(f, dq * dm * dp, &relations));
    let split = |c: usize| (c / (dm * dp), (c / dp) % dm, c % dp);
    let ap = d.target.a.dim();
    let module = quotient_bimodule(
        &quotient,
        ap,
        ap,
        |i, c| {
            let (qi, mi, pi) = split(c);
            tensor_expand(f, &[d.q.left_basis(i, qi), &unit(mi), &unit(pi)], &radices)
        },
        |i, c| {
            let (qi, mi, pi) = split(c);
            tensor_expand(f, &[&unit(qi), &unit(mi), d.p.right_basis(pi, i)], &radices)
        },
    )?;
    Ok(InducedModule { module, quotient, dim_q: dq, dim_m: dm, dim_p: dp })
}

pub fn validate_morita(d: &MoritaData) -> Report {
    let mut report = Report::new("morita");
    let (a, ap) = (&d.source.a, &d.target.a);
    let f = d.field();
    let mut sub = validate_triple(&d.source);
    sub.title = "source".into();
    report.extend(sub);
    let mut sub = validate_triple(&d.target);
    sub.title = "target".into();
    report.extend(sub);
    let mut sub = validate_bimodule_over(&d.p, a, ap);
    sub.title = "P".into();
    report.extend(sub);
    let mut sub = validate_bimodule_over(&d.q, ap, a);
    sub.title = "Q".into();
    report.extend(sub);
    if !report.passed() {
        return report;
    }
    let shapes = d.f.rows() == a.dim()
        && d.f.cols() == d.p.dim() * d.q.dim()
        && d.g.rows() == ap.dim()
        && d.g.cols() == d.q.dim() * d.p.dim()
        && d.eta.source_dim() == d.source.b.dim()
        && d.eta.target_dim() == d.target.b.dim();
    report.check("shapes", shapes, format!("f: {}x{}, g: {}x{}", d.f.rows(), d.f.cols(), d.g.rows(), d.g.cols()));
    if !shapes {
        return report;
    }
    let unit = |i: usize| vec![(i, f.one())];
    let (dp, dq) = (d.p.dim(), d.q.dim());

    // f: P ⊗_{A'} Q → A
    let mut bad_bal = Vec::new();
    let mut bad_lin = Vec::new();
    for pi in 0..dp {
        for qj in 0..dq {
            let val = d.f_apply(&unit(pi), &unit(qj));
            for k in 0..ap.dim() {
                if d.f_apply(d.p.right_basis(pi, k), &unit(qj)) != d.f_apply(&unit(pi), d.q.left_basis(k, qj)) {
                    bad_bal.push(format!("(p{pi}, {}, q{qj})", ap.labels()[k]));
                }
            }
            for i in 0..a.dim() {
                if d.f_apply(d.p.left_basis(i, pi), &unit(qj)) != a.mul(&unit(i), &val)
                    || d.f_apply(&unit(pi), d.q.right_basis(qj, i)) != a.mul(&val, &unit(i))
                {
                    bad_lin.push(format!("(p{pi}, q{qj}, {})", a.labels()[i]));
                }
            }
        }
    }
    report.violations("f balanced over A'", &bad_bal);
    report.violations("f is an A-bimodule map", &bad_lin);

    // g: Q ⊗_A P → A'
    let mut bad_bal = Vec::new();
    let mut bad_lin = Vec::new();
    for qj in 0..dq {
        for pi in 0..dp {
            let val = d.g_apply(&unit(qj), &unit(pi));
            for k in 0..a.dim() {
                if d.g_apply(d.q.right_basis(qj, k), &unit(pi)) != d.g_apply(&unit(qj), d.p.left_basis(k, pi)) {
                    bad_bal.push(format!("(q{qj}, {}, p{pi})", a.labels()[k]));
                }
            }
            for i in 0..ap.dim() {
                if d.g_apply(d.q.left_basis(i, qj), &unit(pi)) != ap.mul(&unit(i), &val)
                    || d.g_apply(&unit(qj), d.p.right_basis(pi, i)) != ap.mul(&val, &unit(i))
                {
                    bad_lin.push(format!("(q{qj}, p{pi}, {})", ap.labels()[i]));
                }
            }
        }
    }
    report.violations("g balanced over A", &bad_bal);
    report.violations("g is an A'-bimodule map", &bad_lin);

    for (name, x, y, alg, map, target_dim) in [
        ("f bijective on P ⊗_A' Q", &d.p, &d.q, ap, &d.f, a.dim()),
        ("g bijective on Q ⊗_A P", &d.q, &d.p, a, &d.g, ap.dim()),
    ] {
        match (tensor_over_algebra(x, y, alg), rank(map)) {
            (Ok(t), Ok(r)) => {
                let ok = t.dim() == target_dim && r == target_dim;
                report.check(name, ok, format!("tensor dim {}, rank {}, target dim {}", t.dim(), r, target_dim));
            }
            (Err(e), _) | (_, Err(e)) => report.check(name, false, e.to_string()),
        }
    }

    let pairs_ok = d.p_dual.len() == d.q_dual.len() && d.pprime_dual.len() == d.qprime_dual.len();
    report.check("dual families paired", pairs_ok, format!("s = {}, t = {}", d.p_dual.len(), d.pprime_dual.len()));
    if pairs_ok {
        let sf = sum_pairs(d.p_dual.iter().zip(&d.q_dual).map(|(p, q)| d.f_apply(p, q)));
        report.check("f(Σ p_j ⊗ q_j) = 1", sf == a.unit_sparse(), a.element_label(&sf));
        let sg = sum_pairs(d.qprime_dual.iter().zip(&d.pprime_dual).map(|(q, p)| d.g_apply(q, p)));
        report.check("g(Σ q'_m ⊗ p'_m) = 1", sg == ap.unit_sparse(), ap.element_label(&sg));
    }

    // q1 f(p1 ⊗ q2) = g(q1 ⊗ p1) q2 and p1 g(q1 ⊗ p2) = f(p1 ⊗ q1) p2
    let mut bad_q = Vec::new();
    let mut bad_p = Vec::new();
    for q1 in 0..dq {
        for p1 in 0..dp {
            let gv = d.g_apply(&unit(q1), &unit(p1));
            for q2 in 0..dq {
                let lhs = d.q.act_right(&unit(q1), &d.f_apply(&unit(p1), &unit(q2)));
                let rhs = d.q.act_left(&gv, &unit(q2));
                if lhs != rhs {
                    bad_q.push(format!("(q{q1}, p{p1}, q{q2})"));
                }
            }
        }
    }
    for p1 in 0..dp {
        for q1 in 0..dq {
            let fv = d.f_apply(&unit(p1), &unit(q1));
            for p2 in 0..dp {
                let lhs = d.p.act_right(&unit(p1), &d.g_apply(&unit(q1), &unit(p2)));
                let rhs = d.p.act_left(&fv, &unit(p2));
                if lhs != rhs {
                    bad_p.push(format!("(p{p1}, q{q1}, p{p2})"));
                }
            }
        }
    }
    report.violations("q1·f(p1⊗q2) = g(q1⊗p1)·q2", &bad_q);
    report.violations("p1·g(q1⊗p2) = f(p1⊗q1)·p2", &bad_p);

    let mut sub = validate_morphism("η", &d.eta, &d.source.b, &d.target.b);
    let invertible = d.eta.matrix().inverse().is_some();
    sub.check("invertible", invertible, if invertible { "ok" } else { "η is singular" });
    report.extend(sub);
    if !report.checks.iter().filter(|c| c.name.starts_with("η")).all(|c| c.passed) {
        return report;
    }

    let mut bad_p = Vec::new();
    let mut bad_q = Vec::new();
    for al in 0..d.source.b.dim() {
        let e = d.source.eps.image_basis(al);
        let e2 = d.target.eps.apply(&d.eta.apply(&unit(al)));
        for pi in 0..dp {
            if d.p.act_left(e, &unit(pi)) != d.p.act_right(&unit(pi), &e2) {
                bad_p.push(format!("({}, p{pi})", d.source.b.labels()[al]));
            }
        }
        for qj in 0..dq {
            if d.q.act_right(&unit(qj), e) != d.q.act_left(&e2, &unit(qj)) {
                bad_q.push(format!("({}, q{qj})", d.source.b.labels()[al]));
            }
        }
    }
    report.violations("ε(α)·p = p·ε'(η(α))", &bad_p);
    report.violations("q·ε(α) = ε'(η(α))·q", &bad_q);
    report
}

/// Row vectors over `A` and column vectors, between `t` and its `n × n` matrix triple.
pub fn standard_matrix_morita(t: &Triple, n: usize) -> Result<MoritaData> {
    let target = matrix_triple(t, n)?;
    let a = &t.a;
    let f = a.field();
    let d = a.dim();
    let big = n * n * d;
    let vec_idx = |c: usize, k: usize| c * d + k;
    let mat_idx = |r: usize, c: usize, k: usize| (r * n + c) * d + k;
    let shift = |v: &SparseVec, pos: usize| -> SparseVec { v.iter().map(|(k, x)| (vec_idx(pos, *k), x.clone())).collect() };

    // P: row(c, a_k). e_i·row = row(c, e_i a_k); row(c, x)·(E_{c c'} ⊗ y) = row(c', x y)
    let mut p_left = vec![vec![Vec::new(); n * d]; d];
    let mut q_right = vec![vec![Vec::new(); n * d]; d];
    for i in 0..d {
        for c in 0..n {
            for k in 0..d {
                p_left[i][vec_idx(c, k)] = shift(a.mul_basis(i, k), c);
                q_right[i][vec_idx(c, k)] = shift(a.mul_basis(k, i), c);
            }
        }
    }
    let mut p_right = vec![vec![Vec::new(); n * d]; big];
    let mut q_left = vec![vec![Vec::new(); n * d]; big];
    for r in 0..n {
        for c in 0..n {
            for y in 0..d {
                for k in 0..d {
                    // row(r, a_k)·(E_rc ⊗ y) = row(c, a_k y)
                    p_right[mat_idx(r, c, y)][vec_idx(r, k)] = shift(a.mul_basis(k, y), c);
                    // (E_rc ⊗ y)·col(c, a_k) = col(r, y a_k)
                    q_left[mat_idx(r, c, y)][vec_idx(c, k)] = shift(a.mul_basis(y, k), r);
                }
            }
        }
    }
    let p = Bimodule::from_action_columns(f, n * d, &p_left, &p_right)?;
    let q = Bimodule::from_action_columns(f, n * d, &q_left, &q_right)?;

    let dim_v = n * d;
    let mut f_cols = vec![Vec::new(); dim_v * dim_v];
    let mut g_cols = vec![Vec::new(); dim_v * dim_v];
    for c in 0..n {
        for x in 0..d {
            for r in 0..n {
                for y in 0..d {
                    if c == r {
                        f_cols[vec_idx(c, x) * dim_v + vec_idx(r, y)] = a.mul_basis(x, y).clone();
                    }
                    // g(col(r, x) ⊗ row(c, y)) = E_rc ⊗ x y
                    g_cols[vec_idx(r, x) * dim_v + vec_idx(c, y)] =
                        a.mul_basis(x, y).iter().map(|(k, v)| (mat_idx(r, c, *k), v.clone())).collect();
                }
            }
        }
    }
    let one = a.unit_sparse();
    Ok(MoritaData {
        source: t.clone(),
        target,
        p,
        q,
        f: SparseMatrix::from_columns(f, d, f_cols),
        g: SparseMatrix::from_columns(f, big, g_cols),
        eta: AlgebraMorphism::identity(f, t.b.dim()),
        p_dual: vec![shift(&one, 0)],
        q_dual: vec![shift(&one, 0)],
        pprime_dual: (0..n).map(|m| shift(&one, m)).collect(),
        qprime_dual: (0..n).map(|m| shift(&one, m)).collect(),
    })
}

/// Echelon basis of a subspace of `A` with coordinates read at the pivots.
struct SubBasis {
    basis: Vec<SparseVec>,
}

impl SubBasis {
    fn new(field: Field, ambient: usize, spanning: &[SparseVec]) -> Self {
        SubBasis { basis: Subspace::span(field, ambient, spanning).basis().to_vec() }
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn coords(&self, x: &[(usize, Scalar)]) -> SparseVec {
        self.basis
            .iter()
            .enumerate()
            .filter_map(|(s, b)| crate::linalg::entry(x, b[0].0).map(|c| (s, c.clone())))
            .collect()
    }
}

/// `P = Ae`, `Q = eA` between `t` and the corner triple `(eAe, B, ε_e)`.
pub fn corner_morita(t: &Triple, e: &[(usize, Scalar)]) -> Result<MoritaData> {
    let corner = corner_triple(t, e)?;
    let a = &t.a;
    let ap = &corner.triple.a;
    let f = a.field();
    let d = a.dim();
    let ae = SubBasis::new(f, d, &(0..d).map(|i| a.mul(&a.basis(i), e)).collect::<Vec<_>>());
    let ea = SubBasis::new(f, d, &(0..d).map(|i| a.mul(e, &a.basis(i))).collect::<Vec<_>>());
    let (dp, dq) = (ae.dim(), ea.dim());

    let p_left: Vec<Vec<SparseVec>> =
        (0..d).map(|i| (0..dp).map(|s| ae.coords(&a.mul(&a.basis(i), &ae.basis[s]))).collect()).collect();
    let p_right: Vec<Vec<SparseVec>> = (0..ap.dim())
        .map(|u| (0..dp).map(|s| ae.coords(&a.mul(&ae.basis[s], &corner.basis[u]))).collect())
        .collect();
    let q_left: Vec<Vec<SparseVec>> = (0..ap.dim())
        .map(|u| (0..dq).map(|s| ea.coords(&a.mul(&corner.basis[u], &ea.basis[s]))).collect())
        .collect();
    let q_right: Vec<Vec<SparseVec>> =
        (0..d).map(|i| (0..dq).map(|s| ea.coords(&a.mul(&ea.basis[s], &a.basis(i)))).collect()).collect();
    let p = Bimodule::from_action_columns(f, dp, &p_left, &p_right)?;
    let q = Bimodule::from_action_columns(f, dq, &q_left, &q_right)?;

    let f_cols: Vec<SparseVec> = (0..dp * dq).map(|c| a.mul(&ae.basis[c / dq], &ea.basis[c % dq])).collect();
    let g_cols: Vec<SparseVec> =
        (0..dq * dp).map(|c| corner.coordinates(&a.mul(&ea.basis[c / dp], &ae.basis[c % dp]))).collect();
    let fm = SparseMatrix::from_columns(f, d, f_cols);
    let gm = SparseMatrix::from_columns(f, ap.dim(), g_cols);

    let split = |sol: &SparseVec, inner: usize, left: &dyn Fn(usize) -> SparseVec, right: &dyn Fn(usize) -> SparseVec| {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (c, v) in sol {
            xs.push(crate::linalg::scale(&left(c / inner), v));
            ys.push(right(c % inner));
        }
        (xs, ys)
    };
    let unit = |i: usize| vec![(i, f.one())];
    let sol = solve_in_span(f, d, fm.columns(), &[a.unit_sparse()]).ok_or(Error::DualBasisInfeasible)?;
    let (p_dual, q_dual) = split(&sol[0], dq, &unit, &unit);
    let sol = solve_in_span(f, ap.dim(), gm.columns(), &[ap.unit_sparse()]).ok_or(Error::DualBasisInfeasible)?;
    let (qprime_dual, pprime_dual) = split(&sol[0], dp, &unit, &unit);
    Ok(MoritaData {
        source: t.clone(),
        target: corner.triple,
        p,
        q,
        f: fm,
        g: gm,
        eta: AlgebraMorphism::identity(f, t.b.dim()),
        p_dual,
        q_dual,
        pprime_dual,
        qprime_dual,
    })
}

/// Transitivity: `P = P_1 ⊗_{A'} P_2`, `Q = Q_2 ⊗_{A'} Q_1`, `η = η_2 η_1`.
pub fn compose_morita(d1: &MoritaData, d2: &MoritaData) -> Result<MoritaData> {
    if d1.target != d2.source {
        return Err(Error::EndpointMismatch);
    }
    let f = d1.field();
    let (a, ap, app) = (&d1.source.a, &d1.target.a, &d2.target.a);
    let pt = tensor_over_algebra(&d1.p, &d2.p, ap)?;
    let qt = tensor_over_algebra(&d2.q, &d1.q, ap)?;
    let unit = |i: usize| vec![(i, f.one())];
    let (dp1, dp2, dq2, dq1) = (d1.p.dim(), d2.p.dim(), d2.q.dim(), d1.q.dim());

    let p = quotient_bimodule(
        &pt.quotient,
        a.dim(),
        app.dim(),
        |i, c| tensor_expand(f, &[d1.p.left_basis(i, c / dp2), &unit(c % dp2)], &[dp1, dp2]),
        |i, c| tensor_expand(f, &[&unit(c / dp2), d2.p.right_basis(c % dp2, i)], &[dp1, dp2]),
    )?;
    let q = quotient_bimodule(
        &qt.quotient,
        app.dim(),
        a.dim(),
        |i, c| tensor_expand(f, &[d2.q.left_basis(i, c / dq1), &unit(c % dq1)], &[dq2, dq1]),
        |i, c| tensor_expand(f, &[&unit(c / dq1), d1.q.right_basis(c % dq1, i)], &[dq2, dq1]),
    )?;
    let (dp, dq) = (p.dim(), q.dim());
    let f_cols: Vec<SparseVec> = (0..dp * dq)
        .map(|c| {
            let (p1, p2) = pt.lift_pair(c / dq);
            let (q2, q1) = qt.lift_pair(c % dq);
            let inner = d2.f_apply(&unit(p2), &unit(q2));
            d1.f_apply(&d1.p.act_right(&unit(p1), &inner), &unit(q1))
        })
        .collect();
    let g_cols: Vec<SparseVec> = (0..dq * dp)
        .map(|c| {
            let (q2, q1) = qt.lift_pair(c / dp);
            let (p1, p2) = pt.lift_pair(c % dp);
            let inner = d1.g_apply(&unit(q1), &unit(p1));
            d2.g_apply(&d2.q.act_right(&unit(q2), &inner), &unit(p2))
        })
        .collect();
    let mut p_dual = Vec::new();
    let mut q_dual = Vec::new();
    for (p1, q1) in d1.p_dual.iter().zip(&d1.q_dual) {
        for (p2, q2) in d2.p_dual.iter().zip(&d2.q_dual) {
            p_dual.push(pt.class_of(p1, p2));
            q_dual.push(qt.class_of(q2, q1));
        }
    }
    let mut pprime_dual = Vec::new();
    let mut qprime_dual = Vec::new();
    for (p1, q1) in d1.pprime_dual.iter().zip(&d1.qprime_dual) {
        for (p2, q2) in d2.pprime_dual.iter().zip(&d2.qprime_dual) {
            pprime_dual.push(pt.class_of(p1, p2));
            qprime_dual.push(qt.class_of(q2, q1));
        }
    }
    Ok(MoritaData {
        source: d1.source.clone(),
        target: d2.target.clone(),
        p,
        q,
        f: SparseMatrix::from_columns(f, a.dim(), f_cols),
        g: SparseMatrix::from_columns(f, app.dim(), g_cols),
        eta: d2.eta.compose(&d1.eta)?,
        p_dual,
        q_dual,
        pprime_dual,
        qprime_dual,
    })
}

/// All tuples in `[0, base)^len`, lexicographic.
fn tuples(len: usize, base: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..base).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// Precomputed values for the chain maps of one Morita datum and one coefficient bimodule.
pub struct MoritaTransfer<'a> {
    pub data: &'a MoritaData,
    pub m: &'a Bimodule,
    pub induced: InducedModule,
    eta_inv: AlgebraMorphism,
    /// class of `q_j ⊗ v ⊗ p_j'`
    psi_m: Vec<Vec<Vec<SparseVec>>>,
    /// `g(q_j ⊗ a p_j')`
    psi_a: Vec<Vec<Vec<SparseVec>>>,
    /// `f(p'_m ⊗ q)` for basis `q`
    phi_left: Vec<Vec<SparseVec>>,
    /// `f(p ⊗ q'_m)` for basis `p`
    phi_right: Vec<Vec<SparseVec>>,
    /// `f(p'_m ⊗ a' q'_m')`
    phi_a: Vec<Vec<Vec<SparseVec>>>,
    /// `f(p_j ⊗ q'_m)`, `f(p'_m ⊗ q_j)`
    f_pqp: Vec<Vec<SparseVec>>,
    f_ppq: Vec<Vec<SparseVec>>,
    /// `g(q'_m ⊗ p_j)`, `g(q_j ⊗ p'_m)`
    g_qpp: Vec<Vec<SparseVec>>,
    g_qqp: Vec<Vec<SparseVec>>,
}

impl<'a> MoritaTransfer<'a> {
    pub fn new(data: &'a MoritaData, m: &'a Bimodule) -> Result<Self> {
        let induced = induced_coefficients(data, m)?;
        let eta_inv = data.eta_inverse()?;
        let f = data.field();
        let unit = |i: usize| vec![(i, f.one())];
        let (a, ap) = (&data.source.a, &data.target.a);
        let (s, t) = (data.p_dual.len(), data.pprime_dual.len());
        let (pd, qd, ppd, qpd) = (&data.p_dual, &data.q_dual, &data.pprime_dual, &data.qprime_dual);
        let psi_m = (0..s)
            .map(|j| (0..m.dim()).map(|v| (0..s).map(|j2| induced.class_of(&qd[j], &unit(v), &pd[j2])).collect()).collect())
            .collect();
        let psi_a = (0..s)
            .map(|j| {
                (0..a.dim())
                    .map(|x| (0..s).map(|j2| data.g_apply(&qd[j], &data.p.act_left(&unit(x), &pd[j2]))).collect())
                    .collect()
            })
            .collect();
        let phi_left = (0..t).map(|mm| (0..data.q.dim()).map(|q| data.f_apply(&ppd[mm], &unit(q))).collect()).collect();
        let phi_right = (0..data.p.dim()).map(|p| (0..t).map(|mm| data.f_apply(&unit(p), &qpd[mm])).collect()).collect();
        let phi_a = (0..t)
            .map(|mm| {
                (0..ap.dim())
                    .map(|x| (0..t).map(|m2| data.f_apply(&ppd[mm], &data.q.act_left(&unit(x), &qpd[m2]))).collect())
                    .collect()
            })
            .collect();
        let f_pqp = (0..s).map(|j| (0..t).map(|mm| data.f_apply(&pd[j], &qpd[mm])).collect()).collect();
        let f_ppq = (0..t).map(|mm| (0..s).map(|j| data.f_apply(&ppd[mm], &qd[j])).collect()).collect();
        let g_qpp = (0..t).map(|mm| (0..s).map(|j| data.g_apply(&qpd[mm], &pd[j])).collect()).collect();
        let g_qqp = (0..s).map(|j| (0..t).map(|mm| data.g_apply(&qd[j], &ppd[mm])).collect()).collect();
        Ok(MoritaTransfer {
            data,
            m,
            induced,
            eta_inv,
            psi_m,
            psi_a,
            phi_left,
            phi_right,
            phi_a,
            f_pqp,
            f_ppq,
            g_qpp,
            g_qqp,
        })
    }

    fn source_scheme(&self, n: usize) -> ChainIndexScheme {
        let t = &self.data.source;
        ChainIndexScheme::new(n, self.m.dim(), t.a.dim(), t.b.dim())
    }

    fn target_scheme(&self, n: usize) -> ChainIndexScheme {
        let t = &self.data.target;
        ChainIndexScheme::new(n, self.induced.module.dim(), t.a.dim(), t.b.dim())
    }

    /// `ψ_n: C_n((A,B,ε); M) → C_n((A',B',ε'); Q⊗M⊗P)`.
    pub fn psi(&self, n: usize) -> SparseMatrix {
        let f = self.data.field();
        let (src, tgt) = (self.source_scheme(n), self.target_scheme(n));
        let radices = tgt.radices();
        let s = self.data.p_dual.len();
        let js_all = tuples(n + 1, s);
        let columns = map_range(src.count(), |col| {
            let c = src.decode(col);
            let mut acc = Accumulator::new();
            for js in &js_all {
                let mut factors = Vec::with_capacity(radices.len());
                factors.push(self.psi_m[js[0]][c.m][js[1 % (n + 1)]].clone());
                for k in 1..=n {
                    factors.push(self.psi_a[js[k]][c.a[k - 1]][js[(k + 1) % (n + 1)]].clone());
                }
                factors.extend(c.b.iter().map(|&b| self.data.eta.image_basis(b).clone()));
                add_tensor(&mut acc, f, &factors, &radices, &f.one());
            }
            acc.finish()
        });
        SparseMatrix::from_columns(f, tgt.count(), columns)
    }

    /// `φ_n: C_n((A',B',ε'); Q⊗M⊗P) → C_n((A,B,ε); M)`.
    pub fn phi(&self, n: usize) -> SparseMatrix {
        let f = self.data.field();
        let (src, tgt) = (self.target_scheme(n), self.source_scheme(n));
        let radices = tgt.radices();
        let t = self.data.pprime_dual.len();
        let ms_all = tuples(n + 1, t);
        let columns = map_range(src.count(), |col| {
            let c = src.decode(col);
            let (qi, mi, pi) = self.induced.lift_triple(c.m);
            let mut acc = Accumulator::new();
            for ms in &ms_all {
                let left = &self.phi_left[ms[0]][qi];
                let right = &self.phi_right[pi][ms[1 % (n + 1)]];
                let mut factors = Vec::with_capacity(radices.len());
                factors.push(self.m.act_right(&self.m.act_left(left, &[(mi, f.one())]), right));
                for k in 1..=n {
                    factors.push(self.phi_a[ms[k]][c.a[k - 1]][ms[(k + 1) % (n + 1)]].clone());
                }
                factors.extend(c.b.iter().map(|&b| self.eta_inv.image_basis(b).clone()));
                add_tensor(&mut acc, f, &factors, &radices, &f.one());
            }
            acc.finish()
        });
        SparseMatrix::from_columns(f, tgt.count(), columns)
    }

    /// B-slots of degree `n + 1` with a unit row and column inserted at `i + 1`.
    fn insert_unit_slots(old: &[usize], n: usize, i: usize, unit_b: &SparseVec, f: Field) -> Vec<SparseVec> {
        let old_of = |k: usize| if k <= i { k } else { k - 1 };
        let old_slot = |k: usize, l: usize| {
            let (k, l) = (old_of(k), old_of(l));
            (k - 1) * n - (k - 1) * k / 2 + (l - k - 1)
        };
        let mut out = Vec::with_capacity((n + 1) * n / 2);
        for k in 1..=n + 1 {
            for l in k + 1..=n + 1 {
                if k == i + 1 || l == i + 1 {
                    out.push(unit_b.clone());
                } else {
                    out.push(vec![(old[old_slot(k, l)], f.one())]);
                }
            }
        }
        out
    }

    /// `h_i: C_n → C_{n+1}` on the source complex.
    pub fn h(&self, n: usize, i: usize) -> Result<SparseMatrix> {
        if i > n {
            return Err(Error::HomotopyIndex { index: i, degree: n });
        }
        let f = self.data.field();
        let a = &self.data.source.a;
        let unit_b = self.data.source.b.unit_sparse();
        let (src, tgt) = (self.source_scheme(n), self.source_scheme(n + 1));
        let radices = tgt.radices();
        let (s, t) = (self.data.p_dual.len(), self.data.pprime_dual.len());
        let js_all = tuples(i + 1, s);
        let ms_all = tuples(i + 1, t);
        let columns = map_range(src.count(), |col| {
            let c = src.decode(col);
            let unit = |x: usize| vec![(x, f.one())];
            let b_slots = Self::insert_unit_slots(&c.b, n, i, &unit_b, f);
            let mut acc = Accumulator::new();
            for js in &js_all {
                for ms in &ms_all {
                    let mut factors = Vec::with_capacity(radices.len());
                    factors.push(self.m.act_right(&unit(c.m), &self.f_pqp[js[0]][ms[0]]));
                    for k in 1..=i {
                        let x = a.mul(&self.f_ppq[ms[k - 1]][js[k - 1]], &unit(c.a[k - 1]));
                        factors.push(a.mul(&x, &self.f_pqp[js[k]][ms[k]]));
                    }
                    factors.push(self.f_ppq[ms[i]][js[i]].clone());
                    factors.extend(c.a[i..].iter().map(|&x| unit(x)));
                    factors.extend(b_slots.iter().cloned());
                    add_tensor(&mut acc, f, &factors, &radices, &f.one());
                }
            }
            acc.finish()
        });
        Ok(SparseMatrix::from_columns(f, tgt.count(), columns))
    }

    /// `l_i: C'_n → C'_{n+1}` on the target complex.
    pub fn l(&self, n: usize, i: usize) -> Result<SparseMatrix> {
        if i > n {
            return Err(Error::HomotopyIndex { index: i, degree: n });
        }
        let f = self.data.field();
        let ap = &self.data.target.a;
        let module = &self.induced.module;
        let unit_b = self.data.target.b.unit_sparse();
        let (src, tgt) = (self.target_scheme(n), self.target_scheme(n + 1));
        let radices = tgt.radices();
        let (s, t) = (self.data.p_dual.len(), self.data.pprime_dual.len());
        let js_all = tuples(i + 1, s);
        let ms_all = tuples(i + 1, t);
        let columns = map_range(src.count(), |col| {
            let c = src.decode(col);
            let unit = |x: usize| vec![(x, f.one())];
            let b_slots = Self::insert_unit_slots(&c.b, n, i, &unit_b, f);
            let mut acc = Accumulator::new();
            for js in &js_all {
                for ms in &ms_all {
                    let mut factors = Vec::with_capacity(radices.len());
                    factors.push(module.act_right(&unit(c.m), &self.g_qpp[ms[0]][js[0]]));
                    for k in 1..=i {
                        let x = ap.mul(&self.g_qqp[js[k - 1]][ms[k - 1]], &unit(c.a[k - 1]));
                        factors.push(ap.mul(&x, &self.g_qpp[ms[k]][js[k]]));
                    }
                    factors.push(self.g_qqp[js[i]][ms[i]].clone());
                    factors.extend(c.a[i..].iter().map(|&x| unit(x)));
                    factors.extend(b_slots.iter().cloned());
                    add_tensor(&mut acc, f, &factors, &radices, &f.one());
                }
            }
            acc.finish()
        });
        Ok(SparseMatrix::from_columns(f, tgt.count(), columns))
    }

    /// `H_n = Σ_i (−1)^i h_i`.
    pub fn big_h(&self, n: usize) -> Result<SparseMatrix> {
        self.alternating(n, |i| self.h(n, i))
    }

    /// `L_n = Σ_i (−1)^i l_i`.
    pub fn big_l(&self, n: usize) -> Result<SparseMatrix> {
        self.alternating(n, |i| self.l(n, i))
    }

    fn alternating(&self, n: usize, part: impl Fn(usize) -> Result<SparseMatrix>) -> Result<SparseMatrix> {
        let f = self.data.field();
        let mut total = part(0)?;
        for i in 1..=n {
            total = total.add(&part(i)?.scale(&sign(f, i)))?;
        }
        Ok(total)
    }
}

pub fn psi_chain_map(d: &MoritaData, m: &Bimodule, n: usize) -> Result<SparseMatrix> {
    Ok(MoritaTransfer::new(d, m)?.psi(n))
}

pub fn phi_chain_map(d: &MoritaData, m: &Bimodule, n: usize) -> Result<SparseMatrix> {
    Ok(MoritaTransfer::new(d, m)?.phi(n))
}

pub fn homotopy_h(d: &MoritaData, m: &Bimodule, n: usize, i: usize) -> Result<SparseMatrix> {
    MoritaTransfer::new(d, m)?.h(n, i)
}

pub fn homotopy_l(d: &MoritaData, m: &Bimodule, n: usize, i: usize) -> Result<SparseMatrix> {
    MoritaTransfer::new(d, m)?.l(n, i)
}

/// Which side of the homotopy identity carries the identity map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomotopyOrientation {
    /// `∂H + H∂ = id − φψ`
    IdMinusComposite,
    /// `∂H + H∂ = φψ − id`
    CompositeMinusId,
}

/// The orientation that holds for `H = Σ (−1)^i h_i` with the face conventions used here.
pub const HOMOTOPY_ORIENTATION: HomotopyOrientation = HomotopyOrientation::IdMinusComposite;

/// Evaluates `∂_{n+1} H_n + H_{n−1} ∂_n` against both candidate right-hand sides.
pub fn homotopy_residuals(
    complex: &ChainComplex,
    homotopy: &dyn Fn(usize) -> Result<SparseMatrix>,
    composite: &SparseMatrix,
    n: usize,
) -> Result<(bool, bool)> {
    let f = complex.field();
    let mut lhs = complex.boundary(n + 1)?.mul(&homotopy(n)?)?;
    if n > 0 {
        lhs = lhs.add(&homotopy(n - 1)?.mul(complex.boundary(n)?)?)?;
    }
    let id = SparseMatrix::identity(f, complex.dim(n));
    let id_minus = id.sub(composite)?;
    Ok((lhs == id_minus, lhs == id_minus.scale(&f.from_i64(-1))))
}

/// Largest chain dimension for which induced homology maps are compared explicitly.
pub const INDUCED_MAP_LIMIT: usize = 4096;

/// Homology dims on both sides, chain-map identities for `ψ`, `φ`, homotopy
/// identities for `h`, `l`, and the induced maps on homology.
pub fn verify_morita_invariance(d: &MoritaData, m: &Bimodule, max_n: usize, opts: BuildOptions) -> Result<Report> {
    let mut report = Report::new("morita invariance");
    report.extend(validate_morita(d));
    let transfer = MoritaTransfer::new(d, m)?;
    let mut sub = validate_bimodule(&transfer.induced.module, &d.target);
    sub.title = "Q⊗M⊗P".into();
    report.extend(sub);
    if !report.passed() {
        return Ok(report);
    }
    let opts = BuildOptions { max_degree: max_n, ..opts };
    let src = build_complex(ComplexKind::Secondary, &d.source, m, opts)?;
    let tgt = build_complex(ComplexKind::Secondary, &d.target, &transfer.induced.module, opts)?;
    let hs = src.homology_dims()?;
    let ht = tgt.homology_dims()?;
    report.check("homology dims agree", hs == ht, format!("source {hs:?}, target {ht:?}"));

    let psi: Vec<SparseMatrix> = (0..=max_n).map(|n| transfer.psi(n)).collect();
    let phi: Vec<SparseMatrix> = (0..=max_n).map(|n| transfer.phi(n)).collect();
    for n in 1..=max_n {
        let ok = psi[n - 1].mul(src.boundary(n)?)? == tgt.boundary(n)?.mul(&psi[n])?;
        report.check(format!("ψ chain map, degree {n}"), ok, "ψ∂ = ∂'ψ");
        let ok = phi[n - 1].mul(tgt.boundary(n)?)? == src.boundary(n)?.mul(&phi[n])?;
        report.check(format!("φ chain map, degree {n}"), ok, "φ∂' = ∂φ");
    }
    let pinned = |(id_minus, minus_id): (bool, bool)| match HOMOTOPY_ORIENTATION {
        HomotopyOrientation::IdMinusComposite => (id_minus, minus_id),
        HomotopyOrientation::CompositeMinusId => (minus_id, id_minus),
    };
    for n in 0..max_n {
        let phipsi = phi[n].mul(&psi[n])?;
        let (ok, _) = pinned(homotopy_residuals(&src, &|k| transfer.big_h(k), &phipsi, n)?);
        report.check(
            format!("h homotopy, degree {n}"),
            ok,
            if ok { "∂H + H∂ = id − φψ" } else { "pinned orientation fails" },
        );
        let psiphi = psi[n].mul(&phi[n])?;
        let (ok, _) = pinned(homotopy_residuals(&tgt, &|k| transfer.big_l(k), &psiphi, n)?);
        report.check(
            format!("l homotopy, degree {n}"),
            ok,
            if ok { "∂'L + L∂' = id − ψφ" } else { "pinned orientation fails" },
        );
    }
    for n in 0..max_n {
        if tgt.dim(n + 1) > INDUCED_MAP_LIMIT || src.dim(n + 1) > INDUCED_MAP_LIMIT {
            continue;
        }
        let (hs_n, ht_n) = (src.homology(n)?, tgt.homology(n)?);
        let psi_h = induced_quotient_map(&psi[n], &hs_n.cycles, &hs_n.boundaries, &ht_n.cycles, &ht_n.boundaries)?;
        let phi_h = induced_quotient_map(&phi[n], &ht_n.cycles, &ht_n.boundaries, &hs_n.cycles, &hs_n.boundaries)?;
        let f = d.field();
        let ok = phi_h.mul(&psi_h)? == SparseMatrix::identity(f, hs_n.dim)
            && psi_h.mul(&phi_h)? == SparseMatrix::identity(f, ht_n.dim);
        report.check(format!("ψ, φ inverse on H_{n}"), ok, format!("dim {}", hs_n.dim));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::matrix_algebra;

    fn q(n: i64) -> Scalar {
        Field::Rational.from_i64(n)
    }

    fn dual() -> FiniteAlgebra {
        let products = vec![vec![vec![(0, q(1))], vec![(1, q(1))]], vec![vec![(1, q(1))], vec![]]];
        FiniteAlgebra::from_products(Field::Rational, vec!["1".into(), "x".into()], products, vec![(0, q(1))]).unwrap()
    }

    #[test]
    fn identity_data_validates() {
        let t = Triple::identity(dual());
        let d = MoritaData::identity(&t);
        assert!(validate_morita(&d).passed(), "{}", validate_morita(&d));
        let m = Bimodule::regular(&t.a);
        let ind = induced_coefficients(&d, &m).unwrap();
        assert_eq!(ind.module.dim(), 2);
        assert_eq!(psi_chain_map(&d, &m, 0).unwrap(), SparseMatrix::identity(Field::Rational, 2));
    }

    #[test]
    fn standard_matrix_data() {
        let t = Triple::over_ground(dual());
        let d = standard_matrix_morita(&t, 2).unwrap();
        let r = validate_morita(&d);
        assert!(r.passed(), "{r}");
        assert_eq!((d.p.dim(), d.q.dim()), (4, 4));
        let g = tensor_over_algebra(&d.q, &d.p, &t.a).unwrap();
        assert_eq!(g.dim(), 8);
        let ind = induced_coefficients(&d, &Bimodule::regular(&t.a)).unwrap();
        assert_eq!(ind.module.dim(), 8);
    }

    #[test]
    fn bad_eta_is_reported() {
        let t = Triple::identity(dual());
        let mut d = MoritaData::identity(&t);
        d.eta = AlgebraMorphism::new(crate::linalg::DenseMatrix::zero(Field::Rational, 2, 2));
        let r = validate_morita(&d);
        assert!(r.failures().any(|c| c.name.starts_with("η")));
    }

    #[test]
    fn corner_data() {
        let a = matrix_algebra(&FiniteAlgebra::ground(Field::Rational), 2).unwrap();
        let t = Triple::over_ground(a);
        let d = corner_morita(&t, &[(0, q(1))]).unwrap();
        assert_eq!((d.p.dim(), d.q.dim(), d.target.a.dim()), (2, 2, 1));
        assert!(validate_morita(&d).passed(), "{}", validate_morita(&d));
        assert!(matches!(corner_morita(&t, &[(0, q(2))]), Err(Error::NotIdempotent)));
    }

    #[test]
    fn invariance_small() {
        let t = Triple::over_ground(dual());
        let d = standard_matrix_morita(&t, 2).unwrap();
        let m = Bimodule::regular(&t.a);
        let r = verify_morita_invariance(&d, &m, 2, BuildOptions::default()).unwrap();
        assert!(r.passed(), "{r}");
    }
}
