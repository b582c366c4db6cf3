//! Kähler differentials as finitely presented modules over a commutative algebra.

use crate::algebra::{Bimodule, FiniteAlgebra, Triple};
use crate::complexes::{build_complex, BuildOptions, ComplexKind};
use crate::error::{Error, Result};
use crate::linalg::{axpy, image_basis, kernel_basis, Accumulator, QuotientSpace, SparseMatrix, SparseVec, Subspace};
use crate::morita::tensor_over_algebra;
use crate::report::Report;
use crate::scalar::Scalar;

/// Quotient of the free module `A^g` by an `A`-submodule.
///
/// Coordinates of the free module: `gen · dim A + k` is `e_k · d(gen)`.
#[derive(Clone, Debug)]
pub struct PresentedModule {
    pub over: FiniteAlgebra,
    pub generators: Vec<String>,
    pub relations: Subspace,
}

impl PresentedModule {
    pub fn free_dim(&self) -> usize {
        self.generators.len() * self.over.dim()
    }

    /// Dimension over the ground field.
    pub fn dim(&self) -> usize {
        self.free_dim() - self.relations.dim()
    }

    /// `e_i · v` on the free module.
    pub fn act(&self, i: usize, v: &[(usize, Scalar)]) -> SparseVec {
        act_free(&self.over, i, v)
    }

    pub fn is_closed(&self) -> bool {
        let rref = self.relations.to_rref();
        self.relations
            .basis()
            .iter()
            .all(|r| (0..self.over.dim()).all(|i| rref.contains(&self.act(i, r))))
    }

    pub fn quotient(&self) -> QuotientSpace {
        QuotientSpace::new(self.relations.clone())
    }

    /// The module as a symmetric bimodule on the quotient space.
    pub fn to_bimodule(&self) -> Result<Bimodule> {
        let q = self.quotient();
        let f = self.over.field();
        let acts: Vec<Vec<SparseVec>> = (0..self.over.dim())
            .map(|i| (0..q.dim()).map(|k| q.project(&self.act(i, &q.lift(k)))).collect())
            .collect();
        Bimodule::from_action_columns(f, q.dim(), &acts, &acts)
    }
}

fn act_free(a: &FiniteAlgebra, i: usize, v: &[(usize, Scalar)]) -> SparseVec {
    let d = a.dim();
    let mut acc = Accumulator::new();
    for (c, x) in v {
        let (gen, k) = (c / d, c % d);
        for (j, y) in a.mul_basis(i, k) {
            acc.add(gen * d + j, &(x * y));
        }
    }
    acc.finish()
}

/// Smallest `A`-submodule containing `relations`, by a fixed-point loop.
pub fn close_under_action(a: &FiniteAlgebra, relations: &Subspace) -> Subspace {
    let mut rref = relations.to_rref();
    let mut frontier: Vec<SparseVec> = relations.basis().to_vec();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for r in &frontier {
            for i in 0..a.dim() {
                let v = act_free(a, i, r);
                if rref.insert(&v) {
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    Subspace::from_rref(rref)
}

/// `Ω¹_{A|B}`: generators `d(e_i)`, Leibniz and `B`-linearity relations, closed under `A`.
pub fn kahler_module(t: &Triple) -> Result<PresentedModule> {
    let a = &t.a;
    if !a.is_commutative() {
        return Err(Error::NotCommutative);
    }
    let f = a.field();
    let d = a.dim();
    let one = a.unit_sparse();
    // c · d(e_gen)
    let at = |gen: usize, c: &[(usize, Scalar)]| -> SparseVec { c.iter().map(|(k, x)| (gen * d + k, x.clone())).collect() };
    // d(x) for a general element x
    let diff = |x: &[(usize, Scalar)]| -> SparseVec {
        let mut acc = Accumulator::new();
        for (gen, c) in x {
            acc.add_scaled(&at(*gen, &one), c);
        }
        acc.finish()
    };
    let neg = f.from_i64(-1);
    let mut relations = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let mut r = diff(a.mul_basis(i, j));
            r = axpy(&r, &neg, &at(j, &a.basis(i)));
            r = axpy(&r, &neg, &at(i, &a.basis(j)));
            relations.push(r);
        }
    }
    for beta in 0..t.b.dim() {
        let e = t.eps.image_basis(beta);
        for i in 0..d {
            let r = axpy(&diff(&a.mul(e, &a.basis(i))), &neg, &at(i, e));
            relations.push(r);
        }
    }
    let generators = a.labels().iter().map(|l| format!("d({l})")).collect();
    let span = Subspace::span(f, d * d, relations.iter().filter(|r| !r.is_empty()));
    Ok(PresentedModule { over: a.clone(), generators, relations: close_under_action(a, &span) })
}

/// `dim M ⊗_A Ω` for an `A`-symmetric `M`.
pub fn tensor_m_kahler(m: &Bimodule, omega: &PresentedModule) -> Result<usize> {
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let w = omega.to_bimodule()?;
    Ok(tensor_over_algebra(m, &w, &omega.over)?.dim())
}

/// `H_1` against `M ⊗_A Ω¹`, both classically and for the triple.
pub fn verify_h1_kahler(t: &Triple, m: &Bimodule, opts: BuildOptions) -> Result<Report> {
    if !t.a.is_commutative() {
        return Err(Error::NotCommutative);
    }
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let mut report = Report::new("H₁ and Kähler differentials");
    let opts = BuildOptions { max_degree: 2, ..opts };
    let h1s = build_complex(ComplexKind::Secondary, t, m, opts)?.homology_dim(1)?;
    let h1c = build_complex(ComplexKind::Classical, t, m, opts)?.homology_dim(1)?;
    let rel = tensor_m_kahler(m, &kahler_module(t)?)?;
    let abs = tensor_m_kahler(m, &kahler_module(&Triple::over_ground(t.a.clone()))?)?;
    report.check("H₁((A,B,ε);M) = M ⊗_A Ω¹_{A|B}", h1s == rel, format!("{h1s} vs {rel}"));
    report.check("H₁(A,M) = M ⊗_A Ω¹_{A|k}", h1c == abs, format!("{h1c} vs {abs}"));
    Ok(report)
}

/// `A ⊗_B Ω¹_{B|k} → Ω¹_{A|k} → Ω¹_{A|B} → 0`.
pub fn verify_fundamental_sequence(t: &Triple) -> Result<Report> {
    if !t.a.is_commutative() {
        return Err(Error::NotCommutative);
    }
    let (a, b) = (&t.a, &t.b);
    let f = a.field();
    let (da, db) = (a.dim(), b.dim());
    let omega_b = kahler_module(&Triple::over_ground(b.clone()))?;
    let omega_a = kahler_module(&Triple::over_ground(a.clone()))?;
    let omega_ab = kahler_module(t)?;
    let mut report = Report::new("fundamental sequence");

    // A as (A, B)-bimodule through ε
    let left: Vec<Vec<SparseVec>> = (0..da).map(|i| (0..da).map(|k| a.mul_basis(i, k).clone()).collect()).collect();
    let right: Vec<Vec<SparseVec>> =
        (0..db).map(|beta| (0..da).map(|k| a.mul(&a.basis(k), t.eps.image_basis(beta))).collect()).collect();
    let a_over_b = Bimodule::from_action_columns(f, da, &left, &right)?;
    let wb = omega_b.to_bimodule()?;
    let src = tensor_over_algebra(&a_over_b, &wb, b)?;
    let qb = omega_b.quotient();
    let qa = omega_a.quotient();
    let qab = omega_ab.quotient();

    // e_i ⊗ [e_k d(e_β)] ↦ e_i ε(e_k) d(ε(e_β))
    let first_raw: Vec<SparseVec> = (0..da * wb.dim())
        .map(|c| {
            let (i, w) = (c / wb.dim(), c % wb.dim());
            let lift = qb.lift_coord(w);
            let (beta, k) = (lift / db, lift % db);
            let coeff = a.mul(&a.basis(i), t.eps.image_basis(k));
            let mut acc = Accumulator::new();
            for (gen, x) in t.eps.image_basis(beta) {
                for (j, y) in &coeff {
                    acc.add(gen * da + j, &(x * y));
                }
            }
            qa.project(&acc.finish())
        })
        .collect();
    let first_raw = SparseMatrix::from_columns(f, qa.dim(), first_raw);
    let relations = src.quotient.relations().basis();
    let kills = relations.iter().all(|r| first_raw.apply(r).is_empty());
    report.check("first map well defined", kills, format!("{} tensor relations", relations.len()));
    let first_cols: Vec<SparseVec> = (0..src.dim()).map(|k| first_raw.column(src.quotient.lift_coord(k)).clone()).collect();
    let first = SparseMatrix::from_columns(f, qa.dim(), first_cols);

    let contained = omega_a.relations.leq(&omega_ab.relations)?;
    report.check("second map well defined", contained, "relations of Ω¹_{A|k} lie in those of Ω¹_{A|B}");
    let second_cols: Vec<SparseVec> = (0..qa.dim()).map(|k| qab.project(&qa.lift(k))).collect();
    let second = SparseMatrix::from_columns(f, qab.dim(), second_cols);

    report.check(
        "dims",
        true,
        format!("A ⊗_B Ω¹_B = {}, Ω¹_A = {}, Ω¹_{{A|B}} = {}", src.dim(), qa.dim(), qab.dim()),
    );
    let im = image_basis(&first)?;
    let ker = kernel_basis(&second)?;
    report.check("im = ker at Ω¹_{A|k}", im == ker, format!("dim im = {}, dim ker = {}", im.dim(), ker.dim()));
    let im2 = image_basis(&second)?;
    report.check("Ω¹_{A|k} → Ω¹_{A|B} surjective", im2.dim() == qab.dim(), format!("rank {}", im2.dim()));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;

    fn q(n: i64) -> Scalar {
        Field::Rational.from_i64(n)
    }

    fn truncated(n: usize) -> FiniteAlgebra {
        let products = (0..n)
            .map(|i| (0..n).map(|j| if i + j < n { vec![(i + j, q(1))] } else { vec![] }).collect())
            .collect();
        let labels = (0..n).map(|i| format!("x^{i}")).collect();
        FiniteAlgebra::from_products(Field::Rational, labels, products, vec![(0, q(1))]).unwrap()
    }

    #[test]
    fn truncated_polynomials() {
        for (n, expected) in [(1, 0), (2, 1), (3, 2), (4, 3)] {
            let om = kahler_module(&Triple::over_ground(truncated(n))).unwrap();
            assert_eq!(om.dim(), expected, "n = {n}");
            assert!(om.is_closed());
        }
        assert_eq!(kahler_module(&Triple::identity(truncated(3))).unwrap().dim(), 0);
    }

    #[test]
    fn h1_matches() {
        let t = Triple::over_ground(truncated(3));
        let r = verify_h1_kahler(&t, &Bimodule::regular(&t.a), BuildOptions::default()).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn fundamental_sequence_degenerate_cases() {
        for t in [Triple::over_ground(truncated(3)), Triple::identity(truncated(3))] {
            let r = verify_fundamental_sequence(&t).unwrap();
            assert!(r.passed(), "{r}");
        }
    }
}
