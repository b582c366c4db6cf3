//! The five-term exact sequence linking classical and secondary homology in
//! low degrees, plus functoriality in the coefficients and in the triple.

use crate::algebra::{validate_bimodule, validate_morphism, AlgebraMorphism, Bimodule, Triple};
use crate::complexes::{build_complex, BuildOptions, ChainComplex, ChainIndexScheme, ComplexKind, Homology};
use crate::error::{Error, Result};
use crate::linalg::{image_basis, induced_quotient_map, kernel_basis, rank, tensor_expand, SparseMatrix};
use crate::report::Report;

/// `(f, g): (A, B, ε) → (A', B', ε')` with `f ε = ε' g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleMorphism {
    pub source: Triple,
    pub target: Triple,
    pub f: AlgebraMorphism,
    pub g: AlgebraMorphism,
}

impl TripleMorphism {
    pub fn identity(t: &Triple) -> Self {
        let field = t.field();
        TripleMorphism {
            source: t.clone(),
            target: t.clone(),
            f: AlgebraMorphism::identity(field, t.a.dim()),
            g: AlgebraMorphism::identity(field, t.b.dim()),
        }
    }

    /// `(B, B, id) → (A, B, ε)` given by `(ε, id)`.
    pub fn from_base(t: &Triple) -> Self {
        TripleMorphism {
            source: Triple::identity(t.b.clone()),
            target: t.clone(),
            f: t.eps.clone(),
            g: AlgebraMorphism::identity(t.field(), t.b.dim()),
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &TripleMorphism) -> Result<TripleMorphism> {
        if inner.target != self.source {
            return Err(Error::EndpointMismatch);
        }
        Ok(TripleMorphism {
            source: inner.source.clone(),
            target: self.target.clone(),
            f: self.f.compose(&inner.f)?,
            g: self.g.compose(&inner.g)?,
        })
    }
}

pub fn validate_triple_morphism(tm: &TripleMorphism) -> Report {
    let mut report = Report::new("triple morphism");
    report.extend(validate_morphism("f", &tm.f, &tm.source.a, &tm.target.a));
    report.extend(validate_morphism("g", &tm.g, &tm.source.b, &tm.target.b));
    if !report.passed() {
        return report;
    }
    let mut bad = Vec::new();
    for beta in 0..tm.source.b.dim() {
        let lhs = tm.f.apply(tm.source.eps.image_basis(beta));
        let rhs = tm.target.eps.apply(tm.g.image_basis(beta));
        if lhs != rhs {
            bad.push(tm.source.b.labels()[beta].clone());
        }
    }
    report.violations("f ε = ε' g", &bad);
    report
}

/// `M'` with both actions pulled back along `f`.
pub fn restrict_bimodule(m: &Bimodule, f: &AlgebraMorphism) -> Result<Bimodule> {
    if m.algebra_dim() != f.target_dim() || m.right_algebra_dim() != f.target_dim() {
        return Err(Error::DimensionMismatch { context: "restriction", left: m.algebra_dim(), right: f.target_dim() });
    }
    let field = m.field();
    let left = (0..f.source_dim()).map(|i| m.left_matrix(f.image_basis(i)).to_dense()).collect();
    let right = (0..f.source_dim()).map(|i| m.right_matrix(f.image_basis(i)).to_dense()).collect();
    Bimodule::new(field, m.dim(), left, right)
}

pub fn restrict_coefficients(tm: &TripleMorphism, mprime: &Bimodule) -> Result<Bimodule> {
    restrict_bimodule(mprime, &tm.f)
}

/// `M` as a `B`-bimodule through `ε`.
pub fn coefficients_over_base(t: &Triple, m: &Bimodule) -> Result<Bimodule> {
    restrict_bimodule(m, &t.eps)
}

/// `Φ²: C_2(A, M) → C_2((A,B,ε); M)`, putting `1_B` in the single β-slot.
pub fn phi2_chain(t: &Triple, m: &Bimodule) -> SparseMatrix {
    let f = t.field();
    let (dm, da, db) = (m.dim(), t.a.dim(), t.b.dim());
    let one = t.b.unit_sparse();
    let cols = (0..dm * da * da)
        .map(|c| {
            let unit = vec![(c, f.one())];
            tensor_expand(f, &[&unit, &one], &[dm * da * da, db])
        })
        .collect();
    SparseMatrix::from_columns(f, dm * da * da * db, cols)
}

/// `Ψ: C_2((A,B,ε); M) → C_1(B, M)`, `m ⊗ a_1 ⊗ a_2 ⊗ α ↦ a_2 m a_1 ⊗ α`.
pub fn psi_seq_chain(t: &Triple, m: &Bimodule) -> SparseMatrix {
    let f = t.field();
    let src = ChainIndexScheme::new(2, m.dim(), t.a.dim(), t.b.dim());
    let db = t.b.dim();
    let cols = (0..src.count())
        .map(|col| {
            let c = src.decode(col);
            let x = m.right_basis(c.m, c.a[0]);
            let y = m.act_left(&[(c.a[1], f.one())], x);
            tensor_expand(f, &[&y, &[(c.b[0], f.one())]], &[m.dim(), db])
        })
        .collect();
    SparseMatrix::from_columns(f, m.dim() * db, cols)
}

/// `ε_*: C_1(B, M) → C_1(A, M)`.
pub fn epsilon_star_chain(t: &Triple, m: &Bimodule) -> SparseMatrix {
    SparseMatrix::identity(t.field(), m.dim()).kronecker(&t.eps.to_sparse())
}

/// `Φ¹: C_1(A, M) → C_1((A,B,ε); M)`; the two spaces coincide.
pub fn phi1_chain(t: &Triple, m: &Bimodule) -> SparseMatrix {
    SparseMatrix::identity(t.field(), m.dim() * t.a.dim())
}

/// `F^{⊗n}` as a Kronecker power, `I_1` for `n = 0`.
fn kron_power(f: &SparseMatrix, n: usize) -> SparseMatrix {
    let mut out = SparseMatrix::identity(f.field(), 1);
    for _ in 0..n {
        out = out.kronecker(f);
    }
    out
}

/// `f_*` on `C_n((A,B,ε); -)` for a bimodule map `fm: M → M'`.
pub fn pushforward_m(fm: &SparseMatrix, m: &Bimodule, mprime: &Bimodule, t: &Triple, n: usize) -> Result<SparseMatrix> {
    if fm.cols() != m.dim() || fm.rows() != mprime.dim() {
        return Err(Error::DimensionMismatch { context: "coefficient map", left: fm.cols(), right: m.dim() });
    }
    let field = t.field();
    for i in 0..t.a.dim() {
        let e = vec![(i, field.one())];
        if fm.mul(&m.left_matrix(&e))? != mprime.left_matrix(&e).mul(fm)?
            || fm.mul(&m.right_matrix(&e))? != mprime.right_matrix(&e).mul(fm)?
        {
            return Err(Error::NotBimoduleMorphism);
        }
    }
    let rest = t.a.dim().pow(n as u32) * t.b.dim().pow((n * n.saturating_sub(1) / 2) as u32);
    Ok(fm.kronecker(&SparseMatrix::identity(field, rest)))
}

/// `(f, g)_*: C_n((A,B,ε); M'|) → C_n((A',B',ε'); M')`.
pub fn pushforward_fg(tm: &TripleMorphism, mprime: &Bimodule, n: usize) -> Result<SparseMatrix> {
    let report = validate_triple_morphism(tm);
    if !report.passed() {
        let first = report.failures().next().map(|c| c.name.clone()).unwrap_or_default();
        return Err(Error::InvalidMorphism(first));
    }
    let field = tm.source.field();
    let fa = kron_power(&tm.f.to_sparse(), n);
    let gb = kron_power(&tm.g.to_sparse(), n * n.saturating_sub(1) / 2);
    Ok(SparseMatrix::identity(field, mprime.dim()).kronecker(&fa).kronecker(&gb))
}

/// `∂' F_n = F_{n-1} ∂` for degree `n ≥ 1`.
pub fn is_chain_map_at(src: &ChainComplex, tgt: &ChainComplex, f_n: &SparseMatrix, f_prev: &SparseMatrix, n: usize) -> Result<bool> {
    Ok(tgt.boundary(n)?.mul(f_n)? == f_prev.mul(src.boundary(n)?)?)
}

/// The four complexes needed for the sequence in degrees up to 2.
pub struct SequenceComplexes {
    pub classical_a: ChainComplex,
    pub secondary: ChainComplex,
    pub classical_b: ChainComplex,
    pub m_over_b: Bimodule,
}

pub fn sequence_complexes(t: &Triple, m: &Bimodule, opts: BuildOptions) -> Result<SequenceComplexes> {
    let m_over_b = coefficients_over_base(t, m)?;
    let base = Triple::over_ground(t.b.clone());
    Ok(SequenceComplexes {
        classical_a: build_complex(ComplexKind::Classical, t, m, BuildOptions { max_degree: 3, ..opts })?,
        secondary: build_complex(ComplexKind::Secondary, t, m, BuildOptions { max_degree: 3, ..opts })?,
        classical_b: build_complex(ComplexKind::Classical, &base, &m_over_b, BuildOptions { max_degree: 2, ..opts })?,
        m_over_b,
    })
}

fn induced(report: &mut Report, name: &str, f: &SparseMatrix, src: &Homology, tgt: &Homology) -> Option<SparseMatrix> {
    match induced_quotient_map(f, &src.cycles, &src.boundaries, &tgt.cycles, &tgt.boundaries) {
        Ok(m) => {
            report.check(format!("{name} descends to homology"), true, format!("{}x{}", m.rows(), m.cols()));
            Some(m)
        }
        Err(e) => {
            report.check(format!("{name} descends to homology"), false, e.to_string());
            None
        }
    }
}

/// `im F = ker G` inside the middle homology group.
fn exact_at(report: &mut Report, name: &str, f: &SparseMatrix, g: &SparseMatrix) -> Result<()> {
    let im = image_basis(f)?;
    let ker = kernel_basis(g)?;
    report.check(name, im == ker, format!("dim im = {}, dim ker = {}, ambient {}", im.dim(), ker.dim(), im.ambient()));
    Ok(())
}

/// Chain-level compatibilities, descent to homology, and the three
/// subspace equalities plus surjectivity of `Φ¹`.
pub fn verify_exact_sequence(t: &Triple, m: &Bimodule, opts: BuildOptions) -> Result<Report> {
    let mut report = Report::new("exact sequence");
    let mut sub = validate_bimodule(m, t);
    sub.title = "M".into();
    report.extend(sub);
    if !report.passed() {
        return Ok(report);
    }
    let cx = sequence_complexes(t, m, opts)?;
    let (ca, cs, cb) = (&cx.classical_a, &cx.secondary, &cx.classical_b);
    let phi2 = phi2_chain(t, m);
    let psi = psi_seq_chain(t, m);
    let eps1 = epsilon_star_chain(t, m);
    let phi1 = phi1_chain(t, m);

    // chain level
    let ok = cs.boundary(2)?.mul(&phi2)? == phi1.mul(ca.boundary(2)?)?;
    report.check("∂₂ᵉ Φ² = Φ¹ d₂", ok, "matrix identity");
    let ok = psi.mul(cs.boundary(3)?)?.columns().iter().all({
        let im = image_basis(cb.boundary(2)?)?.to_rref();
        move |v| im.contains(v)
    });
    report.check("Ψ ∂₃ᵉ ⊆ im d₂ᴮ", ok, "subspace containment");
    let eps2 = SparseMatrix::identity(t.field(), m.dim()).kronecker(&kron_power(&t.eps.to_sparse(), 2));
    let ok = eps1.mul(cb.boundary(2)?)? == ca.boundary(2)?.mul(&eps2)?;
    report.check("ε_* d₂ᴮ = d₂ ε_*", ok, "matrix identity");
    let ok = *cb.boundary(1)? == ca.boundary(1)?.mul(&eps1)?;
    report.check("d₁ᴮ = d₁ ε_*", ok, "matrix identity");

    let (h2a, h2s, h1b, h1a, h1s) = (ca.homology(2)?, cs.homology(2)?, cb.homology(1)?, ca.homology(1)?, cs.homology(1)?);
    report.check(
        "homology dims",
        true,
        format!(
            "H₂(A,M) = {}, H₂((A,B,ε);M) = {}, H₁(B,M) = {}, H₁(A,M) = {}, H₁((A,B,ε);M) = {}",
            h2a.dim, h2s.dim, h1b.dim, h1a.dim, h1s.dim
        ),
    );
    let maps = (
        induced(&mut report, "Φ²", &phi2, &h2a, &h2s),
        induced(&mut report, "Ψ", &psi, &h2s, &h1b),
        induced(&mut report, "ε_*", &eps1, &h1b, &h1a),
        induced(&mut report, "Φ¹", &phi1, &h1a, &h1s),
    );
    let (Some(phi2_h), Some(psi_h), Some(eps_h), Some(phi1_h)) = maps else {
        return Ok(report);
    };
    exact_at(&mut report, "im Φ² = ker Ψ", &phi2_h, &psi_h)?;
    exact_at(&mut report, "im Ψ = ker ε_*", &psi_h, &eps_h)?;
    exact_at(&mut report, "im ε_* = ker Φ¹", &eps_h, &phi1_h)?;
    let r = rank(&phi1_h)?;
    report.check("Φ¹ surjective", r == h1s.dim, format!("rank {r}, dim H₁((A,B,ε);M) = {}", h1s.dim));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FiniteAlgebra;
    use crate::scalar::{Field, Scalar};

    fn q(n: i64) -> Scalar {
        Field::Rational.from_i64(n)
    }

    fn dual() -> FiniteAlgebra {
        let products = vec![vec![vec![(0, q(1))], vec![(1, q(1))]], vec![vec![(1, q(1))], vec![]]];
        FiniteAlgebra::from_products(Field::Rational, vec!["1".into(), "x".into()], products, vec![(0, q(1))]).unwrap()
    }

    #[test]
    fn dual_numbers_both_ways() {
        for t in [Triple::identity(dual()), Triple::over_ground(dual())] {
            let m = Bimodule::regular(&t.a);
            let r = verify_exact_sequence(&t, &m, BuildOptions::default()).unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn base_inclusion_matches_epsilon_star() {
        let t = Triple::identity(dual());
        let tm = TripleMorphism::from_base(&t);
        assert!(validate_triple_morphism(&tm).passed());
        let m = Bimodule::regular(&t.a);
        assert_eq!(pushforward_fg(&tm, &m, 1).unwrap(), epsilon_star_chain(&t, &m));
    }

    #[test]
    fn broken_square_is_reported() {
        let t = Triple::identity(dual());
        let mut tm = TripleMorphism::identity(&t);
        let mut g = tm.g.matrix().clone();
        g.set(1, 1, q(2));
        tm.g = AlgebraMorphism::new(g);
        assert!(!validate_triple_morphism(&tm).passed());
        assert!(matches!(pushforward_fg(&tm, &Bimodule::regular(&t.a), 1), Err(Error::InvalidMorphism(_))));
    }

    #[test]
    fn pushforward_m_rejects_non_morphism() {
        let t = Triple::identity(dual());
        let m = Bimodule::regular(&t.a);
        let bad = SparseMatrix::from_triplets(Field::Rational, 2, 2, [(1, 0, q(1))]).unwrap();
        // v ↦ x·v is a bimodule map over a commutative algebra, its transpose is not
        assert!(pushforward_m(&bad.transpose(), &m, &m, &t, 1).is_err());
        assert!(pushforward_m(&bad, &m, &m, &t, 1).is_ok());
    }
}
