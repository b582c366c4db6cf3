//! Named small instances and a seeded generator of random valid ones.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{
    matrix_algebra, matrix_bimodule, matrix_triple, validate_bimodule, validate_triple, AlgebraMorphism, Bimodule,
    FiniteAlgebra, Triple,
};
use crate::error::Result;
use crate::linalg::{sparse_from_dense, DenseMatrix, SparseVec};
use crate::scalar::{Field, Scalar};

/// A triple with a coefficient bimodule.
#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub triple: Triple,
    pub module: Bimodule,
}

impl Instance {
    pub fn new(name: impl Into<String>, triple: Triple, module: Bimodule) -> Self {
        Instance { name: name.into(), triple, module }
    }

    pub fn regular(name: impl Into<String>, triple: Triple) -> Self {
        let module = Bimodule::regular(&triple.a);
        Instance::new(name, triple, module)
    }

    pub fn reduce_mod(&self, p: u64) -> Result<Instance> {
        Ok(Instance::new(self.name.clone(), self.triple.reduce_mod(p)?, self.module.reduce_mod(p)?))
    }
}

fn q(n: i64) -> Scalar {
    Field::Rational.from_i64(n)
}

/// `ℚ[x]/(x^n)` on `1, x, …, x^{n-1}`.
pub fn truncated_polynomial(n: usize, var: &str) -> FiniteAlgebra {
    let products = (0..n)
        .map(|i| (0..n).map(|j| if i + j < n { vec![(i + j, q(1))] } else { vec![] }).collect())
        .collect();
    let labels = (0..n)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        })
        .collect();
    FiniteAlgebra::from_products(Field::Rational, labels, products, vec![(0, q(1))]).expect("valid table")
}

pub fn dual_numbers() -> FiniteAlgebra {
    truncated_polynomial(2, "x")
}

/// `ℚ × ℚ` on the two idempotents.
pub fn split_algebra() -> FiniteAlgebra {
    let products = vec![vec![vec![(0, q(1))], vec![]], vec![vec![], vec![(1, q(1))]]];
    FiniteAlgebra::from_products(Field::Rational, vec!["e1".into(), "e2".into()], products, vec![(0, q(1)), (1, q(1))])
        .expect("valid table")
}

/// `ℚ[x]/(x² − c)`.
pub fn quadratic(c: i64) -> FiniteAlgebra {
    let products = vec![vec![vec![(0, q(1))], vec![(1, q(1))]], vec![vec![(1, q(1))], vec![(0, q(c))]]];
    FiniteAlgebra::from_products(Field::Rational, vec!["1".into(), "x".into()], products, vec![(0, q(1))])
        .expect("valid table")
}

/// `ℚ[y, x]/(y², x²)` on `1, y, x, xy`.
pub fn dual_dual() -> FiniteAlgebra {
    // exponents (a, b) of y^a x^b
    let exps = [(0, 0), (1, 0), (0, 1), (1, 1)];
    let products = exps
        .iter()
        .map(|&(a1, b1)| {
            exps.iter()
                .map(|&(a2, b2)| {
                    let (a, b) = (a1 + a2, b1 + b2);
                    exps.iter().position(|&e| e == (a, b)).map(|k| vec![(k, q(1))]).unwrap_or_default()
                })
                .collect()
        })
        .collect();
    let labels = ["1", "y", "x", "xy"].iter().map(|s| s.to_string()).collect();
    FiniteAlgebra::from_products(Field::Rational, labels, products, vec![(0, q(1))]).expect("valid table")
}

pub fn fix_k() -> Instance {
    Instance::regular("FIX-K", Triple::identity(FiniteAlgebra::ground(Field::Rational)))
}

pub fn fix_d() -> Instance {
    Instance::regular("FIX-D", Triple::over_ground(dual_numbers()))
}

pub fn fix_dd() -> Instance {
    Instance::regular("FIX-DD", Triple::identity(dual_numbers()))
}

pub fn fix_p3() -> Instance {
    Instance::regular("FIX-P3", Triple::over_ground(truncated_polynomial(3, "x")))
}

/// `(ℚ, ℚ[y]/(y²), y ↦ 0)` with a two-dimensional coefficient space.
pub fn fix_kb() -> Instance {
    let b = truncated_polynomial(2, "y");
    let k = FiniteAlgebra::ground(Field::Rational);
    let eps = AlgebraMorphism::from_columns(Field::Rational, 1, vec![vec![(0, q(1))], vec![]]);
    let t = Triple::new(k, b, eps).expect("augmentation is a morphism");
    let id = DenseMatrix::identity(Field::Rational, 2);
    let m = Bimodule::new(Field::Rational, 2, vec![id.clone()], vec![id]).expect("scalar actions");
    Instance::new("FIX-KB", t, m)
}

/// `B = ℚ[y]/(y²) ⊂ A = B[x]/(x²)`.
pub fn fix_fund() -> Instance {
    let b = truncated_polynomial(2, "y");
    let a = dual_dual();
    let eps = AlgebraMorphism::from_columns(Field::Rational, 4, vec![vec![(0, q(1))], vec![(1, q(1))]]);
    Instance::regular("FIX-FUND", Triple::new(a, b, eps).expect("inclusion"))
}

pub fn fix_m2() -> Instance {
    let a = matrix_algebra(&FiniteAlgebra::ground(Field::Rational), 2).expect("n > 0");
    Instance::regular("FIX-M2", Triple::over_ground(a))
}

/// `(M_n(A), I_n(B), ε_*)` with `M_n(M)`.
pub fn matrix_lift(inst: &Instance, n: usize) -> Result<Instance> {
    Ok(Instance::new(
        format!("{}-M{n}", inst.name),
        matrix_triple(&inst.triple, n)?,
        matrix_bimodule(&inst.module, n)?,
    ))
}

pub fn named_fixtures() -> Vec<Instance> {
    vec![fix_k(), fix_d(), fix_dd(), fix_p3(), fix_kb(), fix_fund(), fix_m2()]
}

pub fn fixture(name: &str) -> Option<Instance> {
    let upper = name.to_ascii_uppercase();
    if let Some(base) = upper.strip_suffix("-M2") {
        return fixture(base).and_then(|i| matrix_lift(&i, 2).ok());
    }
    named_fixtures().into_iter().find(|i| i.name == upper)
}

fn transform(m: &DenseMatrix, v: &[(usize, Scalar)]) -> SparseVec {
    let dense = crate::linalg::sparse_to_dense(m.field(), v, m.cols());
    sparse_from_dense(&m.apply(&dense))
}

/// The same algebra on the basis given by the columns of `t`.
pub fn change_algebra_basis(a: &FiniteAlgebra, t: &DenseMatrix) -> FiniteAlgebra {
    let inv = t.inverse().expect("invertible basis change");
    let d = a.dim();
    let col = |i: usize| sparse_from_dense(&t.column(i));
    let products = (0..d)
        .map(|i| (0..d).map(|j| transform(&inv, &a.mul(&col(i), &col(j)))).collect())
        .collect();
    let unit = transform(&inv, &a.unit_sparse());
    FiniteAlgebra::from_products(a.field(), a.labels().to_vec(), products, unit).expect("transported table")
}

/// Rewrites an instance on new bases of `A`, `B` and `M`.
pub fn change_basis(inst: &Instance, ta: &DenseMatrix, tb: &DenseMatrix, tm: &DenseMatrix) -> Result<Instance> {
    let t = &inst.triple;
    let a = change_algebra_basis(&t.a, ta);
    let b = change_algebra_basis(&t.b, tb);
    let ta_inv = ta.inverse().expect("invertible");
    let tm_inv = tm.inverse().expect("invertible");
    let eps = AlgebraMorphism::new(ta_inv.mul(&t.eps.matrix().mul(tb)?)?);
    let triple = Triple::new(a, b, eps)?;
    let m = &inst.module;
    let act = |mats: Vec<DenseMatrix>| -> Result<Vec<DenseMatrix>> {
        mats.into_iter().map(|x| tm_inv.mul(&x.mul(tm)?)).collect()
    };
    let new_a = |i: usize| sparse_from_dense(&ta.column(i));
    let left = act((0..t.a.dim()).map(|i| m.left_matrix(&new_a(i)).to_dense()).collect())?;
    let right = act((0..t.a.dim()).map(|i| m.right_matrix(&new_a(i)).to_dense()).collect())?;
    let module = Bimodule::new(m.field(), m.dim(), left, right)?;
    Ok(Instance::new(format!("{}'", inst.name), triple, module))
}

fn random_invertible(rng: &mut impl Rng, n: usize) -> DenseMatrix {
    loop {
        let rows = (0..n).map(|_| (0..n).map(|_| q(rng.gen_range(-2..=2))).collect()).collect();
        let m = DenseMatrix::from_rows(Field::Rational, rows).expect("square");
        if m.inverse().is_some() {
            return m;
        }
    }
}

fn base_algebras() -> Vec<FiniteAlgebra> {
    vec![FiniteAlgebra::ground(Field::Rational), dual_numbers(), split_algebra(), quadratic(2)]
}

/// Valid triples `(A, B, ε)` with `ε` sending the non-unit basis element to small integer vectors.
fn candidate_triples() -> Vec<Triple> {
    let mut out = Vec::new();
    for a in base_algebras() {
        for b in base_algebras() {
            let images: Vec<Vec<i64>> = if b.dim() == 1 {
                vec![vec![]]
            } else {
                let range = -2..=2;
                match a.dim() {
                    1 => range.map(|x| vec![x]).collect(),
                    _ => range.clone().flat_map(|x| range.clone().map(move |y| vec![x, y])).collect(),
                }
            };
            for img in images {
                let mut cols = vec![a.unit_sparse()];
                if b.dim() == 2 {
                    // unit of B is 1 (or e1 + e2); the other basis vector is sent to img
                    let v: SparseVec = img.iter().enumerate().filter(|(_, x)| **x != 0).map(|(i, x)| (i, q(*x))).collect();
                    if b.labels()[0] == "e1" {
                        // e1 ↦ v, e2 ↦ 1 − v
                        let rest = crate::linalg::axpy(&a.unit_sparse(), &q(-1), &v);
                        cols = vec![v, rest];
                    } else {
                        cols.push(v);
                    }
                }
                let eps = AlgebraMorphism::from_columns(Field::Rational, a.dim(), cols);
                if let Ok(t) = Triple::new(a.clone(), b.clone(), eps) {
                    if validate_triple(&t).passed() {
                        out.push(t);
                    }
                }
            }
        }
    }
    out
}

/// Valid `B`-symmetric bimodules of dimension at most 2.
fn candidate_modules(t: &Triple) -> Vec<Bimodule> {
    let f = Field::Rational;
    let a = &t.a;
    let mut out = vec![Bimodule::regular(a)];
    // one-dimensional: scalars for each basis element, left and right
    let d = a.dim();
    let scalars: Vec<i64> = (-2..=2).collect();
    let mut one_dim = Vec::new();
    let choices: Vec<Vec<i64>> = (0..2 * d).fold(vec![vec![]], |acc, _| {
        acc.into_iter()
            .flat_map(|p| {
                scalars.iter().map(move |s| {
                    let mut p = p.clone();
                    p.push(*s);
                    p
                })
            })
            .collect()
    });
    for c in choices {
        let mat = |x: i64| DenseMatrix::from_rows(f, vec![vec![q(x)]]).expect("1x1");
        let left = c[..d].iter().map(|&x| mat(x)).collect();
        let right = c[d..].iter().map(|&x| mat(x)).collect();
        if let Ok(m) = Bimodule::new(f, 1, left, right) {
            if validate_bimodule(&m, t).passed() {
                one_dim.push(m);
            }
        }
    }
    for m in &one_dim {
        out.push(m.clone());
    }
    for (i, m1) in one_dim.iter().enumerate() {
        for m2 in &one_dim[i..] {
            out.push(direct_sum(m1, m2));
        }
    }
    out.retain(|m| validate_bimodule(m, t).passed());
    out
}

pub fn direct_sum(m1: &Bimodule, m2: &Bimodule) -> Bimodule {
    let f = m1.field();
    let (d1, d2) = (m1.dim(), m2.dim());
    let block = |x: &DenseMatrix, y: &DenseMatrix| {
        let mut z = DenseMatrix::zero(f, d1 + d2, d1 + d2);
        for r in 0..d1 {
            for c in 0..d1 {
                z.set(r, c, x.get(r, c).clone());
            }
        }
        for r in 0..d2 {
            for c in 0..d2 {
                z.set(d1 + r, d1 + c, y.get(r, c).clone());
            }
        }
        z
    };
    let left = m1.left().iter().zip(m2.left()).map(|(x, y)| block(x, y)).collect();
    let right = m1.right().iter().zip(m2.right()).map(|(x, y)| block(x, y)).collect();
    Bimodule::new(f, d1 + d2, left, right).expect("same algebra")
}

/// Random valid instance with `dim A, dim B, dim M ≤ 2`, on a random basis.
pub fn random_instance(rng: &mut impl Rng) -> Instance {
    let triples = candidate_triples();
    loop {
        let t = triples.choose(rng).expect("nonempty").clone();
        let modules = candidate_modules(&t);
        let Some(m) = modules.choose(rng).cloned() else { continue };
        if m.dim() > 2 || m.dim() == 0 {
            continue;
        }
        let base = Instance::new("random", t, m);
        let ta = random_invertible(rng, base.triple.a.dim());
        let tb = random_invertible(rng, base.triple.b.dim());
        let tm = random_invertible(rng, base.module.dim());
        if let Ok(inst) = change_basis(&base, &ta, &tb, &tm) {
            return inst;
        }
    }
}

pub fn random_instances(seed: u64, count: usize) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let mut inst = random_instance(&mut rng);
            inst.name = format!("random-{seed}-{i}");
            inst
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_validate() {
        for inst in named_fixtures() {
            assert!(validate_triple(&inst.triple).passed(), "{}", inst.name);
            assert!(validate_bimodule(&inst.module, &inst.triple).passed(), "{}", inst.name);
        }
        assert_eq!(fixture("fix-dd-m2").unwrap().triple.a.dim(), 8);
    }

    #[test]
    fn random_instances_are_valid_and_reproducible() {
        let xs = random_instances(7, 12);
        for inst in &xs {
            assert!(validate_triple(&inst.triple).passed(), "{}", validate_triple(&inst.triple));
            assert!(validate_bimodule(&inst.module, &inst.triple).passed());
            assert!(inst.triple.a.dim() <= 2 && inst.triple.b.dim() <= 2 && inst.module.dim() <= 2);
        }
        let ys = random_instances(7, 12);
        assert!(xs.iter().zip(&ys).all(|(x, y)| x.triple == y.triple));
    }
}
