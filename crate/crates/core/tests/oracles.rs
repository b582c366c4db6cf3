mod common;

use common::*;
use hochschild::algebra::Triple;
use hochschild::complexes::{build_complex, classical_boundary, secondary_boundary, BuildOptions, ComplexKind};
use hochschild::fixtures::{fix_d, fix_dd, fix_fund, fix_k, fix_kb, fix_m2, fix_p3, named_fixtures, random_instances};
use hochschild::linalg::SparseMatrix;

const ORACLE_LIMIT: usize = 200;

fn assert_matches(engine: &SparseMatrix, oracle: &[Vec<hochschild::Scalar>], what: &str) {
    assert_eq!(engine.rows(), oracle.len(), "{what}: rows");
    let dense = engine.to_dense();
    for (r, row) in oracle.iter().enumerate() {
        assert_eq!(dense.row(r), row.as_slice(), "{what}: row {r}");
    }
}

#[test]
fn secondary_boundary_matches_block_oracle() {
    let mut instances = named_fixtures();
    instances.extend(random_instances(11, 20));
    let mut compared = 0;
    for inst in &instances {
        for n in 1..=4 {
            if secondary_dim(&inst.triple, &inst.module, n) > ORACLE_LIMIT {
                break;
            }
            let engine = secondary_boundary(&inst.triple, &inst.module, n).unwrap();
            let oracle = secondary_boundary_oracle(&inst.triple, &inst.module, n);
            assert_matches(&engine, &oracle, &format!("{} degree {n}", inst.name));
            compared += 1;
        }
    }
    assert!(compared > 40);
}

#[test]
fn classical_boundary_matches_oracle_over_ground() {
    for inst in named_fixtures().into_iter().chain(random_instances(12, 10)) {
        let t = Triple::over_ground(inst.triple.a.clone());
        for n in 1..=3 {
            if secondary_dim(&t, &inst.module, n) > ORACLE_LIMIT {
                break;
            }
            let engine = classical_boundary(&t.a, &inst.module, n).unwrap();
            assert_matches(&engine, &secondary_boundary_oracle(&t, &inst.module, n), &inst.name);
        }
    }
}

#[test]
fn dual_numbers_d2_expanded() {
    // d₂(m⊗a⊗b) = ma⊗b − m⊗ab + bm⊗a on the eight basis chains of FIX-D
    let inst = fix_d();
    let d2 = classical_boundary(&inst.triple.a, &inst.module, 2).unwrap();
    assert_eq!((d2.rows(), d2.cols()), (4, 8));
    let q = |n: i64| hochschild::Field::Rational.from_i64(n);
    // column (x, x, 1): x·x ⊗ 1 − x ⊗ x + 1·x ⊗ x = 0
    let col = (2 + 1) * 2;
    assert!(d2.column(col).is_empty());
    // column (1, x, x): x ⊗ x − 1 ⊗ 0 + x ⊗ x = 2 (x ⊗ x)
    assert_eq!(d2.column(2 + 1), &vec![(3, q(2))]);
}

#[test]
fn homology_matches_dense_oracle() {
    let cases = [
        (fix_k(), 3),
        (fix_d(), 3),
        (fix_dd(), 3),
        (fix_p3(), 3),
        (fix_kb(), 3),
        (fix_m2(), 2),
    ];
    for (inst, max) in cases {
        let c = build_complex(ComplexKind::Secondary, &inst.triple, &inst.module, BuildOptions::degree(max)).unwrap();
        assert_eq!(c.homology_dims().unwrap(), homology_oracle(&inst.triple, &inst.module, max), "{}", inst.name);
    }
    for inst in random_instances(13, 12) {
        let c = build_complex(ComplexKind::Secondary, &inst.triple, &inst.module, BuildOptions::degree(3)).unwrap();
        assert_eq!(c.homology_dims().unwrap(), homology_oracle(&inst.triple, &inst.module, 3), "{}", inst.name);
    }
}

#[test]
fn kahler_expected_values_from_rank_oracle() {
    let d = fix_d();
    let t = Triple::over_ground(d.triple.a.clone());
    assert_eq!(homology_oracle(&t, &d.module, 2)[1], 1);
    let p = fix_p3();
    assert_eq!(homology_oracle(&p.triple, &p.module, 2)[1], 2);
    let dd = fix_dd();
    assert_eq!(&homology_oracle(&dd.triple, &dd.module, 3)[1..], &[0, 0]);
}

#[test]
fn h0_is_coinvariants() {
    for inst in named_fixtures().into_iter().chain(random_instances(14, 20)) {
        let c = build_complex(ComplexKind::Secondary, &inst.triple, &inst.module, BuildOptions::degree(1)).unwrap();
        assert_eq!(c.homology_dim(0).unwrap(), h0_oracle(&inst.triple.a, &inst.module), "{}", inst.name);
    }
}

#[test]
fn fundamental_fixture_small_degrees() {
    let inst = fix_fund();
    let c = build_complex(ComplexKind::Secondary, &inst.triple, &inst.module, BuildOptions::degree(2)).unwrap();
    assert_eq!(c.homology_dims().unwrap(), homology_oracle(&inst.triple, &inst.module, 2));
}
