//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
//! All comparisons are exact; the only tolerances are the wall-clock budgets below.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use hochschild::algebra::{AlgebraMorphism, Triple};
use hochschild::complexes::{build_complex, BuildOptions, ComplexKind};
use hochschild::fixtures::*;
use hochschild::kahler::{kahler_module, verify_fundamental_sequence, verify_h1_kahler};
use hochschild::linalg::SparseMatrix;
use hochschild::morita::{standard_matrix_morita, verify_morita_invariance};
use hochschild::sequence::*;
use hochschild::Field;

const BUDGET_BOUNDARY: Duration = Duration::from_secs(60);
const BUDGET_SEQUENCE: Duration = Duration::from_secs(120);
const BUDGET_MORITA: Duration = Duration::from_secs(300);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, budget: Duration) -> Result<String, String> {
    let t = start.elapsed();
    ensure(t <= budget, || format!("took {t:.1?}, budget {budget:?}"))?;
    Ok(format!("{t:.2?}"))
}

fn dims(kind: ComplexKind, inst: &Instance, n: usize) -> Vec<usize> {
    build_complex(kind, &inst.triple, &inst.module, BuildOptions::degree(n)).unwrap().homology_dims().unwrap()
}

fn boundary_squares() -> Outcome {
    let start = Instant::now();
    let instances: Vec<Instance> = random_instances(1, 24);
    for inst in &instances {
        ensure(inst.triple.a.dim() <= 2 && inst.triple.b.dim() <= 2 && inst.module.dim() <= 2, || format!("{} too large", inst.name))?;
        for kind in [ComplexKind::Classical, ComplexKind::Secondary] {
            // build_complex itself refuses ∂∂ ≠ 0; recheck the products explicitly
            let c = build_complex(kind, &inst.triple, &inst.module, BuildOptions::degree(4)).map_err(|e| format!("{}: {e}", inst.name))?;
            for n in 1..4 {
                let dd = c.boundary(n).unwrap().mul(c.boundary(n + 1).unwrap()).unwrap();
                ensure(dd.is_zero(), || format!("{} {kind}: ∂{n}∂{} ≠ 0", inst.name, n + 1))?;
            }
        }
    }
    Ok(format!("{} random triples, degrees ≤ 4, {}", instances.len(), within(start, BUDGET_BOUNDARY)?))
}

fn ground_collapse() -> Outcome {
    let mut names = Vec::new();
    let mut all = named_fixtures();
    all.push(matrix_lift(&fix_d(), 2).unwrap());
    for inst in all.iter().filter(|i| i.triple.b.dim() == 1) {
        let s = dims(ComplexKind::Secondary, inst, 4);
        let c = dims(ComplexKind::Classical, inst, 4);
        ensure(s == c, || format!("{}: secondary {s:?} vs classical {c:?}", inst.name))?;
        names.push(inst.name.clone());
    }
    Ok(format!("degrees ≤ 3 on {}", names.join(", ")))
}

fn h0_formula() -> Outcome {
    let mut all = named_fixtures();
    for base in [fix_k(), fix_d(), fix_dd(), fix_p3()] {
        all.push(matrix_lift(&base, 2).unwrap());
    }
    all.extend(random_instances(3, 20));
    for inst in &all {
        let h0 = dims(ComplexKind::Secondary, inst, 1)[0];
        let expected = common::h0_oracle(&inst.triple.a, &inst.module);
        ensure(h0 == expected, || format!("{}: H₀ = {h0}, dim M − dim [M, A] = {expected}", inst.name))?;
    }
    Ok(format!("{} instances", all.len()))
}

fn worked_examples() -> Outcome {
    let dd = fix_dd();
    let h = dims(ComplexKind::Secondary, &dd, 3);
    ensure(h[1] == 0 && h[2] == 0, || format!("FIX-DD H₁, H₂ = {}, {}", h[1], h[2]))?;
    let kb = fix_kb();
    let h = dims(ComplexKind::Secondary, &kb, 3);
    let mb = coefficients_over_base(&kb.triple, &kb.module).unwrap();
    let base = Instance::new("B", Triple::over_ground(kb.triple.b.clone()), mb);
    let h1b = dims(ComplexKind::Classical, &base, 2)[1];
    ensure(h[1] == 0 && h[2] == h1b, || format!("(k,B,ε): H₁ = {}, H₂ = {}, H₁(B,M) = {h1b}", h[1], h[2]))?;
    Ok(format!("FIX-DD H₁ = H₂ = 0; (k,B,ε) H₁ = 0, H₂ = H₁(B,M) = {h1b}"))
}

fn exact_sequence() -> Outcome {
    let start = Instant::now();
    let mut all = vec![fix_d(), fix_dd(), fix_p3()];
    all.extend(random_instances(5, 20));
    let mut failed = Vec::new();
    for inst in &all {
        let r = verify_exact_sequence(&inst.triple, &inst.module, BuildOptions::default()).map_err(|e| e.to_string())?;
        if !r.passed() {
            let names: Vec<&str> = r.failures().map(|c| c.name.as_str()).collect();
            let sym = if inst.module.is_symmetric() { "A-symmetric" } else { "M not A-symmetric" };
            failed.push(format!("{} ({sym}): {}", inst.name, names.join(", ")));
        }
    }
    let t = within(start, BUDGET_SEQUENCE)?;
    ensure(failed.is_empty(), || format!("{} of {} exact; {}", all.len() - failed.len(), all.len(), failed.join("; ")))?;
    Ok(format!("{} instances, {t}", all.len()))
}

fn kahler() -> Outcome {
    let mut checked = Vec::new();
    for inst in named_fixtures() {
        if !inst.triple.a.is_commutative() || !inst.module.is_symmetric() {
            continue;
        }
        let r = verify_h1_kahler(&inst.triple, &inst.module, BuildOptions::default()).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("{}: {r}", inst.name))?;
        checked.push(inst.name);
    }
    let d = fix_d();
    let h1d = dims(ComplexKind::Classical, &d, 2)[1];
    let om_d = kahler_module(&Triple::over_ground(d.triple.a.clone())).unwrap().dim();
    let p = fix_p3();
    let h1p = dims(ComplexKind::Secondary, &p, 2)[1];
    let om_p = kahler_module(&p.triple).unwrap().dim();
    // independently pinned by the dense rank oracle
    let oracle_d = common::homology_oracle(&Triple::over_ground(d.triple.a.clone()), &d.module, 2)[1];
    let oracle_p = common::homology_oracle(&p.triple, &p.module, 2)[1];
    ensure((h1d, om_d, oracle_d) == (1, 1, 1), || format!("FIX-D: H₁ {h1d}, Ω¹ {om_d}, oracle {oracle_d}"))?;
    ensure((h1p, om_p, oracle_p) == (2, 2, 2), || format!("FIX-P3: H₁ {h1p}, Ω¹ {om_p}, oracle {oracle_p}"))?;
    Ok(format!("{}; FIX-D 1, FIX-P3 2", checked.join(", ")))
}

fn morita() -> Outcome {
    let start = Instant::now();
    let dd = fix_dd();
    let lift = matrix_lift(&dd, 2).unwrap();
    let source = dims(ComplexKind::Secondary, &dd, 3);
    let target = dims(ComplexKind::Secondary, &lift, 3);
    ensure(source == target, || format!("FIX-DD {source:?} vs lift {target:?}"))?;
    for inst in [fix_d(), dd] {
        let data = standard_matrix_morita(&inst.triple, 2).unwrap();
        // max_n = 3: chain maps through degree 3, homotopies in degrees 0..=2
        let r = verify_morita_invariance(&data, &inst.module, 3, BuildOptions::default()).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("{}: {r}", inst.name))?;
    }
    Ok(format!("FIX-DD and its 2×2 lift {source:?} over Q; ψ, φ, h, l identities on FIX-D; {}", within(start, BUDGET_MORITA)?))
}

fn fundamental() -> Outcome {
    let r = verify_fundamental_sequence(&fix_fund().triple).map_err(|e| e.to_string())?;
    ensure(r.passed(), || r.to_string())?;
    let dims = r.checks.iter().find(|c| c.name == "dims").map(|c| c.detail.clone()).unwrap_or_default();
    Ok(dims)
}

fn functoriality() -> Outcome {
    let f = Field::Rational;
    let q = |n: i64| f.from_i64(n);
    let inst = fix_dd();
    let (t, m) = (&inst.triple, &inst.module);
    let c = build_complex(ComplexKind::Secondary, t, m, BuildOptions::degree(3)).unwrap();
    let x = t.a.left_mult_matrix(&[(1, q(1))]);
    let y = t.a.left_mult_matrix(&[(0, q(1)), (1, q(1))]);
    let scale = |k: i64| AlgebraMorphism::from_columns(f, 2, vec![vec![(0, q(1))], vec![(1, q(k))]]);
    let tm = |k: i64| TripleMorphism { source: t.clone(), target: t.clone(), f: scale(k), g: scale(k) };
    let pm = |g: &SparseMatrix, n| pushforward_m(g, m, m, t, n).unwrap();
    let pf = |g: &TripleMorphism, n| pushforward_fg(g, m, n).unwrap();
    // (f, g)_* starts from the complex of the restricted coefficients
    let restricted = restrict_coefficients(&tm(2), m).unwrap();
    let c2 = build_complex(ComplexKind::Secondary, t, &restricted, BuildOptions::degree(3)).unwrap();
    for n in 0..=3 {
        ensure(pm(&SparseMatrix::identity(f, 2), n) == SparseMatrix::identity(f, c.dim(n)), || format!("id_* in degree {n}"))?;
        ensure(pm(&y.mul(&x).unwrap(), n) == pm(&y, n).mul(&pm(&x, n)).unwrap(), || format!("(gf)_* on M in degree {n}"))?;
        ensure(pf(&TripleMorphism::identity(t), n) == SparseMatrix::identity(f, c.dim(n)), || format!("(id,id)_* in degree {n}"))?;
        let composed = pf(&tm(3).compose(&tm(2)).unwrap(), n);
        ensure(composed == pf(&tm(3), n).mul(&pf(&tm(2), n)).unwrap(), || format!("(f,g) composition in degree {n}"))?;
        if n > 0 {
            ensure(is_chain_map_at(&c, &c, &pm(&x, n), &pm(&x, n - 1), n).unwrap(), || format!("x_* chain map at {n}"))?;
            ensure(is_chain_map_at(&c2, &c, &pf(&tm(2), n), &pf(&tm(2), n - 1), n).unwrap(), || format!("(f,g)_* chain map at {n}"))?;
        }
    }
    let fund = fix_fund();
    let inc = TripleMorphism::from_base(&fund.triple);
    let restricted = restrict_coefficients(&inc, &fund.module).unwrap();
    let src = build_complex(ComplexKind::Secondary, &inc.source, &restricted, BuildOptions::degree(2)).unwrap();
    let tgt = build_complex(ComplexKind::Secondary, &fund.triple, &fund.module, BuildOptions::degree(2)).unwrap();
    for n in 1..=2 {
        let fa = pushforward_fg(&inc, &fund.module, n).unwrap();
        let fb = pushforward_fg(&inc, &fund.module, n - 1).unwrap();
        ensure(is_chain_map_at(&src, &tgt, &fa, &fb, n).unwrap(), || format!("(B,B,id) → FIX-FUND chain map at {n}"))?;
    }
    Ok("FIX-DD degrees ≤ 3, FIX-FUND inclusion degrees ≤ 2".into())
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_hochschild")).args(args).output().expect("spawn cli");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path().to_str().unwrap();
    let (code, _) = run_cli(&["fixtures", "--dir", d]);
    ensure(code == 0, || "fixtures failed".into())?;
    let cases: Vec<Vec<&str>> = vec![
        vec!["validate", "fix-dd.toml"],
        vec!["homology", "fix-dd.toml", "--max-degree", "4", "--reps"],
        vec!["homology", "fix-p3.toml", "--kind", "classical", "--field", "Fp:1009"],
        vec!["exactseq", "fix-dd.toml"],
        vec!["morita", "fix-dd.toml"],
        vec!["kahler", "fix-p3.toml"],
    ];
    for case in &cases {
        let mut runs = Vec::new();
        for k in 0..2 {
            let file = format!("{d}/{}", case[1]);
            let json = format!("{d}/run{k}.json");
            let mut args: Vec<&str> = vec![case[0], &file, "--output", &json];
            args.extend(&case[2..]);
            let (code, stdout) = run_cli(&args);
            ensure(code == 0, || format!("`{}` exited {code}", case.join(" ")))?;
            runs.push((stdout, std::fs::read(&json).map_err(|e| e.to_string())?));
        }
        ensure(runs[0] == runs[1], || format!("`{}` differs between runs", case.join(" ")))?;
    }
    Ok(format!("{} commands, stdout and JSON byte-identical", cases.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("∂∂ = 0 on random triples", boundary_squares),
        ("B = k gives classical homology", ground_collapse),
        ("H₀ = M / [M, A]", h0_formula),
        ("worked examples", worked_examples),
        ("exact sequence", exact_sequence),
        ("H₁ and Kähler differentials", kahler),
        ("Morita invariance", morita),
        ("fundamental exact sequence", fundamental),
        ("functoriality", functoriality),
        ("CLI determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
