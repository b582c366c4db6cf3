use std::fmt::Write as _;
use std::path::Path;

use hochschild::algebra::{validate_bimodule, validate_triple, Triple};
use hochschild::complexes::{build_complex, BuildOptions, ChainIndexScheme, ComplexKind};
use hochschild::fixtures::{fixture, matrix_lift, named_fixtures, Instance};
use hochschild::kahler::{kahler_module, verify_fundamental_sequence, verify_h1_kahler};
use hochschild::morita::{standard_matrix_morita, verify_morita_invariance};
use hochschild::sequence::verify_exact_sequence;
use hochschild::{Field, Report, Scalar};
use serde::Serialize;

use crate::format::InstanceFile;
use crate::{CliError, Common};

#[derive(Serialize)]
struct Output {
    command: &'static str,
    instance: String,
    field: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    kind: Option<ComplexKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dims: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reps: Option<Vec<Vec<String>>>,
    reports: Vec<Report>,
    passed: bool,
}

struct Loaded {
    file: InstanceFile,
    inst: Instance,
    opts: BuildOptions,
}

fn load(common: &Common) -> Result<Loaded, CliError> {
    let text = std::fs::read_to_string(&common.path).map_err(|source| CliError::Io { path: common.path.clone(), source })?;
    let file = InstanceFile::parse(&text)?;
    let mut inst = file.build()?;
    if inst.name.is_empty() {
        inst.name = common.path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    }
    if let Some(target) = &common.field {
        let target: Field = target.parse()?;
        let current = inst.triple.field();
        match (current, target) {
            _ if current == target => {}
            (Field::Rational, Field::Prime(p)) => inst = inst.reduce_mod(p)?,
            _ => return Err(CliError::Input(format!("cannot move an instance over {current} to {target}"))),
        }
    }
    let mut opts = BuildOptions::default();
    if let Some(cap) = common.guard_bytes {
        opts.guard_bytes = cap;
    }
    Ok(Loaded { file, inst, opts })
}

fn axioms(inst: &Instance) -> Report {
    let mut r = Report::new("axioms");
    r.extend(validate_triple(&inst.triple));
    r.extend(validate_bimodule(&inst.module, &inst.triple));
    r
}

fn emit(common: &Common, out: Output, extra: &str) -> Result<bool, CliError> {
    let mut text = format!("instance {} over {}\n", out.instance, out.field);
    for r in &out.reports {
        text.push_str(&r.to_string());
    }
    text.push_str(extra);
    text.push_str(if out.passed { "result: ok\n" } else { "result: FAILED\n" });
    print!("{text}");
    if let Some(path) = &common.output {
        let json = serde_json::to_string_pretty(&out).expect("reports serialize") + "\n";
        std::fs::write(path, json).map_err(|source| CliError::Io { path: path.clone(), source })?;
    }
    Ok(out.passed)
}

fn output(command: &'static str, inst: &Instance, reports: Vec<Report>) -> Output {
    let passed = reports.iter().all(Report::passed);
    Output {
        command,
        instance: inst.name.clone(),
        field: inst.triple.field().to_string(),
        kind: None,
        dims: None,
        reps: None,
        reports,
        passed,
    }
}

/// Runs `body` only when the axioms hold; otherwise reports them and fails.
fn checked(
    common: &Common,
    command: &'static str,
    body: impl FnOnce(&Loaded) -> Result<Vec<Report>, CliError>,
) -> Result<bool, CliError> {
    let loaded = load(common)?;
    let ax = axioms(&loaded.inst);
    if !ax.passed() {
        return emit(common, output(command, &loaded.inst, vec![ax]), "");
    }
    let reports = body(&loaded)?;
    emit(common, output(command, &loaded.inst, reports), "")
}

pub fn validate(common: &Common) -> Result<bool, CliError> {
    let loaded = load(common)?;
    let ax = axioms(&loaded.inst);
    emit(common, output("validate", &loaded.inst, vec![ax]), "")
}

fn coeff_prefix(c: &Scalar) -> String {
    if c.is_one() {
        String::new()
    } else if c.to_string().contains(['/', '-']) {
        format!("({c})·")
    } else {
        format!("{c}·")
    }
}

fn chain_label(t: &Triple, kind: ComplexKind, n: usize, dim_m: usize, idx: usize) -> String {
    let db = if kind == ComplexKind::Secondary { t.b.dim() } else { 1 };
    let c = ChainIndexScheme::new(n, dim_m, t.a.dim(), db).decode(idx);
    let mut s = format!("m{}", c.m);
    for &a in &c.a {
        let _ = write!(s, " ⊗ {}", t.a.labels()[a]);
    }
    if kind == ComplexKind::Secondary && !c.b.is_empty() {
        let bs: Vec<&str> = c.b.iter().map(|&b| t.b.labels()[b].as_str()).collect();
        let _ = write!(s, " | {}", bs.join(" ⊗ "));
    }
    s
}

pub fn homology(common: &Common, kind: ComplexKind, max_degree: usize, reps: bool) -> Result<bool, CliError> {
    let loaded = load(common)?;
    let inst = &loaded.inst;
    let ax = axioms(inst);
    if !ax.passed() {
        return emit(common, output("homology", inst, vec![ax]), "");
    }
    let opts = BuildOptions { max_degree, ..loaded.opts };
    let cx = build_complex(kind, &inst.triple, &inst.module, opts)?;
    let dims = cx.homology_dims()?;
    let mut extra = format!("{kind} homology dims (degrees 0..{max_degree}): {dims:?}\n");
    let mut out = output("homology", inst, vec![ax]);
    out.kind = Some(kind);
    if reps {
        let mut all = Vec::new();
        for n in 0..max_degree {
            let h = cx.homology(n)?;
            let lines: Vec<String> = h
                .reps
                .iter()
                .map(|v| {
                    v.iter()
                        .map(|(i, c)| format!("{}[{}]", coeff_prefix(c), chain_label(&inst.triple, kind, n, inst.module.dim(), *i)))
                        .collect::<Vec<_>>()
                        .join(" + ")
                })
                .collect();
            for l in &lines {
                let _ = writeln!(extra, "  H{n}: {l}");
            }
            all.push(lines);
        }
        out.reps = Some(all);
    }
    out.dims = Some(dims);
    emit(common, out, &extra)
}

pub fn exactseq(common: &Common) -> Result<bool, CliError> {
    checked(common, "exactseq", |l| Ok(vec![verify_exact_sequence(&l.inst.triple, &l.inst.module, l.opts)?]))
}

pub fn morita(common: &Common, matrix_size: Option<usize>, max_degree: usize) -> Result<bool, CliError> {
    checked(common, "morita", |l| {
        let n = matrix_size.or(l.file.morita.as_ref().map(|m| m.matrix_size)).unwrap_or(2);
        let d = standard_matrix_morita(&l.inst.triple, n)?;
        Ok(vec![verify_morita_invariance(&d, &l.inst.module, max_degree, l.opts)?])
    })
}

pub fn kahler(common: &Common) -> Result<bool, CliError> {
    checked(common, "kahler", |l| {
        let t = &l.inst.triple;
        let mut dims = Report::new("Kähler differentials");
        dims.check("dim Ω¹_{A|k}", true, kahler_module(&Triple::over_ground(t.a.clone()))?.dim().to_string());
        dims.check("dim Ω¹_{A|B}", true, kahler_module(t)?.dim().to_string());
        Ok(vec![dims, verify_h1_kahler(t, &l.inst.module, l.opts)?, verify_fundamental_sequence(t)?])
    })
}

fn builtin() -> Vec<Instance> {
    let mut all = named_fixtures();
    for base in ["FIX-K", "FIX-D", "FIX-DD", "FIX-P3"] {
        all.push(matrix_lift(&fixture(base).expect("built-in"), 2).expect("lift"));
    }
    all
}

pub fn fixtures(names: &[String], dir: Option<&Path>) -> Result<bool, CliError> {
    let chosen: Vec<Instance> = if names.is_empty() {
        if dir.is_none() {
            for inst in builtin() {
                println!("{}", inst.name);
            }
            return Ok(true);
        }
        builtin()
    } else {
        names
            .iter()
            .map(|n| fixture(n).ok_or_else(|| CliError::Input(format!("unknown fixture `{n}`"))))
            .collect::<Result<_, _>>()?
    };
    match dir {
        None if chosen.len() == 1 => print!("{}", InstanceFile::from_instance(&chosen[0]).to_toml()),
        None => return Err(CliError::Input("several fixtures need --dir".into())),
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })?;
            for inst in &chosen {
                let path = dir.join(format!("{}.toml", inst.name.to_ascii_lowercase()));
                std::fs::write(&path, InstanceFile::from_instance(inst).to_toml()).map_err(|source| CliError::Io { path, source })?;
                println!("wrote {}", inst.name);
            }
        }
    }
    Ok(true)
}
