use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hochschild::complexes::{build_complex, BuildOptions, ComplexKind};
use hochschild::fixtures::{fix_dd, fix_p3, matrix_lift};
use hochschild::parallel::run_sequential;

fn build_and_rank(c: &mut Criterion) {
    let cases = [
        ("FIX-P3 deg 5", fix_p3(), 5),
        ("FIX-DD deg 5", fix_dd(), 5),
        ("FIX-DD-M2 deg 3", matrix_lift(&fix_dd(), 2).unwrap(), 3),
    ];
    let mut group = c.benchmark_group("secondary");
    group.sample_size(10);
    for (label, inst, n) in &cases {
        let run = || {
            let cx = build_complex(ComplexKind::Secondary, &inst.triple, &inst.module, BuildOptions::degree(*n)).unwrap();
            cx.homology_dims().unwrap()
        };
        group.bench_function(BenchmarkId::new("parallel", label), |b| b.iter(run));
        group.bench_function(BenchmarkId::new("sequential", label), |b| b.iter(|| run_sequential(run)));
    }
    group.finish();
}

criterion_group!(benches, build_and_rank);
criterion_main!(benches);
