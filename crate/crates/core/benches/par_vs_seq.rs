use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mbp_core::diffops::build_bochner_operator;
use mbp_core::fixtures;
use mbp_core::orthopoly::{check_eigenfunction_with, check_symmetry_with, monic_sequence};
use mbp_core::par::Execution;
use mbp_core::verify::{run_suite, SuiteOptions};
use mbp_core::weights::matrix_moments;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_suite");
    group.sample_size(10);
    for (name, spec) in [("hermite_2x2", fixtures::hermite_2x2()), ("laguerre_4x4", fixtures::laguerre_4x4())] {
        for (mode, execution) in MODES {
            let opts = SuiteOptions { execution, record_timings: false, ..SuiteOptions::default() };
            group.bench_with_input(BenchmarkId::new(mode, name), &spec, |b, s| b.iter(|| run_suite(s, &opts)));
        }
    }
    group.finish();
}

fn kernels(c: &mut Criterion) {
    let spec = fixtures::jacobi_3x3().validate().unwrap();
    let d3 = build_bochner_operator(&spec).unwrap().power(3).unwrap();
    let moments = matrix_moments(&spec, 30).unwrap();
    let seq = monic_sequence(&moments, 8).unwrap();
    let mut group = c.benchmark_group("kernels");
    for (mode, exec) in MODES {
        group.bench_function(BenchmarkId::new("symmetry_d3", mode), |b| {
            b.iter(|| check_symmetry_with(&d3, &moments, 8, exec).unwrap())
        });
        group.bench_function(BenchmarkId::new("eigenfunction_d3", mode), |b| {
            b.iter(|| check_eigenfunction_with(&seq, &d3, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, suite, kernels);
criterion_main!(benches);
