use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hermite_core::algebra::Field;
use hermite_core::exec::ExecMode;
use hermite_core::witt::{distinguished_space, norm_group_oracle, verify_pfister_relations};

const MODES: [(&str, ExecMode); 2] = [("sequential", ExecMode::Sequential), ("parallel", ExecMode::Parallel)];

fn oracle(c: &mut Criterion) {
    let k = Field::gf8();
    let w = k.generator();
    let e = distinguished_space(k, &w, &(&w * &w)).unwrap();
    let mut group = c.benchmark_group("norm_group_oracle_gf8");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &mode| {
            b.iter(|| norm_group_oracle(&e, mode).unwrap())
        });
    }
    group.finish();
}

fn pfister(c: &mut Criterion) {
    let mut group = c.benchmark_group("pfister_relations_f2u_20");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &mode| {
            b.iter(|| verify_pfister_relations(Field::Rational, 20, 0, mode).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, oracle, pfister);
criterion_main!(benches);
