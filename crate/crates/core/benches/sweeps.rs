use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use superflag::atlas::verify_atlas;
use superflag::classifier::classify_h0;
use superflag::{Execution, FlagType, LieSuperAlgebra, Series};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn classify_sweep(c: &mut Criterion) {
    let g = LieSuperAlgebra::build(Series::Gl, 3, 2).unwrap();
    let flags = FlagType::enumerate(Series::Gl, 3, 2, 2);
    let mut group = c.benchmark_group("classify gl(3|2) r<=2");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, exec| {
            b.iter(|| exec.map(&flags, |ft| classify_h0(&g, ft).unwrap().generator_dim))
        });
    }
    group.finish();
}

fn atlas_sweep(c: &mut Criterion) {
    let ft = FlagType::new(Series::Gl, 3, 1, vec![2, 1], vec![1, 0]).unwrap();
    let mut group = c.benchmark_group("verify_atlas gl(3|1) (2,1|1,0)");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, exec| {
            b.iter(|| black_box(verify_atlas(&ft, 0..8, *exec)))
        });
    }
    group.finish();
}

criterion_group!(benches, classify_sweep, atlas_sweep);
criterion_main!(benches);
