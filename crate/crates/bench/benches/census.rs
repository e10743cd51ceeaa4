use std::hint::black_box;

use condsym_bench::census_targets;
use condsym_core::{census, symmetry_direct, symmetry_spectral, CensusOptions, Distribution, SymmetryScenario};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn censuses(c: &mut Criterion) {
    let mut group = c.benchmark_group("census");
    group.sample_size(10);
    for (label, alpha, d) in census_targets() {
        for workers in [1, 4] {
            let options = CensusOptions { workers, ..CensusOptions::default() };
            group.bench_with_input(BenchmarkId::new(label, workers), &options, |b, o| {
                b.iter(|| census(black_box(&alpha), d, o).expect("target fits under the caps"))
            });
        }
    }
    group.finish();
}

fn single_checks(c: &mut Criterion) {
    let mut group = c.benchmark_group("symmetry");
    for (label, alpha, _) in census_targets() {
        let x = alpha.group().clone();
        let s = SymmetryScenario::new(alpha, Distribution::uniform(&x), Distribution::uniform(&x)).expect("same group");
        group.bench_function(BenchmarkId::new("direct", label), |b| b.iter(|| symmetry_direct(black_box(&s))));
        group.bench_function(BenchmarkId::new("spectral", label), |b| b.iter(|| symmetry_spectral(black_box(&s))));
    }
    group.finish();
}

criterion_group!(benches, censuses, single_checks);
criterion_main!(benches);
