use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nalgebra::DMatrix;
use num_complex::Complex64;

use semihilbert::propsuite::{self, SuiteOptions};
use semihilbert::{numrange, operator, Exec, ToleranceConfig};

fn execs() -> [(&'static str, Exec); 2] {
    [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)]
}

fn bench_suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("check_theorem");
    group.sample_size(10);
    for id in ["radius-chain", "douglas-reduced-solution"] {
        for (name, exec) in execs() {
            let opts = SuiteOptions { trials: 200, seed: 11, exec, ..Default::default() };
            group.bench_with_input(BenchmarkId::new(name, id), &opts, |b, opts| {
                b.iter(|| propsuite::check_theorem(id, opts).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_numrange(c: &mut Criterion) {
    let n = 8;
    let a = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(if i < 6 { (i + 1) as f64 } else { 0.0 }, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    // zero block from ker A into ran A
    let t = DMatrix::from_fn(n, n, |i, j| {
        if i < 6 && j >= 6 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(((3 * i + 5 * j) % 7) as f64 - 3.0, ((i * j) % 5) as f64 - 2.0)
        }
    });
    let op = operator(&a, &t, ToleranceConfig::default()).unwrap();
    let mut group = c.benchmark_group("numrange");
    for (name, exec) in execs() {
        group.bench_function(name, |b| b.iter(|| numrange::numrange(&op, 2048, exec).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, bench_suite, bench_numrange);
criterion_main!(benches);
