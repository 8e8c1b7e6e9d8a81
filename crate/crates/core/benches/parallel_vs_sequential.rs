use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gseries::asymptotics::residual_sweep;
use gseries::par;
use gseries::quadrature::{cauchy_coefficient, ContourSpec};
use gseries::{BigReal, CoefficientTable, Rational};

fn modes() -> [(&'static str, bool); 2] {
    [("parallel", false), ("sequential", true)]
}

fn run<T>(sequential: bool, f: impl FnOnce() -> T) -> T {
    if sequential {
        par::sequential(f)
    } else {
        f()
    }
}

fn table_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("table_build");
    group.sample_size(10);
    for (name, sequential) in modes() {
        group.bench_function(BenchmarkId::new(name, 800), |b| {
            b.iter(|| run(sequential, || CoefficientTable::with_max_index(800)))
        });
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let table = CoefficientTable::with_max_index(1000);
    let mut group = c.benchmark_group("residual_sweep");
    group.sample_size(10);
    for (name, sequential) in modes() {
        group.bench_function(BenchmarkId::new(name, 1000), |b| {
            b.iter(|| run(sequential, || residual_sweep(&table, 10, 1000, 128).unwrap()))
        });
    }
    group.finish();
}

fn quadrature(c: &mut Criterion) {
    let radius = BigReal::from_rational(&Rational::from((1, 2)), 320);
    let spec = ContourSpec::new(radius, 256, 320).unwrap();
    let mut group = c.benchmark_group("cauchy_coefficient");
    for (name, sequential) in modes() {
        group.bench_function(BenchmarkId::new(name, 256), |b| {
            b.iter(|| run(sequential, || cauchy_coefficient(20, &spec).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, table_build, sweep, quadrature);
criterion_main!(benches);
