//! Sequential against parallel execution: per-quad checks on a 41×41 net and
//! the nine-parameter cousin sweep.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use isothermic::net::classify;
use isothermic::special::{catenoid_pair, cousin_sweep};
use isothermic::transforms::darboux::ribaucour_residual;
use isothermic::transforms::{christoffel, darboux_riccati};
use isothermic::{Execution, GridWindow, Quaternion as Q};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn quad_checks(c: &mut Criterion) {
    let (g, _) = catenoid_pair(20, GridWindow::symmetric(20, 20).unwrap()).unwrap();
    let f = g.to_affine();
    let fact = classify(&f, Execution::Sequential).factorization.unwrap();
    let pair = christoffel(&f, &fact, Q::ZERO).unwrap();
    let hat = darboux_riccati(&pair, 0.3, f.get(0, 0) + Q::new(0.2, 0.5, -0.3, 0.4), Execution::Sequential).unwrap();
    let fp = f.to_projective();
    let mut group = c.benchmark_group("quad checks 41x41");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new("classify", name), &exec, |b, &e| b.iter(|| classify(&f, e)));
        group.bench_with_input(BenchmarkId::new("ribaucour", name), &exec, |b, &e| {
            b.iter(|| ribaucour_residual(&fp, &hat.hat, e))
        });
    }
    group.finish();
}

fn lambda_sweep(c: &mut Criterion) {
    let (g, h) = catenoid_pair(20, GridWindow::symmetric(10, 10).unwrap()).unwrap();
    let lambdas = [-0.8, -0.117, -0.05, -0.025, 1e-7, 0.01, 0.025, 0.085, 0.25];
    let mut group = c.benchmark_group("cousin sweep");
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| {
            b.iter(|| cousin_sweep(&g, &h, &lambdas, e).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, quad_checks, lambda_sweep);
criterion_main!(benches);
