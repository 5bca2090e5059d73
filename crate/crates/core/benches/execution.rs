use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use urysohn::nystrom::apply_km_many;
use urysohn::{
    builtin, solve_discrete_galerkin, solve_nystrom, CompositeGrid, Execution, GalerkinSetup, GridFunction,
    NewtonConfig, QuadratureRule,
};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn operator_application(c: &mut Criterion) {
    let p = builtin();
    let mut group = c.benchmark_group("apply_km_many");
    for m in [100usize, 400] {
        let grid = CompositeGrid::new(m, 1, QuadratureRule::gauss(2).unwrap()).unwrap();
        let x = GridFunction::from_fn(&grid, |t| 2.0 / (2.0 * t + 1.0)).unwrap();
        let targets = grid.nodes().to_vec();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, m), &m, |b, _| {
                b.iter(|| apply_km_many(&p, &grid, black_box(&x), &targets, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn galerkin(c: &mut Criterion) {
    let p = builtin();
    let mut group = c.benchmark_group("galerkin_solve");
    group.sample_size(10);
    for n in [10usize, 20] {
        let setup = GalerkinSetup::new(n, 1).unwrap();
        for (name, exec) in MODES {
            let cfg = NewtonConfig::default().with_execution(exec);
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, _| {
                b.iter(|| solve_discrete_galerkin(&p, black_box(&setup), &cfg).unwrap())
            });
        }
    }
    group.finish();
}

fn nystrom(c: &mut Criterion) {
    let p = builtin();
    let mut group = c.benchmark_group("nystrom_solve");
    group.sample_size(10);
    for m in [50usize, 200] {
        let grid = Arc::new(CompositeGrid::new(m, 1, QuadratureRule::gauss(2).unwrap()).unwrap());
        for (name, exec) in MODES {
            let cfg = NewtonConfig::default().with_execution(exec);
            group.bench_with_input(BenchmarkId::new(name, m), &m, |b, _| {
                b.iter(|| solve_nystrom(&p, Arc::clone(&grid), &cfg).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, operator_application, galerkin, nystrom);
criterion_main!(benches);
