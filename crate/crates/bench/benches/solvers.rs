use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use cntflow_bench::{clean_case, table_case};
use cntflow_core::blocklinalg::{factorize, identity_block, BlockTridiagonalSystem};
use cntflow_core::{kellerbox, shooting, ShootingConfig, SolverConfig};

fn keller_box(c: &mut Criterion) {
    let mut group = c.benchmark_group("kellerbox");
    for intervals in [250usize, 1000, 4000] {
        let cfg = SolverConfig {
            intervals,
            ..Default::default()
        };
        let (p, r) = clean_case(1.0);
        group.bench_with_input(BenchmarkId::new("clean_pr1", intervals), &cfg, |b, cfg| {
            b.iter(|| kellerbox::solve(black_box(&p), &r, cfg).unwrap())
        });
    }
    let (p, r) = table_case();
    group.bench_function("table_baseline", |b| {
        b.iter(|| kellerbox::solve(black_box(&p), &r, &SolverConfig::default()).unwrap())
    });
    group.finish();
}

fn shooting_solver(c: &mut Criterion) {
    let (p, r) = clean_case(10.0);
    c.bench_function("shooting/clean_pr10", |b| {
        b.iter(|| shooting::solve_shooting(black_box(&p), &r, &ShootingConfig::default()).unwrap())
    });
}

fn block_solve(c: &mut Criterion) {
    let n = 1001;
    let mut sys = BlockTridiagonalSystem::zeros(n);
    for (j, d) in sys.diag.iter_mut().enumerate() {
        *d = identity_block();
        for (i, row) in d.iter_mut().enumerate() {
            row[(i + 1) % 5] += 0.1 * ((i + j) % 3) as f64;
            row[i] += 2.0;
        }
    }
    for b in sys.sub.iter_mut().chain(sys.sup.iter_mut()) {
        *b = identity_block();
    }
    for (j, r) in sys.rhs.iter_mut().enumerate() {
        *r = [j as f64; 5];
    }
    c.bench_function("blocklinalg/factor_solve_1001", |b| {
        b.iter(|| factorize(black_box(&sys)).unwrap().solve(&sys.rhs).unwrap())
    });
}

criterion_group!(benches, keller_box, shooting_solver, block_solve);
criterion_main!(benches);
