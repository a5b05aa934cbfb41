use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use scmnet_core::lindblad::integrate_lindblad;
use scmnet_core::network::{fmo_network, fully_connected, single_excitation_hamiltonian};
use scmnet_core::propagation::{Propagator, Scratch};
use scmnet_core::scm::apply_collision;
use scmnet_core::{DensityMatrix, TimeGrid};

fn propagator(c: &mut Criterion) {
    let mut group = c.benchmark_group("propagator");
    for n in [8usize, 20, 40] {
        let h = single_excitation_hamiltonian(&fully_connected(n, 1.0, 0, n - 1, 3.0).unwrap());
        let p = Propagator::new(&h).unwrap();
        let mut scratch = Scratch::default();
        let mut st = p.localized(0);
        group.bench_with_input(BenchmarkId::new("evolve", n), &n, |b, _| {
            b.iter(|| p.evolve(&mut st, black_box(0.01), &mut scratch).unwrap())
        });
        let mut st = p.localized(0);
        p.evolve(&mut st, 0.3, &mut scratch).unwrap();
        group.bench_with_input(BenchmarkId::new("dephase", n), &n, |b, _| {
            b.iter(|| p.dephase(&mut st, black_box(n / 2), 1e-3, &mut scratch))
        });
        group.bench_with_input(BenchmarkId::new("setup", n), &n, |b, _| b.iter(|| Propagator::new(black_box(&h))));
    }
    group.finish();
}

fn collision(c: &mut Criterion) {
    let rho = DensityMatrix::localized(20, 0);
    c.bench_function("apply_collision/20", |b| b.iter(|| apply_collision(black_box(&rho), 3, PI / 2.0)));
}

fn master_equation(c: &mut Criterion) {
    let net = fmo_network(50.0).unwrap();
    let grid = TimeGrid::new(1.0, 101).unwrap();
    let rates = vec![100.0; 8];
    c.bench_function("integrate_lindblad/fmo", |b| {
        b.iter(|| integrate_lindblad(&net, black_box(&rates), PI / 2.0, &grid).unwrap())
    });
}

criterion_group!(benches, propagator, collision, master_equation);
criterion_main!(benches);
