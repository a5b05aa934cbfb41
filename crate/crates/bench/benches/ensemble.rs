use std::f64::consts::PI;

use criterion::{criterion_group, criterion_main, Criterion};
use scmnet_core::network::{fmo_network, fully_connected};
use scmnet_core::optimizer::{evaluate_fitness, FitnessSettings, Individual};
use scmnet_core::scm::Simulator;
use scmnet_core::{NoiseProfile, TimeGrid};

fn ensembles(c: &mut Criterion) {
    let mut group = c.benchmark_group("ensemble");
    group.sample_size(10);

    let fc = fully_connected(20, 1.0, 0, 19, 3.0).unwrap();
    let localized = NoiseProfile::localized(20, 0, 10.0, 10.0, PI / 2.0).unwrap();
    let grid = TimeGrid::new(100.0, 1000).unwrap();
    let sim = Simulator::new(&fc, &localized).unwrap();
    group.bench_function("fc20_localized_64", |b| b.iter(|| sim.ensemble(&grid, 64, 1).unwrap()));

    let fmo = fmo_network(50.0).unwrap();
    let homogeneous = NoiseProfile::homogeneous(8, 100.0, 1.0, PI / 2.0).unwrap();
    let grid = TimeGrid::new(4.0, 400).unwrap();
    let sim = Simulator::new(&fmo, &homogeneous).unwrap();
    group.bench_function("fmo_homogeneous_64", |b| b.iter(|| sim.ensemble(&grid, 64, 1).unwrap()));

    let settings = FitnessSettings::new(grid, 64, PI / 2.0);
    let ind = Individual::from_profile(&[0.0, 90.0, 0.0, 90.0, 10.0, 240.0, 9.0, 0.0], &[1.0; 8]);
    group.bench_function("fmo_fitness_64", |b| b.iter(|| evaluate_fitness(&ind, &fmo, &settings, 3)));
    group.finish();
}

criterion_group!(benches, ensembles);
criterion_main!(benches);
