//! Benchmarks of the grid classifier: rayon-parallel sweep versus the
//! sequential fallback, plus the kernel quadrature and oracle hot spots.
//!
//! `sweep/parallel` uses whatever thread pool rayon sets up; compare it
//! against `sweep/sequential` on the same grid. Building with
//! `--no-default-features` makes `sweep_grid` itself run the sequential
//! path, which is the other axis of the comparison.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use dephase_core::{
    decoherence_exponent, evolve_total, se_kernel, sweep_grid, sweep_grid_seq, BathMode,
    BathModel, GridSpec, KernelKind, OracleConfig, WernerParams,
};

fn grid(theta_steps: usize, tau_steps: usize) -> GridSpec {
    GridSpec {
        theta_min: 0.05,
        theta_max: 0.3,
        theta_steps,
        tau_min: 0.0,
        tau_max: 50.0,
        tau_steps,
    }
}

fn bench_sweep(c: &mut Criterion) {
    let x = WernerParams::new(0.2).unwrap().to_x_state();
    let bath = BathModel::continuum(1e-3).unwrap();
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    for (ts, us) in [(20, 40), (40, 80)] {
        let g = grid(ts, us);
        group.bench_with_input(
            BenchmarkId::new("parallel", format!("{ts}x{us}")),
            &g,
            |b, g| b.iter(|| sweep_grid(black_box(&x), black_box(&bath), g).unwrap()),
        );
        group.bench_with_input(
            BenchmarkId::new("sequential", format!("{ts}x{us}")),
            &g,
            |b, g| b.iter(|| sweep_grid_seq(black_box(&x), black_box(&bath), g).unwrap()),
        );
    }
    group.finish();
}

fn bench_kernels(c: &mut Criterion) {
    let bath = BathModel::continuum(1e-3).unwrap();
    let mut group = c.benchmark_group("kernels");
    group.bench_function("exponent/tau=10", |b| {
        b.iter(|| decoherence_exponent(&bath, black_box(0.2), black_box(10.0)).unwrap())
    });
    group.bench_function("entanglement_kernel/tau=30", |b| {
        b.iter(|| {
            se_kernel(KernelKind::Entanglement, &bath, black_box(0.1345), black_box(30.0)).unwrap()
        })
    });
    group.finish();
}

fn bench_oracle(c: &mut Criterion) {
    let cfg = OracleConfig {
        modes: vec![
            BathMode {
                omega: 0.4,
                g2: 0.02,
            },
            BathMode {
                omega: 0.8,
                g2: 0.02,
            },
        ],
        n_fock: 9,
        theta: 0.1,
        x0: WernerParams::new(0.5).unwrap().to_x_state(),
        omega_a: 0.0,
        omega_b: 0.0,
        dimension_budget: dephase_core::oracle::DEFAULT_DIMENSION_BUDGET,
    };
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    group.bench_function("evolve_total/dim324", |b| {
        b.iter(|| evolve_total(black_box(&cfg), black_box(3.0)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_sweep, bench_kernels, bench_oracle);
criterion_main!(benches);
