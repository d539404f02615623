use std::f64::consts::FRAC_PI_4;

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use fracjet::constraints::poisson_bracket;
use fracjet::dynamics::{integrate, GaugeChoice, PhaseState};
use fracjet::expr::{phase_space_vars, random_poly};
use fracjet::kernel::oracle::kernel_by_quadrature;
use fracjet::kernel::{discretize_action, gaussian_kernel_eval, PathGrid};
use fracjet::{analyze, parse};
use fracjet_bench::{fixture_report, model, FIXTURE};
use rand::rngs::StdRng;
use rand::SeedableRng;

fn symbolic(c: &mut Criterion) {
    c.bench_function("parse_fixture", |b| b.iter(|| parse(black_box(FIXTURE), 3)));
    let m = model(FIXTURE, 3);
    c.bench_function("analyze_fixture", |b| b.iter(|| analyze(black_box(&m))));

    let mut rng = StdRng::seed_from_u64(7);
    let vars = phase_space_vars(3);
    let (f, g) = (
        random_poly(&mut rng, &vars, 3, 6),
        random_poly(&mut rng, &vars, 3, 6),
    );
    c.bench_function("poisson_bracket_deg3", |b| {
        b.iter(|| poisson_bracket(black_box(&f), black_box(&g)))
    });
}

fn dynamics(c: &mut Criterion) {
    let report = fixture_report();
    let init = PhaseState::parse("v1=1", 3).unwrap();
    let gauge = GaugeChoice::zero(report.singular_idx());
    c.bench_function("integrate_fixture_quarter_period", |b| {
        b.iter(|| integrate(&report, &gauge, black_box(&init), 1e-3, FRAC_PI_4))
    });
}

fn kernel(c: &mut Criterion) {
    let report = fixture_report();
    let mut group = c.benchmark_group("gaussian_kernel");
    for slices in [4usize, 50, 200] {
        let grid =
            PathGrid::new(0.0, FRAC_PI_4, slices, vec![1], &[1.0], &[FRAC_PI_4.cos()]).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(slices), &grid, |b, grid| {
            b.iter(|| {
                let s = discretize_action(&report, grid).unwrap();
                gaussian_kernel_eval(&s.quadratic_form(grid).unwrap(), 1.0)
            })
        });
    }
    group.finish();

    let grid = PathGrid::new(0.0, FRAC_PI_4, 4, vec![1], &[1.0], &[FRAC_PI_4.cos()]).unwrap();
    let s = discretize_action(&report, &grid).unwrap();
    let mut slow = c.benchmark_group("quadrature_oracle");
    slow.sample_size(10);
    slow.bench_function("three_interior_nodes", |b| {
        b.iter(|| kernel_by_quadrature(&s, &grid, 1.0))
    });
    slow.finish();
}

criterion_group!(benches, symbolic, dynamics, kernel);
criterion_main!(benches);
