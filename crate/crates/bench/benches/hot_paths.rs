use actionrate::action::{action_gap, ComparisonWindow};
use actionrate::fields::{two_shock_field, weak_residual, wild_effective_field};
use actionrate::riemann::solve_two_shock;
use actionrate::scan::scan_grid;
use actionrate::subsolution::{solve_fan_subsolution, FanBranch};
use actionrate_bench::{bench_grid, strong_asymmetric_data, symmetric_data};
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn bench_two_shock(c: &mut Criterion) {
    let data = symmetric_data();
    c.bench_function("solve_two_shock/symmetric", |b| {
        b.iter(|| solve_two_shock(black_box(&data), 1e-12).unwrap())
    });
    let strong = strong_asymmetric_data();
    c.bench_function("solve_two_shock/asymmetric", |b| {
        b.iter(|| solve_two_shock(black_box(&strong), 1e-12).unwrap())
    });
}

fn bench_continuation(c: &mut Criterion) {
    let data = symmetric_data();
    let shock = solve_two_shock(&data, 1e-12).unwrap();
    c.bench_function("fan_branch/walk_50_points", |b| {
        b.iter(|| {
            let mut branch = FanBranch::from_shock(&data, shock);
            for k in 1..=50 {
                let rho1 = shock.rho_m - (shock.rho_m - 1.01) * k as f64 / 50.0;
                black_box(branch.advance_to(rho1).unwrap());
            }
        })
    });
    c.bench_function("solve_fan_subsolution/single", |b| {
        b.iter(|| solve_fan_subsolution(black_box(&data), 1.7, 0.1, 1e-12).unwrap())
    });
}

fn bench_action_gap(c: &mut Criterion) {
    let data = symmetric_data();
    let shock = solve_two_shock(&data, 1e-12).unwrap();
    let sub = solve_fan_subsolution(&data, 1.75, 0.05, 1e-12).unwrap();
    let ts = two_shock_field(&data, &shock);
    let wild = wild_effective_field(&data, &sub);
    let window = ComparisonWindow::enclosing(&[&ts, &wild], 0.5, 1.0, 0.3).unwrap();
    c.bench_function("action_gap/closed_form", |b| {
        b.iter(|| action_gap(black_box(&data), &shock, &sub, &window, 0.8).unwrap())
    });
}

fn bench_scan(c: &mut Criterion) {
    let grid = bench_grid();
    c.bench_function("scan_grid/50x10", |b| {
        b.iter(|| black_box(scan_grid(&grid)))
    });
}

fn bench_weak_residual(c: &mut Criterion) {
    let data = symmetric_data();
    let shock = solve_two_shock(&data, 1e-12).unwrap();
    let field = two_shock_field(&data, &shock);
    c.bench_function("weak_residual/res_64", |b| {
        b.iter(|| weak_residual(black_box(&field), &data.law, 0.2, 64).unwrap())
    });
}

criterion_group!(
    benches,
    bench_two_shock,
    bench_continuation,
    bench_action_gap,
    bench_scan,
    bench_weak_residual
);
criterion_main!(benches);
