//! Shared test oracles, kept independent of the closed-form paths they
//! check.

use actionrate::action::ComparisonWindow;
use actionrate::eos::GasLaw;
use actionrate::fields::SelfSimilarFanField;

/// Plain bisection, assuming `f(lo) > 0 > f(hi)`.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> f64 {
    assert!(f(lo) > 0.0 && f(hi) < 0.0, "bracket sign check failed");
    for _ in 0..iters {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn region_lagrangian(law: &GasLaw, r: &actionrate::fields::Region) -> f64 {
    r.kinetic_density - r.rho * law.internal_energy(r.rho).unwrap()
}

/// Action by time quadrature of exactly clipped region slices: at each
/// time the region occupancies inside `[ell1, ell2]` are intersected
/// directly, and the time integral runs over the trapezoid rule. The
/// integrand is piecewise linear in time, so the rule is exact up to
/// rounding once the wedges stay inside the window.
pub fn action_time_quadrature(
    field: &SelfSimilarFanField,
    law: &GasLaw,
    window: &ComparisonWindow,
    t: f64,
    steps: usize,
) -> f64 {
    let speeds = field.speeds();
    let slice = |tau: f64| -> f64 {
        let mut total = 0.0;
        for (idx, region) in field.regions().iter().enumerate() {
            let lo = if idx == 0 {
                f64::NEG_INFINITY
            } else {
                speeds[idx - 1] * tau
            };
            let hi = if idx == speeds.len() {
                f64::INFINITY
            } else {
                speeds[idx] * tau
            };
            let a = lo.max(window.ell1);
            let b = hi.min(window.ell2);
            if b > a {
                total += region_lagrangian(law, region) * (b - a);
            }
        }
        total
    };
    let h = t / steps as f64;
    let mut sum = 0.5 * (slice(0.0) + slice(t));
    for k in 1..steps {
        sum += slice(k as f64 * h);
    }
    2.0 * window.l3 * sum * h
}

/// Fully sampled 2-D midpoint quadrature of the Lagrangian over the
/// window; loose-tolerance sanity oracle for the pointwise field
/// evaluation.
pub fn action_grid_quadrature(
    field: &SelfSimilarFanField,
    law: &GasLaw,
    window: &ComparisonWindow,
    t: f64,
    nt: usize,
    nx: usize,
) -> f64 {
    let ht = t / nt as f64;
    let hx = (window.ell2 - window.ell1) / nx as f64;
    let mut sum = 0.0;
    for i in 0..nt {
        let tau = (i as f64 + 0.5) * ht;
        for j in 0..nx {
            let x = window.ell1 + (j as f64 + 0.5) * hx;
            sum += region_lagrangian(law, field.evaluate(tau, x));
        }
    }
    2.0 * window.l3 * sum * ht * hx
}
