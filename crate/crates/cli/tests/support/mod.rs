//! Quadrature oracle for the acceptance suite, independent of the
//! closed-form action path: exact interval clipping per region at each
//! time slice, trapezoid rule in time.

use actionrate::action::ComparisonWindow;
use actionrate::eos::GasLaw;
use actionrate::fields::SelfSimilarFanField;

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
                let lagrangian =
                    region.kinetic_density - region.rho * law.internal_energy(region.rho).unwrap();
                total += lagrangian * (b - a);
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
