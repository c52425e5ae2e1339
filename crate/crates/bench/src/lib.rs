//! Shared fixtures for the benchmark targets.

use actionrate::eos::GasLaw;
use actionrate::riemann::RiemannData;
use actionrate::scan::{DataCase, ScanGrid};

pub fn symmetric_data() -> RiemannData {
    RiemannData::new(GasLaw::new(2.0).unwrap(), 1.0, 1.0, 1.0, -1.0).unwrap()
}

pub fn strong_asymmetric_data() -> RiemannData {
    RiemannData::new(GasLaw::new(2.0).unwrap(), 1.0, 2.0, 5.0, -5.0).unwrap()
}

/// A scan grid small enough for a benchmark iteration, large enough to
/// exercise the continuation and the per-point assembly.
pub fn bench_grid() -> ScanGrid {
    ScanGrid {
        rho1_count: 50,
        eps2_count: 10,
        eps2_max: 1.0,
        gammas: vec![2.0],
        cases: vec![DataCase {
            rho_minus: 1.0,
            rho_plus: 1.0,
            v_minus: 1.0,
            v_plus: -1.0,
        }],
        allow_isothermal: false,
    }
}
