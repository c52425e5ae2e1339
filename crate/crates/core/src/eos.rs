//! Equation of state and pointwise densities for the isentropic gas.
//!
//! The pressure law is `p(rho) = rho^gamma`. The specific internal energy
//! solves `eps'(rho) = p(rho) / rho^2` with integration constant zero, so
//! `eps(rho) = rho^(gamma-1) / (gamma-1)` for `gamma > 1`. Only differences
//! of `eps` enter downstream quantities; the constant must simply be the
//! same everywhere, and it is.

use crate::Vec2;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EosError {
    #[error("density must be positive, got {0}")]
    NonPositiveDensity(f64),
    #[error("adiabatic exponent must satisfy 1 < gamma <= 3, got {0} (use GasLaw::isothermal for gamma = 1)")]
    InvalidGamma(f64),
}

/// Isentropic pressure law `p(rho) = rho^gamma` with `1 < gamma <= 3`.
///
/// The isothermal endpoint `gamma = 1` (where `eps(rho) = ln rho`) sits
/// outside the range covered by the power-law internal energy and is only
/// available through the explicit [`GasLaw::isothermal`] constructor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasLaw {
    gamma: f64,
}

impl GasLaw {
    pub fn new(gamma: f64) -> Result<Self, EosError> {
        if !(gamma > 1.0 && gamma <= 3.0) {
            return Err(EosError::InvalidGamma(gamma));
        }
        Ok(GasLaw { gamma })
    }

    /// Opt-in isothermal endpoint `gamma = 1`, `eps(rho) = ln rho`.
    pub fn isothermal() -> Self {
        GasLaw { gamma: 1.0 }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn is_isothermal(&self) -> bool {
        self.gamma == 1.0
    }

    fn check_density(rho: f64) -> Result<(), EosError> {
        if rho > 0.0 && rho.is_finite() {
            Ok(())
        } else {
            Err(EosError::NonPositiveDensity(rho))
        }
    }

    /// Pressure `p(rho) = rho^gamma`.
    pub fn pressure(&self, rho: f64) -> Result<f64, EosError> {
        Self::check_density(rho)?;
        Ok(rho.powf(self.gamma))
    }

    /// Specific internal energy with `eps'(rho) = p(rho) / rho^2`.
    pub fn internal_energy(&self, rho: f64) -> Result<f64, EosError> {
        Self::check_density(rho)?;
        if self.gamma == 1.0 {
            Ok(rho.ln())
        } else {
            Ok(rho.powf(self.gamma - 1.0) / (self.gamma - 1.0))
        }
    }

    /// Energy per unit area `rho eps(rho) + rho |v|^2 / 2`.
    pub fn energy_density(&self, rho: f64, v: Vec2) -> Result<f64, EosError> {
        Ok(rho * self.internal_energy(rho)? + 0.5 * rho * v.norm_sq())
    }

    /// Lagrangian density `rho |v|^2 / 2 - rho eps(rho)`, kinetic minus
    /// potential.
    pub fn lagrangian_density(&self, rho: f64, v: Vec2) -> Result<f64, EosError> {
        Ok(0.5 * rho * v.norm_sq() - rho * self.internal_energy(rho)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pressure_power_law() {
        let g2 = GasLaw::new(2.0).unwrap();
        assert_eq!(g2.pressure(1.0).unwrap(), 1.0);
        assert_eq!(g2.pressure(2.0).unwrap(), 4.0);
        let g3 = GasLaw::new(3.0).unwrap();
        assert!((g3.pressure(0.5).unwrap() - 0.125).abs() < 1e-15);
    }

    #[test]
    fn internal_energy_closed_form() {
        let g2 = GasLaw::new(2.0).unwrap();
        assert!((g2.internal_energy(3.0).unwrap() - 3.0).abs() < 1e-15);
        assert!((g2.internal_energy(1.0).unwrap() - 1.0).abs() < 1e-15);
        let g3 = GasLaw::new(3.0).unwrap();
        assert!((g3.internal_energy(2.0).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn energy_density_cases() {
        let g2 = GasLaw::new(2.0).unwrap();
        assert!((g2.energy_density(1.0, Vec2::ZERO).unwrap() - 1.0).abs() < 1e-15);
        assert!((g2.energy_density(1.0, Vec2::vertical(2.0)).unwrap() - 3.0).abs() < 1e-15);
        assert!((g2.energy_density(2.0, Vec2::new(1.0, 1.0)).unwrap() - 6.0).abs() < 1e-15);
    }

    #[test]
    fn lagrangian_density_cases() {
        let g2 = GasLaw::new(2.0).unwrap();
        assert!((g2.lagrangian_density(1.0, Vec2::ZERO).unwrap() + 1.0).abs() < 1e-15);
        assert!((g2.lagrangian_density(1.0, Vec2::vertical(2.0)).unwrap() - 1.0).abs() < 1e-15);
        assert!((g2.lagrangian_density(2.0, Vec2::vertical(1.0)).unwrap() + 3.0).abs() < 1e-15);
    }

    #[test]
    fn energy_minus_lagrangian_is_twice_potential() {
        let law = GasLaw::new(1.4).unwrap();
        for rho in [0.3, 1.0, 2.7, 9.1] {
            for v2 in [-2.0, 0.0, 0.5] {
                let v = Vec2::vertical(v2);
                let e = law.energy_density(rho, v).unwrap();
                let l = law.lagrangian_density(rho, v).unwrap();
                let pot = rho * law.internal_energy(rho).unwrap();
                assert!((e - l - 2.0 * pot).abs() <= 1e-12 * (1.0 + e.abs() + l.abs()));
            }
        }
    }

    #[test]
    fn internal_energy_satisfies_defining_ode() {
        // central finite differences of eps against p / rho^2 on a log grid
        for gamma in [1.1, 1.5, 2.0, 3.0] {
            let law = GasLaw::new(gamma).unwrap();
            for k in 0..40 {
                let rho = 0.05 * (10.0f64).powf(k as f64 / 13.0);
                let h = 1e-5 * rho;
                let d = (law.internal_energy(rho + h).unwrap()
                    - law.internal_energy(rho - h).unwrap())
                    / (2.0 * h);
                let expect = law.pressure(rho).unwrap() / (rho * rho);
                assert!(
                    (d - expect).abs() <= 1e-8 * expect.abs().max(1.0),
                    "gamma={gamma} rho={rho}: {d} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn pressure_strictly_increasing() {
        for gamma in [1.01, 2.0, 3.0] {
            let law = GasLaw::new(gamma).unwrap();
            let mut prev = law.pressure(1e-3).unwrap();
            for k in 1..60 {
                let rho = 1e-3 * (10.0f64).powf(k as f64 / 8.0);
                let p = law.pressure(rho).unwrap();
                assert!(p > prev, "pressure not increasing at rho={rho}");
                prev = p;
            }
        }
    }

    #[test]
    fn isothermal_is_opt_in() {
        assert!(GasLaw::new(1.0).is_err());
        assert!(GasLaw::new(3.2).is_err());
        assert!(GasLaw::new(0.9).is_err());
        let iso = GasLaw::isothermal();
        assert!(iso.is_isothermal());
        assert!((iso.internal_energy(1.0).unwrap() - 0.0).abs() < 1e-15);
        assert!((iso.pressure(2.0).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn non_positive_density_rejected() {
        let law = GasLaw::new(2.0).unwrap();
        assert_eq!(law.pressure(0.0), Err(EosError::NonPositiveDensity(0.0)));
        assert_eq!(law.pressure(-1.0), Err(EosError::NonPositiveDensity(-1.0)));
        assert!(law.internal_energy(-2.0).is_err());
        assert!(law.energy_density(0.0, Vec2::ZERO).is_err());
        assert!(law.lagrangian_density(0.0, Vec2::ZERO).is_err());
    }
}
