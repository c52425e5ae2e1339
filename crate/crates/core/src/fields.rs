//! Self-similar, horizontally invariant piecewise-constant fields.
//!
//! Both the 2-shock solution and the effective (averaged) convex-integration
//! solution are fields of this shape: ordered interface speeds `x2 / t` and
//! one constant effective state per region. The pointwise oscillations of
//! the wild solutions are not sampled; their kinetic, Lagrangian and energy
//! densities are constant almost everywhere in the middle wedge, so every
//! space-time integral in this crate depends only on the effective field.
//!
//! `weak_residual` is the numerical oracle for "solution in the sense of
//! distributions": it integrates a field against a family of compactly
//! supported polynomial bumps and reports conservation residuals and the
//! sign of the energy inequality.

use crate::eos::{EosError, GasLaw};
use crate::riemann::{RiemannData, TwoShockSolution};
use crate::subsolution::FanSubsolution;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("interface speeds must be strictly increasing")]
    UnorderedSpeeds,
    #[error("need exactly one more region than speeds (got {regions} regions, {speeds} speeds)")]
    RegionCount { regions: usize, speeds: usize },
    #[error("quadrature cannot resolve the test functions: width {width}, resolution {resolution}")]
    QuadratureFailure { width: f64, resolution: usize },
    #[error(transparent)]
    Eos(#[from] EosError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldLabel {
    TwoShock,
    ConvexIntegration,
    Custom,
}

/// Effective state of one fan region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub rho: f64,
    pub v2: f64,
    /// Kinetic density `rho |v|^2 / 2` (equals `rho C / 2` in the middle
    /// wedge of a convex-integration field).
    pub kinetic_density: f64,
    pub lagrangian: f64,
    pub energy: f64,
    /// Effective vertical momentum flux entering the distributional form.
    pub mom_flux: f64,
}

impl Region {
    /// Region holding an exact Euler state `(rho, (0, v2))`.
    pub fn exact(law: &GasLaw, rho: f64, v2: f64) -> Result<Self, EosError> {
        let kinetic = 0.5 * rho * v2 * v2;
        let potential = rho * law.internal_energy(rho)?;
        Ok(Region {
            rho,
            v2,
            kinetic_density: kinetic,
            lagrangian: kinetic - potential,
            energy: kinetic + potential,
            mom_flux: rho * v2 * v2 + law.pressure(rho)?,
        })
    }
}

/// Piecewise-constant self-similar field: `regions[i]` fills the wedge
/// between slopes `speeds[i-1]` and `speeds[i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfSimilarFanField {
    speeds: Vec<f64>,
    regions: Vec<Region>,
    pub label: FieldLabel,
}

impl SelfSimilarFanField {
    pub fn new(
        speeds: Vec<f64>,
        regions: Vec<Region>,
        label: FieldLabel,
    ) -> Result<Self, FieldError> {
        if regions.len() != speeds.len() + 1 {
            return Err(FieldError::RegionCount {
                regions: regions.len(),
                speeds: speeds.len(),
            });
        }
        if speeds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(FieldError::UnorderedSpeeds);
        }
        Ok(SelfSimilarFanField {
            speeds,
            regions,
            label,
        })
    }

    pub fn speeds(&self) -> &[f64] {
        &self.speeds
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    /// Region occupying the ray `x2 / t = slope`.
    pub fn region_at_slope(&self, slope: f64) -> &Region {
        let idx = self.speeds.partition_point(|&s| s < slope);
        &self.regions[idx]
    }

    /// Evaluate at a space-time point with `t > 0`.
    pub fn evaluate(&self, t: f64, x2: f64) -> &Region {
        debug_assert!(t > 0.0);
        self.region_at_slope(x2 / t)
    }
}

/// The classical 2-shock solution as a three-region fan field.
pub fn two_shock_field(data: &RiemannData, shock: &TwoShockSolution) -> SelfSimilarFanField {
    let law = &data.law;
    SelfSimilarFanField::new(
        vec![shock.nu_minus, shock.nu_plus],
        vec![
            Region::exact(law, data.rho_minus, data.v_minus).expect("positive density"),
            Region::exact(law, shock.rho_m, shock.v_m).expect("positive density"),
            Region::exact(law, data.rho_plus, data.v_plus).expect("positive density"),
        ],
        FieldLabel::TwoShock,
    )
    .expect("two-shock speeds are ordered")
}

/// Effective field shared by every wild solution over the given fan
/// sub-solution: Riemann states outside, and the middle wedge carrying
/// kinetic density `rho1 C / 2` with the effective momentum flux.
pub fn wild_effective_field(data: &RiemannData, sub: &FanSubsolution) -> SelfSimilarFanField {
    let law = &data.law;
    let potential = sub.rho1 * law.internal_energy(sub.rho1).expect("positive density");
    let kinetic = 0.5 * sub.rho1 * sub.c;
    let mid = Region {
        rho: sub.rho1,
        v2: sub.beta,
        kinetic_density: kinetic,
        lagrangian: kinetic - potential,
        energy: kinetic + potential,
        mom_flux: sub.mid_vertical_flux(law),
    };
    SelfSimilarFanField::new(
        vec![sub.nu_minus, sub.nu_plus],
        vec![
            Region::exact(law, data.rho_minus, data.v_minus).expect("positive density"),
            mid,
            Region::exact(law, data.rho_plus, data.v_plus).expect("positive density"),
        ],
        FieldLabel::ConvexIntegration,
    )
    .expect("sub-solution speeds are ordered")
}

/// Default quadrature resolution for [`weak_residual`]; conservation
/// residuals of exact fields sit well below 1e-6 here.
pub const DEFAULT_WEAK_RESOLUTION: usize = 64;

/// Default test-function width for [`weak_residual`].
pub const DEFAULT_WEAK_WIDTH: f64 = 0.2;

/// Residual norms of the weak-form oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeakResiduals {
    /// Largest absolute mass residual over the test family.
    pub mass: f64,
    /// Largest absolute vertical momentum residual over the test family.
    pub momentum: f64,
    /// Smallest signed energy-inequality value; nonnegative for entropic
    /// fields up to quadrature error.
    pub energy_min: f64,
}

// polynomial bump (1 - s^2)^3 on [-1, 1], its derivative, and its
// antiderivative (exact x-integration of the test functions)
fn bump(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        let w = 1.0 - s * s;
        w * w * w
    }
}

fn bump_deriv(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        let w = 1.0 - s * s;
        -6.0 * s * w * w
    }
}

fn bump_integral(s: f64) -> f64 {
    let s = s.clamp(-1.0, 1.0);
    let s2 = s * s;
    s * (1.0 + s2 * (-1.0 + s2 * (0.6 - s2 / 7.0)))
}

/// Integrate the field against a family of tensor-product bump test
/// functions on a space-time box and return the conservation residual
/// norms and the minimum of the energy-inequality pairing.
///
/// For exact distributional solutions the conservation residuals converge
/// to zero under quadrature refinement; the energy value stays nonnegative
/// for dissipative fields.
pub fn weak_residual(
    field: &SelfSimilarFanField,
    law: &GasLaw,
    width: f64,
    resolution: usize,
) -> Result<WeakResiduals, FieldError> {
    if width.is_nan() || width <= 0.0 || resolution < 16 {
        return Err(FieldError::QuadratureFailure { width, resolution });
    }
    // space-time box covering the fan for t in (0, 1]
    let (smin, smax) = field
        .speeds
        .iter()
        .fold((0.0f64, 0.0f64), |(lo, hi), &s| (lo.min(s), hi.max(s)));
    let spread = (smax - smin).max(1.0);
    let t_lo = 0.2;
    let t_hi = 1.0;
    let x_lo = smin - 0.3 * spread - width;
    let x_hi = smax + 0.3 * spread + width;
    if t_hi - t_lo < 2.0 * width {
        return Err(FieldError::QuadratureFailure { width, resolution });
    }

    // precompute per-region fluxes
    let fluxes: Vec<(f64, f64, f64, f64, f64, f64)> = field
        .regions
        .iter()
        .map(|r| {
            let p = law.pressure(r.rho)?;
            let g = (r.energy + p) * r.v2;
            Ok((r.rho, r.rho * r.v2, r.rho * r.v2, r.mom_flux, r.energy, g))
        })
        .collect::<Result<_, EosError>>()?;

    let centers = |lo: f64, hi: f64| -> Vec<f64> {
        let n = (((hi - lo) / width).floor() as usize).clamp(1, 8);
        (0..n)
            .map(|k| lo + width + (hi - lo - 2.0 * width) * (k as f64 + 0.5) / n as f64)
            .collect()
    };
    let t_centers = centers(t_lo, t_hi);
    let x_centers = centers(x_lo, x_hi);

    // the x-integrals over each region slice are exact (the bump integrates
    // to a polynomial); only the t-integration is quadrature, midpoint rule
    // at `resolution` nodes over the bump support
    let n = resolution;
    let h = 2.0 * width / n as f64;
    let mut mass_max = 0.0f64;
    let mut mom_max = 0.0f64;
    let mut energy_min = f64::INFINITY;
    let region_bounds = |idx: usize, t: f64| -> (f64, f64) {
        let lo = if idx == 0 {
            f64::NEG_INFINITY
        } else {
            field.speeds[idx - 1] * t
        };
        let hi = if idx == field.speeds.len() {
            f64::INFINITY
        } else {
            field.speeds[idx] * t
        };
        (lo, hi)
    };
    for &tc in &t_centers {
        for &xc in &x_centers {
            let mut mass = 0.0;
            let mut mom = 0.0;
            let mut energy = 0.0;
            for i in 0..n {
                let t = tc - width + (i as f64 + 0.5) * h;
                let tau = (t - tc) / width;
                let bt = bump(tau);
                let dbt = bump_deriv(tau) / width;
                for (idx, &(rho, mass_fl, mom_dens, mom_fl, e, g)) in fluxes.iter().enumerate() {
                    let (lo, hi) = region_bounds(idx, t);
                    let a = lo.max(xc - width);
                    let b = hi.min(xc + width);
                    if a >= b {
                        continue;
                    }
                    let (xa, xb) = ((a - xc) / width, (b - xc) / width);
                    // integral of phi_t over the slice: B'(tau)/w * w * dIB
                    let int_phi_t = dbt * width * (bump_integral(xb) - bump_integral(xa));
                    // integral of phi_x over the slice: B(tau) * dB
                    let int_phi_x = bt * (bump(xb) - bump(xa));
                    mass += rho * int_phi_t + mass_fl * int_phi_x;
                    mom += mom_dens * int_phi_t + mom_fl * int_phi_x;
                    energy += e * int_phi_t + g * int_phi_x;
                }
            }
            mass_max = mass_max.max((mass * h).abs());
            mom_max = mom_max.max((mom * h).abs());
            energy_min = energy_min.min(energy * h);
        }
    }
    Ok(WeakResiduals {
        mass: mass_max,
        momentum: mom_max,
        energy_min,
    })
}
