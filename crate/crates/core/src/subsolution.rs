//! Fan sub-solutions: piecewise-constant relaxed solutions on the fan
//! partition `P_- | P_1 | P_+`, parameterised by the middle density `rho1`
//! and the horizontal kinetic gap `eps2`.
//!
//! The middle region carries a velocity `v1 = (alpha, beta)`, a trace-free
//! symmetric matrix `u1 = [[u11, u12], [u12, -u11]]` and a kinetic constant
//! `C` subject to the strict matrix bound `v1 (x) v1 - u1 < (C/2) Id`. With
//! vertical data the horizontal momentum equations force `alpha = u12 = 0`,
//! the gap matrix `(C/2) Id - v1 (x) v1 + u1` is diagonal, and its entries
//! are named `eps2` (horizontal) and `eps1` (vertical), which reproduces
//! the identity `C = beta^2 + eps1 + eps2`.
//!
//! Eliminating the speeds from the interface jump conditions reduces the
//! system to a single quadratic in `beta`; the solver tracks the branch
//! through the known embedded 2-shock at `rho1 = rho_m` by continuation,
//! and every output is re-validated against the full interface residuals.

use crate::eos::GasLaw;
use crate::riemann::{solve_two_shock, RiemannData, RiemannError, TwoShockSolution};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SubsolutionError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no fan sub-solution at rho1 = {rho1}: {reason}")]
    NoSubsolution { rho1: f64, reason: String },
    #[error("continuation failed to converge at rho1 = {rho1}: residual {residual}")]
    NoConvergence { rho1: f64, residual: f64 },
    #[error("no admissible rho1 below rho_m for eps2 = {eps2}")]
    EmptyInterval { eps2: f64 },
    #[error(transparent)]
    Riemann(#[from] RiemannError),
}

/// Piecewise-constant fan sub-solution data for the middle wedge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FanSubsolution {
    pub rho1: f64,
    pub eps2: f64,
    pub nu_minus: f64,
    pub nu_plus: f64,
    /// Vertical component of the middle velocity `v1`.
    pub beta: f64,
    /// Horizontal component of `v1`; zero for vertical data.
    pub alpha: f64,
    /// Diagonal entry of the trace-free matrix `u1`.
    pub u11: f64,
    /// Off-diagonal entry of `u1`; zero for vertical data.
    pub u12: f64,
    /// Vertical eigen-gap of `(C/2) Id - v1 (x) v1 + u1`.
    pub eps1: f64,
    /// Kinetic constant of the middle wedge.
    pub c: f64,
}

/// One solved point of the continuation branch, before `eps2` is chosen.
/// `beta`, the speeds, the effective vertical momentum flux and `eps1`
/// depend on `rho1` only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchPoint {
    pub rho1: f64,
    pub beta: f64,
    pub nu_minus: f64,
    pub nu_plus: f64,
    /// Effective vertical momentum flux of the middle wedge.
    pub mid_flux: f64,
    pub eps1: f64,
}

impl BranchPoint {
    /// Attach a horizontal gap `eps2 >= 0`, fixing `C` and `u1`.
    pub fn assemble(&self, eps2: f64) -> FanSubsolution {
        let c = self.beta * self.beta + self.eps1 + eps2;
        FanSubsolution {
            rho1: self.rho1,
            eps2,
            nu_minus: self.nu_minus,
            nu_plus: self.nu_plus,
            beta: self.beta,
            alpha: 0.0,
            u11: eps2 - 0.5 * c,
            u12: 0.0,
            eps1: self.eps1,
            c,
        }
    }
}

/// Continuation of the fan sub-solution branch in `rho1`, anchored at the
/// embedded 2-shock `beta(rho_m) = v_m`.
pub struct FanBranch<'a> {
    data: &'a RiemannData,
    shock: TwoShockSolution,
    rho_cur: f64,
    beta_cur: f64,
}

impl<'a> FanBranch<'a> {
    pub fn new(data: &'a RiemannData, tol: f64) -> Result<Self, SubsolutionError> {
        let shock = solve_two_shock(data, tol)?;
        Ok(Self::from_shock(data, shock))
    }

    pub fn from_shock(data: &'a RiemannData, shock: TwoShockSolution) -> Self {
        FanBranch {
            data,
            shock,
            rho_cur: shock.rho_m,
            beta_cur: shock.v_m,
        }
    }

    pub fn shock(&self) -> &TwoShockSolution {
        &self.shock
    }

    /// Continue the branch to `rho1` and return the solved point. Stepping
    /// is monotone from the current position with the previous `beta` as
    /// root selector, so the physically relevant branch is tracked.
    pub fn advance_to(&mut self, rho1: f64) -> Result<BranchPoint, SubsolutionError> {
        if !(rho1 > 0.0 && rho1.is_finite()) {
            return Err(SubsolutionError::InvalidParameter(format!(
                "rho1 must be positive, got {rho1}"
            )));
        }
        if rho1 == self.shock.rho_m {
            // embedded 2-shock: the anchor point, returned exactly
            self.rho_cur = rho1;
            self.beta_cur = self.shock.v_m;
            return self.point_at(rho1, self.shock.v_m);
        }
        let max_step = 0.02 * self.shock.rho_m;
        let steps = (((rho1 - self.rho_cur).abs() / max_step).ceil() as usize).clamp(1, 65536);
        let (start, start_beta) = (self.rho_cur, self.beta_cur);
        for k in 1..=steps {
            let rho = start + (rho1 - start) * (k as f64 / steps as f64);
            let beta = solve_beta(self.data, rho, self.beta_cur).map_err(|e| {
                // reset so a failed target does not poison later calls
                self.rho_cur = start;
                self.beta_cur = start_beta;
                e
            })?;
            self.rho_cur = rho;
            self.beta_cur = beta;
        }
        self.point_at(rho1, self.beta_cur)
    }

    fn point_at(&self, rho1: f64, beta: f64) -> Result<BranchPoint, SubsolutionError> {
        let d = self.data;
        let mid_flux = left_flux(d, rho1, beta);
        let p1 = d.law.pressure(rho1).expect("positive density");
        let eps1 = (mid_flux - p1) / rho1 - beta * beta;
        let nu_minus = (rho1 * beta - d.rho_minus * d.v_minus) / (rho1 - d.rho_minus);
        let nu_plus = (d.rho_plus * d.v_plus - rho1 * beta) / (d.rho_plus - rho1);
        if !(nu_minus.is_finite() && nu_plus.is_finite()) {
            return Err(SubsolutionError::NoSubsolution {
                rho1,
                reason: "interface speeds are not finite".into(),
            });
        }
        if nu_minus >= nu_plus {
            return Err(SubsolutionError::NoSubsolution {
                rho1,
                reason: format!("speeds not ordered: nu_minus = {nu_minus}, nu_plus = {nu_plus}"),
            });
        }
        Ok(BranchPoint {
            rho1,
            beta,
            nu_minus,
            nu_plus,
            mid_flux,
            eps1,
        })
    }
}

/// Vertical momentum flux of the middle wedge required by the left
/// interface jump conditions, as a function of `beta`.
fn left_flux(d: &RiemannData, rho1: f64, beta: f64) -> f64 {
    let jump = rho1 * beta - d.rho_minus * d.v_minus;
    let p_minus = d.law.pressure(d.rho_minus).expect("positive density");
    jump * jump / (rho1 - d.rho_minus) + d.rho_minus * d.v_minus * d.v_minus + p_minus
}

/// Solve the scalar jump-condition equation for `beta` at fixed `rho1`.
///
/// Equating the middle flux demanded by the left and right interfaces gives
/// a quadratic in `beta` (linear when `rho_- = rho_+`); the root closest to
/// `seed` continues the branch.
fn solve_beta(d: &RiemannData, rho1: f64, seed: f64) -> Result<f64, SubsolutionError> {
    for (rho0, side) in [(d.rho_minus, "rho_minus"), (d.rho_plus, "rho_plus")] {
        if (rho1 - rho0).abs() < 1e-9 * rho1.max(rho0) {
            return Err(SubsolutionError::NoSubsolution {
                rho1,
                reason: format!("middle density coincides with {side}; interface degenerates"),
            });
        }
    }
    let dl = rho1 - d.rho_minus;
    let dr = rho1 - d.rho_plus;
    let ml = d.rho_minus * d.v_minus;
    let mr = d.rho_plus * d.v_plus;
    let p_minus = d.law.pressure(d.rho_minus).expect("positive density");
    let p_plus = d.law.pressure(d.rho_plus).expect("positive density");
    let a = rho1 * rho1 * (1.0 / dl - 1.0 / dr);
    let b = -2.0 * rho1 * (ml / dl - mr / dr);
    let c = ml * ml / dl - mr * mr / dr + d.rho_minus * d.v_minus * d.v_minus + p_minus
        - d.rho_plus * d.v_plus * d.v_plus
        - p_plus;
    let scale = a.abs().max(b.abs()).max(c.abs()).max(1.0);
    if a.abs() <= 1e-14 * scale {
        if b.abs() <= 1e-14 * scale {
            return Err(SubsolutionError::NoSubsolution {
                rho1,
                reason: "jump-condition equation is degenerate".into(),
            });
        }
        return Ok(-c / b);
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Err(SubsolutionError::NoSubsolution {
            rho1,
            reason: format!("no real branch (discriminant {disc})"),
        });
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let r1 = q / a;
    let r2 = if q != 0.0 { c / q } else { r1 };
    Ok(if (r1 - seed).abs() <= (r2 - seed).abs() {
        r1
    } else {
        r2
    })
}

/// Solve the interface jump-condition system for the fan sub-solution at
/// `(rho1, eps2)` by continuation from the embedded 2-shock at `rho_m`.
pub fn solve_fan_subsolution(
    data: &RiemannData,
    rho1: f64,
    eps2: f64,
    tol: f64,
) -> Result<FanSubsolution, SubsolutionError> {
    if !(eps2 >= 0.0 && eps2.is_finite()) {
        return Err(SubsolutionError::InvalidParameter(format!(
            "eps2 must be nonnegative, got {eps2}"
        )));
    }
    let mut branch = FanBranch::new(data, tol)?;
    let point = branch.advance_to(rho1)?;
    let sub = point.assemble(eps2);
    let residual = subsolution_residual(data, &sub).norm();
    let scale = 1.0 + sub.mid_vertical_flux(&data.law).abs() + (rho1 * sub.beta).abs();
    if residual > scale * tol.max(1e-13) * 1e3 {
        return Err(SubsolutionError::NoConvergence { rho1, residual });
    }
    Ok(sub)
}

impl FanSubsolution {
    /// Effective vertical momentum flux in the middle wedge,
    /// `p(rho1) - rho1 u11 + C rho1 / 2`, from the stored matrix data.
    pub fn mid_vertical_flux(&self, law: &GasLaw) -> f64 {
        law.pressure(self.rho1).expect("positive density") - self.rho1 * self.u11
            + 0.5 * self.c * self.rho1
    }
}

/// Interface residuals of the sub-solution system: mass, horizontal and
/// vertical momentum at each interface, with the effective-pressure flux in
/// the middle wedge. All vanish for solver outputs; the horizontal momentum
/// residuals are identically zero when `alpha = u12 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubsolutionResidual {
    pub left: [f64; 3],
    pub right: [f64; 3],
}

impl SubsolutionResidual {
    pub fn norm(&self) -> f64 {
        self.left
            .iter()
            .chain(self.right.iter())
            .map(|r| r * r)
            .sum::<f64>()
            .sqrt()
    }
}

pub fn subsolution_residual(data: &RiemannData, sub: &FanSubsolution) -> SubsolutionResidual {
    let law = &data.law;
    let p1 = law.pressure(sub.rho1).expect("positive density");
    let p_minus = law.pressure(data.rho_minus).expect("positive density");
    let p_plus = law.pressure(data.rho_plus).expect("positive density");
    // middle-wedge fluxes from the matrix data: mass rho1 beta, horizontal
    // momentum rho1 u12, vertical momentum rho1 (-u11) + p + C rho1 / 2
    let mid_mass_flux = sub.rho1 * sub.beta;
    let mid_mom1_flux = sub.rho1 * sub.u12;
    let mid_mom2_flux = -sub.rho1 * sub.u11 + p1 + 0.5 * sub.c * sub.rho1;

    let left = [
        sub.nu_minus * (sub.rho1 - data.rho_minus)
            - (mid_mass_flux - data.rho_minus * data.v_minus),
        sub.nu_minus * (sub.rho1 * sub.alpha) - mid_mom1_flux,
        sub.nu_minus * (sub.rho1 * sub.beta - data.rho_minus * data.v_minus)
            - (mid_mom2_flux - (data.rho_minus * data.v_minus * data.v_minus + p_minus)),
    ];
    let right = [
        sub.nu_plus * (data.rho_plus - sub.rho1)
            - (data.rho_plus * data.v_plus - mid_mass_flux),
        sub.nu_plus * (-sub.rho1 * sub.alpha) - (-mid_mom1_flux),
        sub.nu_plus * (data.rho_plus * data.v_plus - sub.rho1 * sub.beta)
            - (data.rho_plus * data.v_plus * data.v_plus + p_plus - mid_mom2_flux),
    ];
    SubsolutionResidual { left, right }
}

/// Entropy productions at the two interfaces, with the middle wedge
/// carrying energy density `rho1 eps(rho1) + rho1 C / 2` and flux
/// `(E1 + p(rho1)) beta`. Nonnegativity of both defines sub-solution
/// admissibility.
pub fn subsolution_entropy_production(data: &RiemannData, sub: &FanSubsolution) -> (f64, f64) {
    let law = &data.law;
    let e1 = sub.rho1 * law.internal_energy(sub.rho1).expect("positive density")
        + 0.5 * sub.rho1 * sub.c;
    let g1 = (e1 + law.pressure(sub.rho1).expect("positive density")) * sub.beta;
    let e_minus = law
        .energy_density(data.rho_minus, crate::Vec2::vertical(data.v_minus))
        .expect("positive density");
    let g_minus =
        (e_minus + law.pressure(data.rho_minus).expect("positive density")) * data.v_minus;
    let e_plus = law
        .energy_density(data.rho_plus, crate::Vec2::vertical(data.v_plus))
        .expect("positive density");
    let g_plus = (e_plus + law.pressure(data.rho_plus).expect("positive density")) * data.v_plus;
    let left = sub.nu_minus * (e1 - e_minus) - (g1 - g_minus);
    let right = sub.nu_plus * (e_plus - e1) - (g_plus - g1);
    (left, right)
}

/// A fan sub-solution generates entropic wild solutions iff both eigen-gaps
/// are strictly positive, the speeds are ordered, and both interfaces
/// dissipate.
pub fn is_admissible(data: &RiemannData, sub: &FanSubsolution) -> bool {
    if !(sub.eps1 > 0.0 && sub.eps2 > 0.0 && sub.nu_minus < sub.nu_plus) {
        return false;
    }
    let (left, right) = subsolution_entropy_production(data, sub);
    left >= 0.0 && right >= 0.0
}

/// Result of locating the admissible interval adjacent to `rho_m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhoStarResult {
    /// Infimum of the `rho1` values admissible at the given `eps2`.
    pub rho_star: f64,
    /// The interval `[rho_star, rho_m]`.
    pub interval: (f64, f64),
}

/// Locate `rho_star`, the lower end of the admissible `rho1` interval
/// adjacent to `rho_m`, by bisection on the admissibility predicate.
pub fn find_rho_star(
    data: &RiemannData,
    eps2: f64,
    tol: f64,
) -> Result<RhoStarResult, SubsolutionError> {
    if eps2.is_nan() || eps2 <= 0.0 {
        return Err(SubsolutionError::InvalidParameter(format!(
            "eps2 must be strictly positive, got {eps2}"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(SubsolutionError::InvalidParameter(format!(
            "tol must be positive, got {tol}"
        )));
    }
    let mut branch = FanBranch::new(data, tol.min(1e-12))?;
    let rho_m = branch.shock().rho_m;
    let floor = data.rho_plus.min(data.rho_minus).min(rho_m) * 1e-3;
    let span = rho_m - floor;

    let admissible_at = |branch: &mut FanBranch, rho1: f64| -> bool {
        match branch.advance_to(rho1) {
            Ok(point) => is_admissible(data, &point.assemble(eps2)),
            Err(_) => false,
        }
    };

    // probe ladder leftwards from rho_m for any admissible point
    let mut hi = f64::NAN;
    let mut delta = span * 1e-7;
    while delta < span {
        let probe = rho_m - delta;
        if admissible_at(&mut branch, probe) {
            hi = probe;
            break;
        }
        delta *= 2.0;
    }
    if hi.is_nan() {
        return Err(SubsolutionError::EmptyInterval { eps2 });
    }

    // walk down to the first inadmissible point below hi
    let mut lo = f64::NAN;
    let steps = 256;
    let mut prev = hi;
    for k in 1..=steps {
        let rho1 = hi + (floor - hi) * (k as f64 / steps as f64);
        if admissible_at(&mut branch, rho1) {
            prev = rho1;
        } else {
            lo = rho1;
            break;
        }
    }
    if lo.is_nan() {
        // admissible down to the probing floor; report the boundary
        return Ok(RhoStarResult {
            rho_star: prev,
            interval: (prev, rho_m),
        });
    }
    let mut hi = prev;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if admissible_at(&mut branch, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let rho_star = 0.5 * (lo + hi);
    Ok(RhoStarResult {
        rho_star,
        interval: (rho_star, rho_m),
    })
}
