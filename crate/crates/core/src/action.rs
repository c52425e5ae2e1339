//! Action functionals over space-time comparison windows, the action gap
//! between the 2-shock and a wild candidate in closed form, its derivative
//! ladder at `t = 0+`, and energy dissipation rates.
//!
//! For self-similar fan fields, the action over a window is an exact
//! quadratic in time: background rectangles contribute linearly, wedges
//! quadratically. The gap between two fields sharing outer states is purely
//! quadratic, `D(t) = kappa t^2 / 2`, with `kappa` assembled by merging the
//! two speed lists; no ordering of the speeds is assumed.

use crate::eos::{EosError, GasLaw};
use crate::fields::SelfSimilarFanField;
use crate::riemann::{RiemannData, TwoShockSolution};
use crate::subsolution::FanSubsolution;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ActionError {
    #[error("window [{ell1}, {ell2}] x [0, {t_max}] does not contain the wedges up to t = {t}")]
    WindowTooSmall {
        ell1: f64,
        ell2: f64,
        t_max: f64,
        t: f64,
    },
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("derivative order {0} unsupported: the action gap is exactly quadratic in time")]
    UnsupportedOrder(usize),
    #[error(transparent)]
    Eos(#[from] EosError),
}

/// Space-time comparison window `[-L3, L3] x [ell1, ell2] x [0, t_max]`.
///
/// `2 L3` is the horizontal period of the wild solutions; `ell1 < ell2`
/// must bracket every candidate's wedges for all times up to `t_max`, so
/// that the candidates agree outside the wedges within the window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonWindow {
    pub l3: f64,
    pub ell1: f64,
    pub ell2: f64,
    pub t_max: f64,
}

impl ComparisonWindow {
    pub fn new(l3: f64, ell1: f64, ell2: f64, t_max: f64) -> Result<Self, ActionError> {
        if !(l3 > 0.0 && t_max > 0.0 && ell1 < ell2) {
            return Err(ActionError::InvalidWindow(format!(
                "need l3 > 0, t_max > 0, ell1 < ell2; got l3 = {l3}, ell = [{ell1}, {ell2}], t_max = {t_max}"
            )));
        }
        Ok(ComparisonWindow {
            l3,
            ell1,
            ell2,
            t_max,
        })
    }

    /// Build a window whose vertical extent encloses all wedges of the
    /// given fields up to `t_max`, padded by `pad` times the enclosed span.
    pub fn enclosing(
        fields: &[&SelfSimilarFanField],
        l3: f64,
        t_max: f64,
        pad: f64,
    ) -> Result<Self, ActionError> {
        let mut smin = 0.0f64;
        let mut smax = 0.0f64;
        for f in fields {
            for &s in f.speeds() {
                smin = smin.min(s);
                smax = smax.max(s);
            }
        }
        let span = ((smax - smin) * t_max).max(1.0);
        Self::new(
            l3,
            smin * t_max - pad * span,
            smax * t_max + pad * span,
            t_max,
        )
    }

    /// Check that the field's wedges stay inside the vertical extent for
    /// all times in `[0, t]`.
    pub fn contains(&self, field: &SelfSimilarFanField, t: f64) -> Result<(), ActionError> {
        let err = ActionError::WindowTooSmall {
            ell1: self.ell1,
            ell2: self.ell2,
            t_max: self.t_max,
            t,
        };
        if !(t >= 0.0 && t <= self.t_max) {
            return Err(err);
        }
        for &s in field.speeds() {
            if s * t <= self.ell1 || s * t >= self.ell2 {
                return Err(err);
            }
        }
        if self.ell1 >= 0.0 || self.ell2 <= 0.0 {
            return Err(err);
        }
        Ok(())
    }
}

/// Exact time dependence of the action of a self-similar field over a
/// window: `A(t) = linear t + quadratic t^2 / 2` with `A(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActionCurve {
    pub linear: f64,
    pub quadratic: f64,
}

impl ActionCurve {
    pub fn eval(&self, t: f64) -> f64 {
        self.linear * t + 0.5 * self.quadratic * t * t
    }

    /// Right derivatives at `t = 0+`: value, slope, curvature.
    pub fn ladder(&self) -> [f64; 3] {
        [0.0, self.linear, self.quadratic]
    }
}

// Lagrangian and energy densities of a region, recomputed through the law
// so stale stored values cannot leak into the functionals.
fn region_lagrangian(law: &GasLaw, r: &crate::fields::Region) -> Result<f64, EosError> {
    Ok(r.kinetic_density - r.rho * law.internal_energy(r.rho)?)
}

fn region_energy(law: &GasLaw, r: &crate::fields::Region) -> Result<f64, EosError> {
    Ok(r.kinetic_density + r.rho * law.internal_energy(r.rho)?)
}

/// Closed-form action coefficients of a field over a window.
pub fn action_curve(
    field: &SelfSimilarFanField,
    law: &GasLaw,
    window: &ComparisonWindow,
) -> Result<ActionCurve, ActionError> {
    window.contains(field, window.t_max)?;
    let lagr: Vec<f64> = field
        .regions()
        .iter()
        .map(|r| region_lagrangian(law, r))
        .collect::<Result<_, _>>()?;
    let speeds = field.speeds();
    let k = speeds.len();
    let width = 2.0 * window.l3;
    let linear = width * (lagr[k] * window.ell2 - lagr[0] * window.ell1);
    let mut quadratic = 0.0;
    if k > 0 {
        quadratic += lagr[0] * speeds[0] - lagr[k] * speeds[k - 1];
        for i in 1..k {
            quadratic += lagr[i] * (speeds[i] - speeds[i - 1]);
        }
    }
    Ok(ActionCurve {
        linear,
        quadratic: width * quadratic,
    })
}

/// Action `A(t) = int_0^t int_Omega L dx dtau` of a field over the window.
pub fn action(
    field: &SelfSimilarFanField,
    law: &GasLaw,
    window: &ComparisonWindow,
    t: f64,
) -> Result<f64, ActionError> {
    window.contains(field, t)?;
    Ok(action_curve(field, law, window)?.eval(t))
}

/// Lagrangian difference (2-shock minus wild) in the centre wedge:
/// `rho_m v_m^2 / 2 - rho_m eps(rho_m) - rho1 C / 2 + rho1 eps(rho1)`.
pub fn lagrangian_diff_mid(
    data: &RiemannData,
    shock: &TwoShockSolution,
    sub: &FanSubsolution,
) -> f64 {
    let law = &data.law;
    let eps_m = law.internal_energy(shock.rho_m).expect("positive density");
    let eps_1 = law.internal_energy(sub.rho1).expect("positive density");
    0.5 * shock.rho_m * shock.v_m * shock.v_m - shock.rho_m * eps_m - 0.5 * sub.rho1 * sub.c
        + sub.rho1 * eps_1
}

/// One merged sub-wedge of the gap decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubwedgeTerm {
    pub lo: f64,
    pub hi: f64,
    pub lagrangian_two_shock: f64,
    pub lagrangian_wild: f64,
    /// `(hi - lo) * (L_two_shock - L_wild)`, before the `2 L3` factor.
    pub contribution: f64,
}

/// Closed form of the action gap `D(t) = kappa t^2 / 2` with its
/// per-sub-wedge breakdown.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionGap {
    pub kappa: f64,
    pub terms: Vec<SubwedgeTerm>,
}

impl ActionGap {
    pub fn eval(&self, t: f64) -> f64 {
        0.5 * self.kappa * t * t
    }
}

/// Merge the speed lists of two fields and assemble `kappa` as the signed
/// sum over sub-wedges, weighted by `width = 2 L3`. Handles either speed
/// ordering.
pub fn kappa_from_fields(
    reference: &SelfSimilarFanField,
    other: &SelfSimilarFanField,
    law: &GasLaw,
    width: f64,
) -> Result<ActionGap, ActionError> {
    let mut speeds: Vec<f64> = reference
        .speeds()
        .iter()
        .chain(other.speeds().iter())
        .copied()
        .collect();
    speeds.sort_by(|a, b| a.partial_cmp(b).expect("finite speeds"));
    speeds.dedup();
    let mut terms = Vec::with_capacity(speeds.len().saturating_sub(1));
    let mut kappa = 0.0;
    for pair in speeds.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let mid = 0.5 * (lo + hi);
        let l_ref = region_lagrangian(law, reference.region_at_slope(mid))?;
        let l_other = region_lagrangian(law, other.region_at_slope(mid))?;
        let contribution = (hi - lo) * (l_ref - l_other);
        kappa += contribution;
        terms.push(SubwedgeTerm {
            lo,
            hi,
            lagrangian_two_shock: l_ref,
            lagrangian_wild: l_other,
            contribution,
        });
    }
    Ok(ActionGap {
        kappa: width * kappa,
        terms,
    })
}

/// Action gap `D(rho1, t) = action(2-shock) - action(wild)` over the
/// window, in closed form. Negative `D` means the 2-shock action is
/// smaller.
pub fn action_gap(
    data: &RiemannData,
    shock: &TwoShockSolution,
    sub: &FanSubsolution,
    window: &ComparisonWindow,
    t: f64,
) -> Result<(f64, ActionGap), ActionError> {
    let two_shock = crate::fields::two_shock_field(data, shock);
    let wild = crate::fields::wild_effective_field(data, sub);
    window.contains(&two_shock, t)?;
    window.contains(&wild, t)?;
    let gap = kappa_from_fields(&two_shock, &wild, &data.law, 2.0 * window.l3)?;
    Ok((gap.eval(t), gap))
}

/// Right derivatives of the gap at `t = 0+` up to the requested order:
/// `(D(0), dD/dt, d^2D/dt^2) = (0, 0, kappa)`.
pub fn action_derivative_ladder(gap: &ActionGap, order: usize) -> Result<Vec<f64>, ActionError> {
    if order > 2 {
        return Err(ActionError::UnsupportedOrder(order));
    }
    Ok([0.0, 0.0, gap.kappa][..=order].to_vec())
}

/// Time derivative of the total energy in the window (constant in time for
/// self-similar fields): the wedge-slope sum
/// `2 L3 (E_0 s_1 + sum_i E_i (s_{i+1} - s_i) - E_k s_k)`.
pub fn dissipation_rate(
    field: &SelfSimilarFanField,
    law: &GasLaw,
    window: &ComparisonWindow,
) -> Result<f64, ActionError> {
    window.contains(field, window.t_max)?;
    let energy: Vec<f64> = field
        .regions()
        .iter()
        .map(|r| region_energy(law, r))
        .collect::<Result<_, _>>()?;
    let speeds = field.speeds();
    let k = speeds.len();
    if k == 0 {
        return Ok(0.0);
    }
    let mut rate = energy[0] * speeds[0] - energy[k] * speeds[k - 1];
    for i in 1..k {
        rate += energy[i] * (speeds[i] - speeds[i - 1]);
    }
    Ok(2.0 * window.l3 * rate)
}

/// The same rate assembled from boundary fluxes and interface entropy
/// productions: `2 L3 (G(ell1) - G(ell2) - sum of productions)`. Must agree
/// with [`dissipation_rate`] to rounding.
pub fn dissipation_rate_flux_form(
    field: &SelfSimilarFanField,
    law: &GasLaw,
    window: &ComparisonWindow,
) -> Result<f64, ActionError> {
    window.contains(field, window.t_max)?;
    let flux = |r: &crate::fields::Region| -> Result<f64, EosError> {
        Ok((region_energy(law, r)? + law.pressure(r.rho)?) * r.v2)
    };
    let regions = field.regions();
    let mut total = flux(&regions[0])? - flux(regions.last().expect("nonempty"))?;
    for (i, &s) in field.speeds().iter().enumerate() {
        let e_l = region_energy(law, &regions[i])?;
        let e_r = region_energy(law, &regions[i + 1])?;
        let production = s * (e_r - e_l) - (flux(&regions[i + 1])? - flux(&regions[i])?);
        total -= production;
    }
    Ok(2.0 * window.l3 * total)
}
