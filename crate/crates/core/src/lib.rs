//! Numerical laboratory for the two-dimensional Riemann problem of the
//! isentropic compressible Euler system in the 2-shock regime.
//!
//! The crate solves the vertical-data Riemann problem exactly, constructs
//! fan sub-solutions parameterised by the intermediate density `rho1` and a
//! free kinetic gap `eps2`, evaluates action functionals over space-time
//! comparison windows, and renders admissibility verdicts under the
//! least-action criteria (LAAP, LAAP0), the action rate criteria (ARAC,
//! sARAC) and the entropy rate criterion. The `scan` module maps the
//! admissible parameter domain and searches for configurations where the
//! entropy rate criterion and sARAC disagree.
//!
//! All quantities are nondimensional; densities are per unit area (planar
//! flow).

pub mod action;
pub mod admissibility;
pub mod eos;
pub mod fields;
pub mod report;
pub mod riemann;
pub mod scan;
pub mod subsolution;

pub use action::{ActionCurve, ActionGap, ComparisonWindow};
pub use admissibility::{AdmissibilityReport, Candidate, CandidateSet, Criterion, Verdict};
pub use eos::GasLaw;
pub use fields::SelfSimilarFanField;
pub use riemann::{RiemannData, TwoShockSolution};
pub use scan::{DataCase, ScanGrid, ScanRecord};
pub use subsolution::FanSubsolution;

use serde::{Deserialize, Serialize};

/// Planar velocity vector; `x2` is the vertical component along which the
/// Riemann data jump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec2 {
    pub x1: f64,
    pub x2: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x1: 0.0, x2: 0.0 };

    pub fn new(x1: f64, x2: f64) -> Self {
        Vec2 { x1, x2 }
    }

    /// Velocity with vanishing horizontal component, the data class treated
    /// throughout this crate.
    pub fn vertical(x2: f64) -> Self {
        Vec2 { x1: 0.0, x2 }
    }

    pub fn norm_sq(&self) -> f64 {
        self.x1 * self.x1 + self.x2 * self.x2
    }
}
