//! Parameter-space exploration: map the admissible domain in the
//! `(rho1, eps2)` plane for each data case and adiabatic exponent, locate
//! the admissible interval adjacent to `rho_m`, sweep `gamma`, and search
//! for configurations where the entropy rate criterion rejects the 2-shock
//! while sARAC selects it.
//!
//! Scans are embarrassingly parallel over continuation rays (one ray per
//! `(gamma, case)`, walked in descending `rho1`); records are emitted in a
//! fixed grid order so output is byte-identical across runs and worker
//! counts. Per-point failures are first-class data: the boundary of the
//! admissible domain is itself a result.

use crate::action::kappa_from_fields;
use crate::eos::GasLaw;
use crate::fields::{two_shock_field, wild_effective_field};
use crate::riemann::{solve_two_shock, RiemannData};
use crate::subsolution::{
    is_admissible, subsolution_entropy_production, FanBranch, SubsolutionError,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const DEFAULT_ROOT_TOL: f64 = 1e-12;

/// One Riemann data case, independent of the pressure law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DataCase {
    pub rho_minus: f64,
    pub rho_plus: f64,
    pub v_minus: f64,
    pub v_plus: f64,
}

impl DataCase {
    pub fn to_riemann(&self, law: GasLaw) -> Result<RiemannData, crate::riemann::RiemannError> {
        RiemannData::new(law, self.rho_minus, self.rho_plus, self.v_minus, self.v_plus)
    }

    /// Default case list: symmetric and asymmetric data, all satisfying the
    /// 2-shock existence condition for every default `gamma`. The strong
    /// asymmetric case carries the entropy-rate counterexample region.
    pub fn default_cases() -> Vec<DataCase> {
        [
            (1.0, 1.0, 1.0, -1.0),
            (1.0, 1.0, 3.0, -3.0),
            (1.0, 2.0, 2.0, -2.0),
            (1.0, 2.0, 5.0, -5.0),
            (4.0, 1.0, 4.5, -4.5),
            (1.0, 3.0, 4.0, -4.0),
        ]
        .into_iter()
        .map(|(rho_minus, rho_plus, v_minus, v_plus)| DataCase {
            rho_minus,
            rho_plus,
            v_minus,
            v_plus,
        })
        .collect()
    }
}

/// Grid specification. Concrete `rho1` points are case-dependent (they live
/// on `(rho_plus, rho_m]`, and `rho_m` depends on the data and on `gamma`),
/// so the grid stores counts and the `eps2` range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub rho1_count: usize,
    pub eps2_count: usize,
    pub eps2_max: f64,
    pub gammas: Vec<f64>,
    pub cases: Vec<DataCase>,
    /// Gate for the isothermal endpoint `gamma = 1`.
    pub allow_isothermal: bool,
}

impl Default for ScanGrid {
    fn default() -> Self {
        ScanGrid {
            rho1_count: 200,
            eps2_count: 50,
            eps2_max: 2.0,
            gammas: vec![1.2, 1.4, 5.0 / 3.0, 2.0, 2.5, 3.0],
            cases: DataCase::default_cases(),
            allow_isothermal: false,
        }
    }
}

impl ScanGrid {
    pub fn with_gammas(mut self, gammas: Vec<f64>) -> Self {
        self.gammas = gammas;
        self
    }

    /// `eps2` grid on `(0, eps2_max]`, strictly increasing.
    pub fn eps2_points(&self) -> Vec<f64> {
        (1..=self.eps2_count)
            .map(|j| self.eps2_max * j as f64 / self.eps2_count as f64)
            .collect()
    }

    /// `rho1` grid on `(rho_plus, rho_m]`, strictly increasing.
    pub fn rho1_points(&self, rho_plus: f64, rho_m: f64) -> Vec<f64> {
        (1..=self.rho1_count)
            .map(|k| rho_plus + (rho_m - rho_plus) * k as f64 / self.rho1_count as f64)
            .collect()
    }

    fn law_for(&self, gamma: f64) -> Result<GasLaw, String> {
        if gamma == 1.0 {
            if self.allow_isothermal {
                Ok(GasLaw::isothermal())
            } else {
                Err("gamma = 1 requires the isothermal opt-in".into())
            }
        } else {
            GasLaw::new(gamma).map_err(|e| e.to_string())
        }
    }
}

/// One grid point of a scan. Solver fields are absent when the point
/// failed; the failure reason is recorded instead.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub gamma: f64,
    pub rho_minus: f64,
    pub rho_plus: f64,
    pub v_minus: f64,
    pub v_plus: f64,
    pub rho1: f64,
    pub eps2: f64,
    pub admissible: bool,
    pub nu_minus: Option<f64>,
    pub nu_plus: Option<f64>,
    pub beta: Option<f64>,
    pub eps1: Option<f64>,
    /// Curvature of the action gap `D = kappa t^2 / 2` at unit period.
    pub kappa: Option<f64>,
    /// Energy-rate difference `dE/dt(wild) - dE/dt(two-shock)`; negative
    /// means the wild solutions dissipate faster.
    pub rate_diff: Option<f64>,
    /// sARAC selects the 2-shock against this wild candidate.
    pub sarac_two_shock: Option<bool>,
    /// The entropy rate criterion keeps the 2-shock admissible against this
    /// wild candidate.
    pub dafermos_two_shock: Option<bool>,
    pub failure: Option<String>,
}

impl ScanRecord {
    fn failed(gamma: f64, case: &DataCase, rho1: f64, eps2: f64, failure: String) -> Self {
        ScanRecord {
            gamma,
            rho_minus: case.rho_minus,
            rho_plus: case.rho_plus,
            v_minus: case.v_minus,
            v_plus: case.v_plus,
            rho1,
            eps2,
            admissible: false,
            nu_minus: None,
            nu_plus: None,
            beta: None,
            eps1: None,
            kappa: None,
            rate_diff: None,
            sarac_two_shock: None,
            dafermos_two_shock: None,
            failure: Some(failure),
        }
    }
}

/// Scan the `(rho1, eps2)` grid for one data case, walking the continuation
/// ray from `rho_m` downwards. Per-point failures never abort the scan.
pub fn scan_domain(data: &RiemannData, grid: &ScanGrid) -> Vec<ScanRecord> {
    let case = DataCase {
        rho_minus: data.rho_minus,
        rho_plus: data.rho_plus,
        v_minus: data.v_minus,
        v_plus: data.v_plus,
    };
    let gamma = data.law.gamma();
    let eps2s = grid.eps2_points();

    let shock = match solve_two_shock(data, DEFAULT_ROOT_TOL) {
        Ok(s) => s,
        Err(e) => {
            return vec![ScanRecord::failed(
                gamma,
                &case,
                f64::NAN,
                f64::NAN,
                e.to_string(),
            )]
        }
    };
    let ts_field = two_shock_field(data, &shock);
    let ts_productions = two_shock_production_sum(data, &shock);

    let rho1s = grid.rho1_points(data.rho_plus, shock.rho_m);
    let mut branch = FanBranch::from_shock(data, shock);
    let mut per_rho1: Vec<Vec<ScanRecord>> = Vec::with_capacity(rho1s.len());
    // walk the ray in descending rho1 so each solve seeds the next
    for &rho1 in rho1s.iter().rev() {
        let mut rows = Vec::with_capacity(eps2s.len());
        match branch.advance_to(rho1) {
            Ok(point) => {
                for &eps2 in &eps2s {
                    let sub = point.assemble(eps2);
                    let admissible = is_admissible(data, &sub);
                    let wild = wild_effective_field(data, &sub);
                    let kappa = kappa_from_fields(&ts_field, &wild, &data.law, 1.0)
                        .expect("positive densities")
                        .kappa;
                    let (pl, pr) = subsolution_entropy_production(data, &sub);
                    // boundary fluxes agree, so the energy-rate difference
                    // is the production deficit of the wild candidate
                    let rate_diff = ts_productions - (pl + pr);
                    rows.push(ScanRecord {
                        gamma,
                        rho_minus: case.rho_minus,
                        rho_plus: case.rho_plus,
                        v_minus: case.v_minus,
                        v_plus: case.v_plus,
                        rho1,
                        eps2,
                        admissible,
                        nu_minus: Some(sub.nu_minus),
                        nu_plus: Some(sub.nu_plus),
                        beta: Some(sub.beta),
                        eps1: Some(sub.eps1),
                        kappa: Some(kappa),
                        rate_diff: Some(rate_diff),
                        sarac_two_shock: Some(kappa < 0.0),
                        dafermos_two_shock: Some(rate_diff >= 0.0),
                        failure: None,
                    });
                }
            }
            Err(e) => {
                let reason = short_reason(&e);
                for &eps2 in &eps2s {
                    rows.push(ScanRecord::failed(gamma, &case, rho1, eps2, reason.clone()));
                }
            }
        }
        per_rho1.push(rows);
    }
    // emit in ascending grid order
    per_rho1.into_iter().rev().flatten().collect()
}

fn short_reason(e: &SubsolutionError) -> String {
    match e {
        SubsolutionError::NoSubsolution { reason, .. } => reason.clone(),
        other => other.to_string(),
    }
}

fn two_shock_production_sum(data: &RiemannData, shock: &crate::riemann::TwoShockSolution) -> f64 {
    let left = crate::riemann::entropy_production(
        &data.law,
        (data.rho_minus, crate::Vec2::vertical(data.v_minus)),
        (shock.rho_m, crate::Vec2::vertical(shock.v_m)),
        shock.nu_minus,
    )
    .expect("positive density");
    let right = crate::riemann::entropy_production(
        &data.law,
        (shock.rho_m, crate::Vec2::vertical(shock.v_m)),
        (data.rho_plus, crate::Vec2::vertical(data.v_plus)),
        shock.nu_plus,
    )
    .expect("positive density");
    left + right
}

/// Scan all `(gamma, case)` pairs of the grid. Rays run in parallel;
/// records are concatenated in grid order, so the output is deterministic
/// for any worker count.
pub fn scan_grid(grid: &ScanGrid) -> Vec<ScanRecord> {
    let pairs: Vec<(f64, DataCase)> = grid
        .gammas
        .iter()
        .flat_map(|&g| grid.cases.iter().map(move |&c| (g, c)))
        .collect();
    pairs
        .par_iter()
        .map(|(gamma, case)| match grid.law_for(*gamma) {
            Ok(law) => match case.to_riemann(law) {
                Ok(data) => scan_domain(&data, grid),
                Err(e) => vec![ScanRecord::failed(
                    *gamma,
                    case,
                    f64::NAN,
                    f64::NAN,
                    e.to_string(),
                )],
            },
            Err(reason) => vec![ScanRecord::failed(
                *gamma,
                case,
                f64::NAN,
                f64::NAN,
                reason,
            )],
        })
        .collect::<Vec<_>>()
        .concat()
}

/// Records that contradict the expected negative gap curvature: admissible
/// points with `kappa >= 0`.
pub fn kappa_violations(records: &[ScanRecord]) -> Vec<&ScanRecord> {
    records
        .iter()
        .filter(|r| r.admissible && r.kappa.map(|k| k >= 0.0).unwrap_or(false))
        .collect()
}

/// Outcome of the negative-curvature verification over a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KappaSummary {
    pub gamma: f64,
    pub total_points: usize,
    pub solved_points: usize,
    pub admissible_points: usize,
    pub violations: Vec<ScanRecord>,
    pub max_admissible_kappa: Option<f64>,
    pub min_admissible_kappa: Option<f64>,
}

/// Verify that the gap curvature `kappa` is negative at every admissible
/// grid point, for one `gamma` across all data cases. Violations are data,
/// not errors; the expected count is zero.
pub fn verify_kappa_negative(grid: &ScanGrid, gamma: f64) -> KappaSummary {
    let single = ScanGrid {
        gammas: vec![gamma],
        ..grid.clone()
    };
    let records = scan_grid(&single);
    summarize_kappa(gamma, &records)
}

pub fn summarize_kappa(gamma: f64, records: &[ScanRecord]) -> KappaSummary {
    let admissible: Vec<&ScanRecord> = records.iter().filter(|r| r.admissible).collect();
    let kappas: Vec<f64> = admissible.iter().filter_map(|r| r.kappa).collect();
    KappaSummary {
        gamma,
        total_points: records.len(),
        solved_points: records.iter().filter(|r| r.failure.is_none()).count(),
        admissible_points: admissible.len(),
        violations: kappa_violations(records).into_iter().cloned().collect(),
        max_admissible_kappa: kappas.iter().copied().fold(None, |m, k| {
            Some(m.map_or(k, |m: f64| m.max(k)))
        }),
        min_admissible_kappa: kappas.iter().copied().fold(None, |m, k| {
            Some(m.map_or(k, |m: f64| m.min(k)))
        }),
    }
}

/// Per-`(gamma, case)` row of the sweep summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub gamma: f64,
    pub case: DataCase,
    pub total_points: usize,
    pub solved_points: usize,
    pub admissible_points: usize,
    pub kappa_negative_points: usize,
    /// Fraction of admissible points with negative curvature; absent when
    /// nothing is admissible at this resolution.
    pub kappa_negative_fraction: Option<f64>,
    pub min_kappa: Option<f64>,
    pub max_kappa: Option<f64>,
    /// Grid estimate of the lower end of the admissible interval adjacent
    /// to `rho_m`, at the smallest `eps2` of the grid.
    pub rho_star_estimate: Option<f64>,
}

/// Sweep the `gamma` grid and summarise the admissible domain per case.
pub fn gamma_sweep(grid: &ScanGrid) -> Vec<SweepRow> {
    let pairs: Vec<(f64, DataCase)> = grid
        .gammas
        .iter()
        .flat_map(|&g| grid.cases.iter().map(move |&c| (g, c)))
        .collect();
    pairs
        .par_iter()
        .map(|&(gamma, case)| {
            let single = ScanGrid {
                gammas: vec![gamma],
                cases: vec![case],
                ..grid.clone()
            };
            let records = scan_grid(&single);
            let admissible: Vec<&ScanRecord> = records.iter().filter(|r| r.admissible).collect();
            let kappas: Vec<f64> = admissible.iter().filter_map(|r| r.kappa).collect();
            let negative = kappas.iter().filter(|&&k| k < 0.0).count();
            let eps2_min = grid.eps2_points().first().copied();
            let rho_star_estimate = eps2_min.and_then(|e0| {
                admissible
                    .iter()
                    .filter(|r| r.eps2 == e0)
                    .map(|r| r.rho1)
                    .fold(None, |m: Option<f64>, r| Some(m.map_or(r, |m| m.min(r))))
            });
            SweepRow {
                gamma,
                case,
                total_points: records.len(),
                solved_points: records.iter().filter(|r| r.failure.is_none()).count(),
                admissible_points: admissible.len(),
                kappa_negative_points: negative,
                kappa_negative_fraction: if admissible.is_empty() {
                    None
                } else {
                    Some(negative as f64 / admissible.len() as f64)
                },
                min_kappa: kappas.iter().copied().fold(None, |m, k| {
                    Some(m.map_or(k, |m: f64| m.min(k)))
                }),
                max_kappa: kappas.iter().copied().fold(None, |m, k| {
                    Some(m.map_or(k, |m: f64| m.max(k)))
                }),
                rho_star_estimate,
            }
        })
        .collect()
}

/// A grid point where the entropy rate criterion rejects the 2-shock (the
/// wild solutions dissipate strictly faster) while sARAC still selects it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub gamma: f64,
    pub case: DataCase,
    pub rho1: f64,
    pub eps2: f64,
    pub kappa: f64,
    pub rate_diff: f64,
}

fn witness_from(r: &ScanRecord) -> Witness {
    Witness {
        gamma: r.gamma,
        case: DataCase {
            rho_minus: r.rho_minus,
            rho_plus: r.rho_plus,
            v_minus: r.v_minus,
            v_plus: r.v_plus,
        },
        rho1: r.rho1,
        eps2: r.eps2,
        kappa: r.kappa.expect("admissible record"),
        rate_diff: r.rate_diff.expect("admissible record"),
    }
}

fn is_witness(r: &ScanRecord) -> bool {
    r.admissible
        && r.rate_diff.map(|d| d < 0.0).unwrap_or(false)
        && r.kappa.map(|k| k < 0.0).unwrap_or(false)
}

/// Search the grid for an entropy-rate counterexample: first pass in grid
/// order; if the coarse grid holds no witness, refine locally around the
/// admissible point with the smallest rate margin.
pub fn find_entropy_rate_counterexample(grid: &ScanGrid) -> Option<Witness> {
    let records = scan_grid(grid);
    if let Some(r) = records.iter().find(|r| is_witness(r)) {
        return Some(witness_from(r));
    }
    // refine near the admissible point closest to a sign change
    let promising = records
        .iter()
        .filter(|r| r.admissible)
        .min_by(|a, b| {
            let ra = a.rate_diff.unwrap_or(f64::INFINITY);
            let rb = b.rate_diff.unwrap_or(f64::INFINITY);
            ra.partial_cmp(&rb).expect("finite rates")
        })?;
    let case = DataCase {
        rho_minus: promising.rho_minus,
        rho_plus: promising.rho_plus,
        v_minus: promising.v_minus,
        v_plus: promising.v_plus,
    };
    let fine = ScanGrid {
        rho1_count: 512,
        eps2_count: 1,
        eps2_max: promising.eps2.min(grid.eps2_max / grid.eps2_count as f64),
        gammas: vec![promising.gamma],
        cases: vec![case],
        allow_isothermal: grid.allow_isothermal,
    };
    let refined = scan_grid(&fine);
    refined.iter().find(|r| is_witness(r)).map(witness_from)
}

/// Recompute a witness from scratch and confirm it replays: the point must
/// solve, be admissible, dissipate faster than the 2-shock and keep a
/// negative gap curvature, with all stored values reproduced.
pub fn verify_witness(witness: &Witness, tol: f64) -> Result<bool, SubsolutionError> {
    let law = if witness.gamma == 1.0 {
        GasLaw::isothermal()
    } else {
        GasLaw::new(witness.gamma).map_err(crate::riemann::RiemannError::Eos)?
    };
    let data = witness.case.to_riemann(law)?;
    let sub = crate::subsolution::solve_fan_subsolution(&data, witness.rho1, witness.eps2, tol)?;
    if !is_admissible(&data, &sub) {
        return Ok(false);
    }
    let shock = solve_two_shock(&data, tol)?;
    let ts_field = two_shock_field(&data, &shock);
    let wild = wild_effective_field(&data, &sub);
    let kappa = kappa_from_fields(&ts_field, &wild, &data.law, 1.0)
        .expect("positive densities")
        .kappa;
    let (pl, pr) = subsolution_entropy_production(&data, &sub);
    let rate_diff = two_shock_production_sum(&data, &shock) - (pl + pr);
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()));
    Ok(rate_diff < 0.0
        && kappa < 0.0
        && close(kappa, witness.kappa)
        && close(rate_diff, witness.rate_diff))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_grid() -> ScanGrid {
        ScanGrid {
            rho1_count: 40,
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

    #[test]
    fn scan_shapes_and_determinism() {
        let grid = small_grid();
        let a = scan_grid(&grid);
        let b = scan_grid(&grid);
        assert_eq!(a.len(), 400);
        assert_eq!(a, b);
        // grid order: rho1 ascending, eps2 ascending within
        assert!(a[0].rho1 < a[grid.eps2_count].rho1);
        assert!(a[0].eps2 < a[1].eps2);
    }

    #[test]
    fn eps2_zero_row_is_absent_and_admissible_points_exist() {
        let grid = small_grid();
        let records = scan_grid(&grid);
        assert!(records.iter().all(|r| r.eps2 > 0.0));
        assert!(records.iter().any(|r| r.admissible));
        // every admissible point carries a negative kappa for these data
        assert!(kappa_violations(&records).is_empty());
    }

    #[test]
    fn kappa_violation_detector_self_test() {
        let grid = small_grid();
        let mut records = scan_grid(&grid);
        let admissible = records.iter().filter(|r| r.admissible).count();
        assert!(admissible > 0);
        for r in &mut records {
            if let Some(k) = r.kappa {
                r.kappa = Some(-k);
            }
        }
        assert_eq!(kappa_violations(&records).len(), admissible);
    }

    #[test]
    fn failed_case_is_recorded_not_fatal() {
        let mut grid = small_grid();
        grid.cases = vec![DataCase {
            rho_minus: 1.0,
            rho_plus: 1.0,
            v_minus: 0.0,
            v_plus: 0.0,
        }];
        let records = scan_grid(&grid);
        assert_eq!(records.len(), 1);
        assert!(records[0].failure.is_some());
        assert!(!records[0].admissible);
    }

    #[test]
    fn isothermal_requires_opt_in() {
        let mut grid = small_grid();
        grid.gammas = vec![1.0];
        let records = scan_grid(&grid);
        assert!(records[0].failure.as_deref().unwrap().contains("isothermal"));
        grid.allow_isothermal = true;
        let records = scan_grid(&grid);
        assert!(records.iter().any(|r| r.failure.is_none()));
    }

    #[test]
    fn counterexample_found_and_replays() {
        let grid = ScanGrid {
            rho1_count: 60,
            eps2_count: 8,
            eps2_max: 0.4,
            gammas: vec![2.0],
            cases: vec![DataCase {
                rho_minus: 1.0,
                rho_plus: 2.0,
                v_minus: 5.0,
                v_plus: -5.0,
            }],
            allow_isothermal: false,
        };
        let w = find_entropy_rate_counterexample(&grid).expect("witness exists");
        assert!(w.rate_diff < 0.0 && w.kappa < 0.0);
        assert!(verify_witness(&w, 1e-12).unwrap());
    }

    #[test]
    fn no_witness_on_symmetric_ray() {
        let grid = small_grid();
        let records = scan_grid(&grid);
        assert!(records.iter().all(|r| !is_witness(r)));
    }
}
