//! Criterion engines over a candidate set: least-action admissibility at a
//! fixed final time (LAAP), its local-in-time refinement with per-competitor
//! witness times (LAAP0), the action rate criteria (ARAC and sARAC), and
//! the entropy rate criterion, which replaces action by energy.
//!
//! Candidates carry their exact quadratic action curve and dissipation
//! rate; verdicts are computed pairwise and assembled deterministically in
//! label order. Whatever the engines decide, the implication chain
//! `sARAC => strict LAAP0 => LAAP0 => ARAC` is checked post hoc, never
//! assumed.

use crate::action::{
    action_curve, dissipation_rate, kappa_from_fields, ActionCurve, ActionError, ComparisonWindow,
};
use crate::eos::GasLaw;
use crate::fields::{two_shock_field, wild_effective_field, SelfSimilarFanField};
use crate::riemann::{RiemannData, TwoShockSolution};
use crate::subsolution::FanSubsolution;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AdmissibilityError {
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error("candidate '{label}' violates the entropy inequality at an interface (production {production})")]
    NotEntropic { label: String, production: f64 },
    #[error("t1 = {t1} exceeds the coincidence window {limit} of hybrid candidate '{label}'")]
    BeyondCoincidence { label: String, limit: f64, t1: f64 },
    #[error("derivative ladders of '{u}' and '{v}' agree at all available orders but the gap is not identically zero")]
    TieUnresolved { u: String, v: String },
    #[error("candidate set must not be empty")]
    EmptySet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Criterion {
    Laap,
    Laap0,
    Arac,
    Sarac,
    EntropyRate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    StrictlyAdmissible,
    Admissible,
    Rejected,
}

impl Verdict {
    pub fn is_admissible(&self) -> bool {
        !matches!(self, Verdict::Rejected)
    }

    pub fn is_strict(&self) -> bool {
        matches!(self, Verdict::StrictlyAdmissible)
    }
}

/// What kind of solution a candidate stands for. Hybrid candidates coincide
/// with their underlying wild solution only up to a finite time; the
/// engines treat them as that wild solution for local-in-time criteria and
/// refuse fixed-time comparisons beyond the coincidence window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CandidateKind {
    TwoShock,
    Wild,
    Hybrid { coincide_until: f64 },
    Custom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub label: String,
    pub kind: CandidateKind,
    pub field: SelfSimilarFanField,
    pub curve: ActionCurve,
    /// Time derivative of the total window energy.
    pub rate: f64,
    /// Gap curvature `kappa` of `A(reference) - A(self)`; zero for the
    /// reference itself.
    pub gap_vs_reference: f64,
}

/// Candidates sharing one set of Riemann data and one comparison window.
/// By convention the reference (the 2-shock when present) sits at index 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateSet {
    pub window: ComparisonWindow,
    pub candidates: Vec<Candidate>,
}

impl CandidateSet {
    pub fn from_parts(window: ComparisonWindow, candidates: Vec<Candidate>) -> Self {
        CandidateSet { window, candidates }
    }

    /// The standard comparison pair: the 2-shock solution against the wild
    /// solutions over one fan sub-solution. Both candidates are verified to
    /// be entropic.
    pub fn two_shock_vs_wild(
        data: &RiemannData,
        shock: &TwoShockSolution,
        sub: &FanSubsolution,
        window: ComparisonWindow,
    ) -> Result<Self, AdmissibilityError> {
        let ts = two_shock_field(data, shock);
        let wild = wild_effective_field(data, sub);
        let gap = kappa_from_fields(&ts, &wild, &data.law, 2.0 * window.l3)?;
        let set = CandidateSet {
            window,
            candidates: vec![
                Candidate {
                    label: "two-shock".into(),
                    kind: CandidateKind::TwoShock,
                    curve: action_curve(&ts, &data.law, &window)?,
                    rate: dissipation_rate(&ts, &data.law, &window)?,
                    gap_vs_reference: 0.0,
                    field: ts,
                },
                Candidate {
                    label: "wild".into(),
                    kind: CandidateKind::Wild,
                    curve: action_curve(&wild, &data.law, &window)?,
                    rate: dissipation_rate(&wild, &data.law, &window)?,
                    gap_vs_reference: gap.kappa,
                    field: wild,
                },
            ],
        };
        set.validate_entropic(&data.law)?;
        Ok(set)
    }

    /// The 2-shock solution against the wild solutions of several fan
    /// sub-solutions at once. Labels are `wild-00`, `wild-01`, ... in input
    /// order.
    pub fn for_wild_family(
        data: &RiemannData,
        shock: &TwoShockSolution,
        subs: &[FanSubsolution],
        window: ComparisonWindow,
    ) -> Result<Self, AdmissibilityError> {
        let ts = two_shock_field(data, shock);
        let ts_curve = action_curve(&ts, &data.law, &window)?;
        let mut candidates = vec![Candidate {
            label: "two-shock".into(),
            kind: CandidateKind::TwoShock,
            curve: ts_curve,
            rate: dissipation_rate(&ts, &data.law, &window)?,
            gap_vs_reference: 0.0,
            field: ts.clone(),
        }];
        for (i, sub) in subs.iter().enumerate() {
            let wild = wild_effective_field(data, sub);
            let gap = kappa_from_fields(&ts, &wild, &data.law, 2.0 * window.l3)?;
            candidates.push(Candidate {
                label: format!("wild-{i:02}"),
                kind: CandidateKind::Wild,
                curve: action_curve(&wild, &data.law, &window)?,
                rate: dissipation_rate(&wild, &data.law, &window)?,
                gap_vs_reference: gap.kappa,
                field: wild,
            });
        }
        let set = CandidateSet { window, candidates };
        set.validate_entropic(&data.law)?;
        Ok(set)
    }

    /// Every candidate must satisfy the entropy inequality: all interface
    /// productions nonnegative (to rounding).
    pub fn validate_entropic(&self, law: &GasLaw) -> Result<(), AdmissibilityError> {
        for c in &self.candidates {
            let regions = c.field.regions();
            for (i, &s) in c.field.speeds().iter().enumerate() {
                let e_l = regions[i].energy;
                let e_r = regions[i + 1].energy;
                let g = |r: &crate::fields::Region| {
                    (r.energy + law.pressure(r.rho).expect("positive density")) * r.v2
                };
                let production = s * (e_r - e_l) - (g(&regions[i + 1]) - g(&regions[i]));
                if production < -1e-10 * (1.0 + e_l.abs() + e_r.abs()) {
                    return Err(AdmissibilityError::NotEntropic {
                        label: c.label.clone(),
                        production,
                    });
                }
            }
        }
        Ok(())
    }

    fn sorted_labels(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.candidates.len()).collect();
        idx.sort_by(|&a, &b| self.candidates[a].label.cmp(&self.candidates[b].label));
        idx
    }
}

/// Per-pair witness data: the comparison time for LAAP0, the separating
/// derivative order for sARAC, the rate gap for the entropy rate criterion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairWitness {
    pub u: String,
    pub v: String,
    pub t1: Option<f64>,
    pub order: Option<usize>,
    pub rate_gap: Option<f64>,
    pub exact_tie: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub criterion: Criterion,
    pub verdicts: Vec<(String, Verdict)>,
    pub pairs: Vec<PairWitness>,
}

impl AdmissibilityReport {
    pub fn verdict_for(&self, label: &str) -> Option<Verdict> {
        self.verdicts
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, v)| *v)
    }
}

/// Fixed-final-time least-action verdicts: a candidate is admissible iff
/// its action at `t1` is not greater than every other candidate's, strictly
/// admissible iff strictly smaller than all others.
pub fn laap_verdict(
    set: &CandidateSet,
    t1: f64,
) -> Result<AdmissibilityReport, AdmissibilityError> {
    if set.candidates.is_empty() {
        return Err(AdmissibilityError::EmptySet);
    }
    if !(t1 > 0.0 && t1 <= set.window.t_max) {
        return Err(AdmissibilityError::Action(ActionError::WindowTooSmall {
            ell1: set.window.ell1,
            ell2: set.window.ell2,
            t_max: set.window.t_max,
            t: t1,
        }));
    }
    for c in &set.candidates {
        if let CandidateKind::Hybrid { coincide_until } = c.kind {
            if t1 > coincide_until {
                return Err(AdmissibilityError::BeyondCoincidence {
                    label: c.label.clone(),
                    limit: coincide_until,
                    t1,
                });
            }
        }
    }
    let actions: Vec<f64> = set.candidates.iter().map(|c| c.curve.eval(t1)).collect();
    let mut verdicts = Vec::new();
    let mut pairs = Vec::new();
    for &i in &set.sorted_labels() {
        let mut admissible = true;
        let mut strict = true;
        for (j, &aj) in actions.iter().enumerate() {
            if i == j {
                continue;
            }
            if actions[i] > aj {
                admissible = false;
            }
            if actions[i] >= aj {
                strict = false;
            }
        }
        verdicts.push((
            set.candidates[i].label.clone(),
            if admissible && strict {
                Verdict::StrictlyAdmissible
            } else if admissible {
                Verdict::Admissible
            } else {
                Verdict::Rejected
            },
        ));
        for &j in &set.sorted_labels() {
            if j != i {
                pairs.push(PairWitness {
                    u: set.candidates[i].label.clone(),
                    v: set.candidates[j].label.clone(),
                    t1: Some(t1),
                    order: None,
                    rate_gap: None,
                    exact_tie: actions[i] == actions[j],
                });
            }
        }
    }
    Ok(AdmissibilityReport {
        criterion: Criterion::Laap,
        verdicts,
        pairs,
    })
}

// Preference of u over v under LAAP0, from the quadratic curves:
// A_u - A_v = (da1) t + (da2) t^2 / 2 near t = 0+. Returns (preferred,
// strict, witness t1).
fn laap0_prefers(
    u: &Candidate,
    v: &Candidate,
    t_max: f64,
) -> (bool, bool, Option<f64>, bool) {
    let da1 = u.curve.linear - v.curve.linear;
    let da2 = u.curve.quadratic - v.curve.quadratic;
    let cap = |limit: f64| match (u.kind, v.kind) {
        (CandidateKind::Hybrid { coincide_until }, _) => limit.min(coincide_until),
        (_, CandidateKind::Hybrid { coincide_until }) => limit.min(coincide_until),
        _ => limit,
    };
    if da1 == 0.0 && da2 == 0.0 {
        // identical curves: mutually preferred, neither strictly
        return (true, false, Some(cap(t_max)), true);
    }
    if da1 < 0.0 {
        let t1 = if da2 > 0.0 {
            cap(t_max).min(-2.0 * da1 / da2)
        } else {
            cap(t_max)
        };
        return (true, true, Some(t1), false);
    }
    if da1 == 0.0 && da2 < 0.0 {
        return (true, true, Some(cap(t_max)), false);
    }
    (false, false, None, false)
}

/// Local-in-time least-action verdicts with a concrete witness time per
/// comparison: `u` is preferred to `v` iff its action is not greater on
/// some interval `(0, t1(v))`, strictly preferred if also smaller
/// somewhere in it.
pub fn laap0_verdict(set: &CandidateSet) -> Result<AdmissibilityReport, AdmissibilityError> {
    if set.candidates.is_empty() {
        return Err(AdmissibilityError::EmptySet);
    }
    let mut verdicts = Vec::new();
    let mut pairs = Vec::new();
    for &i in &set.sorted_labels() {
        let u = &set.candidates[i];
        let mut admissible = true;
        let mut strict = true;
        for &j in &set.sorted_labels() {
            if i == j {
                continue;
            }
            let v = &set.candidates[j];
            let (pref, strict_pref, t1, tie) = laap0_prefers(u, v, set.window.t_max);
            admissible &= pref;
            strict &= strict_pref;
            pairs.push(PairWitness {
                u: u.label.clone(),
                v: v.label.clone(),
                t1,
                order: None,
                rate_gap: None,
                exact_tie: tie,
            });
        }
        verdicts.push((
            u.label.clone(),
            if admissible && strict {
                Verdict::StrictlyAdmissible
            } else if admissible {
                Verdict::Admissible
            } else {
                Verdict::Rejected
            },
        ));
    }
    Ok(AdmissibilityReport {
        criterion: Criterion::Laap0,
        verdicts,
        pairs,
    })
}

/// Time-grid variant of the LAAP0 engine: compares action curves on a
/// dense grid of `(0, t_max]` instead of using the quadratic structure.
/// Used to cross-check the closed-form engine on general gap data.
pub fn laap0_verdict_grid(
    set: &CandidateSet,
    grid_points: usize,
) -> Result<AdmissibilityReport, AdmissibilityError> {
    if set.candidates.is_empty() {
        return Err(AdmissibilityError::EmptySet);
    }
    let n = grid_points.max(2);
    let mut verdicts = Vec::new();
    for &i in &set.sorted_labels() {
        let u = &set.candidates[i];
        let mut admissible = true;
        let mut strict = true;
        for (j, v) in set.candidates.iter().enumerate() {
            if i == j {
                continue;
            }
            // preference needs only some initial interval; probe the
            // smallest grid times first
            let mut pref = true;
            let mut strict_somewhere = false;
            for k in 1..=n {
                let t = set.window.t_max * (k as f64 / n as f64) * 1e-3;
                let du = u.curve.eval(t) - v.curve.eval(t);
                if du > 0.0 {
                    pref = false;
                    break;
                }
                if du < 0.0 {
                    strict_somewhere = true;
                }
            }
            admissible &= pref;
            strict &= pref && strict_somewhere;
        }
        verdicts.push((
            u.label.clone(),
            if admissible && strict {
                Verdict::StrictlyAdmissible
            } else if admissible {
                Verdict::Admissible
            } else {
                Verdict::Rejected
            },
        ));
    }
    Ok(AdmissibilityReport {
        criterion: Criterion::Laap0,
        verdicts,
        pairs: Vec::new(),
    })
}

/// First-derivative action rate verdicts: `u` is admissible iff
/// `dA(u)/dt at 0+ <= dA(v)/dt at 0+` for all `v`.
pub fn arac_verdict(set: &CandidateSet) -> Result<AdmissibilityReport, AdmissibilityError> {
    if set.candidates.is_empty() {
        return Err(AdmissibilityError::EmptySet);
    }
    let mut verdicts = Vec::new();
    for &i in &set.sorted_labels() {
        let a1 = set.candidates[i].curve.linear;
        let admissible = set
            .candidates
            .iter()
            .enumerate()
            .all(|(j, c)| j == i || a1 <= c.curve.linear);
        verdicts.push((
            set.candidates[i].label.clone(),
            if admissible {
                Verdict::Admissible
            } else {
                Verdict::Rejected
            },
        ));
    }
    Ok(AdmissibilityReport {
        criterion: Criterion::Arac,
        verdicts,
        pairs: Vec::new(),
    })
}

enum SaracPair {
    WinsAt(usize),
    Loses,
    ExactTie,
}

fn sarac_pair(u: &Candidate, v: &Candidate) -> SaracPair {
    // order 0 always ties: A(0) = 0 for every candidate
    let d1 = u.curve.linear - v.curve.linear;
    if d1 != 0.0 {
        return if d1 < 0.0 {
            SaracPair::WinsAt(1)
        } else {
            SaracPair::Loses
        };
    }
    let d2 = u.curve.quadratic - v.curve.quadratic;
    if d2 != 0.0 {
        return if d2 < 0.0 {
            SaracPair::WinsAt(2)
        } else {
            SaracPair::Loses
        };
    }
    // quadratic curves agreeing through order 2 are identical: exact tie
    SaracPair::ExactTie
}

/// Strict action rate verdicts: `u` beats `v` iff the derivative ladders of
/// the actions at `t = 0+` agree below some order `k` and the `k`-th
/// derivative of `u` is strictly smaller. The report records `k` per pair;
/// for quadratic gaps `k <= 2` and ties are exact.
pub fn sarac_verdict(set: &CandidateSet) -> Result<AdmissibilityReport, AdmissibilityError> {
    if set.candidates.is_empty() {
        return Err(AdmissibilityError::EmptySet);
    }
    let mut verdicts = Vec::new();
    let mut pairs = Vec::new();
    for &i in &set.sorted_labels() {
        let u = &set.candidates[i];
        let mut wins_all = true;
        for &j in &set.sorted_labels() {
            if i == j {
                continue;
            }
            let v = &set.candidates[j];
            let (order, tie) = match sarac_pair(u, v) {
                SaracPair::WinsAt(k) => (Some(k), false),
                SaracPair::Loses => {
                    wins_all = false;
                    (None, false)
                }
                SaracPair::ExactTie => {
                    wins_all = false;
                    (None, true)
                }
            };
            pairs.push(PairWitness {
                u: u.label.clone(),
                v: v.label.clone(),
                t1: None,
                order,
                rate_gap: None,
                exact_tie: tie,
            });
        }
        verdicts.push((
            u.label.clone(),
            if wins_all {
                Verdict::StrictlyAdmissible
            } else {
                Verdict::Rejected
            },
        ));
    }
    Ok(AdmissibilityReport {
        criterion: Criterion::Sarac,
        verdicts,
        pairs,
    })
}

/// Entropy rate verdicts: the admissible candidates minimise the initial
/// energy rate (maximal dissipation), with action replaced by energy.
pub fn dafermos_verdict(set: &CandidateSet) -> Result<AdmissibilityReport, AdmissibilityError> {
    if set.candidates.is_empty() {
        return Err(AdmissibilityError::EmptySet);
    }
    let mut verdicts = Vec::new();
    let mut pairs = Vec::new();
    for &i in &set.sorted_labels() {
        let u = &set.candidates[i];
        let mut admissible = true;
        let mut strict = true;
        for &j in &set.sorted_labels() {
            if i == j {
                continue;
            }
            let v = &set.candidates[j];
            if u.rate > v.rate {
                admissible = false;
            }
            if u.rate >= v.rate {
                strict = false;
            }
            pairs.push(PairWitness {
                u: u.label.clone(),
                v: v.label.clone(),
                t1: None,
                order: None,
                rate_gap: Some(u.rate - v.rate),
                exact_tie: u.rate == v.rate,
            });
        }
        verdicts.push((
            u.label.clone(),
            if admissible && strict {
                Verdict::StrictlyAdmissible
            } else if admissible {
                Verdict::Admissible
            } else {
                Verdict::Rejected
            },
        ));
    }
    Ok(AdmissibilityReport {
        criterion: Criterion::EntropyRate,
        verdicts,
        pairs,
    })
}

/// All five reports for a candidate set, with the standard fixed time
/// `t1 = t_max` for LAAP.
pub fn full_report(
    set: &CandidateSet,
) -> Result<Vec<AdmissibilityReport>, AdmissibilityError> {
    Ok(vec![
        laap_verdict(set, set.window.t_max)?,
        laap0_verdict(set)?,
        arac_verdict(set)?,
        sarac_verdict(set)?,
        dafermos_verdict(set)?,
    ])
}

/// Post-hoc check of the implication chain
/// `sARAC => strict LAAP0 => LAAP0 => ARAC` on a bundle of reports for the
/// same candidate set. Returns human-readable violations (expected: none).
pub fn check_implication_chain(reports: &[AdmissibilityReport]) -> Vec<String> {
    let find = |c: Criterion| reports.iter().find(|r| r.criterion == c);
    let mut violations = Vec::new();
    let (laap0, arac, sarac) = match (
        find(Criterion::Laap0),
        find(Criterion::Arac),
        find(Criterion::Sarac),
    ) {
        (Some(a), Some(b), Some(c)) => (a, b, c),
        _ => return violations,
    };
    for (label, v) in &sarac.verdicts {
        if v.is_strict() {
            match laap0.verdict_for(label) {
                Some(lv) if lv.is_strict() => {}
                other => violations.push(format!(
                    "'{label}' is sARAC-admissible but not strictly LAAP0-admissible ({other:?})"
                )),
            }
        }
    }
    for (label, v) in &laap0.verdicts {
        if v.is_strict() && !v.is_admissible() {
            violations.push(format!("'{label}' strict but not admissible under LAAP0"));
        }
        if v.is_admissible() {
            match arac.verdict_for(label) {
                Some(av) if av.is_admissible() => {}
                other => violations.push(format!(
                    "'{label}' is LAAP0-admissible but not ARAC-admissible ({other:?})"
                )),
            }
        }
    }
    violations
}
