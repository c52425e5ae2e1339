//! The seven workflows behind the subcommands. Results go to stdout as
//! JSON; bulk grids go to files; progress notes go to stderr. Exit codes
//! are the only success/failure channel.

use crate::config::{OutputFormat, RunConfig};
use actionrate::action::{action_gap, dissipation_rate, ComparisonWindow};
use actionrate::admissibility::{full_report, AdmissibilityReport, CandidateSet};
use actionrate::eos::GasLaw;
use actionrate::fields::{
    two_shock_field, weak_residual, wild_effective_field, SelfSimilarFanField, WeakResiduals,
    DEFAULT_WEAK_RESOLUTION, DEFAULT_WEAK_WIDTH,
};
use actionrate::report::{gap_curve_csv, scan_csv, SCHEMA_VERSION};
use actionrate::riemann::{
    entropy_production, rh_residual, solve_two_shock, RiemannData, RiemannError,
};
use actionrate::scan::{
    find_entropy_rate_counterexample, gamma_sweep, scan_grid, verify_witness, Witness,
};
use actionrate::subsolution::{
    find_rho_star, is_admissible, solve_fan_subsolution, subsolution_entropy_production,
    subsolution_residual, FanSubsolution, SubsolutionError,
};
use actionrate::Vec2;
use serde::Serialize;
use std::fmt;
use std::path::{Path, PathBuf};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    NoTwoShock,
    NoConvergence(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::NoTwoShock => 2,
            CliError::NoConvergence(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "{msg}"),
            CliError::NoTwoShock => write!(
                f,
                "no 2-shock solution: the data fail the compressive existence condition \
                 (v_- - v_+)^2 rho_+ rho_- - (rho_+ - rho_-)(p(rho_+) - p(rho_-)) > 0"
            ),
            CliError::NoConvergence(msg) => write!(f, "{msg}"),
            CliError::Io(msg) => write!(f, "{msg}"),
        }
    }
}

impl From<RiemannError> for CliError {
    fn from(e: RiemannError) -> Self {
        match e {
            RiemannError::NoTwoShock => CliError::NoTwoShock,
            RiemannError::NoConvergence { .. } => CliError::NoConvergence(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<SubsolutionError> for CliError {
    fn from(e: SubsolutionError) -> Self {
        match e {
            SubsolutionError::Riemann(r) => r.into(),
            SubsolutionError::InvalidParameter(msg) => CliError::Config(msg),
            other => CliError::NoConvergence(other.to_string()),
        }
    }
}

fn law_of(config: &RunConfig) -> Result<GasLaw, CliError> {
    if config.gamma == 1.0 {
        if config.allow_isothermal {
            Ok(GasLaw::isothermal())
        } else {
            Err(CliError::Config(
                "gamma = 1 requires \"allow_isothermal\": true".into(),
            ))
        }
    } else {
        GasLaw::new(config.gamma).map_err(|e| CliError::Config(e.to_string()))
    }
}

fn data_of(config: &RunConfig) -> Result<RiemannData, CliError> {
    let d = config.data;
    RiemannData::new(law_of(config)?, d.rho_minus, d.rho_plus, d.v_minus, d.v_plus)
        .map_err(|e| CliError::Config(e.to_string()))
}

fn emit<T: Serialize>(value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Io(format!("serialization failed: {e}")))?;
    println!("{text}");
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| CliError::Io(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    std::fs::write(path, contents)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

#[derive(Debug, Serialize)]
struct SolveReport {
    schema_version: u32,
    gamma: f64,
    rho_minus: f64,
    rho_plus: f64,
    v_minus: f64,
    v_plus: f64,
    rho_m: f64,
    v_m: f64,
    nu_minus: f64,
    nu_plus: f64,
    residual_left: f64,
    residual_right: f64,
    production_left: f64,
    production_right: f64,
}

pub fn cmd_solve(config: &RunConfig) -> Result<i32, CliError> {
    let data = data_of(config)?;
    let shock = solve_two_shock(&data, config.tolerances.root)?;
    let left = rh_residual(
        &data.law,
        (data.rho_minus, Vec2::vertical(data.v_minus)),
        (shock.rho_m, Vec2::vertical(shock.v_m)),
        shock.nu_minus,
    )?;
    let right = rh_residual(
        &data.law,
        (shock.rho_m, Vec2::vertical(shock.v_m)),
        (data.rho_plus, Vec2::vertical(data.v_plus)),
        shock.nu_plus,
    )?;
    let production_left = entropy_production(
        &data.law,
        (data.rho_minus, Vec2::vertical(data.v_minus)),
        (shock.rho_m, Vec2::vertical(shock.v_m)),
        shock.nu_minus,
    )?;
    let production_right = entropy_production(
        &data.law,
        (shock.rho_m, Vec2::vertical(shock.v_m)),
        (data.rho_plus, Vec2::vertical(data.v_plus)),
        shock.nu_plus,
    )?;
    emit(&SolveReport {
        schema_version: SCHEMA_VERSION,
        gamma: data.law.gamma(),
        rho_minus: data.rho_minus,
        rho_plus: data.rho_plus,
        v_minus: data.v_minus,
        v_plus: data.v_plus,
        rho_m: shock.rho_m,
        v_m: shock.v_m,
        nu_minus: shock.nu_minus,
        nu_plus: shock.nu_plus,
        residual_left: left.norm(),
        residual_right: right.norm(),
        production_left,
        production_right,
    })?;
    Ok(0)
}

#[derive(Debug, Serialize)]
struct SubsolutionReport {
    schema_version: u32,
    gamma: f64,
    subsolution: FanSubsolution,
    residual_norm: f64,
    production_left: f64,
    production_right: f64,
    admissible: bool,
}

pub fn cmd_subsolution(config: &RunConfig, rho1: f64, eps2: f64) -> Result<i32, CliError> {
    let data = data_of(config)?;
    let sub = solve_fan_subsolution(&data, rho1, eps2, config.tolerances.root)?;
    let (production_left, production_right) = subsolution_entropy_production(&data, &sub);
    emit(&SubsolutionReport {
        schema_version: SCHEMA_VERSION,
        gamma: data.law.gamma(),
        subsolution: sub,
        residual_norm: subsolution_residual(&data, &sub).norm(),
        production_left,
        production_right,
        admissible: is_admissible(&data, &sub),
    })?;
    Ok(0)
}

#[derive(Debug, Serialize)]
struct CompareReport {
    schema_version: u32,
    gamma: f64,
    rho1: f64,
    eps2: f64,
    admissible: bool,
    window: ComparisonWindow,
    kappa: f64,
    rate_two_shock: f64,
    rate_wild: f64,
    rate_diff: f64,
    verdicts: Vec<AdmissibilityReport>,
    d_samples: Vec<[f64; 2]>,
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_compare(
    config: &RunConfig,
    rho1: f64,
    eps2: f64,
    t1: Option<f64>,
    samples: usize,
    plot: Option<&Path>,
) -> Result<i32, CliError> {
    let data = data_of(config)?;
    let shock = solve_two_shock(&data, config.tolerances.root)?;
    let sub = solve_fan_subsolution(&data, rho1, eps2, config.tolerances.root)?;
    let admissible = is_admissible(&data, &sub);
    if !admissible {
        eprintln!("note: (rho1, eps2) = ({rho1}, {eps2}) is not an admissible fan sub-solution");
    }
    let ts = two_shock_field(&data, &shock);
    let wild = wild_effective_field(&data, &sub);
    let window = ComparisonWindow::enclosing(
        &[&ts, &wild],
        config.window.l3,
        config.window.t_max,
        config.window.pad,
    )
    .map_err(|e| CliError::Config(e.to_string()))?;
    let (_, gap) = action_gap(&data, &shock, &sub, &window, window.t_max)
        .map_err(|e| CliError::NoConvergence(e.to_string()))?;
    let set = CandidateSet::two_shock_vs_wild(&data, &shock, &sub, window)
        .map_err(|e| CliError::NoConvergence(e.to_string()))?;
    let mut verdicts = full_report(&set).map_err(|e| CliError::NoConvergence(e.to_string()))?;
    if let Some(t1) = t1 {
        let laap = actionrate::admissibility::laap_verdict(&set, t1)
            .map_err(|e| CliError::Config(e.to_string()))?;
        verdicts[0] = laap;
    }
    let rate_two_shock = dissipation_rate(&ts, &data.law, &window)
        .map_err(|e| CliError::NoConvergence(e.to_string()))?;
    let rate_wild = dissipation_rate(&wild, &data.law, &window)
        .map_err(|e| CliError::NoConvergence(e.to_string()))?;
    let n = samples.max(2);
    let d_samples: Vec<[f64; 2]> = (0..=n)
        .map(|k| {
            let t = window.t_max * k as f64 / n as f64;
            [t, gap.eval(t)]
        })
        .collect();
    if let Some(plot_path) = plot {
        write_file(plot_path, &gap_curve_csv(&gap, window.t_max, n))?;
    }
    emit(&CompareReport {
        schema_version: SCHEMA_VERSION,
        gamma: data.law.gamma(),
        rho1,
        eps2,
        admissible,
        window,
        kappa: gap.kappa,
        rate_two_shock,
        rate_wild,
        rate_diff: rate_wild - rate_two_shock,
        verdicts,
        d_samples,
    })?;
    Ok(if admissible { 0 } else { 4 })
}

#[derive(Debug, Serialize)]
struct ScanSummary {
    schema_version: u32,
    records: usize,
    solved: usize,
    admissible: usize,
    kappa_violations: usize,
    output: PathBuf,
}

pub fn cmd_scan(config: &RunConfig, out: Option<&Path>) -> Result<i32, CliError> {
    let grid = config.scan_grid();
    eprintln!(
        "scanning {} gamma value(s) x {} case(s), {} x {} grid",
        grid.gammas.len(),
        grid.cases.len(),
        grid.rho1_count,
        grid.eps2_count
    );
    let records = scan_grid(&grid);
    let default_name = match config.output.format {
        OutputFormat::Csv => "scan.csv",
        OutputFormat::Json => "scan.json",
    };
    let path = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| config.output.dir.join(default_name));
    let contents = match config.output.format {
        OutputFormat::Csv => scan_csv(&records),
        OutputFormat::Json => serde_json::to_string_pretty(&records)
            .map_err(|e| CliError::Io(format!("serialization failed: {e}")))?,
    };
    write_file(&path, &contents)?;
    let violations: usize = records
        .iter()
        .filter(|r| r.admissible && r.kappa.map(|k| k >= 0.0).unwrap_or(false))
        .count();
    emit(&ScanSummary {
        schema_version: SCHEMA_VERSION,
        records: records.len(),
        solved: records.iter().filter(|r| r.failure.is_none()).count(),
        admissible: records.iter().filter(|r| r.admissible).count(),
        kappa_violations: violations,
        output: path,
    })?;
    Ok(0)
}

#[derive(Debug, Serialize)]
struct SweepSummary {
    schema_version: u32,
    per_gamma: Vec<GammaSummary>,
    output: PathBuf,
}

#[derive(Debug, Serialize)]
struct GammaSummary {
    gamma: f64,
    admissible: usize,
    kappa_negative: usize,
    violations: usize,
}

pub fn cmd_sweep(config: &RunConfig, out: Option<&Path>) -> Result<i32, CliError> {
    let grid = config.scan_grid();
    eprintln!(
        "sweeping gamma over {:?} with {} case(s)",
        grid.gammas,
        grid.cases.len()
    );
    let rows = gamma_sweep(&grid);
    let path = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| config.output.dir.join("sweep.json"));
    let contents = serde_json::to_string_pretty(&rows)
        .map_err(|e| CliError::Io(format!("serialization failed: {e}")))?;
    write_file(&path, &contents)?;
    let per_gamma = grid
        .gammas
        .iter()
        .map(|&gamma| {
            let mine: Vec<_> = rows.iter().filter(|r| r.gamma == gamma).collect();
            let admissible: usize = mine.iter().map(|r| r.admissible_points).sum();
            let negative: usize = mine.iter().map(|r| r.kappa_negative_points).sum();
            GammaSummary {
                gamma,
                admissible,
                kappa_negative: negative,
                violations: admissible - negative,
            }
        })
        .collect();
    emit(&SweepSummary {
        schema_version: SCHEMA_VERSION,
        per_gamma,
        output: path,
    })?;
    Ok(0)
}

#[derive(Debug, Serialize)]
struct CounterexampleReport {
    schema_version: u32,
    found: bool,
    witness: Option<Witness>,
    replay_verified: Option<bool>,
}

pub fn cmd_counterexample(config: &RunConfig, out: Option<&Path>) -> Result<i32, CliError> {
    let grid = config.scan_grid();
    eprintln!("searching for a point where the entropy rate criterion rejects the 2-shock");
    let witness = find_entropy_rate_counterexample(&grid);
    let replay_verified = witness
        .as_ref()
        .map(|w| verify_witness(w, config.tolerances.root).unwrap_or(false));
    let report = CounterexampleReport {
        schema_version: SCHEMA_VERSION,
        found: witness.is_some(),
        witness,
        replay_verified,
    };
    if let Some(path) = out {
        let contents = serde_json::to_string_pretty(&report)
            .map_err(|e| CliError::Io(format!("serialization failed: {e}")))?;
        write_file(path, &contents)?;
    }
    emit(&report)?;
    Ok(0)
}

#[derive(Debug, Serialize)]
struct VerifyRow {
    field: String,
    width: f64,
    resolution: usize,
    residuals: WeakResiduals,
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    schema_version: u32,
    rho1: f64,
    eps2: f64,
    rows: Vec<VerifyRow>,
    mass_decreasing: bool,
    momentum_decreasing: bool,
    energy_sign_ok: bool,
}

pub fn cmd_verify(
    config: &RunConfig,
    rho1: Option<f64>,
    eps2: Option<f64>,
    width: Option<f64>,
    resolution: Option<usize>,
) -> Result<i32, CliError> {
    let data = data_of(config)?;
    let shock = solve_two_shock(&data, config.tolerances.root)?;
    let eps2 = eps2.unwrap_or(0.1);
    let rho1 = match rho1 {
        Some(r) => r,
        None => match find_rho_star(&data, eps2, config.tolerances.rho_star) {
            // default probe point: the middle of the admissible interval
            Ok(star) => 0.5 * (star.rho_star + shock.rho_m),
            Err(_) => shock.rho_m,
        },
    };
    let sub = solve_fan_subsolution(&data, rho1, eps2, config.tolerances.root)?;
    let width = width.unwrap_or(DEFAULT_WEAK_WIDTH);
    let base = resolution.unwrap_or(DEFAULT_WEAK_RESOLUTION);
    let fields: [(&str, SelfSimilarFanField); 2] = [
        ("two-shock", two_shock_field(&data, &shock)),
        ("wild-effective", wild_effective_field(&data, &sub)),
    ];
    let mut rows = Vec::new();
    for (name, field) in &fields {
        for factor in [1usize, 2, 4] {
            let res = weak_residual(field, &data.law, width, base * factor)
                .map_err(|e| CliError::NoConvergence(e.to_string()))?;
            rows.push(VerifyRow {
                field: (*name).into(),
                width,
                resolution: base * factor,
                residuals: res,
            });
        }
    }
    let decreasing = |pick: fn(&WeakResiduals) -> f64| {
        rows.chunks(3).all(|c| {
            pick(&c[0].residuals) > pick(&c[1].residuals)
                && pick(&c[1].residuals) > pick(&c[2].residuals)
        })
    };
    let report = VerifyReport {
        schema_version: SCHEMA_VERSION,
        rho1,
        eps2,
        mass_decreasing: decreasing(|r| r.mass),
        momentum_decreasing: decreasing(|r| r.momentum),
        energy_sign_ok: rows.iter().all(|r| r.residuals.energy_min > -1e-8),
        rows,
    };
    emit(&report)?;
    Ok(0)
}

