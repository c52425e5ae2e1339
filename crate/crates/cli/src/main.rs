//! Command-line laboratory for the 2-shock Riemann problem: exact solves,
//! fan sub-solutions, action-gap comparisons, admissibility verdicts,
//! parameter-space scans and weak-form verification.
//!
//! Results are printed to stdout as JSON; grids go to files; progress and
//! errors go to stderr. Exit codes: 0 success, 1 malformed configuration or
//! usage, 2 no 2-shock solution, 3 solver non-convergence, 4 inadmissible
//! comparison point (report still emitted).

mod commands;
mod config;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use commands::CliError;
use config::RunConfig;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "actionrate",
    about = "Least-action and entropy-rate admissibility for the 2-shock Riemann problem",
    version
)]
struct Cli {
    /// JSON configuration file; flags override file values
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads for scans (0 = all cores); output is identical for
    /// any degree
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Adiabatic exponent (1 < gamma <= 3)
    #[arg(long, global = true)]
    gamma: Option<f64>,

    /// Enable the isothermal endpoint gamma = 1
    #[arg(long, global = true)]
    allow_isothermal: bool,

    #[arg(long, global = true)]
    rho_minus: Option<f64>,

    #[arg(long, global = true)]
    rho_plus: Option<f64>,

    #[arg(long, global = true, allow_negative_numbers = true)]
    v_minus: Option<f64>,

    #[arg(long, global = true, allow_negative_numbers = true)]
    v_plus: Option<f64>,

    /// Root tolerance for the Hugoniot and jump-condition solves
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Horizontal half-period of the comparison window
    #[arg(long, global = true)]
    l3: Option<f64>,

    #[arg(long, global = true)]
    t_max: Option<f64>,

    /// Vertical padding fraction of the comparison window
    #[arg(long, global = true)]
    pad: Option<f64>,

    #[arg(long, global = true)]
    rho1_count: Option<usize>,

    #[arg(long, global = true)]
    eps2_count: Option<usize>,

    #[arg(long, global = true)]
    eps2_max: Option<f64>,

    /// Comma-separated gamma grid for scans and sweeps
    #[arg(long, global = true, value_delimiter = ',')]
    gammas: Option<Vec<f64>>,

    /// Output directory for generated files
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve the two-shock Riemann problem for the configured data
    Solve,
    /// Solve the fan sub-solution jump system at (rho1, eps2)
    Subsolution {
        #[arg(long)]
        rho1: f64,
        #[arg(long)]
        eps2: f64,
    },
    /// Compare the 2-shock against the wild solutions at (rho1, eps2)
    /// under all five criteria
    Compare {
        #[arg(long)]
        rho1: f64,
        #[arg(long)]
        eps2: f64,
        /// Fixed final time for the LAAP verdict (default: window t_max)
        #[arg(long)]
        t1: Option<f64>,
        /// Sample count for the emitted gap curve
        #[arg(long, default_value_t = 32)]
        samples: usize,
        /// Write the gap curve as CSV to this path
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Scan the (rho1, eps2) grid over all configured gammas and cases
    Scan {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Summarise the admissible domain per gamma and data case
    Sweep {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search the grid for a point where the entropy rate criterion
    /// rejects the 2-shock while sARAC selects it
    Counterexample {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Weak-form residual checks under quadrature refinement
    Verify {
        #[arg(long)]
        rho1: Option<f64>,
        #[arg(long)]
        eps2: Option<f64>,
        #[arg(long)]
        width: Option<f64>,
        #[arg(long)]
        resolution: Option<usize>,
    },
}

fn build_config(cli: &Cli) -> Result<RunConfig, String> {
    let mut config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(g) = cli.gamma {
        config.gamma = g;
    }
    config.allow_isothermal |= cli.allow_isothermal;
    if let Some(v) = cli.rho_minus {
        config.data.rho_minus = v;
    }
    if let Some(v) = cli.rho_plus {
        config.data.rho_plus = v;
    }
    if let Some(v) = cli.v_minus {
        config.data.v_minus = v;
    }
    if let Some(v) = cli.v_plus {
        config.data.v_plus = v;
    }
    if let Some(v) = cli.tol {
        config.tolerances.root = v;
    }
    if let Some(v) = cli.l3 {
        config.window.l3 = v;
    }
    if let Some(v) = cli.t_max {
        config.window.t_max = v;
    }
    if let Some(v) = cli.pad {
        config.window.pad = v;
    }
    if let Some(v) = cli.rho1_count {
        config.grid.rho1_count = v;
    }
    if let Some(v) = cli.eps2_count {
        config.grid.eps2_count = v;
    }
    if let Some(v) = cli.eps2_max {
        config.grid.eps2_max = v;
    }
    if let Some(v) = &cli.gammas {
        config.grid.gammas = v.clone();
    }
    if let Some(v) = &cli.out_dir {
        config.output.dir = v.clone();
    }
    config.validate()?;
    Ok(config)
}

fn dispatch(command: &Command, config: &RunConfig) -> Result<i32, CliError> {
    match command {
        Command::Solve => commands::cmd_solve(config),
        Command::Subsolution { rho1, eps2 } => commands::cmd_subsolution(config, *rho1, *eps2),
        Command::Compare {
            rho1,
            eps2,
            t1,
            samples,
            plot,
        } => commands::cmd_compare(config, *rho1, *eps2, *t1, *samples, plot.as_deref()),
        Command::Scan { out } => commands::cmd_scan(config, out.as_deref()),
        Command::Sweep { out } => commands::cmd_sweep(config, out.as_deref()),
        Command::Counterexample { out } => commands::cmd_counterexample(config, out.as_deref()),
        Command::Verify {
            rho1,
            eps2,
            width,
            resolution,
        } => commands::cmd_verify(config, *rho1, *eps2, *width, *resolution),
    }
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    eprint!("{e}");
                    1
                }
            }
        }
    };
    let config = match build_config(&cli) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 1;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot build thread pool: {e}");
            return 1;
        }
    };
    match pool.install(|| dispatch(&cli.command, &config)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn main() {
    std::process::exit(run());
}
