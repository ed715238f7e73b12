use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pass_covert::benchmarks::BenchmarkKind;
use pass_covert::harness::emit::{self, Format, Row};
use pass_covert::harness::{self, Case, ExperimentConfig, Scheme, SweepVariable};
use pass_covert::Error;

#[derive(Parser)]
#[command(
    name = "pass-covert",
    version,
    about = "Covert-rate solvers and experiments for pinching-antenna systems"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML experiment config; unset keys take the built-in defaults
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the config seed
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; stdout when omitted
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value = "csv")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Single waveguide, single PA on the reference placement
    Swsp,
    /// Multiple waveguides and PAs on the reference placement
    Mwmp,
    /// Reference schemes on the reference placement
    Bench {
        /// Comma-separated subset of mimo_zf, mimo_mrt, pass_zf, pass_mrt
        #[arg(long, value_delimiter = ',')]
        schemes: Vec<String>,
    },
    /// Monte Carlo sweep of one parameter
    Sweep {
        /// target_error_rate, power_budget or uncertainty_radius
        #[arg(long)]
        variable: String,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        /// Comma-separated scheme names; all schemes when omitted
        #[arg(long, value_delimiter = ',')]
        schemes: Vec<String>,
        /// Overrides the configured trial count
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Normalized beam pattern over the sampling region
    Pattern {
        #[arg(long, default_value = "mwmp")]
        case: String,
        /// Grid step in metres
        #[arg(long, default_value_t = 0.1)]
        step: f64,
    },
    /// Best-rate trace per power step or swarm iteration
    Converge {
        #[arg(long, default_value = "mwmp")]
        case: String,
        /// Overrides the configured number of averaged swarm runs
        #[arg(long)]
        runs: Option<usize>,
    },
}

fn parse_all<T: std::str::FromStr<Err = Error>>(names: &[String]) -> Result<Vec<T>, Error> {
    names.iter().map(|s| s.parse()).collect()
}

fn write<R: Row>(records: &[R], common: &Common, format: Format) -> Result<(), Error> {
    match &common.out {
        Some(path) => emit::emit(records, path, format),
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            emit::write_records(records, &mut lock, format)
                .and_then(|_| lock.flush())
                .map_err(|source| Error::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let common = &cli.common;
    let format: Format = common.format.parse()?;
    let mut cfg = match &common.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    match cli.command {
        Command::Swsp => write(&harness::solve_reference(&cfg, &[Scheme::Swsp])?, common, format),
        Command::Mwmp => write(&harness::solve_reference(&cfg, &[Scheme::Mwmp])?, common, format),
        Command::Bench { schemes } => {
            let kinds: Vec<BenchmarkKind> = if schemes.is_empty() {
                BenchmarkKind::ALL.to_vec()
            } else {
                parse_all(&schemes)?
            };
            let schemes: Vec<Scheme> = kinds.into_iter().map(Scheme::Bench).collect();
            write(&harness::solve_reference(&cfg, &schemes)?, common, format)
        }
        Command::Sweep {
            variable,
            values,
            schemes,
            trials,
        } => {
            let variable: SweepVariable = variable.parse()?;
            let schemes: Vec<Scheme> = if schemes.is_empty() {
                Scheme::ALL.to_vec()
            } else {
                parse_all(&schemes)?
            };
            if let Some(n) = trials {
                cfg.monte_carlo = n;
                cfg.validate()?;
            }
            write(&harness::run_sweep(&cfg, variable, &values, &schemes)?, common, format)
        }
        Command::Pattern { case, step } => {
            let grid = harness::beam_pattern(&cfg, case.parse::<Case>()?, step)?;
            write(&harness::pattern_cells(&grid), common, format)
        }
        Command::Converge { case, runs } => {
            if let Some(n) = runs {
                cfg.convergence_runs = n;
                cfg.validate()?;
            }
            write(&harness::run_convergence(&cfg, case.parse::<Case>()?)?, common, format)
        }
    }
}

fn fail(kind: &str, message: &str) -> ExitCode {
    let line = serde_json::json!({ "error": kind, "message": message });
    eprintln!("{line}");
    ExitCode::FAILURE
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => return fail("usage", e.to_string().trim()),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e.kind(), &e.to_string()),
    }
}
