use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use tdem::cat::WignerMethod;
use tdem::cli::commands::{run_density, run_eigenstate, run_phases, run_uncertainty, run_wigner};
use tdem::cli::format::{print_json, write_json};
use tdem::cli::{run_verify, GridAxis, Mutation, OutputFormat, RunConfig, Sink, PAPER_TOY};
use tdem::error::Error;

#[derive(Parser)]
#[command(name = "tdem", version, about = "Free particle with time-dependent mass: invariant solution, phases, Wigner maps and numerical checks")]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true, value_name = "PATH", conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Built-in parameter set (default when no config is given).
    #[arg(long, global = true, value_name = "NAME")]
    preset: Option<String>,
    /// Output file (directory for `wigner`); stdout when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Closed,
    Numeric,
}

#[derive(Subcommand)]
enum Command {
    /// Probability density on a grid (two-packet state unless --single).
    Density {
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        #[arg(long)]
        x0: Option<f64>,
        /// Ground state only.
        #[arg(long)]
        single: bool,
        #[arg(long, default_value = "-12:12:481", value_name = "MIN:MAX:POINTS", allow_hyphen_values = true)]
        grid: String,
    },
    /// Position/momentum uncertainties of the ground state over time.
    Uncertainty {
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
        #[arg(long, default_value_t = 20.0)]
        t1: f64,
        /// Number of intervals; steps + 1 samples are written.
        #[arg(long, default_value_t = 400)]
        steps: usize,
    },
    /// Wigner function of the two-packet state, one table per time.
    Wigner {
        #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
        t: Vec<f64>,
        #[arg(long)]
        x0: Option<f64>,
        #[arg(long, default_value = "-8:8:161", value_name = "MIN:MAX:POINTS", allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value = "-4:4:161", value_name = "MIN:MAX:POINTS", allow_hyphen_values = true)]
        p: String,
        #[arg(long, value_enum, default_value = "closed")]
        method: Method,
    },
    /// Full solution ψ_n(x, t) on a grid.
    Eigenstate {
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        #[arg(long, default_value = "-12:12:481", value_name = "MIN:MAX:POINTS", allow_hyphen_values = true)]
        grid: String,
    },
    /// Dynamical, geometric and total phases over time.
    Phases {
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
        #[arg(long, default_value_t = 20.0)]
        t1: f64,
        #[arg(long, default_value_t = 400)]
        steps: usize,
    },
    /// Run the numerical oracle battery; exit status 1 if any check fails.
    Verify {
        #[arg(long, hide = true)]
        mutate: Option<String>,
    },
}

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn is_usage(e: &Error) -> bool {
    matches!(
        e,
        Error::Config(_)
            | Error::InvalidGrid(_)
            | Error::InvalidParameter(_)
            | Error::InvalidProfile(_)
            | Error::NonDiagonalizable(_)
            | Error::SingularCoefficient { .. }
            | Error::LevelTooHigh { .. }
    )
}

fn resolve_config(cli: &Cli) -> Result<RunConfig, Error> {
    let mut cfg = match (&cli.config, &cli.preset) {
        (Some(path), _) => RunConfig::load(path)?,
        (None, Some(name)) => RunConfig::preset(name)?,
        (None, None) => RunConfig::preset(PAPER_TOY)?,
    };
    if let Some(out) = &cli.out {
        cfg.output.path = Some(out.clone());
    }
    if let Some(f) = cli.format {
        cfg.output.format = match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        };
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    let cfg = resolve_config(cli)?;
    let sink = Sink { path: cfg.output.path.clone(), format: cfg.output.format };
    match &cli.command {
        Command::Density { t, x0, single, grid } => {
            run_density(&cfg, *t, &GridAxis::parse(grid)?, *x0, *single, &sink)?;
        }
        Command::Uncertainty { t0, t1, steps } => run_uncertainty(&cfg, *t0, *t1, *steps, &sink)?,
        Command::Wigner { t, x0, x, p, method } => {
            let method = match method {
                Method::Closed => WignerMethod::Closed,
                Method::Numeric => WignerMethod::Numeric,
            };
            let (x, p) = (GridAxis::parse(x)?, GridAxis::parse(p)?);
            let out = cfg.output.path.as_deref();
            run_wigner(&cfg, t, &x, &p, method, *x0, out, cfg.output.format)?;
        }
        Command::Eigenstate { n, t, grid } => run_eigenstate(&cfg, *n, *t, &GridAxis::parse(grid)?, &sink)?,
        Command::Phases { n, t0, t1, steps } => run_phases(&cfg, *n, *t0, *t1, *steps, &sink)?,
        Command::Verify { mutate } => {
            let mutation = match mutate.as_deref() {
                None => None,
                Some(name) => Some(
                    Mutation::parse(name).ok_or_else(|| Error::Config(format!("unknown mutation '{name}'")))?,
                ),
            };
            let report = run_verify(&cfg, mutation)?;
            let doc = report.to_json();
            match &cfg.output.path {
                Some(p) => write_json(p, &doc)?,
                None => print_json(&doc)?,
            }
            if !report.all_pass() {
                eprintln!("verify: failing checks: {}", report.failing().join(", "));
                return Ok(ExitCode::from(EXIT_CHECK_FAILED));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("tdem: {e}");
            ExitCode::from(if is_usage(&e) { EXIT_USAGE } else { EXIT_CHECK_FAILED })
        }
    }
}
