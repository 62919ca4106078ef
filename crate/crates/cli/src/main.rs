//! `pacflab`: PACF of stationary processes from the command line.

mod commands;
mod model;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use pacflab_core::{ErrorCategory, OuterSummation, TruncationPolicy};

use model::{Factorization, ModelArgs};
use output::Format;

/// A bad flag, file or environment value; exits with status 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Parser)]
#[command(
    name = "pacflab",
    version,
    about = "Partial autocorrelation of stationary processes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct Common {
    /// Model: inline FARIMA JSON, `builtin:<farima|power_law|white_noise>`,
    /// a `.json` FARIMA file, or a CSV with a `gamma` or `c` column.
    #[arg(long, global = true)]
    model: Option<String>,
    /// Memory parameter for builtin models.
    #[arg(long, global = true, allow_negative_numbers = true)]
    d: Option<f64>,
    /// AR polynomial coefficients `1, -φ_1, …`.
    #[arg(
        long,
        global = true,
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    phi: Option<Vec<f64>>,
    /// MA polynomial coefficients `1, θ_1, …`.
    #[arg(
        long,
        global = true,
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    theta: Option<Vec<f64>>,
    /// Largest lag.
    #[arg(long, global = true, default_value_t = 50)]
    n_max: usize,
    #[arg(long, global = true)]
    abs_tol: Option<f64>,
    /// Terms summed for each β entry.
    #[arg(long, global = true)]
    inner_len: Option<usize>,
    /// Cap on discrete quadrature nodes per lag.
    #[arg(long, global = true)]
    mid_len: Option<usize>,
    /// Iteration cap for the outer sum.
    #[arg(long, global = true)]
    outer_depth: Option<usize>,
    /// Sum the outer series term by term instead of by the resolvent.
    #[arg(long, global = true)]
    series: bool,
    /// Spectral grid size for models without a closed form.
    #[arg(long, global = true, default_value_t = 1 << 20)]
    grid_size: usize,
    /// MA/AR coefficients kept from a factorization.
    #[arg(long, global = true, default_value_t = 8192)]
    coeff_len: usize,
    /// Output directory; results go to stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// MA, AR and autocovariance coefficients.
    Coeffs,
    /// The β kernel with per-entry truncation bounds.
    Beta,
    /// PACF by the representation, Durbin–Levinson, or both.
    Pacf {
        #[arg(long, value_enum, default_value_t = commands::Method::Repr)]
        method: commands::Method,
    },
    /// Per-lag comparison of both methods with verdicts.
    Compare {
        /// Tolerance floor; a lag passes within max(tol, trunc_err).
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Run named verification scenarios and emit a JSON report.
    Verify {
        #[arg(value_enum, required = true)]
        scenarios: Vec<verify::Scenario>,
    },
    /// Cepstral factorization of the model's spectral density.
    Factorize,
}

impl Common {
    fn policy(&self) -> Result<TruncationPolicy> {
        let base = TruncationPolicy::default();
        let policy = TruncationPolicy {
            inner_len: self.inner_len.unwrap_or(base.inner_len),
            mid_len: self.mid_len.unwrap_or(base.mid_len),
            outer_depth: self.outer_depth.unwrap_or(base.outer_depth),
            abs_tol: self.abs_tol.unwrap_or(base.abs_tol),
            outer: if self.series {
                OuterSummation::Series
            } else {
                OuterSummation::Resolvent
            },
        };
        policy.validate().map_err(|e| ConfigError(e.to_string()))?;
        Ok(policy)
    }

    fn model_args(&self) -> ModelArgs {
        ModelArgs {
            model: self.model.clone(),
            d: self.d,
            phi: self.phi.clone(),
            theta: self.theta.clone(),
        }
    }

    fn factorization(&self) -> Result<Factorization> {
        if !self.grid_size.is_power_of_two() || self.grid_size < 16 {
            return Err(ConfigError(format!(
                "--grid-size must be a power of two >= 16, got {}",
                self.grid_size
            ))
            .into());
        }
        Ok(Factorization {
            grid_size: self.grid_size,
            coeff_len: self.coeff_len,
        })
    }
}

fn configure_threads() -> Result<usize> {
    let threads = match std::env::var("PACFLAB_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| {
                ConfigError(format!(
                    "PACFLAB_THREADS must be a positive integer, got `{v}`"
                ))
            })?,
        Err(_) => return Ok(rayon::current_num_threads()),
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| ConfigError(format!("cannot size the thread pool: {e}")))?;
    Ok(threads)
}

fn run(cli: Cli) -> Result<()> {
    let threads = configure_threads()?;
    let ctx = commands::Context {
        policy: cli.common.policy()?,
        fact: cli.common.factorization()?,
        n_max: cli.common.n_max,
        format: cli.common.format,
        model_args: cli.common.model_args(),
        out: cli.common.out.clone(),
        threads,
    };
    if ctx.n_max == 0 {
        return Err(ConfigError("--n-max must be at least 1".into()).into());
    }
    match cli.command {
        Command::Coeffs => commands::coeffs(&ctx),
        Command::Beta => commands::beta(&ctx),
        Command::Pacf { method } => commands::pacf(&ctx, method),
        Command::Compare { tol } => commands::compare(&ctx, tol),
        Command::Verify { scenarios } => verify::run(&ctx, &scenarios),
        Command::Factorize => commands::factorize(&ctx),
    }
}

/// Exit status and category name for an error chain.
fn classify(err: &anyhow::Error) -> (u8, &'static str) {
    for cause in err.chain() {
        if cause.is::<ConfigError>() {
            return (2, "config");
        }
        if let Some(e) = cause.downcast_ref::<pacflab_core::Error>() {
            return match e.category() {
                ErrorCategory::Model => (3, "model"),
                ErrorCategory::Numerical => (4, "numerical"),
            };
        }
        if cause.is::<verify::NotPassed>() {
            return (1, "verification");
        }
    }
    (1, "io")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let (code, category) = classify(&err);
            eprintln!(
                "{}",
                json!({ "error": { "category": category, "message": format!("{err:#}") } })
            );
            ExitCode::from(code)
        }
    }
}
