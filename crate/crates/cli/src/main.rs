//! `risklens`: JSON in, JSON or CSV out, for every operation in
//! `risklens-core`.
//!
//! Exit codes: 0 ok, 1 property violated (a witness is emitted), 2 input
//! error, 3 domain or numerical failure.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "risklens",
    version,
    about = "Outside options and comparative risk aversion"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Input JSON file; `-` reads standard input.
    #[arg(long, global = true, default_value = "-")]
    input: PathBuf,

    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Tolerance for exact comparisons.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    /// Tolerance for sampled kernel checks.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol_numeric: f64,

    #[arg(long, global = true, env = "RISKLENS_SEED", default_value_t = 0)]
    seed: u64,

    /// Random lotteries for the oracle, or random `v` for kernel checks.
    #[arg(long, global = true, default_value_t = 500)]
    trials: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// `u = χ_F ∘ v` from `{"v", "F"}`, with the probability of keeping the
    /// inside option.
    Effective,
    /// Outside option rationalizing `{"u", "v"}`.
    Identify,
    /// Whether `u` is less risk-averse than `v`, from `{"u", "v"}`.
    Compare,
    /// Reverse hazard rate comparative statics, from `{"v", "F", "F_hat"}`.
    McsA,
    /// Comparative statics in `v` with a fixed physical outside option,
    /// from `{"v", "v_hat", "mu"}`.
    McsB,
    /// CARA example from `{"sigma", "lambda", "x0", "grid"?}`.
    Cara,
    /// Outside-option form of a lottery kernel.
    Decompose,
    /// Risk reduction check for a lottery kernel.
    CheckKernel,
}

/// Everything the commands need besides the input document.
#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    pub tol: f64,
    pub tol_numeric: f64,
    pub seed: u64,
    pub trials: usize,
    pub format: Format,
}

/// How a command ended; each maps to one exit code.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Numeric(String),
}

impl From<risklens_core::Error> for Failure {
    fn from(e: risklens_core::Error) -> Self {
        match e {
            risklens_core::Error::Invalid(_) => Failure::Input(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

/// Rendered output and whether the checked property held.
pub struct Outcome {
    pub body: String,
    pub holds: bool,
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    if !(cli.tol > 0.0 && cli.tol_numeric > 0.0) {
        return Err(Failure::Input("tolerances must be positive".into()));
    }
    let cfg = RunConfig {
        tol: cli.tol,
        tol_numeric: cli.tol_numeric,
        seed: cli.seed,
        trials: cli.trials,
        format: cli.format,
    };
    let text = if cli.input.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
            .map_err(|e| Failure::Input(format!("stdin: {e}")))?
    } else {
        std::fs::read_to_string(&cli.input)
            .map_err(|e| Failure::Input(format!("{}: {e}", cli.input.display())))?
    };
    match cli.command {
        Command::Effective => commands::effective(&text, &cfg),
        Command::Identify => commands::identify(&text, &cfg),
        Command::Compare => commands::compare(&text, &cfg),
        Command::McsA => commands::mcs_a(&text, &cfg),
        Command::McsB => commands::mcs_b(&text, &cfg),
        Command::Cara => commands::cara(&text, &cfg),
        Command::Decompose => commands::decompose(&text, &cfg),
        Command::CheckKernel => commands::check_kernel(&text, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(Failure::Input(msg)) => {
            eprintln!("risklens: input error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("risklens: {msg}");
            return ExitCode::from(3);
        }
    };
    let written = match &cli.output {
        Some(path) => {
            std::fs::write(path, &outcome.body).map_err(|e| format!("{}: {e}", path.display()))
        }
        None => {
            print!("{}", outcome.body);
            Ok(())
        }
    };
    if let Err(msg) = written {
        eprintln!("risklens: cannot write output: {msg}");
        return ExitCode::from(2);
    }
    if outcome.holds {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
