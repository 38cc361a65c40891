//! `pflab`: run the verification pipelines from a JSON configuration.

mod commands;
mod config;
mod exit;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Overrides, RunConfig};
use exit::Failure;

#[derive(Parser, Debug)]
#[command(name = "pflab", version, about = "Jordan-Pochhammer operators, periods and regulator integrals")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON run configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write the JSON result here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Seed for sampled parameter points
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Quadrature refinement level
    #[arg(long, global = true)]
    quad_level: Option<u32>,

    /// Quadrature target tolerance
    #[arg(long, global = true)]
    tolerance: Option<f64>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Check the potential identity exactly over a grid of (c, r)
    VerifyLemma,
    /// Print the operator coefficients
    Operator,
    /// Periods, annihilation residuals and Lauricella cross-checks
    Periods,
    /// The four-way equality chain for the regulator integrals
    Chain,
    /// Numerical rank of the closed forms and the resulting lower bound
    Rank,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::VerifyLemma => "verify-lemma",
            Command::Operator => "operator",
            Command::Periods => "periods",
            Command::Chain => "chain",
            Command::Rank => "rank",
        }
    }
}

#[derive(serde::Serialize)]
struct Envelope<'a> {
    command: &'a str,
    passed: bool,
    result: serde_json::Value,
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    let overrides = Overrides {
        seed: cli.seed,
        quad_level: cli.quad_level,
        tolerance: cli.tolerance,
        output: cli.output.clone(),
    };
    let cfg = RunConfig::load(cli.config.as_deref(), &overrides)?;
    let outcome = match cli.command {
        Command::VerifyLemma => commands::verify_lemma(&cfg),
        Command::Operator => commands::operator(&cfg),
        Command::Periods => commands::periods(&cfg),
        Command::Chain => commands::chain(&cfg),
        Command::Rank => commands::rank(&cfg),
    }?;
    let envelope = Envelope {
        command: cli.command.name(),
        passed: outcome.passed,
        result: outcome.result,
    };
    let mut text = serde_json::to_string_pretty(&envelope)
        .map_err(|e| Failure::validation(format!("cannot serialize result: {e}")))?;
    text.push('\n');
    let written = match &cfg.output {
        Some(path) => std::fs::write(path, &text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    written.map_err(|e| Failure {
        code: 1,
        message: format!("cannot write output: {e}"),
    })?;
    if let Some(summary) = outcome.summary {
        eprint!("{summary}");
    }
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::from(exit::SUCCESS),
        Ok(false) => {
            eprintln!("{}: checks did not pass", cli.command.name());
            ExitCode::from(exit::TOLERANCE)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
