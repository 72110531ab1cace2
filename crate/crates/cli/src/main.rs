//! Command-line runner for petri-deform problem files.

mod commands;
mod report;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;
use thiserror::Error;

use commands::Options;
use petri_deform::ring::RingKind;
use petri_deform::wire::ProblemFile;

const THREADS_VAR: &str = "PETRI_DEFORM_THREADS";

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] petri_deform::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(petri_deform::Error::BoundExceeded(_)) => 3,
            CliError::Io(_) => 1,
            CliError::Usage(_) | CliError::Domain(_) => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Chain {
    /// k[t]/(t^n)
    TruncatedSeries,
    /// Z/p^n
    Integers,
}

#[derive(Debug, Parser)]
#[command(name = "petri-deform", version, about = "Equivariant deformations of canonical curves by exact linear algebra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Problem file (JSON); "-" reads standard input.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Largest group order to close (defaults: 2000, or 200 for degree 2).
    #[arg(long, global = true)]
    bound_group: Option<usize>,
    /// Lifts kept per step of the lift search.
    #[arg(long, global = true, default_value_t = 64)]
    bound_branches: usize,
    /// Deepest truncation k[t]/(t^depth) or Z/p^depth.
    #[arg(long, global = true, default_value_t = 4)]
    depth: u32,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rank test for every group element on the ideal or its first-order lift.
    Invariance,
    /// H^1 or H^2 of the group with coefficients in the problem's module.
    Cohomology {
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        degree: u8,
    },
    /// Obstructions, bounded lift search and deformation compatibility.
    Lift {
        #[arg(long, value_enum, default_value_t = Chain::TruncatedSeries)]
        chain: Chain,
    },
    /// psi-map, normal space, tangent space and equivariant cocycles.
    Tangent,
    /// Emit the Hermitian fixture as a problem file.
    Hermitian {
        #[arg(long, default_value_t = 5)]
        p: u64,
        /// 0 for the special fibre, 1 for the first-order family.
        #[arg(long, default_value_t = 1)]
        order: u32,
    },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_VAR) else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_VAR} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn read_input(path: &Option<PathBuf>) -> Result<Vec<u8>, CliError> {
    let path = path.as_ref().ok_or_else(|| CliError::Usage("--input is required for this command".into()))?;
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf).map_err(|e| CliError::Io(e.to_string()))?;
        return Ok(buf);
    }
    fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_output(path: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    if let Command::Hermitian { p, order } = cli.command {
        let pf = commands::hermitian(p, order)?;
        return write_output(&cli.output, &(pf.to_json() + "\n"));
    }
    let input = read_input(&cli.input)?;
    let text = std::str::from_utf8(&input).map_err(|e| CliError::Usage(format!("input is not UTF-8: {e}")))?;
    let pf = ProblemFile::parse(text)?;
    let chain = match &cli.command {
        Command::Lift { chain: Chain::Integers } => RingKind::IntegersModPn,
        _ => RingKind::TruncatedSeries,
    };
    let opts = Options { bound_group: cli.bound_group, bound_branches: cli.bound_branches, depth: cli.depth, chain };
    let (name, result): (&str, Value) = match cli.command {
        Command::Invariance => ("invariance", commands::invariance(&pf, &opts)?),
        Command::Cohomology { degree } => ("cohomology", commands::cohomology(&pf, degree, &opts)?),
        Command::Lift { .. } => ("lift", commands::lift(&pf, &opts)?),
        Command::Tangent => ("tangent", commands::tangent(&pf, &opts)?),
        Command::Hermitian { .. } => unreachable!("handled above"),
    };
    let report = report::envelope(name, &input, opts.to_json(), result);
    let body = match cli.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("reports serialize") + "\n",
        Format::Text => report::render_text(&report),
    };
    write_output(&cli.output, &body)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
