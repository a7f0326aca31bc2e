//! Command-line front end for `koszul-core`.
//!
//! Exit codes: 0 pass, 1 property violation, 2 input error, 3 inconclusive
//! at the degree bound.

pub mod commands;
pub mod format;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use koszul_core::lab::Shape;

use crate::commands::{Failure, GeneratorFlags};
use crate::format::InputError;

#[derive(Debug, Parser)]
#[command(
    name = "koszul",
    version,
    about = "Koszul homology and partial Euler characteristics over Z/p^k"
)]
pub struct Cli {
    /// Machine-readable JSON instead of tables.
    #[arg(long, global = true)]
    pub json: bool,
    /// Include wall-clock time in the report (makes output nondeterministic).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Profile and verdicts for one instance file.
    Compute {
        instance: PathBuf,
        #[arg(long)]
        degree_bound: Option<i32>,
    },
    /// Run generated instances through every check.
    VerifySerre(GeneratorArgs),
    /// λ(M / y^t M) for t = 1..t-max.
    Multiplicity {
        instance: PathBuf,
        #[arg(long, default_value_t = 3)]
        t_max: u32,
        #[arg(long)]
        degree_bound: Option<i32>,
    },
    /// Compare H_i(y, B/J) with H_(i-1)(y, J) strand by strand.
    ShiftCheck {
        instance: PathBuf,
        #[arg(long)]
        degree_bound: Option<i32>,
    },
    /// Lift a finite-length instance to Z/p^k[X] and compare both Koszul complexes.
    Lift { instance: PathBuf },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ShapeArg {
    Nilpotent,
    PMonomial,
    Mixed,
}

#[derive(Debug, Args)]
pub struct GeneratorArgs {
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Primes to draw from, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [2, 3, 5])]
    pub p: Vec<u64>,
    #[arg(long, value_delimiter = ',', default_values_t = [1, 2, 3])]
    pub k: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_values_t = [1, 2, 3])]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 64)]
    pub max_length: usize,
    #[arg(long, value_enum, default_value_t = ShapeArg::Mixed)]
    pub shape: ShapeArg,
}

fn read_instance(path: &PathBuf) -> Result<format::InstanceFile, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError {
        field: path.display().to_string(),
        message: e.to_string(),
    })?;
    format::parse(&text).map_err(|e| InputError {
        field: format!("{}: {}", path.display(), e.field),
        message: e.message,
    })
}

/// Runs a parsed command line, printing the report; returns the exit code.
pub fn run(cli: Cli) -> u8 {
    let outcome = match cli.command {
        Command::Compute {
            instance,
            degree_bound,
        } => read_instance(&instance)
            .map_err(Failure::from)
            .and_then(|f| commands::compute(f, degree_bound, cli.timing)),
        Command::VerifySerre(g) => {
            let flags = GeneratorFlags {
                samples: g.samples,
                seed: g.seed,
                primes: g.p,
                ks: g.k,
                ns: g.n,
                max_length: g.max_length,
                shape: match g.shape {
                    ShapeArg::Nilpotent => Shape::Nilpotent,
                    ShapeArg::PMonomial => Shape::PMonomial,
                    ShapeArg::Mixed => Shape::Mixed,
                },
            };
            commands::verify_serre_batch(flags, cli.timing)
        }
        Command::Multiplicity {
            instance,
            t_max,
            degree_bound,
        } => read_instance(&instance)
            .map_err(Failure::from)
            .and_then(|f| commands::multiplicity(f, t_max, degree_bound, cli.timing)),
        Command::ShiftCheck {
            instance,
            degree_bound,
        } => read_instance(&instance)
            .map_err(Failure::from)
            .and_then(|f| commands::shift(f, degree_bound, cli.timing)),
        Command::Lift { instance } => read_instance(&instance)
            .map_err(Failure::from)
            .and_then(|f| commands::lift(f, cli.timing)),
    };
    match outcome {
        Ok(report) => {
            print!("{}", report.render(cli.json));
            report.exit_code()
        }
        Err(Failure::Input(e)) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({ "error": "input", "field": e.field, "message": e.message })
                );
            }
            eprintln!("error: {e}");
            2
        }
        Err(Failure::Internal(e)) => {
            // Validated input that the core still rejects is treated as bad input.
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({ "error": "input", "message": e.to_string() })
                );
            }
            eprintln!("error: {e}");
            2
        }
    }
}
