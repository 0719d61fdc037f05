use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use htwist_cli::report::{DEFAULT_LEVEL, NUMERICS_SIZE_LIMIT};
use htwist_cli::{
    analyze_batch, classify4, commutant, compare, equiv, fourier, to_json, AnalysisSpec, CliError, Render, RunOptions,
};
use htwist_core::hadamard::DEFAULT_EQUIVALENCE_BOUND;
use serde::Serialize;

/// Subfactors of twisted tensor products of group Fourier matrices.
#[derive(Parser)]
#[command(name = "htwist", version)]
struct Cli {
    /// Print reports as JSON with sorted keys.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline for one or more specs (JSON files or preset names).
    Analyze {
        #[arg(long = "spec", required = true)]
        specs: Vec<String>,
        #[arg(long)]
        emit_dot: Option<PathBuf>,
        #[arg(long)]
        radius: Option<usize>,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=2))]
        level: Option<u8>,
        /// Skip the numerical relative commutant.
        #[arg(long)]
        no_numerics: bool,
    },
    /// Classification data for the 4x4 matrix with twist (1, 1, 1, δ).
    Classify4 {
        /// Phase literal for δ, e.g. "3/8" or "0 + 1/1*t1".
        #[arg(allow_hyphen_values = true)]
        delta: String,
        #[arg(long)]
        emit_dot: Option<PathBuf>,
        #[arg(long)]
        radius: Option<usize>,
    },
    /// Isomorphism verdict for two specs; pass --spec twice.
    Compare {
        #[arg(long = "spec", required = true)]
        specs: Vec<String>,
    },
    /// Relative commutant dimension from matrix files, spec files or presets.
    Commutant {
        #[arg(long = "spec", required = true)]
        sources: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_LEVEL as u8, value_parser = clap::value_parser!(u8).range(0..=2))]
        level: u8,
    },
    /// Fourier matrix of a finite abelian group.
    Fourier {
        group: String,
        /// Conjugate transpose instead.
        #[arg(long)]
        conjugate: bool,
    },
    /// Hadamard equivalence of two matrices.
    Equiv {
        a: String,
        b: String,
        #[arg(long, default_value_t = DEFAULT_EQUIVALENCE_BOUND)]
        bound: usize,
    },
}

fn emit<T: Serialize + Render>(json: bool, reports: &[T]) {
    if json {
        if let [one] = reports {
            print!("{}", to_json(one));
        } else {
            print!("{}", to_json(&reports));
        }
    } else {
        for r in reports {
            print!("{}", r.text());
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze {
            specs,
            emit_dot,
            radius,
            level,
            no_numerics,
        } => {
            let specs = specs.iter().map(|s| AnalysisSpec::load(s)).collect::<Result<Vec<_>, _>>()?;
            let opts = RunOptions {
                emit_dot,
                radius,
                level: level.map(usize::from),
                numerics: !no_numerics,
            };
            let reports = analyze_batch(&specs, &opts).into_iter().collect::<Result<Vec<_>, _>>()?;
            emit(cli.json, &reports);
        }
        Command::Classify4 {
            delta,
            emit_dot,
            radius,
        } => {
            let opts = RunOptions {
                emit_dot,
                radius,
                ..Default::default()
            };
            emit(cli.json, &[classify4(&delta, &opts)?]);
        }
        Command::Compare { specs } => {
            if specs.len() != 2 {
                return Err(CliError::Spec(format!("compare takes two specs, got {}", specs.len())));
            }
            let a = AnalysisSpec::load(&specs[0])?;
            let b = AnalysisSpec::load(&specs[1])?;
            emit(cli.json, &[compare(&a, &b)?]);
        }
        Command::Commutant { sources, level } => {
            let level = usize::from(level);
            debug_assert!(level < NUMERICS_SIZE_LIMIT.len());
            let reports = sources
                .iter()
                .map(|s| commutant(s, level))
                .collect::<Result<Vec<_>, _>>()?;
            emit(cli.json, &reports);
        }
        Command::Fourier { group, conjugate } => emit(cli.json, &[fourier(&group, conjugate)?]),
        Command::Equiv { a, b, bound } => emit(cli.json, &[equiv(&a, &b, bound)?]),
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
