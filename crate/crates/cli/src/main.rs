//! `dvrgeom`: smoothness, ordinary quadratic points, blow-ups, good hyperplanes and
//! Lefschetz pencils for explicit models over finite fields and truncated DVRs.
//!
//! Exit codes: 0 positive verdict, 1 negative, 2 undecidable or over budget, 3 input error.

mod commands;
mod error;
mod report;
mod scheme_file;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::CliError;
use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "dvrgeom", version, about = "Exact checks for models over finite fields and truncated DVRs")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Smoothness of the scheme (both fibres over a DVR), Gröbner and enumeration.
    CheckSmooth { file: PathBuf },
    /// Type of the singularity at a residue-field point, e.g. `(0:0:1)`.
    Classify {
        file: PathBuf,
        #[arg(long)]
        point: String,
    },
    /// Good hyperplane for the declared components, over extensions of degree ell^j.
    FindHyperplane {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        ell: u32,
        #[arg(long, default_value_t = 2)]
        max_ext: u32,
    },
    /// Blow up a local model literal such as `oq(case=i,n=1,Q=xy,c=pi^2)` until semi-stable.
    Resolve {
        literal: String,
        #[arg(long)]
        ring: String,
        /// Print the chart-by-chart certificates.
        #[arg(long)]
        trace: bool,
    },
    /// Lefschetz pencil of degree-d forms, over extensions of degree ell^j <= max-ext.
    FindPencil {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        d: u32,
        #[arg(long, default_value_t = 2)]
        ell: u32,
        #[arg(long, default_value_t = 2)]
        max_ext: u32,
        /// Members and singular points are scanned over extensions up to this degree.
        #[arg(long)]
        ext_bound: Option<u32>,
    },
    /// Check a pencil `<f0, finf>` against the Lefschetz conditions.
    VerifyPencil {
        file: PathBuf,
        #[arg(long)]
        pencil: String,
        #[arg(long)]
        ext_bound: Option<u32>,
    },
    /// Tangency of the scheme against every degree-d form.
    Table {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        d: u32,
        #[arg(long)]
        ext_bound: Option<u32>,
    },
    /// Degree-d hypersurface transversal to all strata of the components.
    FindHypersurface {
        file: PathBuf,
        #[arg(long)]
        d: u32,
        /// Sample this many random forms instead of scanning exhaustively.
        #[arg(long, requires = "seed")]
        sample: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn run(command: Command) -> Result<Report, CliError> {
    use commands::*;
    match command {
        Command::CheckSmooth { file } => check_smooth(&load(&file)?),
        Command::Classify { file, point } => classify(&load(&file)?, &point),
        Command::FindHyperplane { file, ell, max_ext } => find_hyperplane(&load(&file)?, ell, max_ext),
        Command::Resolve { literal, ring, trace } => resolve_literal(&literal, &ring, trace),
        Command::FindPencil { file, d, ell, max_ext, ext_bound } => find_pencil_cmd(&load(&file)?, d, ell, max_ext, ext_bound),
        Command::VerifyPencil { file, pencil, ext_bound } => verify_pencil(&load(&file)?, &pencil, ext_bound),
        Command::Table { file, d, ext_bound } => table(&load(&file)?, d, ext_bound),
        Command::FindHypersurface { file, d, sample, seed } => find_hypersurface(&load(&file)?, d, sample, seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(report) => {
            let out = match cli.format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json(),
            };
            print!("{out}");
            ExitCode::from(report.status().exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
