//! `edgelap`: spectra, eigenfunctions, verification reports, zeta
//! evaluations, and field simulations on metric graphs with unit edges.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error.

mod commands;
mod dto;
mod verify;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use edgelap::Graph;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Verification(String),
}

impl From<edgelap::Error> for CliError {
    fn from(e: edgelap::Error) -> Self {
        use edgelap::Error::*;
        match e {
            Graph(_) | CutoffNotPositive { .. } | SegmentsTooFew { .. } | NegativeTime { .. }
            | DisconnectedPoints => CliError::Input(e.to_string()),
            _ => CliError::Verification(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Graph file: lines `e <u> <v>` (edge oriented u->v), `b <v>` (boundary
    /// vertex), `#` comments.
    #[arg(long)]
    input: PathBuf,
    /// Write output here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Upper frequency limit of the assembled spectrum.
    #[arg(long, default_value_t = std::f64::consts::TAU)]
    cutoff: f64,
    /// Numerical tolerance for eigensolves and rank thresholds.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Output encoding.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Parser, Debug)]
#[command(
    name = "edgelap",
    about = "Eigenfunctions of the edge-based Laplacian on metric graphs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Frequency table: omega, omega^2, multiplicity, provenance.
    Spectrum {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run every verification suite; exit 1 if any fails. Accepts a graph
    /// file or an eigensystem JSON written by `eigfun`.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Full eigensystem with per-edge amplitude and phase coefficients.
    Eigfun {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Reciprocal zeta value det(I - uT) at a real argument.
    Zeta {
        #[command(flatten)]
        common: CommonArgs,
        /// Evaluation point.
        #[arg(long, default_value_t = 0.5)]
        u: f64,
    },
    /// Diffuse a raised-cosine bump (edge 0, center 0.5, radius 0.25) to
    /// time t and sample the field.
    Heat {
        #[command(flatten)]
        common: CommonArgs,
        /// Evolution time.
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Sample points per edge (intervals).
        #[arg(long, default_value_t = 32)]
        resolution: usize,
    },
    /// Evolve the bump under the wave equation to time t; report energy and
    /// the field magnitude that leaked past the light cone.
    Wave {
        #[command(flatten)]
        common: CommonArgs,
        /// Evolution time.
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Sample points per edge (intervals).
        #[arg(long, default_value_t = 32)]
        resolution: usize,
    },
    /// Independent finite-difference frequencies next to the assembled ones.
    Oracle {
        #[command(flatten)]
        common: CommonArgs,
        /// Segments per edge in the discretization.
        #[arg(long, default_value_t = 128)]
        m: usize,
        /// How many frequencies to report.
        #[arg(long, default_value_t = 8)]
        k: usize,
    },
}

fn read_input(common: &CommonArgs) -> Result<String, CliError> {
    fs::read_to_string(&common.input)
        .map_err(|e| CliError::Input(format!("{}: {e}", common.input.display())))
}

fn load_graph(common: &CommonArgs) -> Result<Graph, CliError> {
    let text = read_input(common)?;
    Graph::parse(&text).map_err(|e| CliError::Input(format!("{}: {e}", common.input.display())))
}

fn check_common(common: &CommonArgs) -> Result<(), CliError> {
    if !(common.cutoff > 0.0) {
        return Err(CliError::Input(format!(
            "cutoff must be positive, got {}",
            common.cutoff
        )));
    }
    if !(common.tol > 0.0) {
        return Err(CliError::Input(format!(
            "tol must be positive, got {}",
            common.tol
        )));
    }
    Ok(())
}

fn check_resolution(resolution: usize) -> Result<(), CliError> {
    if resolution < 2 {
        return Err(CliError::Input(format!(
            "resolution must be at least 2, got {resolution}"
        )));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<commands::Outcome, CliError> {
    let (outcome, out_path) = match &cli.command {
        Command::Spectrum { common } => {
            check_common(common)?;
            let graph = load_graph(common)?;
            (
                commands::spectrum(&graph, common.cutoff, common.tol, common.format)?,
                common.out.clone(),
            )
        }
        Command::Verify { common } => {
            check_common(common)?;
            let text = read_input(common)?;
            (
                commands::verify(&text, common.cutoff, common.tol, common.format)?,
                common.out.clone(),
            )
        }
        Command::Eigfun { common } => {
            check_common(common)?;
            let graph = load_graph(common)?;
            (
                commands::eigfun(&graph, common.cutoff, common.tol, common.format)?,
                common.out.clone(),
            )
        }
        Command::Zeta { common, u } => {
            check_common(common)?;
            let graph = load_graph(common)?;
            (
                commands::zeta(&graph, *u, common.format)?,
                common.out.clone(),
            )
        }
        Command::Heat {
            common,
            t,
            resolution,
        } => {
            check_common(common)?;
            check_resolution(*resolution)?;
            let graph = load_graph(common)?;
            (
                commands::heat(&graph, common.cutoff, common.tol, *t, *resolution, common.format)?,
                common.out.clone(),
            )
        }
        Command::Wave {
            common,
            t,
            resolution,
        } => {
            check_common(common)?;
            check_resolution(*resolution)?;
            let graph = load_graph(common)?;
            (
                commands::wave(&graph, common.cutoff, common.tol, *t, *resolution, common.format)?,
                common.out.clone(),
            )
        }
        Command::Oracle { common, m, k } => {
            check_common(common)?;
            if *m < 8 {
                return Err(CliError::Input(format!(
                    "m must be at least 8 segments, got {m}"
                )));
            }
            if *k == 0 {
                return Err(CliError::Input("k must be at least 1".to_string()));
            }
            let graph = load_graph(common)?;
            (
                commands::oracle(&graph, common.cutoff, common.tol, *m, *k, common.format)?,
                common.out.clone(),
            )
        }
    };

    if let Some(path) = out_path {
        fs::write(&path, &outcome.output)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    } else {
        print!("{}", outcome.output);
    }
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) if outcome.verified => ExitCode::SUCCESS,
        Ok(_) => {
            eprintln!("verification failed; see report");
            ExitCode::from(1)
        }
        Err(CliError::Verification(message)) => {
            eprintln!("verification failure: {message}");
            ExitCode::from(1)
        }
        Err(CliError::Input(message)) => {
            eprintln!("input error: {message}");
            ExitCode::from(2)
        }
    }
}
