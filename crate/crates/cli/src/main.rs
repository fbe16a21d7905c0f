//! `hypertri`: experiments on balanced geodesic triangulations of the
//! genus-2 surface.
//!
//! Exit codes: 0 success, 1 a diagnostic check failed, 2 a solver did not
//! converge, 3 invalid input.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "hypertri",
    version,
    about = "Balanced geodesic triangulations of a genus-2 hyperbolic surface"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed for every random choice; echoed into the outputs.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Residual tolerance for solvers and diagnostics.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Iteration cap for the balanced-map solver.
    #[arg(long, global = true, default_value_t = 200_000)]
    pub max_iters: usize,
    /// Directory receiving the output files.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, short, global = true)]
    pub verbose: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Octagon and group diagnostics.
    Surface,
    /// Write the base triangulation as mapping.json.
    Base,
    /// Solve for the balanced mapping of a weight vector.
    Balance(BalanceArgs),
    /// Distance between a mapping and the balanced mapping of its mean value weights.
    Roundtrip { mapping: PathBuf },
    /// Weight-space morph between two mappings.
    Morph {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 11)]
        samples: usize,
    },
    /// Move one vertex to the boundary of its kernel.
    Degenerate {
        mapping: PathBuf,
        #[arg(long)]
        vertex: usize,
        #[arg(long, default_value_t = 10)]
        steps: usize,
    },
    /// Minimum angle as the weight at one vertex concentrates on a face.
    Weightlimit {
        /// Face as `i,j,k`.
        #[arg(long, value_delimiter = ',', required = true)]
        face: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        levels: usize,
        /// Starting mapping; the base triangulation if omitted.
        #[arg(long)]
        init: Option<PathBuf>,
    },
    /// Draw a mapping in the Poincare disk.
    Render {
        mapping: PathBuf,
        /// SVG file name, relative to `--out` unless absolute.
        #[arg(default_value = "mapping.svg")]
        svg: PathBuf,
        /// Also draw the edge images under the generators.
        #[arg(long)]
        ghosts: bool,
        /// Mark a vertex and outline the kernel of its star.
        #[arg(long)]
        highlight: Option<usize>,
    },
}

#[derive(Args, Debug)]
pub struct BalanceArgs {
    /// Weights file (`{"i->j": w}`).
    #[arg(long, conflicts_with_all = ["uniform", "random"])]
    pub weights: Option<PathBuf>,
    /// All weights 1.
    #[arg(long)]
    pub uniform: bool,
    /// Seeded log-uniform weights in `[1/s, s]`.
    #[arg(long, value_name = "S")]
    pub random: Option<f64>,
    /// Initial mapping file.
    #[arg(long, conflicts_with = "base")]
    pub init: Option<PathBuf>,
    /// Start from the base triangulation (the default).
    #[arg(long)]
    pub base: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are bad input; help and version are not errors
            return if e.use_stderr() {
                ExitCode::from(commands::EXIT_BAD_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {:#}", e.error);
            ExitCode::from(e.code)
        }
    }
}
