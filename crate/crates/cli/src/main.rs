use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod manifest;

use manifest::{CliError, Output};

#[derive(Parser)]
#[command(name = "ihara", version, about = "Ihara zeta functions of graphs, bundles and covering towers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report here and print a summary; without it the report goes to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact reciprocal zeta, closed geodesic counts and an optional cycle census.
    Zeta(ZetaArgs),
    /// Build a voltage bundle, check its decomposition, or recover a bundle from a regular cover.
    Bundle(BundleArgs),
    /// Dihedral factorization of the zeta function of a bundle with a circulant fiber.
    Dihedral(DihedralArgs),
    /// Normalized log-zeta of a covering tower, with certified convergence radii.
    Tower(TowerArgs),
}

#[derive(Args)]
pub struct ZetaArgs {
    /// Graph JSON file.
    pub graph: PathBuf,
    /// Number of closed geodesic counts N_1..N_R to report.
    #[arg(long, default_value_t = 12)]
    pub series_order: usize,
    /// Enumerate primitive cycles up to this length and compare with the counts.
    #[arg(long)]
    pub oracle_max_len: Option<usize>,
    /// Evaluate the reciprocal zeta at z = RE + IM i.
    #[arg(long, num_args = 2, value_names = ["RE", "IM"], allow_negative_numbers = true)]
    pub eval: Option<Vec<f64>>,
    /// Search-node budget of the cycle census.
    #[arg(long, default_value_t = ihara_core::zeta::DEFAULT_NODE_BUDGET)]
    pub node_budget: u64,
}

#[derive(Args)]
pub struct BundleArgs {
    /// Voltage assignment JSON file.
    pub voltage: Option<PathBuf>,
    /// Emit the total graph of the bundle (the default action).
    #[arg(long)]
    pub build: bool,
    /// Compare the decomposed adjacency with the adjacency of the built bundle.
    #[arg(long)]
    pub decompose_check: bool,
    /// Covering JSON file with deck generators; reconstructs the cover as a bundle.
    #[arg(long, value_name = "COVER")]
    pub cover_to_bundle: Option<PathBuf>,
}

#[derive(Args)]
pub struct DihedralArgs {
    /// Base graph JSON file.
    #[arg(long)]
    pub base: PathBuf,
    /// Circulant fiber: vertex count followed by the connection set.
    #[arg(long, num_args = 2.., value_names = ["N", "S"], required = true)]
    pub fiber_circulant: Vec<usize>,
    /// JSON map from dart index to permutation images; other darts get the identity.
    #[arg(long)]
    pub voltages: Option<PathBuf>,
    /// Seed for random dihedral voltages (when no map is given) and for sample points.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    /// Largest accepted |assembled - exact|.
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Grigorchuk,
    Cycles,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Convention {
    /// Fixed points of a generator are half-loops; 4-regular.
    HalfLoops,
    /// Each generator adds a dart at every vertex; 8-regular.
    Doubled,
}

#[derive(Args)]
pub struct TowerArgs {
    #[arg(long, value_enum)]
    pub preset: Preset,
    #[arg(long, default_value_t = 10)]
    pub depth: usize,
    #[arg(long, default_value_t = 30)]
    pub series_order: usize,
    /// Sample points, e.g. 0.05 or 0.05+0.01i.
    #[arg(long, value_delimiter = ',', num_args = 1.., default_values_t = vec!["0.05".to_string()], allow_negative_numbers = true)]
    pub z: Vec<String>,
    #[arg(long, value_enum, default_value_t = Emit::Csv)]
    pub emit: Emit,
    /// Schreier graph convention for the Grigorchuk preset.
    #[arg(long, value_enum, default_value_t = Convention::Doubled)]
    pub convention: Convention,
    /// Also compare against the closed form read without the logarithm.
    #[arg(long)]
    pub integrand_raw: bool,
    /// First cycle length of the cycles preset.
    #[arg(long, default_value_t = 3)]
    pub cycle_base: usize,
    /// Largest series tail bound accepted.
    #[arg(long, default_value_t = 1e-8)]
    pub tolerance: f64,
    /// Largest radius tried when certifying levels against the limit.
    #[arg(long, default_value_t = 64)]
    pub max_radius: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = match &cli.command {
        Command::Zeta(a) => commands::zeta(a),
        Command::Bundle(a) => commands::bundle(a),
        Command::Dihedral(a) => commands::dihedral(a),
        Command::Tower(a) => commands::tower(a),
    };
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    if let Err(e) = emit(&report, cli.out.as_deref()) {
        eprintln!("error: {e}");
        return ExitCode::from(e.exit_code());
    }
    if cli.out.is_some() {
        println!("{}", report.summary);
        println!("wall time: {:.3} s", start.elapsed().as_secs_f64());
    }
    match &report.failure {
        Some(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
        None => ExitCode::SUCCESS,
    }
}

fn emit(report: &Output, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, &report.body).map_err(|e| CliError::Io(path.display().to_string(), e)),
        None => {
            print!("{}", report.body);
            Ok(())
        }
    }
}
