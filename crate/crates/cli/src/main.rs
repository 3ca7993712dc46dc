mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use saucd::LaplacianKind;

#[derive(Parser)]
#[command(name = "saucd", version, about = "Spectral shape distance for triangle meshes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Clone)]
struct LaplacianArg {
    /// Discrete Laplace-Beltrami operator.
    #[arg(long, default_value = "revised", value_parser = parse_laplacian)]
    laplacian: LaplacianKind,
}

#[derive(Args, Clone)]
struct MetricArgs {
    #[command(flatten)]
    laplacian: LaplacianArg,
    /// Portion of the highest-frequency spectrum entries dropped.
    #[arg(long, default_value_t = 0.001)]
    prune: f64,
    /// Compare raw spectra instead of AUC-normalized ones.
    #[arg(long)]
    no_normalize: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Mesh spectrum as `lambda,amplitude` rows, raw unless asked otherwise.
    Spectrum {
        mesh: PathBuf,
        #[command(flatten)]
        laplacian: LaplacianArg,
        #[arg(long, default_value_t = 0.0)]
        prune: f64,
        /// Normalize the area under the spectrum to 1.
        #[arg(long)]
        normalize: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// SAUCD between a test mesh and a ground-truth mesh, plus optional
    /// weighted SAUCD and baselines.
    Compare {
        test: PathBuf,
        gt: PathBuf,
        #[command(flatten)]
        metric: MetricArgs,
        /// Knot weights as a JSON array of 20 numbers.
        #[arg(long)]
        weights: Option<PathBuf>,
        /// Comma-separated baseline metrics.
        #[arg(long, value_delimiter = ',')]
        baselines: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Keeps only the Fourier components with `lo <= lambda <= hi`.
    Filter {
        mesh: PathBuf,
        #[arg(long)]
        lo: f64,
        #[arg(long)]
        hi: f64,
        #[command(flatten)]
        laplacian: LaplacianArg,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Writes the standard distortion suite and a manifest.
    Distort {
        mesh: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated subset of distortion types.
        #[arg(long, value_delimiter = ',')]
        types: Vec<String>,
        /// Output mesh format: obj or ply.
        #[arg(long, default_value = "obj")]
        mesh_format: String,
    },
    /// Learns knot weights with leave-one-object-out evaluation.
    Train {
        annotations: PathBuf,
        mesh_dir: PathBuf,
        #[command(flatten)]
        metric: MetricArgs,
        #[arg(long, default_value_t = 0.1)]
        lambda_plcc: f64,
        #[arg(long, default_value_t = 10.0)]
        lambda_srocc: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda_regu: f64,
        #[arg(long, default_value_t = 1.0)]
        learning_rate: f64,
        #[arg(long, default_value_t = 200)]
        iterations: usize,
        #[arg(long, default_value_t = 0.1)]
        temperature: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Trained weights (JSON).
        #[arg(short, long)]
        output: PathBuf,
        /// Per-fold correlations (CSV); folds are skipped when absent.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Correlations of SAUCD and baselines with mean opinion scores.
    Evaluate {
        annotations: PathBuf,
        mesh_dir: PathBuf,
        #[command(flatten)]
        metric: MetricArgs,
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        baselines: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Smallest Laplacian eigenvalue against the Gershgorin bound.
    CheckPsd {
        mesh: PathBuf,
        #[command(flatten)]
        laplacian: LaplacianArg,
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Synthetic Swiss-tournament annotations with latent quality
    /// `-SAUCD` (or `-weighted SAUCD` under --weights).
    SimulateStudy {
        mesh_dir: PathBuf,
        #[command(flatten)]
        metric: MetricArgs,
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        subjects: usize,
        #[arg(long, default_value_t = 6)]
        rounds: usize,
        #[arg(long, value_delimiter = ',', default_value = "clay")]
        materials: Vec<String>,
        /// Std of the judge's perception noise, in units of SAUCD.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn parse_laplacian(s: &str) -> Result<LaplacianKind, String> {
    s.parse().map_err(|e: saucd::Error| e.to_string())
}

fn init_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("SAUCD_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| anyhow::anyhow!("SAUCD_THREADS must be a positive integer, got {v:?}"))?;
        if n == 0 {
            anyhow::bail!("SAUCD_THREADS must be a positive integer, got 0");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_threads().and_then(|()| commands::run(cli.command));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
