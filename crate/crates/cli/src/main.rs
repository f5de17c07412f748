use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gcf_core::inference::{Statistic, DEFAULT_K};
use gcf_core::proxy::MoveCost;

mod commands;
mod exit;

use exit::exit_code;

#[derive(Parser)]
#[command(name = "gcf", version, about = "Translation inference and convolution schemes on graphs")]
struct Cli {
    /// Worker threads for the per-vertex searches. GCF_THREADS takes precedence.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a k-nearest-covariance graph from a signal file.
    InferGraph(InferGraphArgs),
    /// Find local translations and propagate them into a proxy family.
    FindTranslations(FindTranslationsArgs),
    /// Compile a family into a convolution scheme.
    BuildScheme(BuildSchemeArgs),
    /// Compute kept sets, induced translations and per-level schemes for a list of strides.
    Downscale(DownscaleArgs),
    /// Append translated copies of every signal.
    Augment(AugmentArgs),
    /// Run the pipeline on an H x W grid and compare with exact grid shifts.
    VerifyGrid(VerifyGridArgs),
    /// Summaries of artifact files, or grid scaling timings.
    Stats(StatsArgs),
    /// Write the H x W grid graph.
    Grid(GridArgs),
}

#[derive(Args)]
pub struct InferGraphArgs {
    /// CSV or GSIG signal matrix, one sample per row.
    #[arg(long)]
    pub signals: PathBuf,
    #[arg(long, default_value_t = DEFAULT_K)]
    pub k: usize,
    #[arg(long, default_value_t = Statistic::Covariance)]
    pub statistic: Statistic,
    /// Average C channel-major column blocks per vertex before inference.
    #[arg(long, value_name = "C")]
    pub average_channels: Option<usize>,
    /// Exit 0 even when the graph is disconnected.
    #[arg(long)]
    pub allow_disconnected: bool,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct SearchArgs {
    /// Cost assigned to each kernel move during propagation.
    #[arg(long, default_value = "kernel", value_parser = parse_move_cost)]
    pub move_cost: MoveCost,
    /// Largest 2-hop neighborhood searched before giving up as too dense.
    #[arg(long, default_value_t = 64)]
    pub max_context: usize,
}

#[derive(Args)]
pub struct FindTranslationsArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Seed vertex, or a comma separated list to rank. Defaults to a graph center.
    #[arg(long, value_delimiter = ',', conflicts_with = "auto")]
    pub seed: Option<Vec<usize>>,
    /// Try the max-degree vertex and N random seeds and keep the best family.
    #[arg(long, value_name = "N")]
    pub auto: Option<usize>,
    /// RNG seed for `--auto`.
    #[arg(long, default_value_t = 0)]
    pub rng_seed: u64,
    #[command(flatten)]
    pub search: SearchArgs,
    /// Also write every local translation set as JSON.
    #[arg(long)]
    pub dump_locals: Option<PathBuf>,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct BuildSchemeArgs {
    #[arg(long)]
    pub family: PathBuf,
    /// Output vertices (comma separated). Defaults to every vertex.
    #[arg(long, value_delimiter = ',')]
    pub vertices: Option<Vec<usize>>,
    /// Write the GSCH binary form instead of JSON.
    #[arg(long)]
    pub binary: bool,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct DownscaleArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub family: PathBuf,
    /// Stride of each level, in order. Repeat or comma separate.
    #[arg(long, value_delimiter = ',', required = true)]
    pub stride: Vec<usize>,
    /// Also write schemes in the GSCH binary form.
    #[arg(long)]
    pub binary: bool,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Args)]
pub struct AugmentArgs {
    #[arg(long)]
    pub signals: PathBuf,
    #[arg(long)]
    pub family: PathBuf,
    /// Kernel indices to draw from (comma separated). Defaults to all non-identity ones.
    #[arg(long, value_delimiter = ',')]
    pub indices: Option<Vec<usize>>,
    #[arg(long, default_value_t = 1)]
    pub reps: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub fill: f64,
    /// Translated copies per input row.
    #[arg(long, default_value_t = 1)]
    pub draws: usize,
    #[arg(long, visible_alias = "rng-seed", default_value_t = 0)]
    pub seed: u64,
    /// Output path; `.csv` writes CSV, anything else GSIG.
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct VerifyGridArgs {
    pub height: usize,
    pub width: usize,
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    /// Seed vertex. Defaults to the grid center.
    #[arg(long)]
    pub seed: Option<usize>,
    /// Check this scheme file against the grid instead of running the pipeline.
    #[arg(long)]
    pub scheme: Option<PathBuf>,
    /// Kernel arm length expected in `--scheme`.
    #[arg(long, default_value_t = 1, requires = "scheme")]
    pub dilation: usize,
    #[command(flatten)]
    pub search: SearchArgs,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub scheme: Option<PathBuf>,
    #[arg(long)]
    pub family: Option<PathBuf>,
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Time local search and propagation on square grids.
    #[arg(long)]
    pub scaling: bool,
    #[arg(long, value_delimiter = ',', default_values_t = gcf_core::scaling::DEFAULT_SIDES)]
    pub sides: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    pub repeats: usize,
}

#[derive(Args)]
pub struct GridArgs {
    pub height: usize,
    pub width: usize,
    #[arg(long, short)]
    pub out: PathBuf,
}

fn parse_move_cost(s: &str) -> Result<MoveCost, String> {
    match s {
        "kernel" => Ok(MoveCost::Kernel),
        "context" => Ok(MoveCost::Context),
        other => Err(format!("unknown move cost {other:?} (expected kernel or context)")),
    }
}

fn thread_count(flag: Option<usize>) -> anyhow::Result<Option<usize>> {
    match std::env::var("GCF_THREADS") {
        Ok(v) => Ok(Some(v.trim().parse().map_err(|_| {
            gcf_core::Error::InvalidParameter(format!("GCF_THREADS must be a positive integer, got {v:?}"))
        })?)),
        Err(_) => Ok(flag),
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(threads) = thread_count(cli.threads)? {
        if threads == 0 {
            return Err(gcf_core::Error::InvalidParameter("thread count must be at least 1".into()).into());
        }
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    }
    match cli.command {
        Command::InferGraph(a) => commands::infer_graph(a),
        Command::FindTranslations(a) => commands::find_translations(a),
        Command::BuildScheme(a) => commands::build_scheme(a),
        Command::Downscale(a) => commands::downscale(a),
        Command::Augment(a) => commands::augment(a),
        Command::VerifyGrid(a) => commands::verify_grid(a),
        Command::Stats(a) => commands::stats(a),
        Command::Grid(a) => commands::grid(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
