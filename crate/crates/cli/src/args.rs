use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "geodepth", version, about = "Spherical depth on Riemannian manifolds")]
pub struct Cli {
    /// Cap on worker threads; output does not depend on it.
    #[arg(long, global = true, env = "GEODEPTH_THREADS")]
    pub threads: Option<usize>,

    /// TOML file whose keys supply default flag values (`manifold = "sphere:3"`).
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Depth of query points with respect to a dataset file.
    #[command(args_override_self = true)]
    Depth(DepthArgs),
    /// Sample a named design and score it.
    #[command(args_override_self = true)]
    Simulate(SimulateArgs),
    /// Asymptotic experiments: CLT replications, uniform consistency, variance curves.
    #[command(args_override_self = true)]
    Asym(AsymArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Output file; standard output when absent.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DepthArgs {
    /// Manifold, e.g. `euclidean:5`, `sphere:3`, `torus:2`, `spd:3`, `hilbert:50`.
    #[arg(long)]
    pub manifold: String,

    /// Headerless CSV, one point per row.
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,

    /// Query points, same layout as the input.
    #[arg(long, value_name = "FILE", required_unless_present = "query_self")]
    pub queries: Option<PathBuf>,

    /// Score the sample points themselves.
    #[arg(long, conflicts_with = "queries")]
    pub query_self: bool,

    /// dcops, pd1, pd2 or atd.
    #[arg(long, default_value = "dcops")]
    pub method: String,

    /// Random directions (or poles for atd).
    #[arg(long, default_value_t = 500)]
    pub directions: usize,

    /// Seed for directions and pair subsampling.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Use this many random sample pairs instead of all of them.
    #[arg(long)]
    pub pairs: Option<usize>,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Named design.
    #[arg(long, required_unless_present = "sampler", conflicts_with_all = ["sampler", "manifold"])]
    pub preset: Option<String>,

    /// Custom distribution as JSON, for example
    /// `{"VonMisesFisher": {"mean": [1, 0, 0], "kappa": 5}}`.
    #[arg(long, requires = "manifold")]
    pub sampler: Option<String>,

    /// Manifold for `--sampler`.
    #[arg(long)]
    pub manifold: Option<String>,

    #[arg(long, default_value_t = 100)]
    pub n: usize,

    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    #[arg(long, default_value_t = 500)]
    pub directions: usize,

    /// Random sample pairs for the depth; `exact` for all pairs. Defaults to
    /// exact up to n = 2000 and 100000 pairs beyond.
    #[arg(long)]
    pub pairs: Option<String>,

    /// Score only the first this-many sample points.
    #[arg(long)]
    pub score: Option<usize>,

    /// Profile along a ray from the reference point: `e<i>` or a comma list.
    #[arg(long, value_name = "DIRECTION")]
    pub profile_ray: Option<String>,

    /// Ray grid `start:stop:step`.
    #[arg(long, default_value = "0:4:0.1", allow_hyphen_values = true)]
    pub lambda: String,

    /// Also write an SVG plot here.
    #[arg(long, value_name = "FILE")]
    pub svg: Option<PathBuf>,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AsymKind {
    Clt,
    Gc,
    VarianceCurve,
}

#[derive(Debug, Args)]
pub struct AsymArgs {
    #[arg(long = "type", value_enum)]
    pub kind: AsymKind,

    /// Design for clt (default gauss-k2) and gc (default sphere-vmf).
    #[arg(long)]
    pub preset: Option<String>,

    /// Query point for clt, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,

    /// Sample size (clt) or comma-separated increasing sizes (gc).
    #[arg(long)]
    pub n: Option<String>,

    #[arg(long, default_value_t = 500)]
    pub reps: usize,

    /// Dimensions for the variance curve.
    #[arg(long, default_value = "1,2,5,10,50")]
    pub k: String,

    /// Variance-curve grid `start:stop:step`.
    #[arg(long, default_value = "-4:4:0.1", allow_hyphen_values = true)]
    pub l: String,

    /// Gaussian draws per variance-curve point.
    #[arg(long, default_value_t = 100_000)]
    pub draws: u64,

    /// Monte-Carlo pairs for population references.
    #[arg(long, default_value_t = 1_000_000)]
    pub reference_pairs: u64,

    /// Outer draws for zeta_1 (0 skips it).
    #[arg(long, default_value_t = 4000)]
    pub zeta_outer: usize,

    #[arg(long, default_value_t = 4000)]
    pub zeta_inner: usize,

    /// Consistency grid size.
    #[arg(long, default_value_t = 30)]
    pub grid_size: usize,

    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    #[command(flatten)]
    pub output: OutputArgs,
}
