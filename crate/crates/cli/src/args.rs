use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "jensen-lab",
    version,
    about = "Check and falsify Jensen-type operator inequalities on Hermitian matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a batch of seeded random instances of one check.
    Verify(VerifyArgs),
    /// Search for a counterexample to an inequality check.
    Falsify(FalsifyArgs),
    /// Tabulate the representing function t ↦ f̂(t) with Φ(tI) = f̂(t)I.
    #[command(name = "extract-f")]
    ExtractF(ExtractArgs),
    /// Compare Φ(A) with f̂(A) built from the representing function.
    Reconstruct(ReconstructArgs),
    /// Show a pinching as an average of root-of-unity conjugations.
    #[command(name = "demo-pinch")]
    DemoPinch(DemoPinchArgs),
    /// Write A = C*YC + αD*D for a contraction pair (C, D).
    #[command(name = "demo-decompose")]
    DemoDecompose(DemoDecomposeArgs),
    /// Convergence table of upper and lower step approximants.
    #[command(name = "demo-approx")]
    DemoApprox(DemoApproxArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Matrix dimension.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Random seed.
    #[arg(long, env = "JENSEN_LAB_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Pass tolerance; defaults to 1e-9·(1 + largest input max-norm).
    #[arg(long, allow_hyphen_values = true)]
    pub tol: Option<f64>,
    /// Open interval `lo,hi` (ends may be -inf/+inf) restricting the domain.
    #[arg(long, allow_hyphen_values = true)]
    pub interval: Option<String>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct MapSelect {
    /// Operator map: `spectral:<function>`, `trace` or `affine:<c>,<d>`.
    #[arg(long, allow_hyphen_values = true)]
    pub map: Option<String>,
    /// Scalar function `name[:p1,p2]`, used as the spectral map of that function.
    #[arg(long, allow_hyphen_values = true)]
    pub function: Option<String>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub select: MapSelect,
    #[command(flatten)]
    pub common: Common,
    /// Check to run.
    #[arg(long)]
    pub check: String,
    /// Terms (hp) or projections (pinch, pinch-commute).
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Expect {
    Found,
    None,
}

#[derive(Args, Debug)]
pub struct FalsifyArgs {
    #[command(flatten)]
    pub select: MapSelect,
    #[command(flatten)]
    pub common: Common,
    /// Inequality to search: jensen, convexity, hp or pinch.
    #[arg(long, default_value = "jensen")]
    pub check: String,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 10000)]
    pub trials: usize,
    /// Expected outcome; the exit code reports whether it was met.
    #[arg(long, value_enum)]
    pub expect: Option<Expect>,
    /// Comma-separated dimensions for an exploratory sweep (overrides --dim;
    /// no pass/fail verdict).
    #[arg(long, value_delimiter = ',')]
    pub sweep: Option<Vec<usize>>,
}

#[derive(Args, Debug)]
pub struct ExtractArgs {
    #[command(flatten)]
    pub select: MapSelect,
    #[command(flatten)]
    pub common: Common,
    /// Uniform inclusive grid `lo:hi:npoints`.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: String,
}

#[derive(Args, Debug)]
pub struct ReconstructArgs {
    #[command(flatten)]
    pub select: MapSelect,
    #[command(flatten)]
    pub common: Common,
    /// Matrix JSON file for A; a random matrix in the domain otherwise.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DemoPinchArgs {
    #[command(flatten)]
    pub common: Common,
    /// Matrix JSON file for X; a random matrix otherwise.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Number of projections.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
}

#[derive(Args, Debug)]
pub struct DemoDecomposeArgs {
    #[command(flatten)]
    pub common: Common,
    /// Matrix JSON file for A; a random matrix otherwise.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Matrix JSON file for the upper bound Y ≥ A; A plus a random PSD term otherwise.
    #[arg(long)]
    pub upper: Option<PathBuf>,
    /// Scalar strictly below the spectrum of A; λ_min(A) − 0.5 otherwise.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
}

#[derive(Args, Debug)]
pub struct DemoApproxArgs {
    #[command(flatten)]
    pub common: Common,
    /// Scalar function `name[:p1,p2]`.
    #[arg(long, default_value = "square", allow_hyphen_values = true)]
    pub function: String,
    /// Comma-separated mesh sizes.
    #[arg(long, value_delimiter = ',', default_value = "0.4,0.2,0.1,0.05")]
    pub mesh: Vec<f64>,
    /// Matrix JSON file for A; a random matrix in the interval otherwise.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
}
