//! The `spreadlab` command line.
//!
//! Exit codes: 0 on success, 1 on usage or validation errors, 2 on I/O errors.

mod commands;
mod manifest;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use manifest::{FileDigest, Manifest};

#[derive(Parser, Debug)]
#[command(name = "spreadlab", version, about = "Spatial random graphs and penalized spreading")]
pub struct Cli {
    /// Where to write the run manifest (default: next to the first output).
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a geometric inhomogeneous random graph.
    Sample(SampleArgs),
    /// Run penalized spreading from one source.
    Simulate(SimulateArgs),
    /// Growth class of a parameter point.
    Classify(ClassifyArgs),
    /// Growth classes over a two-parameter grid.
    PhaseDiagram(PhaseDiagramArgs),
    /// Degree exponent by the Hill estimator.
    EstimateTau(EstimateTauArgs),
    /// Edge-length exponent from the truncated length tail.
    EstimateAlpha(EstimateAlphaArgs),
    /// Growth exponent of epidemic curves.
    FitCurve(FitCurveArgs),
    /// Degree-preserving randomization.
    Rewire(RewireArgs),
    /// Build a located friendship graph from SNAP check-in data.
    IngestGowalla(IngestArgs),
    /// Predicted edge counts per node in a length window.
    EdgeTail(EdgeTailArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Args, Debug)]
struct SampleArgs {
    /// Expected number of nodes.
    #[arg(long)]
    n: f64,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    tau: f64,
    /// Long-range parameter; `inf` gives the threshold kernel.
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long)]
    seed: u64,
    /// Use the quadratic all-pairs sampler (small n only).
    #[arg(long)]
    naive: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    mu: f64,
    /// Receiver exponent; defaults to `mu`.
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    zeta: f64,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Penalty base: `weight` or `degree`.
    #[arg(long)]
    base: String,
    /// Node id, or coordinates `a,b` (lat,lon on haversine graphs) for the nearest node.
    #[arg(long, allow_hyphen_values = true)]
    source: String,
    #[arg(long, default_value_t = 1)]
    runs: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    curves_out: Option<PathBuf>,
    #[arg(long)]
    times_out: Option<PathBuf>,
    /// Heatmap of the first run.
    #[arg(long)]
    heatmap_out: Option<PathBuf>,
    #[arg(long, default_value_t = 400)]
    grid: usize,
    /// `x1,y1,x2,y2`; on haversine graphs `lon1,lat1,lon2,lat2`.
    #[arg(long, allow_hyphen_values = true)]
    crop: Option<String>,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    tau: f64,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    mu: f64,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    zeta: f64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct PhaseDiagramArgs {
    /// Fixed coordinates, e.g. `tau=2.78,alpha=1.2,d=2`.
    #[arg(long)]
    fix: String,
    /// `name:lo:hi:points`.
    #[arg(long)]
    x: String,
    #[arg(long)]
    y: String,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct EstimateTauArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Fixed number of order statistics instead of plateau selection.
    #[arg(long)]
    kappa: Option<usize>,
    /// CSV of the kappa sweep.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EstimateAlphaArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    lmin: f64,
    #[arg(long)]
    lmax: f64,
    /// Lengths are great-circle kilometres (required for haversine graphs).
    #[arg(long)]
    km: bool,
    #[arg(long, default_value_t = 40)]
    points: usize,
    /// CSV of the empirical and fitted tail.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FitCurveArgs {
    #[arg(long)]
    curves: PathBuf,
    /// log10 of the lower window end.
    #[arg(long)]
    ilow: f64,
    /// log10 of the upper window end.
    #[arg(long)]
    ihigh: f64,
    /// `loglog` or `loglinear`.
    #[arg(long)]
    mode: String,
    /// log10 of the smallest admissible lower window end.
    #[arg(long, default_value_t = 2.17)]
    warmup: f64,
    /// Also test the shape of log I against t.
    #[arg(long)]
    concavity: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RewireArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = crate::rewire::DEFAULT_SWEEPS)]
    sweeps: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct IngestArgs {
    #[arg(long)]
    edges: PathBuf,
    #[arg(long)]
    checkins: PathBuf,
    #[arg(long)]
    tie_seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    idmap: Option<PathBuf>,
    /// Also write the largest connected component.
    #[arg(long)]
    lcc_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EdgeTailArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    tau: f64,
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long)]
    l1: f64,
    #[arg(long)]
    l2: f64,
    /// Cap on the weight product of counted pairs.
    #[arg(long)]
    cap: Option<f64>,
    /// Sampled graph to compare against.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long, default_value_t = 40)]
    points: usize,
    /// CSV of predicted (and empirical) counts from each L to l2.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReplayArgs {
    /// Manifest to replay.
    path: PathBuf,
    /// Fail unless every output reproduces its recorded checksum.
    #[arg(long)]
    check: bool,
}

fn configure_threads() {
    let Some(n) = std::env::var("SPREADLAB_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) else {
        return;
    };
    // fails only when a pool already exists, which is fine
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
}

/// Parse `argv` (including the program name) and execute; returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            if code == 0 {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(std::io::stderr(), "{e}");
            }
            return code;
        }
    };
    configure_threads();
    let args: Vec<String> = argv.iter().skip(1).map(|s| s.to_string_lossy().into_owned()).collect();
    match commands::execute(cli, &args, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(std::io::stderr(), "error: {e}");
            e.exit_code()
        }
    }
}
