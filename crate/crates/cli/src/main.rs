use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use td13::commands::{
    cmd_draw, cmd_enumerate, cmd_selftest, cmd_verify, DrawConfig, EnumerateConfig,
    SelftestCliConfig, VerifyConfig,
};
use td13_core::encoding::SConvention;
use td13_core::validator::Tolerances;

/// Straight-line drawings of outerplanar graphs using at most thirteen
/// distinct edge lengths.
#[derive(Parser)]
#[command(name = "td13", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Draw a graph from JSON, writing drawing JSON and SVG
    Draw(DrawArgs),
    /// List rhombus-tree nodes with codes, types, labels and polynomials
    Enumerate(EnumerateArgs),
    /// Re-check a drawing file
    Verify(VerifyArgs),
    /// Run the built-in verification suites
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Conv {
    Figure,
    Literal,
}

impl From<Conv> for SConvention {
    fn from(c: Conv) -> Self {
        match c {
            Conv::Figure => SConvention::Figure,
            Conv::Literal => SConvention::Literal,
        }
    }
}

#[derive(Args)]
struct TolArgs {
    /// Minimum allowed distance between vertex images
    #[arg(long, default_value_t = 1e-6)]
    tol_vertex_gap: f64,
    /// Minimum allowed distance from a vertex to a non-incident open segment
    #[arg(long, default_value_t = 1e-6)]
    tol_vertex_edge_gap: f64,
    /// Clustering radius for edge-length classes
    #[arg(long, default_value_t = 1e-9)]
    tol_class_radius: f64,
}

impl TolArgs {
    fn tolerances(&self) -> Tolerances {
        Tolerances {
            vertex_gap: self.tol_vertex_gap,
            vertex_edge_gap: self.tol_vertex_edge_gap,
            class_radius: self.tol_class_radius,
        }
    }
}

#[derive(Args)]
struct DrawArgs {
    /// Input graph JSON file
    input: PathBuf,
    /// Torus sampling seed
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Scale factor in (0, 1]
    #[arg(long, default_value_t = 0.5)]
    scale: f64,
    #[arg(long, value_enum, default_value_t = Conv::Figure)]
    s_convention: Conv,
    /// Root edge override as "u,v"; defaults to the first two outer vertices
    #[arg(long, value_parser = parse_pair)]
    base_edge: Option<(usize, usize)>,
    /// Keep triangulation fill edges in the output
    #[arg(long)]
    keep_augmented: bool,
    /// Torus samples to try before giving up
    #[arg(long, default_value_t = 5)]
    retry_budget: u32,
    #[command(flatten)]
    tols: TolArgs,
    /// Output stem; writes <stem>.json and <stem>.svg
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EnumerateArgs {
    /// Maximum node path length
    #[arg(long)]
    depth: usize,
    #[arg(long, value_enum, default_value_t = Conv::Figure)]
    s_convention: Conv,
    /// Output file; defaults to stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Drawing JSON file produced by draw
    input: PathBuf,
    #[command(flatten)]
    tols: TolArgs,
    /// Allowed deviation of stored coordinates from their polynomials
    #[arg(long, default_value_t = 1e-9)]
    tol_coord: f64,
}

#[derive(Args)]
struct SelftestArgs {
    /// Enumeration depth for the suites
    #[arg(long, default_value_t = 6)]
    depth: usize,
    /// Comma-separated torus seeds
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
    seeds: Vec<u64>,
    #[arg(long, value_enum, default_value_t = Conv::Figure)]
    s_convention: Conv,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected \"u,v\", got {s:?}"))?;
    Ok((
        a.trim().parse().map_err(|e| format!("{e}"))?,
        b.trim().parse().map_err(|e| format!("{e}"))?,
    ))
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Draw(a) => cmd_draw(&DrawConfig {
            input: a.input,
            out: a.out,
            seed: a.seed,
            scale: a.scale,
            convention: a.s_convention.into(),
            base_edge: a.base_edge,
            keep_augmented: a.keep_augmented,
            retry_budget: a.retry_budget,
            tolerances: a.tols.tolerances(),
        }),
        Cmd::Enumerate(a) => cmd_enumerate(&EnumerateConfig {
            depth: a.depth,
            convention: a.s_convention.into(),
            out: a.out,
        }),
        Cmd::Verify(a) => cmd_verify(&VerifyConfig {
            input: a.input,
            tolerances: a.tols.tolerances(),
            tol_coord: a.tol_coord,
        }),
        Cmd::Selftest(a) => cmd_selftest(&SelftestCliConfig {
            depth: a.depth,
            seeds: a.seeds,
            convention: a.s_convention.into(),
        }),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
