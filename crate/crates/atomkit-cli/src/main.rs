//! Command-line driver for the decomposition toolkit.
//!
//! Exit codes: 0 on success, 1 on input errors (bad flags, bad config,
//! malformed data), 2 when a mathematical gate refuses the computation
//! (ill-conditioned sampling matrix, no frame, expansive perturbation).

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

use atomkit::error::Error;

mod commands;
mod config;

use config::Config;

#[derive(Debug, Parser)]
#[command(name = "atomkit", version, about = "Truncated atomic decompositions in graded function spaces")]
struct Cli {
    /// Output directory for reports and tables.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Seed for all randomized probe families.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// TOML configuration file; command-line flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Exponential decomposition of a smooth function on a box.
    Expdecomp(ExpArgs),
    /// Finite Gabor frame analysis on a cyclic group.
    Gabor(GaborArgs),
    /// Reproducing-kernel decomposition on the unit disc.
    Disc(DiscArgs),
    /// Perturbation transfer with a certified contraction budget.
    Perturb(PerturbArgs),
    /// Shrinking / bounded-completeness tail probes.
    Diagnose(DiagnoseArgs),
}

#[derive(Debug, Args)]
pub struct ExpArgs {
    /// Half-width of the box K = [-M, M].
    #[arg(long)]
    m: Option<f64>,
    /// Samples per axis on the full box (power of two).
    #[arg(long)]
    grid_n: Option<usize>,
    /// Frequency truncation |j| <= J.
    #[arg(long)]
    j_max: Option<i64>,
    /// Fraction of the margin kept at cutoff value 1.
    #[arg(long)]
    plateau_fraction: Option<f64>,
    /// Probe family: "smooth" or "trig".
    #[arg(long)]
    probe: Option<String>,
    /// Extension backend: "caller-global" or "reflection".
    #[arg(long)]
    backend: Option<String>,
    /// Also remove the atom at this index and report the corrected system.
    #[arg(long)]
    remove: Option<i64>,
}

#[derive(Debug, Args)]
pub struct GaborArgs {
    /// Signal length (power of two).
    #[arg(long)]
    l: Option<usize>,
    /// Time lattice step.
    #[arg(long)]
    a: Option<usize>,
    /// Frequency lattice step.
    #[arg(long)]
    b: Option<usize>,
    /// Number of seeded probe signals.
    #[arg(long)]
    probes: Option<usize>,
    /// Weight order for the summability certificate.
    #[arg(long)]
    order: Option<usize>,
}

#[derive(Debug, Args)]
pub struct DiscArgs {
    /// Dyadic partition depth K.
    #[arg(long)]
    depth: Option<u32>,
    /// Taylor truncation degree N.
    #[arg(long)]
    degree: Option<usize>,
    /// Weight orders for the residual table (comma-separated).
    #[arg(long, value_delimiter = ',')]
    orders: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
pub struct PerturbArgs {
    /// "atoms" or "duals".
    #[arg(long)]
    mode: Option<String>,
    /// Perturbation size.
    #[arg(long)]
    scale: Option<f64>,
    /// Contraction budget fixing the series length.
    #[arg(long)]
    contraction_budget: Option<f64>,
    /// Series truncation tolerance.
    #[arg(long)]
    series_tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct DiagnoseArgs {
    /// "exp", "gabor", "disc" or "counterexample".
    #[arg(long)]
    space: Option<String>,
    /// Seminorm order for the block curves.
    #[arg(long)]
    order: Option<usize>,
}

fn run(cli: Cli) -> atomkit::Result<()> {
    let cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    std::fs::create_dir_all(&cli.out)
        .map_err(|e| Error::rejected(format!("cannot create {}: {e}", cli.out.display())))?;
    match &cli.cmd {
        Cmd::Expdecomp(args) => commands::expdecomp(&cli.out, cli.seed, &cfg, args),
        Cmd::Gabor(args) => commands::gabor(&cli.out, cli.seed, &cfg, args),
        Cmd::Disc(args) => commands::disc(&cli.out, cli.seed, &cfg, args),
        Cmd::Perturb(args) => commands::perturb(&cli.out, cli.seed, &cfg, args),
        Cmd::Diagnose(args) => commands::diagnose(&cli.out, cli.seed, &cfg, args),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are not errors
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(if e.is_gate_refusal() { 2 } else { 1 });
        }
    }
}
