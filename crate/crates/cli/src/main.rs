use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

/// Exact Paley graph clique numbers and bound verification.
#[derive(Debug, Parser)]
#[command(name = "paley-clique", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute exact clique numbers and bound data for a range, caching rows as CSV.
    Compute(ComputeArgs),
    /// Run the invariant suite over a range or a single order.
    Verify(VerifyArgs),
    /// Bucket primes p = 1 (mod 4) up to LIMIT by whether the parity bound improves on floor(sqrt p).
    Classify(ClassifyArgs),
    /// Emit plot-ready columns from the cache.
    Plotdata(PlotArgs),
}

#[derive(Debug, Args)]
pub struct RangeArgs {
    /// Lower end of the range (or the single order for `verify`).
    lo: Option<u64>,
    hi: Option<u64>,
    /// Alternative to the positional bounds.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
    range: Option<Vec<u64>>,
    /// Worker threads; results do not depend on this.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Also include prime powers p^k with odd k > 1.
    #[arg(long)]
    prime_powers: bool,
    /// Largest admissible upper end.
    #[arg(long, default_value_t = 10_000)]
    max_q: u64,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[command(flatten)]
    range: RangeArgs,
    #[arg(long, default_value = "paley_cache.csv")]
    cache: PathBuf,
    /// Recompute rows already present in the cache.
    #[arg(long)]
    force: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    range: RangeArgs,
    /// Admit even extension degrees (the subfield equality case).
    #[arg(long)]
    even_k: bool,
    /// Largest order cross-checked against the naive oracle.
    #[arg(long, default_value_t = 200)]
    oracle_cap: u64,
    /// Flip one adjacency bit before checking.
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    limit: u64,
    #[arg(long)]
    csv: bool,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(long, default_value = "paley_cache.csv")]
    cache: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Compute(args) => commands::compute(args),
        Command::Verify(args) => commands::verify(args),
        Command::Classify(args) => commands::classify(args),
        Command::Plotdata(args) => commands::plotdata(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
