mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use crossfam::search::StrategyChoice;

/// Exact verification runs for cross-intersecting set families.
#[derive(Parser, Debug)]
#[command(name = "crossfam", version)]
struct Cli {
    /// Write the JSON report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Cap on search worker threads
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Seed for randomized sweeps
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Maximum |A||B| over ([m] choose <=r) x ([n] choose <=s) against the star bound
    VerifyBounded {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s: u32,
        #[arg(long, default_value = "auto")]
        strategy: StrategyChoice,
    },
    /// Star bound over hereditary compressed grounds on [n]
    VerifyHereditary {
        #[arg(long)]
        n: u32,
        /// Every ordered pair of grounds instead of each ground with itself
        #[arg(long)]
        all_pairs: bool,
        #[arg(long, default_value = "auto")]
        strategy: StrategyChoice,
    },
    /// k-fold product bound over family files, power sets or bounded grounds
    VerifyK {
        /// Hereditary compressed ground files
        #[arg(long, num_args = 1.., conflicts_with = "n_list")]
        grounds: Vec<PathBuf>,
        /// Ground sizes, comma separated; power sets unless --r-list is given
        #[arg(long, value_delimiter = ',')]
        n_list: Vec<u32>,
        /// Size caps matching --n-list
        #[arg(long, value_delimiter = ',', requires = "n_list")]
        r_list: Vec<u32>,
    },
    /// Compress a family (or a cross-intersecting pair) to a fixed point
    Compress {
        #[arg(long = "in")]
        input: PathBuf,
        /// Second family, compressed simultaneously
        #[arg(long)]
        pair_with: Option<PathBuf>,
        /// Also write the compressed family in the text format
        #[arg(long, conflicts_with = "pair_with")]
        write_family: Option<PathBuf>,
    },
    /// Replay the slice-and-alter argument on compressed cross-intersecting pairs
    Prooflab {
        #[arg(long, required_unless_present = "random", requires = "in_b")]
        in_a: Option<PathBuf>,
        #[arg(long, requires = "in_a")]
        in_b: Option<PathBuf>,
        #[arg(long, requires_all = ["in_h", "in_a"])]
        in_g: Option<PathBuf>,
        #[arg(long, requires = "in_g")]
        in_h: Option<PathBuf>,
        /// Compress the pair first
        #[arg(long, conflicts_with = "random")]
        compress: bool,
        /// Number of seeded random pairs instead of input files
        #[arg(long, conflicts_with = "in_a")]
        random: Option<usize>,
        #[arg(long, default_value_t = 2)]
        n_min: u32,
        #[arg(long, default_value_t = 6)]
        n_max: u32,
    },
    /// Two-base star inequality and injection over every downset of [n]
    Lemma2 {
        #[arg(long)]
        n: u32,
    },
    /// Exact maximum |A||B| over subfamilies of two ground files
    Search {
        #[arg(long)]
        in_a: PathBuf,
        #[arg(long)]
        in_b: PathBuf,
        #[arg(long, default_value = "auto")]
        strategy: StrategyChoice,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let ctx = commands::Context {
        threads: cli.threads,
        seed: cli.seed,
        out: cli.out,
    };
    ExitCode::from(commands::run(cli.command, &ctx))
}
