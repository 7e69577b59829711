//! `degseq`: formula values, exact oracles and verification suites for
//! random graphs with a given degree sequence.
//!
//! Exit codes: 0 on success, 2 when a precondition or validation check
//! fails, 1 on I/O or parse errors.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use degseq_core::Error;

use render::Format;

#[derive(Parser, Debug)]
#[command(name = "degseq", version, about = "Pattern counts in random graphs with a given degree sequence")]
pub struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    /// Seed for every random choice; recorded in the report.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Cap on enumerated realizations.
    #[arg(long, env = "DEGSEQ_BUDGET", global = true)]
    pub budget: Option<u128>,
    /// Density margin used by the validity report.
    #[arg(long, default_value_t = degseq_core::graph_model::DEFAULT_A, global = true)]
    pub a: f64,
    /// Exponent of the error envelope `n^-b`.
    #[arg(long, default_value_t = degseq_core::asymptotics::DEFAULT_B, global = true)]
    pub b: f64,
    #[arg(long, default_value_t = degseq_core::graph_model::DEFAULT_EPS, global = true)]
    pub eps: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Degree statistics, graphicality and validity ratios.
    Stats(StatsArgs),
    /// Asymptotic expected counts.
    #[command(subcommand)]
    Expect(ExpectCmd),
    /// Asymptotic probability of a labelled pattern.
    #[command(subcommand)]
    Prob(ProbCmd),
    /// Exact and Monte Carlo references.
    #[command(subcommand)]
    Oracle(OracleCmd),
    #[command(subcommand)]
    Martingale(MartingaleCmd),
    #[command(subcommand)]
    Moments(MomentsCmd),
    /// Labelled trees with prescribed degrees.
    #[command(subcommand)]
    Trees(TreesCmd),
    /// Formula against an exact or sampled reference.
    Compare(CompareArgs),
}

#[derive(Args, Debug)]
pub struct DegreesArg {
    #[arg(long)]
    pub degrees: PathBuf,
}

#[derive(Args, Debug)]
pub struct PatternArgs {
    #[command(flatten)]
    pub d: DegreesArg,
    #[arg(long)]
    pub pattern: PathBuf,
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    #[command(flatten)]
    pub d: DegreesArg,
    /// Spanning pattern whose validity ratio should be reported.
    #[arg(long)]
    pub subgraph_pattern: Option<PathBuf>,
    /// Induced pattern whose validity ratio should be reported.
    #[arg(long)]
    pub induced_pattern: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum ExpectCmd {
    Subgraph {
        #[command(flatten)]
        p: PatternArgs,
        /// Keep only the leading two exponent terms.
        #[arg(long)]
        simplified: bool,
    },
    Induced {
        #[command(flatten)]
        p: PatternArgs,
        #[arg(long)]
        simplified: bool,
    },
    Trees(DegreesArg),
    Clique {
        #[command(flatten)]
        d: DegreesArg,
        #[arg(long)]
        r: usize,
        /// Count independent sets instead.
        #[arg(long)]
        independent: bool,
    },
    /// A given h-regular factor, or all of them when no pattern is given.
    Factor {
        #[command(flatten)]
        d: DegreesArg,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        pattern: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum ProbCmd {
    Subgraph(PatternArgs),
    Induced(PatternArgs),
    Tree(PatternArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Auto,
    Enumeration,
    Counting,
}

#[derive(Subcommand, Debug)]
pub enum OracleCmd {
    /// List every realization, or only count them.
    Enumerate {
        #[command(flatten)]
        d: DegreesArg,
        #[arg(long)]
        count_only: bool,
    },
    Expect {
        #[command(flatten)]
        d: DegreesArg,
        #[arg(long, required_unless_present = "trees", conflicts_with = "trees")]
        pattern: Option<PathBuf>,
        #[arg(long)]
        induced: bool,
        /// Expected number of spanning trees.
        #[arg(long)]
        trees: bool,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
    },
    Prob {
        #[command(flatten)]
        p: PatternArgs,
        #[arg(long)]
        induced: bool,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
    },
    /// Switch-chain estimate of the expected copy count.
    Mcmc {
        #[command(flatten)]
        p: PatternArgs,
        #[arg(long)]
        induced: bool,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Proposals per chain; defaults to 20 times the edge count.
        #[arg(long)]
        steps: Option<u64>,
    },
}

#[derive(Subcommand, Debug)]
pub enum MartingaleCmd {
    /// Seeded soundness suite for the certified bounds.
    Verify {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Largest permutation size tried (at most 6).
        #[arg(long, default_value_t = 6)]
        max_n: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum MomentsCmd {
    /// Closed forms against brute force, for weights or an exponent.
    Verify(MomentsArgs),
}

#[derive(Args, Debug)]
pub struct MomentsArgs {
    /// Comma-separated weights `u`.
    #[arg(long, requires = "v", conflicts_with = "degrees")]
    pub u: Option<String>,
    #[arg(long)]
    pub v: Option<String>,
    /// Second weight pair for covariances.
    #[arg(long, requires = "v2")]
    pub u2: Option<String>,
    #[arg(long)]
    pub v2: Option<String>,
    /// 1-based positions `j,k` for the pair product.
    #[arg(long)]
    pub pair: Option<String>,
    #[arg(long, required_unless_present = "u", requires = "pattern")]
    pub degrees: Option<PathBuf>,
    #[arg(long)]
    pub pattern: Option<PathBuf>,
    #[arg(long)]
    pub induced: bool,
}

#[derive(Subcommand, Debug)]
pub enum TreesCmd {
    /// Number of labelled trees with the given degrees.
    Count {
        #[arg(long)]
        x: String,
    },
    /// Edge average of `phi_j phi_k` and the exponential estimate.
    Average {
        #[arg(long)]
        x: String,
        #[arg(long, required_unless_present = "degrees", conflicts_with = "degrees")]
        phi: Option<String>,
        /// Take `phi` from a degree sequence instead.
        #[arg(long)]
        degrees: Option<PathBuf>,
    },
    /// Moments of truncated degrees in a uniform random tree.
    Moments {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.25)]
        trunc_exponent: f64,
        /// Sample this many trees instead of the exact computation.
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Family {
    /// Hamilton cycles.
    Cycle,
    /// Perfect matchings.
    Matching,
    /// Induced triangles.
    Triangle,
    /// Spanning trees.
    Trees,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[arg(long, required_unless_present = "grid", conflicts_with = "grid")]
    pub degrees: Option<PathBuf>,
    #[arg(long, conflicts_with = "trees")]
    pub pattern: Option<PathBuf>,
    #[arg(long)]
    pub induced: bool,
    #[arg(long)]
    pub trees: bool,
    /// Regular cells `n:k,n:k,...` swept in parallel.
    #[arg(long, requires = "family")]
    pub grid: Option<String>,
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    /// Use the switch chain instead of the exact oracle.
    #[arg(long)]
    pub mcmc: bool,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long)]
    pub steps: Option<u64>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Io(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", render::render(&out.report, cli.format));
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("degseq: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
