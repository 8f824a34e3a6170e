//! `gsi` command line: construct systems, analyze them, verify frame
//! properties and reproduce the worked examples.

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand};

mod analyze;
mod construct;
mod io;
mod repro;
mod verify;

pub use io::{json_diff, CliError};

/// Exit code for malformed command lines.
pub const EXIT_USAGE: i32 = 64;

/// Exit code for computational errors.
pub const EXIT_ERROR: i32 = 1;

#[derive(Debug, Parser)]
#[command(name = "gsi", version, about = "Generalized shift-invariant frames over ℤ_M, ℤ and ℝⁿ")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build systems, partitions and coverings.
    Construct {
        #[command(subcommand)]
        what: ConstructCmd,
        #[command(flatten)]
        common: Common,
    },
    /// Calderón sums, t_α, bandwidth, means, UCP residuals and LIC sums.
    Analyze {
        #[command(subcommand)]
        what: AnalyzeCmd,
        #[command(flatten)]
        common: Common,
    },
    /// Certify Parseval and dual frames, audit necessary conditions.
    Verify {
        #[command(subcommand)]
        what: VerifyCmd,
        #[command(flatten)]
        common: Common,
    },
    /// Recompute a worked example and compare it with the stored golden.
    Repro {
        #[command(subcommand)]
        what: ReproCmd,
        #[command(flatten)]
        common: Common,
        /// Exit with status 2 when the output differs from the golden.
        #[arg(long, global = true)]
        check: bool,
    },
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Input JSON file, `-` for stdin.
    #[arg(long, global = true)]
    pub input: Option<String>,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    pub output: Option<String>,
    /// Verdict tolerance (default 1e-10) or analysis tolerance (default 1e-9).
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Verification window size (at least 16).
    #[arg(long, global = true)]
    pub window: Option<u64>,
    /// Require exact rational arithmetic where it is available.
    #[arg(long, global = true)]
    pub exact: bool,
    /// Print a table to stderr next to the JSON output.
    #[arg(long, global = true)]
    pub table: bool,
}

#[derive(Debug, Subcommand)]
pub enum ConstructCmd {
    /// Parseval generators from a frequency tiling.
    Shannon,
    /// Greedy partition ℤ = ⊔ τ_j + Nʲℤ and its system.
    Br {
        #[arg(long = "N", default_value_t = 2)]
        n: u64,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// Coset decomposition along a chain, or reindexing along a refinement.
    Refine {
        #[arg(long)]
        count: Option<usize>,
    },
    /// Dyadic cube covering of a box.
    Cubes,
    /// Orthonormal basis with bandwidth at most 1/covol(Γ_0).
    SmallBwOnb {
        /// Group order for the finite model; ℤ when absent.
        #[arg(long)]
        modulus: Option<u64>,
        /// Index between consecutive chain members.
        #[arg(long, default_value_t = 2)]
        ratio: u64,
        /// Number of chain members used beyond Γ_0.
        #[arg(long)]
        count: Option<usize>,
    },
    /// Cubes inside fundamental domains of C_j^{-T}ℤⁿ.
    NearIso {
        /// Condition number bound.
        #[arg(long)]
        ratio: Option<f64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum AnalyzeCmd {
    /// Calderón sum of the analysis generators.
    Calderon {
        /// Emit (omega, value) CSV instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// The function t_α.
    Talpha {
        /// Frequency, comma separated coordinates (e.g. `1/2`).
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long)]
        csv: bool,
    },
    /// Σ 1/covol(Γ_j) of a system or of a geometric family.
    Bandwidth {
        /// `geometric` for the family c·rʲ, j ≥ first.
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        ratio: Option<String>,
        #[arg(long, default_value = "1")]
        base: String,
        #[arg(long, default_value_t = 1)]
        first: u32,
    },
    /// Mean of a w-function, exact or over growing windows.
    Mean {
        /// Layer index; the full family when absent.
        #[arg(long)]
        layer: Option<usize>,
    },
    /// Residual means of growing truncations.
    Ucp,
    /// Local integrability sums per layer and their partial sums.
    Lic {
        #[arg(long)]
        count: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    /// Parseval frame certification.
    Parseval,
    /// Dual frame certification of (g, h).
    Dual,
    /// Necessary conditions for given or computed frame bounds.
    Audit {
        /// Claimed bounds `A,B`.
        #[arg(long)]
        bounds: Option<String>,
    },
    /// Independence of the dual lattices and the ONB shape check.
    Independence {
        /// The generators are claimed to form an orthonormal basis.
        #[arg(long)]
        onb: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum ReproCmd {
    /// Greedy partition systems: t_0, residual means, LIC divergence.
    #[command(name = "example-3.11")]
    GreedyPartition {
        #[arg(long = "N", default_value_t = 2)]
        n: u64,
    },
    /// Refinement of ℤ by (2ʲℤ) versus the single lattice ℤ in ℝ.
    #[command(name = "example-4.6")]
    Reindex,
    /// Bandwidth of perturbed dyadic lattices in ℝ.
    #[command(name = "example-5.8")]
    Perturbation,
    /// Pairwise coprime lattices versus their running intersections.
    #[command(name = "example-5.9")]
    Intersections,
}

/// Configures the worker pool from `GSI_THREADS`.
fn init_threads() {
    if let Some(n) = std::env::var("GSI_THREADS").ok().and_then(|s| s.parse::<usize>().ok()).filter(|&n| n > 0) {
        // a second initialization (tests calling run twice) is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Parses `argv` and runs the command; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    init_threads();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            let code = e.exit_code();
            println!("{}", e.to_json());
            code
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Construct { what, common } => construct::run(&what, &io::RunConfig::from_common(&common, false)?),
        Command::Analyze { what, common } => analyze::run(&what, &io::RunConfig::from_common(&common, false)?),
        Command::Verify { what, common } => verify::run(&what, &io::RunConfig::from_common(&common, true)?),
        Command::Repro { what, common, check } => repro::run(&what, &io::RunConfig::from_common(&common, true)?, check),
    }
}
