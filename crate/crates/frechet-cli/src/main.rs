//! `frechet`: command-line front end for the `bernoulli-frechet` library.
//!
//! Every verb binds one library operation: class construction and
//! inspection, pmf/polynomial conversion in both directions, extremality
//! certificates, vertex enumeration and search, and the convex-order
//! toolkit. Output on stdout is machine readable (JSON objects, JSON lines,
//! or the library's own pmf/polynomial text formats); diagnostics go to
//! stderr. Exit status 0 means success, 2 means the inputs violated a
//! constraint (the message names it), and 1 means an internal consistency
//! check tripped, which is a bug rather than bad input.
//!
//! Rationals are always rendered as strings (`"3/10"`, `"-1/2"`, `"2"`),
//! never as JSON numbers, so downstream tools keep them bit-exact.

mod verbs;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "frechet",
    version,
    about = "Exact algebra for joint Bernoulli distributions with equal margins",
    after_help = "Pmf files hold one `bits value` pair per line (`110 1/5`), x1 leftmost;\n\
                  omitted points carry mass zero, `#` starts a comment, and `-` reads stdin.\n\
                  Rationals are `num/den` in lowest terms; JSON output keeps them as strings."
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

/// Class parameters shared by every verb: d variables, margin p = s/t.
#[derive(Args)]
struct ClassArgs {
    /// Number of Bernoulli variables (at least 2).
    #[arg(long)]
    d: u32,

    /// Numerator of the margin probability p = s/t.
    #[arg(long)]
    s: u64,

    /// Denominator of the margin probability p = s/t.
    #[arg(long)]
    t: u64,
}

/// A pmf input in the sparse text format, or `-` for stdin.
#[derive(Args)]
struct PmfArg {
    /// Pmf file: `bits value` lines, `-` for stdin.
    #[arg(long)]
    pmf: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    /// Only the polynomial, in the canonical text form.
    Poly,
    /// Only the pmf, in the sparse `bits value` text form.
    Pmf,
    /// A JSON document with the full construction data.
    Both,
}

#[derive(Subcommand)]
enum Verb {
    /// Print the class constants (p, q, c, a, kernel dimension, ...).
    ClassInfo {
        #[command(flatten)]
        class: ClassArgs,
    },

    /// Check a pmf file against the class: nonnegativity, total mass, margins.
    Validate {
        #[command(flatten)]
        class: ClassArgs,
        #[command(flatten)]
        pmf: PmfArg,
    },

    /// Map a class member to its polynomial image.
    ToPoly {
        #[command(flatten)]
        class: ClassArgs,
        #[command(flatten)]
        pmf: PmfArg,
    },

    /// Map a polynomial in d-1 variables back to its canonical preimage pmf.
    FromPoly {
        #[command(flatten)]
        class: ClassArgs,
        /// Polynomial file (canonical text form), `-` for stdin.
        #[arg(long)]
        poly: String,
    },

    /// List the 2^(d-1) kernel basis vectors of the pairing map.
    KernelBasis {
        #[command(flatten)]
        class: ClassArgs,
    },

    /// Classify a member as Type0, Type1K, or Type1.
    Classify {
        #[command(flatten)]
        class: ClassArgs,
        #[command(flatten)]
        pmf: PmfArg,
    },

    /// Certify whether a member is an extreme point of the class polytope.
    ExtremalCheck {
        #[command(flatten)]
        class: ClassArgs,
        #[command(flatten)]
        pmf: PmfArg,
    },

    /// Enumerate every extreme point by brute force (gated to small d).
    Enumerate {
        #[command(flatten)]
        class: ClassArgs,
        /// Largest support size to sweep (default d+1, the maximum useful).
        #[arg(long)]
        max_support: Option<u32>,
        /// Lift the d <= 5 gate (the subset count must still be sane).
        #[arg(long)]
        force_large_d: bool,
    },

    /// Run one targeted (J, K) vertex search.
    Search {
        #[command(flatten)]
        class: ClassArgs,
        /// Comma-separated monomials naming the J columns, e.g. `x1x2,x1x3`.
        #[arg(long = "J")]
        j: String,
        /// Comma-separated degree rows K, e.g. `2` or `2,3`.
        #[arg(long = "K")]
        k: String,
    },

    /// Sweep every (J, K) pair up to a J-size bound, appending JSON lines.
    Sweep {
        #[command(flatten)]
        class: ClassArgs,
        /// Largest J size to include in the sweep.
        #[arg(long = "max-J")]
        max_j: usize,
        /// Output file; one JSON record per candidate.
        #[arg(long)]
        out: PathBuf,
        /// Resume cursor: skip every spec numbered below it and append.
        #[arg(long, default_value_t = 0)]
        resume_from: u64,
    },

    /// Build the convex-order minimal member in closed form.
    MinConvex {
        #[command(flatten)]
        class: ClassArgs,
        /// What to print: the polynomial, the pmf, or a full JSON document.
        #[arg(long, value_enum, default_value_t = Emit::Both)]
        emit: Emit,
    },

    /// Evaluate the stop-loss transform of a member's coordinate sum.
    StopLoss {
        #[command(flatten)]
        class: ClassArgs,
        #[command(flatten)]
        pmf: PmfArg,
        /// Threshold, a rational such as `3/2`.
        #[arg(long)]
        l: String,
    },

    /// Compute the crossed moment of order tau of a member.
    Moments {
        #[command(flatten)]
        class: ClassArgs,
        #[command(flatten)]
        pmf: PmfArg,
        /// Moment order, between 2 and d.
        #[arg(long)]
        tau: u32,
    },

    /// Report a member's exclusivity order and whether it permits minimality.
    Exclusivity {
        #[command(flatten)]
        class: ClassArgs,
        #[command(flatten)]
        pmf: PmfArg,
    },

    /// Estimate how often a random coordinate subset supports a member.
    SuccessRate {
        #[command(flatten)]
        class: ClassArgs,
        /// Number of random subsets to draw.
        #[arg(long)]
        trials: u64,
        /// RNG seed; required so every run is reproducible.
        #[arg(long)]
        seed: u64,
    },

    /// Emit a full JSON report for one member: margins, sum law, stop-loss
    /// curve, moments, correlation, exclusivity, certificate, classification.
    Report {
        #[command(flatten)]
        class: ClassArgs,
        #[command(flatten)]
        pmf: PmfArg,
    },
}

/// Failures split by exit status: bad input (2) versus internal bug (1).
#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Internal(String),
}

impl From<bernoulli_frechet::Error> for CliError {
    fn from(e: bernoulli_frechet::Error) -> Self {
        match e {
            bernoulli_frechet::Error::Internal(_) => CliError::Internal(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = verbs::run(cli.verb) {
        eprintln!("error: {e}");
        std::process::exit(match e {
            CliError::Invalid(_) => 2,
            CliError::Internal(_) => 1,
        });
    }
}
