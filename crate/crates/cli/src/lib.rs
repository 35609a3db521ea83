//! Command-line front end: each subcommand rebuilds a construction, checks
//! it with exact arithmetic and prints a certificate report.

pub mod commands;
pub mod input;
pub mod parse;
pub mod report;

use clap::{Parser, Subcommand, ValueEnum};
use commands::Outcome;
use report::Timing;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "pflab", version, about = "Exact certificates for bilinear and quadratic Pfister form constructions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
    /// Add wall-clock timing to the report (output is then not reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The 2^n bilinear n-fold forms with no common slot.
    BilinearFamily {
        /// Number of indeterminates: 2, 3 or 4.
        #[arg(long)]
        n: usize,
        /// Check anisotropy, pure bases, pairwise intersections, the empty common slot space and sharpness.
        #[arg(long)]
        verify: bool,
        /// Comma-separated members (labels such as B10 or integer indices) whose common slot space is reported.
        #[arg(long)]
        subset: Option<String>,
    },
    /// Search for a common m-fold factor of the forms in a JSON file.
    CommonFactor {
        /// Fold of the factor, 1 <= m <= n - 1.
        #[arg(long)]
        m: usize,
        /// JSON file with the forms.
        #[arg(long)]
        forms: String,
        /// Number of indeterminates, if the file does not say.
        #[arg(long)]
        n: Option<usize>,
    },
    /// The 2^n - 1 quadratic n-fold forms with no common inseparable quadratic splitting field.
    QuadraticFamily {
        /// Number of indeterminates: 2 or 3.
        #[arg(long)]
        n: usize,
        /// Also check each form's pure parity image and its own slot.
        #[arg(long)]
        verify: bool,
    },
    /// The quaternion triple (b, a], (a, b], (b, ab] and its obstruction certificate.
    QuatTriple {
        /// The element a, e.g. "a1".
        #[arg(long)]
        alpha: String,
        /// The element b, e.g. "a2".
        #[arg(long)]
        beta: String,
        /// Number of indeterminates (default: the largest index mentioned, at least 2).
        #[arg(long)]
        n: Option<usize>,
    },
}

/// Runs one command.
pub fn run(cli: &Cli) -> Outcome {
    let start = Instant::now();
    let mut out = match &cli.command {
        Command::BilinearFamily { n, verify, subset } => commands::bilinear_family(*n, *verify, subset.as_deref()),
        Command::CommonFactor { m, forms, n } => commands::common_factor_cmd(*m, forms, *n),
        Command::QuadraticFamily { n, verify } => commands::quadratic_family(*n, *verify),
        Command::QuatTriple { alpha, beta, n } => commands::quat_triple(alpha, beta, *n),
    };
    if cli.timing {
        out.report.timing = Some(Timing { elapsed_ms: start.elapsed().as_secs_f64() * 1e3 });
    }
    out
}

/// The report rendered in the requested format.
pub fn render(out: &Outcome, format: Format) -> String {
    match format {
        Format::Json => out.report.to_json() + "\n",
        Format::Text => out.report.to_text(),
    }
}
