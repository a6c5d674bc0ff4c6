//! `kast`: command-line front end for Kasteleyn matrices, positroid cells
//! and KP divisors of planar bipartite networks in the disk.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 when an input fails
//! validation and 3 when an internal invariant check fails.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kast_core::{Error, ErrorClass};

/// Kasteleyn theory for planar bipartite networks in the disk.
#[derive(Debug, Parser)]
#[command(name = "kast", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by the subcommands that read a network.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Network document to read.
    #[arg(long)]
    pub network: Option<PathBuf>,
    /// Built-in corpus network to use instead of a document.
    #[arg(long)]
    pub corpus: Option<String>,
    /// Edge weights: `unit`, `document` or `seed:N`.
    #[arg(long, default_value = "document")]
    pub weights: String,
    /// Boundary base as comma-separated labels, e.g. `1,4`.
    #[arg(long)]
    pub base: Option<String>,
    /// Signature source: `document` or `construct`. Defaults to the
    /// document signature when present.
    #[arg(long)]
    pub signature: Option<SignatureSource>,
    /// Numerical tolerance for floating-point checks.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Write the output to this path instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignatureSource {
    Document,
    Construct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a network and report its basic data.
    Validate(Common),
    /// List the faces with their weights.
    Faces(Common),
    /// Enumerate almost perfect matchings grouped by boundary.
    Matchings(Common),
    /// List the bases of the positroid.
    Positroid(Common),
    /// Decorated permutation from the strands.
    Perm(Common),
    /// Build the Le-graph of a Le-diagram.
    Legraph {
        /// Rows of the filling separated by `/`, e.g. `1011/01`.
        #[arg(long)]
        rows: String,
        /// Size `n` of the ground set; `k` is the number of rows.
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Kasteleyn signatures.
    Sign {
        #[arg(value_enum)]
        action: SignAction,
        #[command(flatten)]
        common: Common,
    },
    /// The Kasteleyn matrix.
    Kmatrix(Common),
    /// Maximal minors of the Kasteleyn matrix.
    Minors(Common),
    /// Representative matrix, in reduced row echelon form at `--base`.
    Rrep(Common),
    /// The color-swapped network representing the dual point.
    Dual(Common),
    /// Systems of relations on the vertices.
    Relations {
        #[arg(value_enum)]
        action: RelationAction,
        #[command(flatten)]
        common: Common,
    },
    /// Geometric signatures from flows and gauge rays.
    Geom {
        #[arg(value_enum)]
        action: GeomAction,
        #[command(flatten)]
        common: Common,
    },
    /// Apply a local move given as JSON, e.g. `{"kind":"square","face":3}`.
    Moves {
        #[arg(long = "move")]
        mv: String,
        #[command(flatten)]
        common: Common,
    },
    /// KP-II solitons and divisors.
    Kp {
        #[arg(value_enum)]
        action: KpAction,
        /// Soliton document to read.
        #[arg(long)]
        soliton: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// The built-in corpus.
    Corpus {
        #[arg(value_enum)]
        action: CorpusAction,
        /// Seed of the random networks.
        #[arg(long, default_value_t = kast_core::corpus::DEFAULT_SEED)]
        seed: u64,
        /// Number of random networks.
        #[arg(long, default_value_t = kast_core::corpus::DEFAULT_RANDOM_COUNT)]
        count: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignAction {
    Construct,
    Validate,
    GaugeCompare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RelationAction {
    Solve,
    Kernel,
    Lam,
    Weak,
    Export,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeomAction {
    Signature,
    EdgeVectors,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KpAction {
    Field,
    Dressing,
    Curve,
    Divisor,
    DivisorGeo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CorpusAction {
    Generate,
    Check,
    List,
}

/// Failure of a command, mapped to an exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or unreadable files.
    Usage(String),
    /// An error reported by the library.
    Core(Error),
    /// A check performed by the command itself failed.
    Invariant(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

macro_rules! from_core {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Core(Error::from(e))
            }
        })*
    };
}

from_core!(
    kast_core::error::GraphError,
    kast_core::error::PositroidError,
    kast_core::error::WeightError,
    kast_core::error::KasteleynError,
    kast_core::error::GeometryError,
    kast_core::error::RelationError,
    kast_core::error::KpError
);

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(e) => match e.class() {
                ErrorClass::Validation => 2,
                ErrorClass::Invariant => 3,
            },
            CliError::Invariant(_) => 3,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => format!("usage error: {m}"),
            CliError::Core(e) => format!("error: {e}"),
            CliError::Invariant(m) => format!("invariant violated: {m}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("{}", first.trim_start_matches("error: ").trim());
            return ExitCode::from(1);
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
