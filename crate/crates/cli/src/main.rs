use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod format;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] hochschild::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use hochschild::Error as E;
        match self {
            CliError::Core(E::SizeGuard { .. }) => 3,
            CliError::Core(E::ComplexInconsistency(_) | E::NotAChainMap(_)) => 1,
            _ => 2,
        }
    }
}

#[derive(Parser)]
#[command(name = "hochschild", version, about = "Exact classical and secondary Hochschild homology of algebra triples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct Common {
    /// Instance file (TOML).
    pub path: PathBuf,
    /// Recompute over another field, e.g. `Fp:1009`.
    #[arg(long)]
    pub field: Option<String>,
    /// Write a JSON report here.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Refuse to build complexes estimated above this many bytes.
    #[arg(long)]
    pub guard_bytes: Option<u128>,
}

#[derive(Subcommand)]
enum Command {
    /// Check algebra, triple and bimodule axioms.
    Validate {
        #[command(flatten)]
        common: Common,
    },
    /// Homology dimensions in degrees below --max-degree.
    Homology {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "secondary")]
        kind: hochschild::complexes::ComplexKind,
        #[arg(long, default_value_t = 3)]
        max_degree: usize,
        /// Print representative cycles.
        #[arg(long)]
        reps: bool,
    },
    /// Check the long exact sequence through H₂ of the triple.
    Exactseq {
        #[command(flatten)]
        common: Common,
    },
    /// Compare against the matrix triple of the given size.
    Morita {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        matrix_size: Option<usize>,
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
    },
    /// H₁ against Kähler differentials, and the fundamental sequence.
    Kahler {
        #[command(flatten)]
        common: Common,
    },
    /// Write built-in instances as TOML; lists names when given none.
    Fixtures {
        names: Vec<String>,
        /// Write `<name>.toml` files here instead of standard output.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { common } => commands::validate(&common),
        Command::Homology { common, kind, max_degree, reps } => commands::homology(&common, kind, max_degree, reps),
        Command::Exactseq { common } => commands::exactseq(&common),
        Command::Morita { common, matrix_size, max_degree } => commands::morita(&common, matrix_size, max_degree),
        Command::Kahler { common } => commands::kahler(&common),
        Command::Fixtures { names, dir } => commands::fixtures(&names, dir.as_deref()),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
