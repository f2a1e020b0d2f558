//! Command-line front end: argument definitions, dispatch and exit codes.
//!
//! Exit codes: 0 when every emitted check holds, 1 for usage, input and
//! resource errors, 2 when an emitted check fails.

pub mod certificate;
mod commands;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use hat_core::elements::DEFAULT_ELEMENT_CAP;
use hat_core::graph::DEFAULT_VERTEX_BUDGET;
use hat_core::group::DEFAULT_SEED;
use hat_core::presentation::DEFAULT_MAX_COSETS;

pub use certificate::{CertificateDocument, InputHash};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FALSIFIED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "hat", version, about = "Concentric groups and tetravalent half-arc-transitive graphs")]
pub struct Cli {
    /// Seed for randomized group algorithms; HAT_SEED takes precedence.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Largest group enumerated element by element.
    #[arg(long, global = true, default_value_t = DEFAULT_ELEMENT_CAP)]
    pub max_elements: usize,
    /// Largest graph materialized or searched.
    #[arg(long, global = true, default_value_t = DEFAULT_VERTEX_BUDGET)]
    pub max_vertices: usize,
    /// Coset limit for enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_COSETS)]
    pub max_cosets: usize,
    /// Worker threads for parallel searches.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Write the result here instead of stdout.
    #[arg(short = 'o', long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Concentric sequences.
    #[command(subcommand)]
    Concentric(ConcentricCmd),
    /// Finite presentations.
    #[command(subcommand)]
    Present(PresentCmd),
    /// Build an instance and report its certificate.
    #[command(subcommand)]
    Construct(BuildCmd),
    /// Build an instance and verify every claimed property.
    #[command(subcommand)]
    Verify(BuildCmd),
    /// Graph analysis.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Permutation groups.
    #[command(subcommand)]
    Perm(PermCmd),
}

#[derive(Debug, Subcommand)]
pub enum ConcentricCmd {
    /// Check that the generators of a .grp file form a concentric sequence.
    Check {
        #[arg(long)]
        grp: PathBuf,
    },
    /// Search the group of a .grp file for a concentric sequence; writes .ccs.
    Search {
        #[arg(long)]
        grp: PathBuf,
        /// Sequence length; defaults to log2 of the group order.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Write the witness of a catalog group (Z2^m, D8xZ2^m, D8^2xZ2^m, H7, H7xZ2).
    Catalog { name: String },
}

#[derive(Debug, Subcommand)]
pub enum PresentCmd {
    /// Coset enumeration over the trivial subgroup.
    Enumerate {
        #[arg(long)]
        pres: PathBuf,
        /// Also write the regular representation as a .grp file.
        #[arg(long)]
        grp_out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum BuildCmd {
    /// The tau_h construction from a concentric witness.
    Mn(MnArgs),
    /// The wreath construction from a .wri file.
    Wreath {
        #[arg(long)]
        wri: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct MnArgs {
    #[arg(long)]
    pub ccs: PathBuf,
    /// Element of B: `e`, cycle notation or `images: ...` on the points of H.
    #[arg(long, default_value = "e")]
    pub h: String,
    /// Write the coset graph as a .gph file.
    #[arg(long)]
    pub graph_out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum GraphCmd {
    /// Full automorphism group.
    Aut {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Vertex, edge and arc transitivity of a group (default: the full automorphism group).
    Report {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        grp: Option<PathBuf>,
    },
    /// Normal quotient by N.
    Quotient {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        grp: PathBuf,
        #[arg(long)]
        normal: PathBuf,
        #[arg(long)]
        graph_out: Option<PathBuf>,
    },
    /// Basic-type classification.
    Classify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        grp: PathBuf,
        /// Candidate minimal normal subgroups; computed from G when absent.
        #[arg(long)]
        normal: Vec<PathBuf>,
        /// Compute the full automorphism group for the bi-quasiprimitive clause.
        #[arg(long)]
        with_aut: bool,
    },
    /// Cayley graph of a group and its normality.
    Cayley {
        #[arg(long)]
        grp: PathBuf,
        /// .grp file whose generator lines list the connection set.
        #[arg(long)]
        connection: PathBuf,
        #[arg(long)]
        graph_out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum PermCmd {
    /// Order and transitivity of a group.
    Order {
        #[arg(long)]
        grp: PathBuf,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
}

/// Limits and seed shared by every command.
#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub seed: u64,
    pub max_elements: usize,
    pub max_vertices: usize,
    pub max_cosets: usize,
}

/// What a command produced: the text for stdout or `-o`, and whether any
/// check failed.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub text: String,
    pub falsified: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.falsified {
            EXIT_FALSIFIED
        } else {
            EXIT_OK
        }
    }
}

/// The `--seed` value unless HAT_SEED is set.
pub fn effective_seed(flag: u64, env: Option<&str>) -> Result<u64, CliError> {
    match env {
        Some(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("HAT_SEED={v:?} is not an unsigned integer"))),
        None => Ok(flag),
    }
}

pub(crate) fn read_file(path: &Path) -> Result<(String, InputHash), CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let hash = InputHash::of(path, &bytes);
    let text = String::from_utf8(bytes).map_err(|_| CliError::Input {
        path: path.to_path_buf(),
        message: "not UTF-8".into(),
    })?;
    Ok((text, hash))
}

pub(crate) fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn run(cli: &Cli, env_seed: Option<&str>) -> Result<Outcome, CliError> {
    let settings = Settings {
        seed: effective_seed(cli.seed, env_seed)?,
        max_elements: cli.max_elements,
        max_vertices: cli.max_vertices,
        max_cosets: cli.max_cosets,
    };
    if cli.jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    pool.install(|| commands::dispatch(&cli.command, &settings))
}

/// Parses `argv`, runs, writes the output and returns the exit code.
pub fn main_with_args(argv: impl IntoIterator<Item = String>) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let env_seed = std::env::var("HAT_SEED").ok();
    match run(&cli, env_seed.as_deref()) {
        Ok(out) => {
            let written = match &cli.output {
                Some(path) => write_file(path, &out.text),
                None => {
                    print!("{}", out.text);
                    Ok(())
                }
            };
            match written {
                Ok(()) => out.exit_code(),
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_USAGE
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
