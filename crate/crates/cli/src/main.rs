//! `vamos`: build matroids and their polynomials, check Gram certificates
//! and replay the proof that V10 has the half-plane property.
//!
//! Exit codes: 0 success, 1 failed verification, 2 Gram identity failure,
//! 3 PSD failure, 4 parse or I/O error, 64 usage error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "vamos", version, about = "Exact half-plane property checks for Vamos-type matroids")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Include wall-clock timings (makes output non-deterministic).
    #[arg(long, global = true)]
    pub timings: bool,
    /// Worker threads; 1 runs everything sequentially, 0 picks a default.
    #[arg(long, default_value_t = 0, global = true)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a matroid as canonical JSON.
    #[command(subcommand)]
    Generate(Generate),
    /// Basis-generating polynomial, optionally restricted and differentiated.
    Poly {
        #[command(flatten)]
        target: MinorArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rayleigh difference of a (restricted, differentiated) basis polynomial.
    Rayleigh {
        #[command(flatten)]
        target: MinorArgs,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a Gram certificate: identity against its target, then PSD.
    VerifyCert {
        /// Certificate file, or `@cert1` .. `@cert5` for the bundled ones.
        #[arg(long)]
        cert: String,
        /// Override the certificate's own target: matroid to start from.
        #[arg(long, requires_all = ["i", "j"])]
        matroid: Option<String>,
        #[arg(long, value_delimiter = ',', requires = "matroid")]
        delete: Vec<usize>,
        #[arg(long, value_delimiter = ',', requires = "matroid")]
        contract: Vec<usize>,
        #[arg(long, requires = "matroid")]
        i: Option<usize>,
        #[arg(long, requires = "matroid")]
        j: Option<usize>,
    },
    /// Check a whole half-plane property proof tree.
    CertifyHpp {
        #[arg(long, value_enum, conflicts_with = "tree", required_unless_present = "tree")]
        builtin: Option<BuiltinTree>,
        #[arg(long)]
        tree: Option<PathBuf>,
        /// Directory holding the certificate files the tree references.
        #[arg(long)]
        cert_dir: Option<PathBuf>,
        /// Directory for basis-list references of a `--tree` file.
        #[arg(long, requires = "tree")]
        data_dir: Option<PathBuf>,
    },
    /// Random-line stability test (evidence only, never a proof).
    Sample {
        #[arg(long)]
        matroid: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Evaluate the Rayleigh difference at this pair instead, e.g. `7,8`.
        #[arg(long, value_delimiter = ',', num_args = 2)]
        rayleigh: Option<Vec<usize>>,
    },
    /// Search for an isomorphism between two matroids.
    Isomorphic {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Delete and contract elements (contractions first).
    Minor {
        #[command(flatten)]
        target: MinorArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BuiltinTree {
    V10,
}

/// A matroid is a JSON file path or `@name` for a built-in (`@V10`,
/// `@U4,7`, `@Fano`, `@f7_minus5`, ...).
#[derive(Args, Debug)]
pub struct MinorArgs {
    #[arg(long)]
    pub matroid: String,
    #[arg(long, value_delimiter = ',')]
    pub delete: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    pub contract: Vec<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Generate {
    /// The 2n-element Vamos-type matroid.
    Vamos {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Uniform {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Column matroid of a JSON matrix of rationals (rows of strings).
    FromMatrix {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { commands::EXIT_USAGE } else { 0 });
        }
    };
    match commands::run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
