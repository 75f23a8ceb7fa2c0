//! `dgk`: build, check and take apart finite double groupoids from JSON files.

mod commands;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dgk_core::{Error, Report};

#[derive(Debug, Parser)]
#[command(name = "dgk", version, about = "Finite double groupoids: validation, decomposition and reconstruction")]
struct Cli {
    /// Load input files without running the axiom checks.
    #[arg(long, global = true)]
    no_validate: bool,

    /// Print reports as JSON.
    #[arg(long, global = true)]
    json: bool,

    /// Write the result here instead of stdout (a directory for `fixtures`).
    #[arg(short = 'o', long = "output", global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    #[command(subcommand)]
    verb: Verb,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Check every axiom of a groupoid, bundle, double groupoid, extension or diagram file.
    Validate { file: PathBuf },
    /// Flags, size, corner table and theta table of a double groupoid.
    Analyze { file: PathBuf },
    /// Emit the frame double groupoid.
    Frame { file: PathBuf },
    /// Emit the core groupoid.
    Core { file: PathBuf },
    /// Emit the kernel bundle.
    Kernel { file: PathBuf },
    /// Emit the corner functions with the formula column.
    Corners { file: PathBuf },
    /// Split a double groupoid into extension data over its frame.
    Decompose { file: PathBuf },
    /// Build the double groupoid described by extension data.
    Rebuild { file: PathBuf },
    /// Decompose, rebuild and check the isomorphism witness.
    Roundtrip { file: PathBuf },
    /// Emit the diagonal factorization of a slim double groupoid with filling.
    Diagonal { file: PathBuf },
    /// Emit the square double groupoid of a factorization diagram.
    Square { file: PathBuf },
    /// Check both round trips between slim double groupoids and factorizations.
    #[command(name = "roundtrip-slim")]
    RoundtripSlim { file: PathBuf },
    /// Slim, filling, vacant and fusion verdicts.
    Classify { file: PathBuf },
    /// Reduce a word in the free product of the edge groupoids.
    Reduce {
        /// Letters as TAG:arrow, e.g. "V:3 H:1".
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// Start object, required for the empty word.
        #[arg(long)]
        at: Option<usize>,
        file: PathBuf,
    },
    /// Emit the built-in fixtures.
    Fixtures {
        /// Write every fixture as NAME.json into the -o directory.
        #[arg(long)]
        emit_all: bool,
        /// A single fixture to print.
        name: Option<String>,
    },
}

/// What a command produced: data to write, and the checks it ran.
pub struct Outcome {
    pub text: String,
    pub report: Option<Report>,
}

impl Outcome {
    fn passed(&self) -> bool {
        self.report.as_ref().is_none_or(Report::passed)
    }
}

fn input_error(e: &Error) -> bool {
    matches!(e, Error::Format { .. } | Error::Io(_) | Error::NotChained(_))
}

fn write_output(path: Option<&Path>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(text.as_bytes())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = commands::run(&cli);
    match result {
        Ok(outcome) => {
            let target = match cli.verb {
                Verb::Fixtures { .. } => None,
                _ => cli.output.as_deref(),
            };
            if let Err(e) = write_output(target, &outcome.text) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if outcome.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Error::Invalid(report)) => {
            if cli.json {
                print!("{}", dgk_core::format::emit_json(&*report));
            } else {
                print!("{report}");
            }
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if input_error(&e) { 2 } else { 1 })
        }
    }
}
