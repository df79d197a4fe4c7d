//! `sftdim`: K-theoretic invariants of a shift of finite type from the command line.
//!
//! Exit codes: 0 success, 2 validation or input error, 3 undecided result,
//! 4 a property check failed (invalid witness, failed self-check).

mod commands;
mod input;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

use sftdim::{Sft, SftConfig, SftError, ShiftEquivalenceWitness};

use input::{parse_element, read_matrix, MatrixInput};
use report::{envelope, render, Format, Outcome};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error(transparent)]
    Sft(#[from] SftError),
}

#[derive(Parser)]
#[command(
    name = "sftdim",
    version,
    about = "Exact K-theory invariants of shifts of finite type"
)]
struct Cli {
    /// Power-iteration tolerance for Perron data and traces
    #[arg(long, global = true, default_value = "1e-12")]
    tol: f64,
    /// Iteration cap for positivity and K1 equality searches
    #[arg(long, global = true, default_value_t = 64)]
    jmax: usize,
    /// Largest entry of R tried by se-search
    #[arg(long = "entry-bound", global = true, default_value_t = 2)]
    entry_bound: u64,
    /// Largest lag tried by se-search
    #[arg(long, global = true, default_value_t = 3)]
    kmax: usize,
    /// Refuse se-search when more candidate matrices R than this would be enumerated
    #[arg(long = "search-cap", global = true, default_value_t = 4_000_000)]
    search_cap: u64,
    /// Power-iteration cap
    #[arg(
        long = "max-iters",
        global = true,
        env = "SFTDIM_MAX_ITERS",
        default_value_t = 1_000_000
    )]
    max_iters: usize,
    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

const MATRIX: &str = "Matrix file (JSON rows or whitespace-separated rows), or - for stdin";
const ELEMENT: &str = "Element literal {\"flavor\":\"s|u|h|k0|k1\",\"payload\":..,\"level\":N}, {\"z\":..,\"level\":N} for a hom, or @file. Matrix payloads may be \"I\", \"0\", \"A\" or \"A^n\"";

#[derive(Subcommand)]
enum Command {
    /// Classification, period, minimal polynomial, Perron data and self-checks
    Info {
        #[arg(help = MATRIX)]
        matrix: PathBuf,
    },
    /// Centralizer and commutator lattices, K1 invariant factors, level groups
    Kgroups {
        #[arg(help = MATRIX)]
        matrix: PathBuf,
    },
    /// Graded product of two cylinder classes (k0 or k1)
    Mul {
        #[arg(help = MATRIX)]
        matrix: PathBuf,
        #[arg(help = ELEMENT)]
        a: String,
        #[arg(help = ELEMENT)]
        b: String,
    },
    /// Module action: `s k0` (right) or `k0 u` (left)
    Act {
        #[arg(help = MATRIX)]
        matrix: PathBuf,
        #[arg(help = ELEMENT)]
        a: String,
        #[arg(help = ELEMENT)]
        b: String,
    },
    /// Equality of two elements of the same flavor
    Equal {
        #[arg(help = MATRIX)]
        matrix: PathBuf,
        #[arg(help = ELEMENT)]
        a: String,
        #[arg(help = ELEMENT)]
        b: String,
    },
    /// Trace of an s, u or k0 element
    Trace {
        #[arg(help = MATRIX)]
        matrix: PathBuf,
        #[arg(help = ELEMENT)]
        element: String,
    },
    /// Membership of a k0 element in the subring R_A
    Ra {
        #[arg(help = MATRIX)]
        matrix: PathBuf,
        #[arg(help = ELEMENT)]
        element: String,
    },
    /// Hom <-> unstable correspondence, optionally evaluating the hom on an s element
    Duality {
        #[arg(help = MATRIX)]
        matrix: PathBuf,
        #[arg(help = ELEMENT)]
        element: String,
        /// Stable element to evaluate the hom on
        #[arg(long)]
        eval: Option<String>,
    },
    /// Check a witness file {"R":..,"S":..,"k":..} for A ~ B
    SeVerify {
        #[arg(help = MATRIX)]
        a: PathBuf,
        #[arg(help = MATRIX)]
        b: PathBuf,
        witness: PathBuf,
    },
    /// Bounded search for a shift-equivalence witness
    SeSearch {
        #[arg(help = MATRIX)]
        a: PathBuf,
        #[arg(help = MATRIX)]
        b: PathBuf,
    },
    /// Cyclic tower decomposition of an irreducible matrix
    Decompose {
        #[arg(help = MATRIX)]
        matrix: PathBuf,
    },
}

impl Cli {
    fn config(&self) -> SftConfig {
        SftConfig {
            perron_tol: self.tol,
            perron_max_iters: self.max_iters,
            j_max: self.jmax,
            ..SftConfig::default()
        }
    }

    fn sft(&self, m: &MatrixInput) -> Sft {
        Sft::with_config(m.adj.clone(), self.config())
    }
}

fn read_witness(path: &Path) -> Result<ShiftEquivalenceWitness, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        CliError::Validation(format!(
            "{}: line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

fn run(cli: &Cli) -> Result<(&'static str, Vec<MatrixInput>, Outcome), CliError> {
    let one = |path: &Path| -> Result<(MatrixInput, Sft), CliError> {
        let m = read_matrix(path)?;
        let s = cli.sft(&m);
        Ok((m, s))
    };
    Ok(match &cli.command {
        Command::Info { matrix } => {
            let (m, s) = one(matrix)?;
            ("info", vec![m], commands::info(&s))
        }
        Command::Kgroups { matrix } => {
            let (m, s) = one(matrix)?;
            ("kgroups", vec![m], commands::kgroups(&s)?)
        }
        Command::Mul { matrix, a, b } => {
            let (m, s) = one(matrix)?;
            let (x, y) = (parse_element(a, &s)?, parse_element(b, &s)?);
            ("mul", vec![m], commands::mul(&s, &x, &y)?)
        }
        Command::Act { matrix, a, b } => {
            let (m, s) = one(matrix)?;
            let (x, y) = (parse_element(a, &s)?, parse_element(b, &s)?);
            ("act", vec![m], commands::act(&s, &x, &y)?)
        }
        Command::Equal { matrix, a, b } => {
            let (m, s) = one(matrix)?;
            let (x, y) = (parse_element(a, &s)?, parse_element(b, &s)?);
            ("equal", vec![m], commands::equal(&s, &x, &y)?)
        }
        Command::Trace { matrix, element } => {
            let (m, s) = one(matrix)?;
            let e = parse_element(element, &s)?;
            ("trace", vec![m], commands::trace(&s, &e)?)
        }
        Command::Ra { matrix, element } => {
            let (m, s) = one(matrix)?;
            let e = parse_element(element, &s)?;
            ("ra", vec![m], commands::ra(&s, &e)?)
        }
        Command::Duality {
            matrix,
            element,
            eval,
        } => {
            let (m, s) = one(matrix)?;
            let e = parse_element(element, &s)?;
            let v = eval.as_deref().map(|x| parse_element(x, &s)).transpose()?;
            ("duality", vec![m], commands::duality(&s, &e, v.as_ref())?)
        }
        Command::SeVerify { a, b, witness } => {
            let (ma, sa) = one(a)?;
            let (mb, sb) = one(b)?;
            let w = read_witness(witness)?;
            ("se-verify", vec![ma, mb], commands::se_verify(&sa, &sb, w)?)
        }
        Command::SeSearch { a, b } => {
            let (ma, sa) = one(a)?;
            let (mb, sb) = one(b)?;
            let out = commands::se_search(&sa, &sb, cli.kmax, cli.entry_bound, cli.search_cap)?;
            ("se-search", vec![ma, mb], out)
        }
        Command::Decompose { matrix } => {
            let (m, s) = one(matrix)?;
            ("decompose", vec![m], commands::decompose(&s)?)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((command, inputs, outcome)) => {
            let refs: Vec<&MatrixInput> = inputs.iter().collect();
            print!(
                "{}",
                render(&envelope(command, &refs, &outcome), cli.format)
            );
            ExitCode::from(outcome.status.code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
