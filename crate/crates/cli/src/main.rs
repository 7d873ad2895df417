//! `persistence-kernel`: JSON in, JSON out, one subcommand per operation.

mod commands;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use persistence_kernel_core::json::{schema_for, JsonError, SCHEMA_KINDS};
use persistence_kernel_core::Error;
use serde_json::Value;

#[derive(Parser, Debug)]
#[command(
    name = "persistence-kernel",
    version,
    about = "Exact multiparameter persistence over JSON"
)]
#[command(args_conflicts_with_subcommands = true, arg_required_else_help = true)]
struct Cli {
    /// Print the JSON schema of an input type and exit.
    #[arg(long, value_name = "TYPE")]
    schema: Option<String>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Debug, Clone)]
pub struct Input {
    /// Input JSON file; stdin when absent or "-".
    pub input: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SetKind {
    Upset,
    Downset,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check an input and report {"ok": true}.
    Validate {
        #[command(flatten)]
        input: Input,
        /// Read a {"pieces"} object as this kind.
        #[arg(long = "as", value_enum)]
        kind: Option<SetKind>,
    },
    /// Finite encoding of a module, or the uptight poset of {"domain", "upsets"}.
    Encode {
        #[command(flatten)]
        input: Input,
    },
    /// Dimension of a module, or membership in a set, at a point.
    Hilbert {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long = "as", value_enum)]
        kind: Option<SetKind>,
    },
    /// Rank of the structure map between two comparable points.
    Rank {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        /// Also print the structure map.
        #[arg(long)]
        map: bool,
        #[arg(long = "box", allow_hyphen_values = true)]
        bx: Option<String>,
    },
    /// Matlis dual.
    Dual {
        #[command(flatten)]
        input: Input,
        #[arg(long = "box", allow_hyphen_values = true)]
        bx: Option<String>,
    },
    /// Localization along a face, its global support, or the quotient restriction.
    Localize {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        face: String,
        #[arg(long, conflicts_with = "restrict")]
        support: bool,
        #[arg(long)]
        restrict: bool,
        #[arg(long = "box", allow_hyphen_values = true)]
        bx: Option<String>,
    },
    /// Closed socle along a face.
    Socle {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        face: String,
        #[arg(long = "box", allow_hyphen_values = true)]
        bx: Option<String>,
    },
    /// Top along a face.
    Top {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        face: String,
        #[arg(long = "box", allow_hyphen_values = true)]
        bx: Option<String>,
    },
    /// Hom(k[U], k[D]) for {"upset", "downset"}, or injectivity and surjectivity of a homomorphism.
    Hom {
        #[command(flatten)]
        input: Input,
        #[arg(long = "box", allow_hyphen_values = true)]
        bx: Option<String>,
    },
    /// Validate a monomial matrix.
    FringeCheck {
        #[command(flatten)]
        input: Input,
    },
    /// The module presented by a monomial matrix.
    FringeEval {
        #[command(flatten)]
        input: Input,
        #[arg(long = "box", allow_hyphen_values = true)]
        bx: Option<String>,
    },
    /// A fringe presentation of a module.
    FringeOf {
        #[command(flatten)]
        input: Input,
        #[arg(long = "box", allow_hyphen_values = true)]
        bx: Option<String>,
    },
    /// Pull back an encoding's module, or a monomial matrix along {"morphism", "fringe"}.
    Pullback {
        #[command(flatten)]
        input: Input,
    },
    /// Canonical primary decomposition of a downset or a module.
    Decompose {
        #[command(flatten)]
        input: Input,
        /// Only the primary component along this face.
        #[arg(long, allow_hyphen_values = true)]
        face: Option<String>,
        #[arg(long = "box", allow_hyphen_values = true)]
        bx: Option<String>,
    },
    /// Minimal primary decomposition of a downset.
    DecomposeMin {
        #[command(flatten)]
        input: Input,
    },
    /// Irreducible decomposition of a downset.
    Irreducible {
        #[command(flatten)]
        input: Input,
    },
    /// QR code, a Gen space, or a death functor value.
    Qr {
        #[command(flatten)]
        input: Input,
        /// Birth face; with --at selects the birth degree.
        #[arg(long, allow_hyphen_values = true, requires = "at")]
        face: Option<String>,
        /// Birth coset representative.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
        /// Element of Gen as comma-separated rationals.
        #[arg(long, allow_hyphen_values = true, requires_all = ["at", "death_at"])]
        phi: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "death_at")]
        death_face: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "phi")]
        death_at: Option<String>,
        #[arg(long = "box", allow_hyphen_values = true)]
        bx: Option<String>,
    },
    /// Recover a module from its QR code.
    Recover {
        #[command(flatten)]
        input: Input,
        #[arg(long = "box", allow_hyphen_values = true)]
        bx: Option<String>,
    },
    /// Elder submodules, quotient and morphism at a birth degree.
    Elder {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        face: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long = "box", allow_hyphen_values = true)]
        bx: Option<String>,
    },
    /// Functorial bar code of a one-parameter module.
    Barcode {
        #[command(flatten)]
        input: Input,
        /// Print bars as decorated intervals, one line per bar.
        #[arg(long, conflicts_with_all = ["interval", "birth"])]
        ascii: bool,
        /// Print the interval module of a bar such as "[0, 1)" instead.
        #[arg(long, allow_hyphen_values = true)]
        interval: Option<String>,
        /// Elder projection source, e.g. "closed:0", "open:1/2" or "-inf".
        #[arg(long, allow_hyphen_values = true, requires = "death")]
        birth: Option<String>,
        /// Elder projection target, e.g. "open:2", "closed:1" or "inf".
        #[arg(long, allow_hyphen_values = true, requires = "birth")]
        death: Option<String>,
    },
}

impl Input {
    pub fn read(&self) -> Result<Value, JsonError> {
        let text = match &self.input {
            Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p)
                .map_err(|e| JsonError::Schema(format!("cannot read {}: {e}", p.display())))?,
            _ => {
                let mut s = String::new();
                std::io::stdin()
                    .read_to_string(&mut s)
                    .map_err(|e| JsonError::Schema(format!("cannot read stdin: {e}")))?;
                s
            }
        };
        serde_json::from_str(&text).map_err(|e| JsonError::Schema(format!("invalid JSON: {e}")))
    }
}

/// Variant name of a library error, e.g. "NonCommuting".
fn invariant_name(e: &Error) -> String {
    format!("{e:?}")
        .chars()
        .take_while(|c| c.is_alphanumeric())
        .collect()
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(s: &str) {
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(kind) = cli.schema {
        return match schema_for(&kind) {
            Some(doc) => {
                emit(&format!(
                    "{}\n",
                    serde_json::to_string_pretty(&doc).expect("schema serializes")
                ));
                ExitCode::SUCCESS
            }
            None => {
                eprintln!(
                    "error: unknown schema type {kind:?}; known: {}",
                    SCHEMA_KINDS.join(", ")
                );
                ExitCode::from(2)
            }
        };
    }
    let Some(command) = cli.command else {
        eprintln!("error: no subcommand given");
        return ExitCode::from(2);
    };
    match commands::run(command) {
        Ok(commands::Output::Json(v)) => {
            emit(&format!(
                "{}\n",
                serde_json::to_string_pretty(&v).expect("output serializes")
            ));
            ExitCode::SUCCESS
        }
        Ok(commands::Output::Text(s)) => {
            emit(&s);
            ExitCode::SUCCESS
        }
        Err(JsonError::Schema(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(JsonError::Math(e)) => {
            eprintln!("error: {}: {e}", invariant_name(&e));
            ExitCode::from(1)
        }
    }
}
