//! JSON front end. Every subcommand reads one JSON document (from --input,
//! inline or a path, or stdin) and writes one JSON document.
//!
//! Exit status: 0 on success, 1 on a domain error, 2 on a schema error.

mod commands;
mod wire;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::io::{Read, Write};
use std::process::ExitCode;
use wire::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Field {
    /// Exact arithmetic in cyclotomic fields.
    Exact,
    /// Complex floating point with tolerance comparisons.
    Float,
}

#[derive(Debug, Parser)]
#[command(name = "isoclinic", version, about = "Exact computations with formal connections, opers, toral K-types and local Hitchin maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, env = "ISOCLINIC_FIELD", default_value = "exact")]
    pub field: Field,

    /// Number of series terms to read (u-exponents below this bound).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub precision: Option<i64>,

    /// Inline JSON, a file path, or "-" for stdin (the default).
    #[arg(long, global = true)]
    pub input: Option<String>,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<std::path::PathBuf>,

    /// Seed for sampled verifications.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Root data of a simple Lie algebra.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Opers in minimal form.
    #[command(subcommand)]
    Oper(OperCmd),
    /// Formal connections.
    #[command(subcommand)]
    Conn(ConnCmd),
    /// Toral data, lattices and special characters.
    #[command(subcommand)]
    Ktype(KtypeCmd),
    /// Local Hitchin map and its fibers.
    #[command(subcommand)]
    Hitchin(HitchinCmd),
    /// Oper attached to a toral character.
    #[command(subcommand)]
    Langlands(LanglandsCmd),
    /// Airy connections on the projective line.
    #[command(subcommand)]
    Airy(AiryCmd),
    /// Coefficient counts against graded dimensions.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Debug, Subcommand)]
pub enum AlgebraCmd {
    /// {"algebra"}: dimension, degrees, Coxeter number, regular elliptic numbers.
    Info,
}

#[derive(Debug, Subcommand)]
pub enum OperCmd {
    /// An oper {"algebra", "coefficients": [[i, j, v], ...]}: its slope.
    Slope,
    /// An oper: its canonical form.
    Reduce,
    /// {"algebra", "N", "m", "leading": [[i, j, v]], "lower": [[i, j, v]]}.
    Minimal,
    /// An isoclinic canonical form: the minimal oper reducing to it.
    Invert,
}

#[derive(Debug, Subcommand)]
pub enum ConnCmd {
    /// A formal connection against du/u: its canonical form and gauge word.
    Reduce,
    /// A formal connection: refined leading terms of its canonical form.
    RefinedTerms,
}

#[derive(Debug, Subcommand)]
pub enum KtypeCmd {
    /// {"algebra", "m", "N", "Y"?}: toral datum, lattices and structure checks.
    Build,
    /// {"algebra", "m", "N", "Y"?, "character"}: special and relevance tests.
    Special,
}

#[derive(Debug, Subcommand)]
pub enum HitchinCmd {
    /// {"algebra", "form", "against": "dt" | "du/u"}: local Hitchin map.
    Map,
    /// {"algebra", "m", "N", "samples"?, "window"?}: image lattice report.
    VerifyImage,
    /// {"algebra", "m", "N", "character"}: fiber over its image and W_0-orbit.
    Fibers,
}

#[derive(Debug, Subcommand)]
pub enum LanglandsCmd {
    /// {"algebra", "m", "N", "character"}: the minimal oper and its canonical form.
    Param,
}

#[derive(Debug, Subcommand)]
pub enum AiryCmd {
    /// {"algebra", "top"?, "lower"?: [[i, v]]} or {"oper", "N", "m"}.
    Gen,
    /// A global connection: behaviour at infinity.
    Infinity,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCmd {
    /// {"algebra", "m", "N"}: |A_(nu,l)| against dim t_(X,l).
    DimMatch,
}

fn read_input(source: Option<&str>) -> Result<Value, CliError> {
    let text = match source {
        None | Some("-") => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Schema(format!("cannot read stdin: {e}")))?;
            s
        }
        Some(s) if s.trim_start().starts_with(['{', '[']) => s.to_string(),
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::Schema(format!("cannot read {path}: {e}")))?,
    };
    serde_json::from_str(&text).map_err(|e| CliError::Schema(format!("invalid JSON at line {} column {}: {e}", e.line(), e.column())))
}

fn emit(value: &Value, output: Option<&std::path::Path>) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(value).expect("serializable") + "\n";
    match output {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = read_input(cli.input.as_deref()).and_then(|input| commands::dispatch(&cli, &input));
    let (value, code) = match result {
        Ok(v) => (v, 0),
        Err(e) => {
            eprintln!("error: {e}");
            (json!({ "error": { "kind": e.kind(), "message": e.to_string() } }), e.exit_code())
        }
    };
    if let Err(e) = emit(&value, cli.output.as_deref()) {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
