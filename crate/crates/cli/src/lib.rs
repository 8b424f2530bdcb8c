//! Command-line driver: argument parsing, dispatch and JSON reports.

use std::fs;
use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;
use sharpflat::FormParams;

pub mod codec;
mod commands;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] sharpflat::Error),
    #[error("malformed input: {0}")]
    Input(String),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Parser)]
#[command(name = "sharpflat", version, about = "Logarithmic matrices and sharp/flat factorisation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit the level-n logarithmic matrix.
    Logmatrix(JobArgs),
    /// Plus/minus blocks of C_1⋯C_2m when a_p = 0.
    Pollack(JobArgs),
    /// Factor a one-variable pair {"mu_alpha", "mu_beta"}.
    Factor1(JobArgs),
    /// Factor a quadruple {"parts": [L_αα, L_βα, L_αβ, L_ββ]}.
    Factor2(JobArgs),
    /// Evaluate a series at characters of the given levels.
    Eval(JobArgs),
    /// Run every verification suite on synthesised data.
    Verify(JobArgs),
    /// Seeded synthesis, factorisation and comparison.
    Roundtrip(JobArgs),
    /// Growth-order scan of a series (default: log(1+X)/X).
    Growth(JobArgs),
}

#[derive(Debug, Clone, Args)]
pub struct JobArgs {
    #[arg(long = "p")]
    pub p: u32,
    #[arg(long = "ap", default_value_t = 0, allow_hyphen_values = true)]
    pub ap: i64,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub eps: i64,
    #[arg(long, default_value_t = 30)]
    pub deg: usize,
    /// Degree in Y for two-variable work; defaults to --deg.
    #[arg(long)]
    pub degy: Option<usize>,
    #[arg(long, default_value_t = 60)]
    pub prec: u32,
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    pub levels: Vec<u32>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Matrix level; defaults to the least n with p^n ≥ deg.
    #[arg(long)]
    pub level: Option<u32>,
    /// Variable fixed first by `eval` on two-variable input.
    #[arg(long, default_value = "X", value_parser = ["X", "Y"])]
    pub axis: String,
    /// Growth exponents for `growth`.
    #[arg(long, default_value_t = 0.0)]
    pub u: f64,
    #[arg(long, default_value_t = 0.0)]
    pub v: f64,
    /// Allowed growth bound, in digits.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub bound: f64,
    /// Least residual (in digits) an identity must reach to pass.
    #[arg(long, default_value_t = 20)]
    pub threshold: i64,
}

impl JobArgs {
    pub fn params(&self) -> Result<FormParams, CliError> {
        Ok(FormParams::with_precision(self.p, self.ap, self.eps, self.prec)?)
    }

    pub fn degy(&self) -> usize {
        self.degy.unwrap_or(self.deg)
    }

    fn read_input(&self) -> Result<Value, CliError> {
        let text = match &self.input {
            Some(path) => fs::read_to_string(path)?,
            None => {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s)?;
                s
            }
        };
        Ok(serde_json::from_str(&text)?)
    }
}

/// A JSON document plus the verification failures it records.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub body: serde_json::Map<String, Value>,
    pub failures: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> Value {
        let mut body = self.body.clone();
        body.insert("failures".into(), Value::from(self.failures.clone()));
        Value::Object(body)
    }
}

pub fn run(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Logmatrix(a) => commands::logmatrix(a),
        Command::Pollack(a) => commands::pollack(a),
        Command::Factor1(a) => commands::factor1(a),
        Command::Factor2(a) => commands::factor2(a),
        Command::Eval(a) => commands::eval(a),
        Command::Verify(a) => commands::verify(a),
        Command::Roundtrip(a) => commands::roundtrip(a),
        Command::Growth(a) => commands::growth(a),
    }
}

pub fn job_args(command: &Command) -> &JobArgs {
    match command {
        Command::Logmatrix(a)
        | Command::Pollack(a)
        | Command::Factor1(a)
        | Command::Factor2(a)
        | Command::Eval(a)
        | Command::Verify(a)
        | Command::Roundtrip(a)
        | Command::Growth(a) => a,
    }
}
