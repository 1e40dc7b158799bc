//! Command-line surface over the `fqdio` library.

pub mod commands;
pub mod output;
pub mod parse;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fqdio::exponents::Filter;

pub use commands::{corpus_specs, Outcome};
pub use parse::SeriesSpec;

#[derive(Debug, Parser)]
#[command(name = "fqdio", version, about = "Diophantine approximation in F_q((1/T))")]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
    #[command(flatten)]
    pub cfg: RunConfig,
}

/// Options shared by every subcommand; together they determine the output.
#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Characteristic.
    #[arg(long, global = true, default_value_t = 2)]
    pub p: u32,
    /// Extension degree.
    #[arg(long, global = true, default_value_t = 1)]
    pub f: u32,
    /// Modulus in `g`, e.g. `g^2+g+1`.
    #[arg(long, global = true)]
    pub modulus: Option<String>,
    /// Series spec, e.g. `mahler` or `rational:(T)/(T^2+1)`.
    #[arg(long, global = true)]
    pub series: Option<String>,
    /// Polynomial in X over F_q[T], e.g. `(T)*X^2+X+1`.
    #[arg(long, global = true)]
    pub poly: Option<String>,
    /// Largest X-degree of enumerated polynomials.
    #[arg(long, global = true, default_value_t = 1)]
    pub n: usize,
    /// First height level reported by level-wise estimates.
    #[arg(long, global = true, default_value_t = 1)]
    pub hmin: u32,
    /// Largest coefficient degree of enumerated polynomials.
    #[arg(long, global = true, default_value_t = 4)]
    pub hmax: u32,
    /// Largest multiplier degree for lambda estimates.
    #[arg(long, global = true, default_value_t = 4)]
    pub dmax: u32,
    /// Initial working precision in terms.
    #[arg(long, global = true, default_value_t = 64)]
    pub prec: i64,
    /// Maximum series terms before giving up on a certification.
    #[arg(long, global = true, default_value_t = 4096)]
    pub max_terms: usize,
    /// Maximum enumerated tuples per estimate.
    #[arg(long, global = true, default_value_t = fqdio::exponents::DEFAULT_ENUM_BUDGET)]
    pub enum_budget: u64,
    /// Seed for random corpus series and verification instances.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Polynomial filter: all, separable or irreducible.
    #[arg(long, global = true, default_value_t = Filter::All)]
    pub filter: Filter,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Directory receiving report.json, tables.csv and witnesses.txt.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Partial quotients to compute.
    #[arg(long, global = true, default_value_t = 10)]
    pub terms: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Cmd {
    /// Finite-window exponent estimate.
    Exponent {
        #[arg(value_enum)]
        kind: ExponentKind,
    },
    /// Continued fraction expansion.
    Cf,
    /// Newton polygon and base-field roots of --poly.
    Roots,
    /// Reduce --poly at --series.
    Reduce {
        #[arg(value_enum)]
        which: ReduceKind,
    },
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Exponent tables and a heuristic class suggestion.
    Classify,
    /// Named series.
    Corpus {
        #[arg(value_enum)]
        action: CorpusAction,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExponentKind {
    W,
    Wstar,
    What,
    Lambda,
    Lambdahat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReduceKind {
    Cartop,
    Pr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Identities,
    Reductions,
    Inequalities,
    Frobenius,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CorpusAction {
    List,
}

/// Exit code for a run whose verification reports contain failures.
pub const EXIT_VERIFY_FAILED: i32 = 2;
/// Exit code for parse, semantic and I/O errors.
pub const EXIT_ERROR: i32 = 1;

/// Parse `argv` (including the program name), run, print, and return the
/// exit code.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    finish(&cli.cfg, commands::run(&cli))
}

/// Emit a command result and map it to the exit-code contract.
pub fn finish(cfg: &RunConfig, result: fqdio::Result<Outcome>) -> i32 {
    match result.and_then(|out| Ok((output::emit(cfg, &out)?, out.ok))) {
        Ok((text, ok)) => {
            print!("{text}");
            if ok {
                0
            } else {
                EXIT_VERIFY_FAILED
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn cfg() -> RunConfig {
        Cli::try_parse_from(["fqdio", "corpus", "list"]).unwrap().cfg
    }

    #[test]
    fn exit_codes() {
        let good = Outcome { json: json!({}), table: Vec::new(), witnesses: Vec::new(), ok: true };
        assert_eq!(finish(&cfg(), Ok(good.clone())), 0);
        assert_eq!(finish(&cfg(), Ok(Outcome { ok: false, ..good })), EXIT_VERIFY_FAILED);
        assert_eq!(finish(&cfg(), Err(fqdio::Error::Semantic("x".into()))), EXIT_ERROR);
    }
}
