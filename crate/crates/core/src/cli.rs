//! Command-line front end.
//!
//! Subcommands: construct (tower table), certify (full certificate),
//! witness (first level with b below eta), height (radical closed form or
//! minimal-polynomial route), measure (Mahler measure).
//!
//! Exit codes: 0 success, 1 domain/validation error, 2 resource exhaustion
//! (precision, interval, scan cap) or witness-not-reached, 3 I/O error.
//! Errors are a single JSON line on stderr.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::Integer;

use crate::bigreal::PrecisionPolicy;
use crate::certify::{self, WitnessOutcome};
use crate::error::{Error, Result};
use crate::heights;
use crate::poly::IntPolynomial;
use crate::report;
use crate::tower::{self, ConstructionParams, IntervalRule};

/// Environment override for the precision ceiling.
pub const ENV_MAX_BITS: &str = "HEIGHTTOWER_MAX_BITS";

#[derive(Debug, Parser)]
#[command(
    name = "heighttower",
    version,
    about = "Radical prime towers with certified height floors and witness sequences"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
pub struct CommonOpts {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Write to this path instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Starting precision in bits.
    #[arg(long)]
    pub initial_bits: Option<u32>,
    /// Precision ceiling in bits (HEIGHTTOWER_MAX_BITS overrides the default).
    #[arg(long)]
    pub max_bits: Option<u32>,
    /// Enclosure width target.
    #[arg(long)]
    pub target_width: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TowerOpts {
    /// Degree exponent gamma in (0, 1].
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// Epsilon: bracket exponent term in the general variant, and the
    /// epsilon used by the witness metrics.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Delta variant: p in [d^delta, 2 d^delta]; requires gamma = 1.
    #[arg(long)]
    pub delta: Option<f64>,
    /// Number of tower levels.
    #[arg(long, default_value_t = 4)]
    pub horizon: u32,
    /// Bit-size cap on p.
    #[arg(long, default_value_t = tower::DEFAULT_MAX_P_BITS)]
    pub max_p_bits: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the tower and print its levels.
    Construct {
        #[command(flatten)]
        tower: TowerOpts,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Build, measure, audit, and report the full certificate.
    Certify {
        #[command(flatten)]
        tower: TowerOpts,
        /// Witness threshold recorded in the report.
        #[arg(long, default_value_t = 0.5)]
        eta: f64,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Find the first level whose certified b drops below eta.
    Witness {
        #[command(flatten)]
        tower: TowerOpts,
        /// Witness threshold.
        #[arg(long)]
        eta: f64,
        /// Level cap for the search (defaults to the horizon).
        #[arg(long = "cap")]
        cap: Option<u32>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Height of p^(1/d) (give --p and --d) or of a root of --poly.
    Height {
        /// Radicand prime.
        #[arg(long)]
        p: Option<Integer>,
        /// Degree prime.
        #[arg(long)]
        d: Option<Integer>,
        /// Minimal polynomial, "c0,c1,...,cd" or "x^3-2".
        #[arg(long)]
        poly: Option<String>,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Mahler measure of an integer polynomial.
    Measure {
        /// Polynomial, "c0,c1,...,cd" or "x^3-2".
        #[arg(long)]
        poly: String,
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn precision_from(common: &CommonOpts) -> Result<PrecisionPolicy> {
    let defaults = PrecisionPolicy::default();
    let mut max_bits = defaults.max_bits;
    if let Ok(text) = std::env::var(ENV_MAX_BITS) {
        max_bits = text.trim().parse::<u32>().map_err(|_| {
            Error::InvalidParams(format!("{ENV_MAX_BITS} must be a positive integer, got {text:?}"))
        })?;
    }
    if let Some(mb) = common.max_bits {
        max_bits = mb;
    }
    PrecisionPolicy::new(
        common.initial_bits.unwrap_or(defaults.initial_bits),
        max_bits,
        common.target_width.unwrap_or(defaults.target_width),
    )
}

fn params_from(opts: &TowerOpts, common: &CommonOpts) -> Result<ConstructionParams> {
    let (rule, metric_epsilon) = match (opts.epsilon, opts.delta) {
        (None, None) => {
            return Err(Error::InvalidParams(
                "choose a bracket rule: --epsilon <e> or --delta <d>".into(),
            ))
        }
        (Some(e), None) => (IntervalRule::General { epsilon: e }, None),
        (None, Some(d)) => (IntervalRule::Delta { delta: d }, None),
        // delta construction with an explicit metric epsilon
        (Some(e), Some(d)) => (IntervalRule::Delta { delta: d }, Some(e)),
    };
    let params = ConstructionParams {
        gamma: opts.gamma,
        rule,
        metric_epsilon,
        horizon: opts.horizon,
        precision: precision_from(common)?,
        max_p_bits: opts.max_p_bits,
    };
    params.validate()?;
    Ok(params)
}

fn parse_poly(text: &str) -> Result<IntPolynomial> {
    IntPolynomial::parse(text)
}

enum Payload {
    Ok(String),
    /// Payload plus nonzero exit (witness cap reached).
    Soft(String, i32),
}

fn execute(command: &Command) -> Result<Payload> {
    match command {
        Command::Construct { tower: t, common } => {
            let params = params_from(t, common)?;
            let levels = tower::build_tower(&params)?;
            let text = match common.format {
                OutputFormat::Json => report::tower_to_json(&levels, &params),
                OutputFormat::Csv => report::tower_to_csv(&levels),
                OutputFormat::Text => report::tower_to_text(&levels),
            };
            Ok(Payload::Ok(text))
        }
        Command::Certify { tower: t, eta, common } => {
            let params = params_from(t, common)?;
            let report_data = certify::audit_report(&params, *eta)?;
            let text = match common.format {
                OutputFormat::Json => report::report_to_json(&report_data),
                OutputFormat::Csv => report::report_to_csv(&report_data),
                OutputFormat::Text => report::report_to_text(&report_data),
            };
            Ok(Payload::Ok(text))
        }
        Command::Witness { tower: t, eta, cap, common } => {
            let params = params_from(t, common)?;
            let level_cap = cap.unwrap_or(params.horizon).max(params.horizon);
            let outcome = certify::witness_index(&params, *eta, level_cap)?;
            let text = match common.format {
                OutputFormat::Json => report::witness_to_json(&outcome, *eta, level_cap),
                OutputFormat::Csv => report::witness_to_csv(&outcome),
                OutputFormat::Text => report::witness_to_text(&outcome, *eta),
            };
            match outcome {
                WitnessOutcome::Reached { .. } => Ok(Payload::Ok(text)),
                WitnessOutcome::NotReached { .. } => Ok(Payload::Soft(text, 2)),
            }
        }
        Command::Height { p, d, poly, common } => {
            let policy = precision_from(common)?;
            let value = match (p, d, poly) {
                (Some(p), Some(d), None) => heights::radical_height(p, d, &policy)?,
                (None, None, Some(text)) => {
                    heights::weil_height_from_minpoly(&parse_poly(text)?, &policy)?
                }
                _ => {
                    return Err(Error::InvalidParams(
                        "give either --p with --d, or --poly".into(),
                    ))
                }
            };
            Ok(Payload::Ok(render_value(&value, common.format)))
        }
        Command::Measure { poly, common } => {
            let policy = precision_from(common)?;
            let value = heights::mahler_measure(&parse_poly(poly)?, &policy)?;
            Ok(Payload::Ok(render_value(&value, common.format)))
        }
    }
}

fn render_value(e: &crate::bigreal::Enclosure, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => report::enclosure_to_json(e),
        OutputFormat::Csv => report::enclosure_to_csv(e),
        OutputFormat::Text => report::enclosure_to_text(e),
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Domain(_) | Error::InvalidParams(_) | Error::Parse(_) => 1,
        Error::PrecisionExhausted { .. }
        | Error::IntervalExhausted { .. }
        | Error::SearchExhausted { .. }
        | Error::BitCapExceeded { .. } => 2,
    }
}

fn error_line(kind: &str, message: &str) -> String {
    serde_json::json!({ "error": { "kind": kind, "message": message } }).to_string()
}

fn deliver(common_output: Option<&PathBuf>, payload: &str) -> std::io::Result<()> {
    match common_output {
        Some(path) => fs::write(path, payload),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(payload.as_bytes())
        }
    }
}

fn output_path(command: &Command) -> Option<&PathBuf> {
    let common = match command {
        Command::Construct { common, .. }
        | Command::Certify { common, .. }
        | Command::Witness { common, .. }
        | Command::Height { common, .. }
        | Command::Measure { common, .. } => common,
    };
    common.output.as_ref()
}

/// Run a parsed invocation; returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    match execute(&cli.command) {
        Ok(payload) => {
            let (text, code) = match payload {
                Payload::Ok(t) => (t, 0),
                Payload::Soft(t, c) => (t, c),
            };
            if let Err(io_err) = deliver(output_path(&cli.command), &text) {
                eprintln!("{}", error_line("io", &io_err.to_string()));
                return 3;
            }
            code
        }
        Err(err) => {
            eprintln!("{}", error_line(err.kind(), &err.to_string()));
            exit_code(&err)
        }
    }
}
