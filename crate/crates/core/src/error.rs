use rug::Integer;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Library-wide error type.
///
/// `NeedsMorePrecision` (integer bracketing) and `NotFound`/`NotReached`
/// (prime scans, witness search) are ordinary return values, not errors;
/// only genuine failures live here.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside an operation's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The adaptive precision loop hit `max_bits` without meeting its goal.
    #[error("precision exhausted: goal unreachable at {max_bits} bits (target width {target_width:e})")]
    PrecisionExhausted { max_bits: u32, target_width: f64 },

    /// No eligible prime exists in a certified bracket.
    #[error("no eligible prime in [{lo}, {hi}]{}", level_note(*.level))]
    IntervalExhausted {
        lo: Integer,
        hi: Integer,
        level: Option<u32>,
    },

    /// An unbounded upward prime scan hit its safety cap.
    #[error("prime search exhausted after {scanned} candidates from {start}")]
    SearchExhausted { start: Integer, scanned: u64 },

    /// The prime bracket outgrew the configured bit-size cap.
    #[error("prime bracket needs ~{required_bits} bits, above the cap of {cap_bits}{}", level_note(*.level))]
    BitCapExceeded {
        required_bits: u64,
        cap_bits: u32,
        level: Option<u32>,
    },

    /// Parameter combination rejected before any computation.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Malformed polynomial or number text.
    #[error("parse error: {0}")]
    Parse(String),
}

fn level_note(level: Option<u32>) -> String {
    match level {
        Some(i) => format!(" (tower level {i})"),
        None => String::new(),
    }
}

impl Error {
    /// Attach the tower level at which a construction error surfaced.
    pub(crate) fn at_level(self, index: u32) -> Self {
        match self {
            Error::IntervalExhausted { lo, hi, .. } => Error::IntervalExhausted {
                lo,
                hi,
                level: Some(index),
            },
            Error::BitCapExceeded {
                required_bits,
                cap_bits,
                ..
            } => Error::BitCapExceeded {
                required_bits,
                cap_bits,
                level: Some(index),
            },
            other => other,
        }
    }

    /// Stable machine-readable kind tag, used by the CLI error line.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::PrecisionExhausted { .. } => "precision_exhausted",
            Error::IntervalExhausted { .. } => "interval_exhausted",
            Error::SearchExhausted { .. } => "search_exhausted",
            Error::BitCapExceeded { .. } => "bit_cap_exceeded",
            Error::InvalidParams(_) => "invalid_params",
            Error::Parse(_) => "parse",
        }
    }
}
