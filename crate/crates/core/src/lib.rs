//! Certified construction of radical prime towers.
//!
//! The library builds the fields Q(p₁^{1/d₁}, p₂^{1/d₂}, …) from prime pairs
//! chosen deterministically inside certified integer brackets, then computes
//! interval-certified height metrics for every level: the Northcott ratio,
//! the Bogomolov witness value, and two height floors, together with an
//! independent Mahler-measure cross-check.

pub mod bigreal;
pub mod certify;
pub mod cli;
pub mod error;
pub mod heights;
mod mahler;
pub mod poly;
pub mod primes;
pub mod report;
pub mod tower;

pub use bigreal::{Bracket, Enclosure, PrecisionPolicy};
pub use error::{Error, Result};
pub use poly::IntPolynomial;
pub use primes::{PrimalityMethod, PrimalityStatus, PrimalityVerdict};
pub use tower::{ConstructionParams, IntervalRule, TowerLevel};
