//! Deterministic construction of the prime sequences (dᵢ, pᵢ) and the
//! resulting radical tower levels.
//!
//! Per level: dᵢ is the smallest unused prime at least twice its
//! predecessor, then pᵢ is the smallest unused prime inside the certified
//! integer bracket [⌈x⌉, ⌊2x⌋], where x = e^{d^{1−γ+ε/2}} in the general
//! variant and x = d^δ in the δ variant. "Unused" means distinct from every
//! prime chosen so far, d's and p's alike, which is stricter than the bare
//! hypothesis needs and costs nothing.

use std::collections::BTreeSet;

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::bigreal::{self, Bracket, Enclosure, PrecisionPolicy};
use crate::error::{Error, Result};
use crate::primes::{self, PrimalityVerdict};

/// Bracket rule for the prime pᵢ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntervalRule {
    /// pᵢ ∈ [e^{d^{1−γ+ε/2}}, 2e^{d^{1−γ+ε/2}}]
    General { epsilon: f64 },
    /// pᵢ ∈ [d^δ, 2d^δ]; requires γ = 1
    Delta { delta: f64 },
}

/// Free parameters of a construction run.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstructionParams {
    pub gamma: f64,
    pub rule: IntervalRule,
    /// ε used by the witness metrics (γ−ε exponents). Defaults to the
    /// construction ε in the general variant and to 1 in the δ variant.
    pub metric_epsilon: Option<f64>,
    pub horizon: u32,
    pub precision: PrecisionPolicy,
    /// Bit-size cap on p, keeping small-γ runs desk-scale.
    pub max_p_bits: u32,
}

pub const DEFAULT_MAX_P_BITS: u32 = 40000;

impl ConstructionParams {
    pub fn general(gamma: f64, epsilon: f64, horizon: u32) -> Self {
        ConstructionParams {
            gamma,
            rule: IntervalRule::General { epsilon },
            metric_epsilon: None,
            horizon,
            precision: PrecisionPolicy::default(),
            max_p_bits: DEFAULT_MAX_P_BITS,
        }
    }

    pub fn delta(delta: f64, horizon: u32) -> Self {
        ConstructionParams {
            gamma: 1.0,
            rule: IntervalRule::Delta { delta },
            metric_epsilon: None,
            horizon,
            precision: PrecisionPolicy::default(),
            max_p_bits: DEFAULT_MAX_P_BITS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.gamma.is_finite() || !(self.gamma > 0.0) || self.gamma > 1.0 {
            return Err(Error::InvalidParams(format!(
                "gamma must lie in (0, 1], got {}",
                self.gamma
            )));
        }
        match self.rule {
            IntervalRule::General { epsilon } => {
                if !epsilon.is_finite() || !(epsilon > 0.0) {
                    return Err(Error::InvalidParams(format!(
                        "epsilon must be positive, got {epsilon}"
                    )));
                }
            }
            IntervalRule::Delta { delta } => {
                if !delta.is_finite() || !(delta > 1.0) {
                    return Err(Error::InvalidParams(format!(
                        "delta must exceed 1, got {delta}"
                    )));
                }
                if self.gamma != 1.0 {
                    return Err(Error::InvalidParams(format!(
                        "the delta variant requires gamma = 1, got {}",
                        self.gamma
                    )));
                }
            }
        }
        if let Some(me) = self.metric_epsilon {
            if !me.is_finite() || !(me > 0.0) {
                return Err(Error::InvalidParams(format!(
                    "metric epsilon must be positive, got {me}"
                )));
            }
        }
        if self.horizon < 1 {
            return Err(Error::InvalidParams("horizon must be at least 1".into()));
        }
        Ok(())
    }

    /// ε that the b/witness metrics use.
    pub fn effective_epsilon(&self) -> f64 {
        if let Some(me) = self.metric_epsilon {
            return me;
        }
        match self.rule {
            IntervalRule::General { epsilon } => epsilon,
            IntervalRule::Delta { .. } => 1.0,
        }
    }

    /// Exact bracket exponent τ = 1 − γ + ε/2 for the general variant.
    pub(crate) fn tau(&self) -> Option<Rational> {
        match self.rule {
            IntervalRule::General { epsilon } => {
                let g = Rational::from_f64(self.gamma)?;
                let e = Rational::from_f64(epsilon)?;
                Some(Rational::from(1) - g + e / Integer::from(2))
            }
            IntervalRule::Delta { .. } => None,
        }
    }
}

/// One level of the tower with its certified bookkeeping.
#[derive(Debug, Clone)]
pub struct TowerLevel {
    pub index: u32,
    pub d: Integer,
    pub p: Integer,
    pub d_verdict: PrimalityVerdict,
    pub p_verdict: PrimalityVerdict,
    pub log_p: Enclosure,
    pub log_d: Enclosure,
    /// ∏_{j ≤ i} d_j, the degree of K_i over the rationals.
    pub abs_degree: Integer,
    /// (log p)/d, the height of the level's radical generator.
    pub generator_height: Enclosure,
}

/// Certified integer bracket [⌈x⌉, ⌊2x⌋] for the prime search at degree d.
pub fn p_interval(d: &Integer, params: &ConstructionParams) -> Result<(Integer, Integer)> {
    params.validate()?;
    if *d < 2 {
        return Err(Error::Domain(format!("degree prime must be ≥ 2, got {d}")));
    }
    if let IntervalRule::Delta { delta } = params.rule {
        // Integer δ admits an exact bracket: x = d^δ is an integer, so the
        // transcendental route would never disambiguate ⌈x⌉ from x.
        if delta.fract() == 0.0 && delta <= u32::MAX as f64 {
            let e = delta as u32;
            let x = d.clone().pow(e);
            let cap_check = x.significant_bits() as u64;
            if cap_check > params.max_p_bits as u64 {
                return Err(Error::BitCapExceeded {
                    required_bits: cap_check,
                    cap_bits: params.max_p_bits,
                    level: None,
                });
            }
            let two_x = Integer::from(&x << 1);
            return Ok((x, two_x));
        }
    }

    let policy = &params.precision;
    for prec in policy.ladder() {
        let x = bracket_target_at(d, params, prec)?;
        let doubled = x.mul_2exp(1);
        let lo_bracket = bigreal::integer_bracket(&x);
        let hi_bracket = bigreal::integer_bracket(&doubled);
        if let (
            Bracket::Determined { ceil, .. },
            Bracket::Determined { floor, .. },
        ) = (lo_bracket, hi_bracket)
        {
            let required = ceil.significant_bits() as u64;
            if required > params.max_p_bits as u64 {
                return Err(Error::BitCapExceeded {
                    required_bits: required,
                    cap_bits: params.max_p_bits,
                    level: None,
                });
            }
            return Ok((ceil, floor));
        }
    }
    Err(Error::PrecisionExhausted {
        max_bits: policy.max_bits,
        target_width: policy.target_width,
    })
}

/// Enclosure of x = e^{d^τ} (general) or x = d^δ (non-integer δ) at fixed
/// precision, recomputed from exact inputs.
fn bracket_target_at(d: &Integer, params: &ConstructionParams, prec: u32) -> Result<Enclosure> {
    let ln_d = bigreal::ln_int_at(d, prec)?;
    match params.rule {
        IntervalRule::General { .. } => {
            let tau = params
                .tau()
                .ok_or_else(|| Error::InvalidParams("non-finite gamma or epsilon".into()))?;
            let t = Enclosure::from_rational(&tau, prec);
            // d^τ, then e^{d^τ}
            let inner = bigreal::exp_at(&t.mul(&ln_d, prec), prec);
            Ok(bigreal::exp_at(&inner, prec))
        }
        IntervalRule::Delta { delta } => {
            let dr = Rational::from_f64(delta)
                .ok_or_else(|| Error::InvalidParams("non-finite delta".into()))?;
            let t = Enclosure::from_rational(&dr, prec);
            Ok(bigreal::exp_at(&t.mul(&ln_d, prec), prec))
        }
    }
}

/// Safety cap for unbounded upward scans in next_d.
const NEXT_D_SCAN_CAP: u64 = 1 << 24;

/// Smallest prime ≥ 2·prev (or the very first prime) outside `exclusions`.
pub fn next_d(prev_d: Option<&Integer>, exclusions: &BTreeSet<Integer>) -> Result<Integer> {
    let start = match prev_d {
        Some(p) => Integer::from(p << 1),
        None => Integer::from(2),
    };
    primes::next_prime_at_least(&start, exclusions, NEXT_D_SCAN_CAP)
}

/// Smallest eligible prime in the certified bracket for d.
pub fn next_p(
    d: &Integer,
    params: &ConstructionParams,
    exclusions: &BTreeSet<Integer>,
) -> Result<Integer> {
    let (lo, hi) = p_interval(d, params)?;
    primes::find_prime_in_interval(&lo, &hi, exclusions).ok_or(Error::IntervalExhausted {
        lo,
        hi,
        level: None,
    })
}

/// Incremental level producer; exclusions accumulate across the whole run.
pub struct TowerBuilder<'a> {
    params: &'a ConstructionParams,
    used: BTreeSet<Integer>,
    prev_d: Option<Integer>,
    abs_degree: Integer,
    index: u32,
}

impl<'a> TowerBuilder<'a> {
    pub fn new(params: &'a ConstructionParams) -> Result<Self> {
        params.validate()?;
        Ok(TowerBuilder {
            params,
            used: BTreeSet::new(),
            prev_d: None,
            abs_degree: Integer::from(1),
            index: 0,
        })
    }

    pub fn next_level(&mut self) -> Result<TowerLevel> {
        let index = self.index + 1;
        let d = next_d(self.prev_d.as_ref(), &self.used).map_err(|e| e.at_level(index))?;
        self.used.insert(d.clone());
        let p = next_p(&d, self.params, &self.used).map_err(|e| e.at_level(index))?;
        self.used.insert(p.clone());

        let policy = &self.params.precision;
        let log_p = bigreal::refine_enclosure(
            policy,
            bigreal::WidthGoal::Absolute(policy.target_width),
            |prec| bigreal::ln_int_at(&p, prec),
        )
        .map_err(|e| e.at_level(index))?;
        let log_d = bigreal::refine_enclosure(
            policy,
            bigreal::WidthGoal::Absolute(policy.target_width),
            |prec| bigreal::ln_int_at(&d, prec),
        )
        .map_err(|e| e.at_level(index))?;

        self.abs_degree *= &d;
        let generator_height =
            crate::heights::radical_height(&p, &d, policy).map_err(|e| e.at_level(index))?;

        let d_verdict = primes::is_prime(&d);
        let p_verdict = primes::is_prime(&p);
        let level = TowerLevel {
            index,
            d: d.clone(),
            p,
            d_verdict,
            p_verdict,
            log_p,
            log_d,
            abs_degree: self.abs_degree.clone(),
            generator_height,
        };
        self.prev_d = Some(d);
        self.index = index;
        Ok(level)
    }
}

/// Build levels 1..=horizon.
pub fn build_tower(params: &ConstructionParams) -> Result<Vec<TowerLevel>> {
    build_tower_to(params, params.horizon)
}

/// Build to an explicit cap (the witness search extends past the horizon).
pub(crate) fn build_tower_to(params: &ConstructionParams, cap: u32) -> Result<Vec<TowerLevel>> {
    let mut builder = TowerBuilder::new(params)?;
    let mut levels = Vec::with_capacity(cap as usize);
    for _ in 0..cap {
        levels.push(builder.next_level()?);
    }
    Ok(levels)
}
