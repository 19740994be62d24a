//! Certified per-level metrics, monotonicity audit, and witness search.
//!
//! Per level i the five enclosures are
//!   a  = d^{γ−1}(log p − log d)        (Northcott ratio; should grow)
//!   b  = d^{γ−ε−1} log p               (witness value; should vanish)
//!   silverman_floor = log p/(2d) − log d/(2(d−1))
//!   f_floor = ((log p − log d)·d^{γ−1} − 1)/2
//!   witness_f = f_{γ−ε} of the generator, computed by the independent
//!               route f_value ∘ radical_height; must overlap b.
//!
//! Monotone behavior is audited and reported over the finite horizon only,
//! never asserted as a limit: the report states the onset index of the
//! largest suffix on which the enclosure comparisons are strict.

use std::cmp::Ordering;

use rug::{Integer, Rational};

use crate::bigreal::{self, Enclosure, PrecisionPolicy};
use crate::error::{Error, Result};
use crate::heights;
use crate::primes::{PrimalityStatus, PrimalityVerdict};
use crate::tower::{self, ConstructionParams, TowerLevel};

pub const SCHEMA_VERSION: &str = "1";

/// Certified metric enclosures for one tower level.
#[derive(Debug, Clone)]
pub struct LevelMetrics {
    pub index: u32,
    pub a: Enclosure,
    pub b: Enclosure,
    pub silverman_floor: Enclosure,
    pub f_floor: Enclosure,
    pub witness_f: Enclosure,
    /// b and witness_f enclose the same number by different routes.
    pub witness_overlap_ok: bool,
    /// d^γ·silverman_floor dominates f_floor (allowing combined widths).
    pub chain_ok: bool,
}

/// Onset indices of the largest strictly-monotone suffixes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditSummary {
    pub a_monotone_from: Option<u32>,
    pub b_decreasing_from: Option<u32>,
    /// Pairs still indeterminate after one precision escalation.
    pub indeterminate_pairs: u32,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PrimalitySummary {
    pub provable_prime: u32,
    pub probable_prime: u32,
}

impl PrimalitySummary {
    fn absorb(&mut self, v: &PrimalityVerdict) {
        match v.status {
            PrimalityStatus::ProvablePrime => self.provable_prime += 1,
            PrimalityStatus::ProbablePrime => self.probable_prime += 1,
            PrimalityStatus::Composite => {}
        }
    }
}

/// Outcome of the witness search.
#[derive(Debug, Clone)]
pub enum WitnessOutcome {
    /// Smallest level whose certified b upper bound drops below η.
    Reached { index: u32, b: Enclosure },
    /// Cap hit first; carries the best (smallest upper bound) b seen.
    NotReached { best_index: u32, best_b: Enclosure },
}

/// Full certification record of one construction run.
#[derive(Debug, Clone)]
pub struct CertificateReport {
    pub params: ConstructionParams,
    pub levels: Vec<(TowerLevel, LevelMetrics)>,
    pub audit: AuditSummary,
    pub witness_eta: f64,
    pub witness_index: Option<u32>,
    pub primality_summary: PrimalitySummary,
    pub schema_version: String,
}

fn gamma_rational(params: &ConstructionParams) -> Result<Rational> {
    Rational::from_f64(params.gamma)
        .ok_or_else(|| Error::InvalidParams("non-finite gamma".into()))
}

fn epsilon_rational(params: &ConstructionParams) -> Result<Rational> {
    Rational::from_f64(params.effective_epsilon())
        .ok_or_else(|| Error::InvalidParams("non-finite epsilon".into()))
}

/// All five enclosures from exact (d, p) and exact rational exponents,
/// recomputed along the precision ladder until every width is inside the
/// target.
pub(crate) fn level_metrics_for(
    index: u32,
    d: &Integer,
    p: &Integer,
    gamma: &Rational,
    epsilon: &Rational,
    policy: &PrecisionPolicy,
) -> Result<LevelMetrics> {
    let mut gm1 = gamma.clone();
    gm1 -= 1u32;
    let mut gme1 = Rational::from(gamma - epsilon);
    let gme = gme1.clone();
    gme1 -= 1u32;
    let two_d = Integer::from(d << 1);
    let mut two_dm1 = d.clone();
    two_dm1 -= 1;
    two_dm1 <<= 1;

    let mut out: Option<(Enclosure, Enclosure, Enclosure, Enclosure)> = None;
    let mut widths_ok = false;
    for prec in policy.ladder() {
        let ln_p = bigreal::ln_int_at(p, prec)?;
        let ln_d = bigreal::ln_int_at(d, prec)?;
        let diff = ln_p.sub(&ln_d, prec);
        let d_pow_gm1 = bigreal::exp_at(
            &Enclosure::from_rational(&gm1, prec).mul(&ln_d, prec),
            prec,
        );
        let d_pow_gme1 = bigreal::exp_at(
            &Enclosure::from_rational(&gme1, prec).mul(&ln_d, prec),
            prec,
        );
        let a = d_pow_gm1.mul(&diff, prec);
        let b = d_pow_gme1.mul(&ln_p, prec);
        let silverman = ln_p.div_int(&two_d, prec).sub(&ln_d.div_int(&two_dm1, prec), prec);
        let one = Enclosure::from_integer(&Integer::from(1), prec);
        let f_floor = a.sub(&one, prec).div_int(&Integer::from(2), prec);

        let t = policy.target_width;
        widths_ok = a.abs_width_le(t)
            && b.abs_width_le(t)
            && silverman.abs_width_le(t)
            && f_floor.abs_width_le(t);
        out = Some((a, b, silverman, f_floor));
        if widths_ok {
            break;
        }
    }
    let (a, b, silverman_floor, f_floor) = match (out, widths_ok) {
        (Some(v), true) => v,
        _ => {
            return Err(Error::PrecisionExhausted {
                max_bits: policy.max_bits,
                target_width: policy.target_width,
            })
        }
    };

    // Independent route for the witness value: f_{γ−ε}(p^{1/d}).
    let h = heights::radical_height(p, d, policy)?;
    let witness_f = heights::f_value_rational(d, &gme, &h);
    let witness_overlap_ok = witness_f.overlaps(&b);

    // Chain inequality: d^γ·silverman_floor ≥ f_floor up to combined widths.
    let prec = a.precision_bits().max(64);
    let ln_d = bigreal::ln_int_at(d, prec)?;
    let d_pow_g = bigreal::exp_at(
        &Enclosure::from_rational(gamma, prec).mul(&ln_d, prec),
        prec,
    );
    let lhs = d_pow_g.mul(&silverman_floor, prec);
    let slack = lhs.width() + f_floor.width();
    let chain_ok = {
        let lhs_lo = lhs.lo().clone();
        let rhs = f_floor.hi().clone() - slack;
        lhs_lo >= rhs
    };

    Ok(LevelMetrics {
        index,
        a,
        b,
        silverman_floor,
        f_floor,
        witness_f,
        witness_overlap_ok,
        chain_ok,
    })
}

/// Metrics for a built tower level under the run parameters.
pub fn level_metrics(level: &TowerLevel, params: &ConstructionParams) -> Result<LevelMetrics> {
    params.validate()?;
    let gamma = gamma_rational(params)?;
    let epsilon = epsilon_rational(params)?;
    level_metrics_for(
        level.index,
        &level.d,
        &level.p,
        &gamma,
        &epsilon,
        &params.precision,
    )
}

/// Strict enclosure comparison; `None` when the intervals overlap.
fn compare_strict(x: &Enclosure, y: &Enclosure) -> Option<Ordering> {
    if x.hi() < y.lo() {
        Some(Ordering::Less)
    } else if x.lo() > y.hi() {
        Some(Ordering::Greater)
    } else {
        None
    }
}

/// Escalated policy for re-resolving one indeterminate comparison.
fn escalated(policy: &PrecisionPolicy) -> PrecisionPolicy {
    PrecisionPolicy {
        initial_bits: policy.initial_bits.saturating_mul(4).min(policy.max_bits),
        max_bits: policy.max_bits,
        target_width: (policy.target_width * 1e-6).max(1e-280),
    }
}

/// Smallest level index ≤ cap with b.hi < η, else the best b seen.
pub fn witness_index(
    params: &ConstructionParams,
    eta: f64,
    level_cap: u32,
) -> Result<WitnessOutcome> {
    params.validate()?;
    if !eta.is_finite() || !(eta > 0.0) {
        return Err(Error::InvalidParams(format!(
            "eta must be positive, got {eta}"
        )));
    }
    if level_cap < 1 {
        return Err(Error::InvalidParams("level cap must be at least 1".into()));
    }
    let gamma = gamma_rational(params)?;
    let epsilon = epsilon_rational(params)?;
    let mut builder = tower::TowerBuilder::new(params)?;
    let mut best: Option<(u32, Enclosure)> = None;
    for _ in 0..level_cap {
        let level = builder.next_level()?;
        let m = level_metrics_for(
            level.index,
            &level.d,
            &level.p,
            &gamma,
            &epsilon,
            &params.precision,
        )?;
        if *m.b.hi() < eta {
            return Ok(WitnessOutcome::Reached {
                index: level.index,
                b: m.b,
            });
        }
        let better = match &best {
            Some((_, cur)) => m.b.hi() < cur.hi(),
            None => true,
        };
        if better {
            best = Some((level.index, m.b.clone()));
        }
    }
    let (best_index, best_b) = best.expect("cap ≥ 1 yields at least one level");
    Ok(WitnessOutcome::NotReached { best_index, best_b })
}

/// Build the tower, compute all metrics, audit monotonicity, and search for
/// a witness level within the horizon.
pub fn audit_report(params: &ConstructionParams, eta: f64) -> Result<CertificateReport> {
    params.validate()?;
    if !eta.is_finite() || !(eta > 0.0) {
        return Err(Error::InvalidParams(format!(
            "eta must be positive, got {eta}"
        )));
    }
    let gamma = gamma_rational(params)?;
    let epsilon = epsilon_rational(params)?;
    let levels = tower::build_tower(params)?;
    let mut metrics = Vec::with_capacity(levels.len());
    for level in &levels {
        metrics.push(level_metrics_for(
            level.index,
            &level.d,
            &level.p,
            &gamma,
            &epsilon,
            &params.precision,
        )?);
    }

    let n = levels.len();
    let mut indeterminate = 0u32;
    // pair_a[i]: a_{i+2} strictly above a_{i+1} (1-based pairs i+1, i+2)
    let mut pair_a = vec![false; n.saturating_sub(1)];
    let mut pair_b = vec![false; n.saturating_sub(1)];
    for i in 0..n.saturating_sub(1) {
        let (lo_lvl, hi_lvl) = (&levels[i], &levels[i + 1]);
        let mut ma = (metrics[i].a.clone(), metrics[i + 1].a.clone());
        let mut mb = (metrics[i].b.clone(), metrics[i + 1].b.clone());
        let mut cmp_a = compare_strict(&ma.0, &ma.1);
        let mut cmp_b = compare_strict(&mb.1, &mb.0);
        if cmp_a.is_none() || cmp_b.is_none() {
            // One escalation, then record whatever resolves.
            let tighter = escalated(&params.precision);
            let lo_m = level_metrics_for(
                lo_lvl.index, &lo_lvl.d, &lo_lvl.p, &gamma, &epsilon, &tighter,
            )?;
            let hi_m = level_metrics_for(
                hi_lvl.index, &hi_lvl.d, &hi_lvl.p, &gamma, &epsilon, &tighter,
            )?;
            ma = (lo_m.a.clone(), hi_m.a.clone());
            mb = (lo_m.b, hi_m.b);
            cmp_a = compare_strict(&ma.0, &ma.1);
            cmp_b = compare_strict(&mb.1, &mb.0);
            if cmp_a.is_none() || cmp_b.is_none() {
                indeterminate += 1;
            }
        }
        pair_a[i] = cmp_a == Some(Ordering::Less);
        pair_b[i] = cmp_b == Some(Ordering::Less);
    }

    let onset = |pairs: &[bool]| -> Option<u32> {
        let mut from = n as u32;
        for i in (0..pairs.len()).rev() {
            if pairs[i] {
                from = (i + 1) as u32;
            } else {
                break;
            }
        }
        Some(from)
    };

    let witness_idx = metrics
        .iter()
        .find(|m| *m.b.hi() < eta)
        .map(|m| m.index);

    let mut summary = PrimalitySummary::default();
    for level in &levels {
        summary.absorb(&level.d_verdict);
        summary.absorb(&level.p_verdict);
    }

    let audit = AuditSummary {
        a_monotone_from: onset(&pair_a),
        b_decreasing_from: onset(&pair_b),
        indeterminate_pairs: indeterminate,
    };

    Ok(CertificateReport {
        params: params.clone(),
        levels: levels.into_iter().zip(metrics).collect(),
        audit,
        witness_eta: eta,
        witness_index: witness_idx,
        primality_summary: summary,
        schema_version: SCHEMA_VERSION.to_string(),
    })
}
