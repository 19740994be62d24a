//! Certified real interval arithmetic over MPFR.
//!
//! Every operation returns an [`Enclosure`] `[lo, hi]` guaranteed to contain
//! the exact mathematical value: endpoints come from MPFR with directed
//! rounding (lo toward −∞, hi toward +∞), so soundness holds at any working
//! precision. Width is a quality concern only, handled by the adaptive
//! precision loop in [`PrecisionPolicy`].

use std::fmt;

use rug::float::Round;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

pub const DEFAULT_INITIAL_BITS: u32 = 64;
pub const DEFAULT_MAX_BITS: u32 = 65536;
pub const DEFAULT_TARGET_WIDTH: f64 = 1e-12;

/// Working-precision schedule: start at `initial_bits`, double until the
/// width goal is met or `max_bits` is reached.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionPolicy {
    pub initial_bits: u32,
    pub max_bits: u32,
    /// Acceptable enclosure width; relative for exp-scale results,
    /// absolute for log-scale ones.
    pub target_width: f64,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            initial_bits: DEFAULT_INITIAL_BITS,
            max_bits: DEFAULT_MAX_BITS,
            target_width: DEFAULT_TARGET_WIDTH,
        }
    }
}

impl PrecisionPolicy {
    pub fn new(initial_bits: u32, max_bits: u32, target_width: f64) -> Result<Self> {
        if initial_bits < 2 {
            return Err(Error::InvalidParams(
                "initial_bits must be at least 2".into(),
            ));
        }
        if initial_bits > max_bits {
            return Err(Error::InvalidParams(format!(
                "initial_bits {initial_bits} exceeds max_bits {max_bits}"
            )));
        }
        if !(target_width > 0.0) {
            return Err(Error::InvalidParams(
                "target_width must be positive".into(),
            ));
        }
        Ok(PrecisionPolicy {
            initial_bits,
            max_bits,
            target_width,
        })
    }

    /// Precision ladder `initial, 2·initial, …` capped at (and including) `max_bits`.
    pub(crate) fn ladder(&self) -> impl Iterator<Item = u32> {
        let max = self.max_bits;
        let mut next = Some(self.initial_bits.min(max));
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur >= max {
                None
            } else {
                Some(cur.saturating_mul(2).min(max))
            };
            Some(cur)
        })
    }

    fn exhausted(&self) -> Error {
        Error::PrecisionExhausted {
            max_bits: self.max_bits,
            target_width: self.target_width,
        }
    }
}

/// A closed real interval `[lo, hi]` with finite MPFR endpoints.
///
/// Invariant: `lo ≤ hi`, both finite. Producers must guarantee the true
/// value of whatever they enclose lies inside.
#[derive(Debug, Clone)]
pub struct Enclosure {
    lo: Float,
    hi: Float,
}

impl Enclosure {
    pub fn from_endpoints(lo: Float, hi: Float) -> Self {
        assert!(lo.is_finite() && hi.is_finite(), "non-finite endpoint");
        assert!(lo <= hi, "inverted enclosure: {lo} > {hi}");
        Enclosure { lo, hi }
    }

    /// Degenerate interval holding one exact float.
    pub fn point(x: Float) -> Self {
        assert!(x.is_finite());
        Enclosure {
            lo: x.clone(),
            hi: x,
        }
    }

    /// Exact: every finite f64 is a dyadic rational.
    pub fn from_f64(x: f64, prec: u32) -> Self {
        assert!(x.is_finite());
        Self::point(Float::with_val(prec.max(53), x))
    }

    pub fn from_integer(n: &Integer, prec: u32) -> Self {
        let lo = Float::with_val_round(prec, n, Round::Down).0;
        let hi = Float::with_val_round(prec, n, Round::Up).0;
        Enclosure::from_endpoints(lo, hi)
    }

    pub fn from_rational(q: &Rational, prec: u32) -> Self {
        let lo = Float::with_val_round(prec, q, Round::Down).0;
        let hi = Float::with_val_round(prec, q, Round::Up).0;
        Enclosure::from_endpoints(lo, hi)
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn precision_bits(&self) -> u32 {
        self.lo.prec().max(self.hi.prec())
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Upper bound on `hi − lo`; never underestimates.
    pub fn width(&self) -> Float {
        Float::with_val_round(self.precision_bits(), &self.hi - &self.lo, Round::Up).0
    }

    pub fn width_f64(&self) -> f64 {
        Float::with_val_round(53, &self.hi - &self.lo, Round::Up)
            .0
            .to_f64()
    }

    pub fn midpoint(&self) -> Float {
        let p = self.precision_bits();
        Float::with_val(p, &self.lo + &self.hi) / 2u32
    }

    pub fn contains<T>(&self, value: &T) -> bool
    where
        Float: PartialOrd<T>,
    {
        self.lo <= *value && self.hi >= *value
    }

    pub fn overlaps(&self, other: &Enclosure) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// True if `width ≤ t` is provable.
    pub fn abs_width_le(&self, t: f64) -> bool {
        self.width() <= t
    }

    /// True if `width ≤ t·max(|lo|,|hi|)` is provable.
    pub fn rel_width_le(&self, t: f64) -> bool {
        if self.lo == self.hi {
            return true;
        }
        let p = self.precision_bits();
        let mag = Float::with_val(p, self.lo.abs_ref()).max(&Float::with_val(p, self.hi.abs_ref()));
        let allowed = Float::with_val_round(p, &mag * &Float::with_val(53, t), Round::Down).0;
        self.width() <= allowed
    }

    pub fn add(&self, other: &Enclosure, prec: u32) -> Enclosure {
        let lo = Float::with_val_round(prec, &self.lo + &other.lo, Round::Down).0;
        let hi = Float::with_val_round(prec, &self.hi + &other.hi, Round::Up).0;
        Enclosure::from_endpoints(lo, hi)
    }

    pub fn sub(&self, other: &Enclosure, prec: u32) -> Enclosure {
        let lo = Float::with_val_round(prec, &self.lo - &other.hi, Round::Down).0;
        let hi = Float::with_val_round(prec, &self.hi - &other.lo, Round::Up).0;
        Enclosure::from_endpoints(lo, hi)
    }

    /// Full Moore multiplication: min/max over the four endpoint products,
    /// each taken with the rounding that cannot lose the extremum.
    pub fn mul(&self, other: &Enclosure, prec: u32) -> Enclosure {
        let pairs = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let mut lo: Option<Float> = None;
        let mut hi: Option<Float> = None;
        for (a, b) in pairs {
            let down = Float::with_val_round(prec, a * b, Round::Down).0;
            let up = Float::with_val_round(prec, a * b, Round::Up).0;
            lo = Some(match lo {
                Some(cur) => cur.min(&down),
                None => down,
            });
            hi = Some(match hi {
                Some(cur) => cur.max(&up),
                None => up,
            });
        }
        Enclosure::from_endpoints(lo.unwrap(), hi.unwrap())
    }

    pub fn neg(&self) -> Enclosure {
        Enclosure {
            lo: Float::with_val(self.hi.prec(), -&self.hi),
            hi: Float::with_val(self.lo.prec(), -&self.lo),
        }
    }

    /// Division by an exact positive integer.
    pub fn div_int(&self, n: &Integer, prec: u32) -> Enclosure {
        assert!(*n > 0, "div_int requires a positive divisor");
        let lo = Float::with_val_round(prec, &self.lo / n, Round::Down).0;
        let hi = Float::with_val_round(prec, &self.hi / n, Round::Up).0;
        Enclosure::from_endpoints(lo, hi)
    }

    /// Exact scaling by 2^k.
    pub fn mul_2exp(&self, k: u32) -> Enclosure {
        Enclosure {
            lo: self.lo.clone() << k,
            hi: self.hi.clone() << k,
        }
    }

    /// Outward-rounded decimal endpoint strings (lo down, hi up), so the
    /// printed interval still encloses the true value.
    pub fn decimal_endpoints(&self, digits: usize) -> (String, String) {
        (
            positional(&self.lo.to_string_radix_round(10, Some(digits), Round::Down)),
            positional(&self.hi.to_string_radix_round(10, Some(digits), Round::Up)),
        )
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.decimal_endpoints(25);
        write!(f, "[{lo}, {hi}]")
    }
}

/// Rewrite MPFR's scientific form into positional notation for moderate
/// exponents, digit-for-digit (the value is unchanged, so directed rounding
/// survives).
fn positional(s: &str) -> String {
    let Some(epos) = s.find('e') else {
        return s.to_string();
    };
    let exp: i64 = match s[epos + 1..].parse() {
        Ok(v) => v,
        Err(_) => return s.to_string(),
    };
    if !(-8..=24).contains(&exp) {
        return s.to_string();
    }
    let mantissa = &s[..epos];
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let mut out = String::from(sign);
    if exp >= 0 {
        let int_len = exp as usize + 1;
        if int_len >= digits.len() {
            out.push_str(&digits);
            out.extend(std::iter::repeat('0').take(int_len - digits.len()));
        } else {
            out.push_str(&digits[..int_len]);
            out.push('.');
            out.push_str(&digits[int_len..]);
        }
    } else {
        out.push_str("0.");
        out.extend(std::iter::repeat('0').take((-exp - 1) as usize));
        out.push_str(&digits);
    }
    out
}

/// Outcome of ceiling/floor extraction from an enclosure.
///
/// `NeedsMorePrecision` is a value, not an error: callers own the
/// refinement loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bracket {
    Determined { ceil: Integer, floor: Integer },
    NeedsMorePrecision,
}

/// Exact ceiling of a float; two guard bits cover the carry.
fn exact_ceil(x: &Float) -> Integer {
    Float::with_val(x.prec() + 2, x.ceil_ref())
        .to_integer()
        .expect("finite float has an integer ceiling")
}

fn exact_floor(x: &Float) -> Integer {
    Float::with_val(x.prec() + 2, x.floor_ref())
        .to_integer()
        .expect("finite float has an integer floor")
}

/// Unambiguous integer bracketing: returns `⌈x⌉` and `⌊x⌋` only when every
/// point of the enclosure shares them.
pub fn integer_bracket(x: &Enclosure) -> Bracket {
    let ceil_lo = exact_ceil(x.lo());
    let ceil_hi = exact_ceil(x.hi());
    if ceil_lo != ceil_hi {
        return Bracket::NeedsMorePrecision;
    }
    let floor_lo = exact_floor(x.lo());
    let floor_hi = exact_floor(x.hi());
    if floor_lo != floor_hi {
        return Bracket::NeedsMorePrecision;
    }
    Bracket::Determined {
        ceil: ceil_lo,
        floor: floor_lo,
    }
}

/// exp over an enclosure at fixed precision (monotone, so endpoints suffice).
pub(crate) fn exp_at(x: &Enclosure, prec: u32) -> Enclosure {
    let lo = Float::with_val_round(prec, x.lo().exp_ref(), Round::Down).0;
    let hi = Float::with_val_round(prec, x.hi().exp_ref(), Round::Up).0;
    Enclosure::from_endpoints(lo, hi)
}

/// ln over an enclosure at fixed precision; requires `x.lo > 0`.
pub(crate) fn ln_at(x: &Enclosure, prec: u32) -> Result<Enclosure> {
    if !(*x.lo() > 0) {
        return Err(Error::Domain(format!(
            "log requires a strictly positive enclosure, got lo = {}",
            x.lo()
        )));
    }
    let lo = Float::with_val_round(prec, x.lo().ln_ref(), Round::Down).0;
    let hi = Float::with_val_round(prec, x.hi().ln_ref(), Round::Up).0;
    Ok(Enclosure::from_endpoints(lo, hi))
}

/// ln of an exact positive integer.
pub(crate) fn ln_int_at(n: &Integer, prec: u32) -> Result<Enclosure> {
    if *n <= 0 {
        return Err(Error::Domain(format!("log requires n > 0, got {n}")));
    }
    // Exact conversion first so both roundings start from the true value.
    let v = Enclosure::from_integer(n, n.significant_bits().max(2));
    ln_at(&v, prec)
}

/// b^t as exp(t·ln b) at fixed precision; requires `base.lo > 0`.
pub(crate) fn pow_at(base: &Enclosure, exponent: &Enclosure, prec: u32) -> Result<Enclosure> {
    let ln_b = ln_at(base, prec)?;
    let prod = exponent.mul(&ln_b, prec);
    Ok(exp_at(&prod, prec))
}

/// Sound enclosure of e^t over all t in `x`, refined until the relative
/// width target is met.
pub fn exp_enc(x: &Enclosure, policy: &PrecisionPolicy) -> Result<Enclosure> {
    refine_enclosure(policy, WidthGoal::Relative(policy.target_width), |prec| {
        Ok(exp_at(x, prec))
    })
}

/// Sound enclosure of ln t over all t in `x`, absolute width target.
pub fn log_enc(x: &Enclosure, policy: &PrecisionPolicy) -> Result<Enclosure> {
    refine_enclosure(policy, WidthGoal::Absolute(policy.target_width), |prec| {
        ln_at(x, prec)
    })
}

/// Sound enclosure of b^t over all b in `base`, t in `exponent`.
pub fn pow_enc(
    base: &Enclosure,
    exponent: &Enclosure,
    policy: &PrecisionPolicy,
) -> Result<Enclosure> {
    refine_enclosure(policy, WidthGoal::Relative(policy.target_width), |prec| {
        pow_at(base, exponent, prec)
    })
}

/// Width goal for [`refine_enclosure`].
#[derive(Debug, Clone, Copy)]
pub(crate) enum WidthGoal {
    Absolute(f64),
    Relative(f64),
}

impl WidthGoal {
    fn met(self, enc: &Enclosure) -> bool {
        match self {
            WidthGoal::Absolute(t) => enc.abs_width_le(t),
            WidthGoal::Relative(t) => enc.rel_width_le(t),
        }
    }
}

/// Recompute `eval` along the precision ladder until the width goal holds.
/// `eval` must recompute from exact inputs so the width actually shrinks.
pub(crate) fn refine_enclosure<F>(
    policy: &PrecisionPolicy,
    goal: WidthGoal,
    mut eval: F,
) -> Result<Enclosure>
where
    F: FnMut(u32) -> Result<Enclosure>,
{
    for prec in policy.ladder() {
        let enc = eval(prec)?;
        if goal.met(&enc) {
            return Ok(enc);
        }
    }
    Err(policy.exhausted())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pol() -> PrecisionPolicy {
        PrecisionPolicy::default()
    }

    #[test]
    fn exp_of_zero_is_exactly_one() {
        let x = Enclosure::from_f64(0.0, 64);
        let e = exp_enc(&x, &pol()).unwrap();
        assert!(e.is_point());
        assert!(e.contains(&1u32));
    }

    #[test]
    fn exp_of_one_encloses_e() {
        // 30-digit reference from the exact-rational series oracle in tests/common.
        let e_ref = "2.7182818284590452353602874713526624977";
        let x = Enclosure::from_f64(1.0, 64);
        let e = exp_enc(&x, &pol()).unwrap();
        let v = Float::with_val(200, Float::parse(e_ref).unwrap());
        assert!(e.contains(&v));
        assert!(e.rel_width_le(1e-12));
    }

    #[test]
    fn log_of_one_is_exactly_zero() {
        let x = Enclosure::from_f64(1.0, 64);
        let l = log_enc(&x, &pol()).unwrap();
        assert!(l.is_point());
        assert!(l.contains(&0u32));
    }

    #[test]
    fn log_of_five() {
        // ln 5, series oracle reference.
        let r = "1.6094379124341003746007593332261876395";
        let x = Enclosure::from_integer(&Integer::from(5), 64);
        let l = log_enc(&x, &pol()).unwrap();
        assert!(l.contains(&Float::with_val(200, Float::parse(r).unwrap())));
        assert!(l.abs_width_le(1e-12));
    }

    #[test]
    fn log_rejects_nonpositive() {
        let x = Enclosure::from_endpoints(Float::with_val(64, 0), Float::with_val(64, 1));
        assert!(matches!(log_enc(&x, &pol()), Err(Error::Domain(_))));
    }

    #[test]
    fn pow_identity_exponent() {
        let b = Enclosure::from_integer(&Integer::from(2), 64);
        let t = Enclosure::from_f64(1.0, 64);
        let p = pow_enc(&b, &t, &pol()).unwrap();
        assert!(p.contains(&2u32));
        assert!(p.rel_width_le(1e-12));
    }

    #[test]
    fn pow_square_root_of_two() {
        let r = "1.4142135623730950488016887242096980785";
        let b = Enclosure::from_integer(&Integer::from(2), 64);
        let t = Enclosure::from_f64(0.5, 64);
        let p = pow_enc(&b, &t, &pol()).unwrap();
        assert!(p.contains(&Float::with_val(200, Float::parse(r).unwrap())));
    }

    #[test]
    fn pow_negative_exponent() {
        // 17^(-1/4) = 0.49246…, used by the witness metric.
        let r = "0.4924790605054523265044247848298225513";
        let b = Enclosure::from_integer(&Integer::from(17), 64);
        let t = Enclosure::from_f64(-0.25, 64);
        let p = pow_enc(&b, &t, &pol()).unwrap();
        assert!(p.contains(&Float::with_val(200, Float::parse(r).unwrap())));
        assert!(p.rel_width_le(1e-12));
    }

    #[test]
    fn bracket_determined_and_ambiguous() {
        let e = Enclosure::from_endpoints(
            Float::with_val(64, 4.1132),
            Float::with_val(64, 4.1133),
        );
        match integer_bracket(&e) {
            Bracket::Determined { ceil, floor } => {
                assert_eq!(ceil, 5);
                assert_eq!(floor, 4);
            }
            Bracket::NeedsMorePrecision => panic!("bracket should be determined"),
        }

        let amb = Enclosure::from_endpoints(
            Float::with_val(64, 3.99),
            Float::with_val(64, 4.01),
        );
        assert_eq!(integer_bracket(&amb), Bracket::NeedsMorePrecision);
    }

    #[test]
    fn bracket_point_integer() {
        let e = Enclosure::from_integer(&Integer::from(16), 64);
        match integer_bracket(&e) {
            Bracket::Determined { ceil, floor } => {
                assert_eq!(ceil, 16);
                assert_eq!(floor, 16);
            }
            _ => panic!("exact integer point must bracket"),
        }
    }

    #[test]
    fn log_exp_round_trip_contains_input() {
        for q in [-3.5, -1.0, 0.0, 0.25, 2.0, 11.75] {
            let x = Enclosure::from_f64(q, 64);
            let e = exp_enc(&x, &pol()).unwrap();
            let back = log_enc(&e, &pol()).unwrap();
            assert!(back.contains(&q), "round trip lost {q}");
        }
    }

    #[test]
    fn refinement_never_widens() {
        let x = Enclosure::from_f64(3.25, 64);
        let coarse = exp_at(&x, 64);
        let fine = exp_at(&x, 128);
        assert!(coarse.lo() <= fine.lo());
        assert!(coarse.hi() >= fine.hi());
    }

    #[test]
    fn interval_mul_covers_sign_cases() {
        let a = Enclosure::from_endpoints(Float::with_val(64, -2), Float::with_val(64, 3));
        let b = Enclosure::from_endpoints(Float::with_val(64, -5), Float::with_val(64, 1));
        let m = a.mul(&b, 64);
        // extrema: (-2)·(-5)=10, 3·(-5)=-15
        assert!(m.contains(&10u32) && m.contains(&-15i32));
        assert!(*m.lo() <= -15 && *m.hi() >= 10);
    }

    #[test]
    fn ladder_reaches_max_exactly_once() {
        let p = PrecisionPolicy::new(48, 100, 1e-12).unwrap();
        let steps: Vec<u32> = p.ladder().collect();
        assert_eq!(steps, vec![48, 96, 100]);
    }

    #[test]
    fn precision_exhausted_on_impossible_target() {
        // Width of the input alone exceeds any precision's help.
        let wide = Enclosure::from_endpoints(Float::with_val(64, 1), Float::with_val(64, 2));
        let tight = PrecisionPolicy::new(16, 32, 1e-30).unwrap();
        assert!(matches!(
            exp_enc(&wide, &tight),
            Err(Error::PrecisionExhausted { .. })
        ));
    }
}
