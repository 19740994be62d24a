//! Weil heights and the degree-weighted height functional.
//!
//! Radical generators p^{1/d} get the exact closed form (log p)/d; general
//! algebraic numbers presented by an integer polynomial go through the
//! Mahler-measure route, which doubles as an independent cross-check of the
//! closed form.

use rug::{Integer, Rational};

use crate::bigreal::{self, Enclosure, PrecisionPolicy};
use crate::error::{Error, Result};
use crate::mahler;
use crate::poly::IntPolynomial;
use crate::primes;

/// Sound enclosure of h(p^{1/d}) = (log p)/d.
///
/// `p` and `d` are expected to be prime (the minimal polynomial x^d − p is
/// then irreducible by the Eisenstein criterion); only positivity is
/// enforced here.
pub fn radical_height(p: &Integer, d: &Integer, policy: &PrecisionPolicy) -> Result<Enclosure> {
    if *p < 2 || *d < 2 {
        return Err(Error::Domain(format!(
            "radical height needs p ≥ 2 and d ≥ 2, got p = {p}, d = {d}"
        )));
    }
    bigreal::refine_enclosure(
        policy,
        bigreal::WidthGoal::Absolute(policy.target_width),
        |prec| Ok(bigreal::ln_int_at(p, prec)?.div_int(d, prec)),
    )
}

/// Sound enclosure of degree^{gamma} · h for an arbitrary real exponent.
///
/// Single-shot at the precision of `h` (no adaptive loop): width is
/// dominated by the width of `h`, which the caller controls.
pub fn f_value(degree: &Integer, gamma: f64, h: &Enclosure) -> Enclosure {
    assert!(gamma.is_finite(), "exponent must be finite");
    let g = Rational::from_f64(gamma).expect("finite f64 is rational");
    f_value_rational(degree, &g, h)
}

/// Exact-rational-exponent variant, used where the exponent itself is
/// derived from other exact parameters.
pub fn f_value_rational(degree: &Integer, gamma: &Rational, h: &Enclosure) -> Enclosure {
    assert!(*degree >= 1, "degree must be at least 1");
    assert!(!(*h.lo() < 0), "height enclosure must be nonnegative");
    let prec = h.precision_bits().max(64);
    if *degree == 1 {
        // 1^γ = 1 exactly; keep h untouched.
        return h.clone();
    }
    let ln_d = bigreal::ln_int_at(degree, prec).expect("degree ≥ 1");
    let g = Enclosure::from_rational(gamma, prec);
    let scale = bigreal::exp_at(&g.mul(&ln_d, prec), prec);
    scale.mul(h, prec)
}

/// Sound enclosure of the Mahler measure M(f).
pub fn mahler_measure(f: &IntPolynomial, policy: &PrecisionPolicy) -> Result<Enclosure> {
    mahler::mahler_measure_impl(f, policy)
}

/// Sound enclosure of h(α) = (log M(f))/deg f for f the minimal polynomial
/// of α over the rationals.
///
/// Irreducibility is the caller's responsibility; the only screen applied
/// is a cheap rational-root search, which rejects obviously reducible
/// inputs of degree ≥ 2.
pub fn weil_height_from_minpoly(f: &IntPolynomial, policy: &PrecisionPolicy) -> Result<Enclosure> {
    let deg = match f.degree() {
        Some(d) if d >= 1 => d,
        _ => {
            return Err(Error::Domain(
                "height needs a polynomial of degree ≥ 1".into(),
            ))
        }
    };
    if deg > 1 && f.has_rational_root() {
        return Err(Error::Domain(
            "polynomial has a rational root, so it is not a minimal polynomial".into(),
        ));
    }
    let m = mahler_measure(f, policy)?;
    let degree = Integer::from(deg as u64);
    bigreal::refine_enclosure(
        policy,
        bigreal::WidthGoal::Absolute(policy.target_width),
        |prec| Ok(bigreal::ln_at(&m, prec)?.div_int(&degree, prec)),
    )
}

/// Eisenstein criterion at the prime q: monic, q divides every non-leading
/// coefficient, q² does not divide the constant term.
pub fn eisenstein_check(f: &IntPolynomial, q: &Integer) -> Result<bool> {
    if !primes::is_prime(q).is_prime() {
        return Err(Error::Domain(format!("Eisenstein modulus {q} is not prime")));
    }
    let deg = match f.degree() {
        Some(d) if d >= 1 => d,
        _ => return Ok(false),
    };
    if !f.is_monic() {
        return Ok(false);
    }
    for i in 0..deg {
        if !f.coeff(i).is_divisible(q) {
            return Ok(false);
        }
    }
    let q_sq = Integer::from(q * q);
    Ok(!f.coeff(0).is_divisible(&q_sq))
}
