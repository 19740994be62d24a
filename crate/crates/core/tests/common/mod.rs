//! Exact-rational reference oracles, fully independent of the MPFR-backed
//! implementation: truncated series and bisection with explicit remainder
//! brackets. Everything returns a pair (lo, hi) of rationals with
//! lo ≤ value ≤ hi, proved by the series' own error term, so these can
//! cross-check certified enclosures end to end.

#![allow(dead_code)]

use rug::{Integer, Rational};

use heighttower::IntPolynomial;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

/// Bracket of e^q from the Taylor series with a geometric tail bound.
/// Requires q < terms + 2 for the tail to telescope.
pub fn exp_bracket(q: &Rational, terms: u32) -> (Rational, Rational) {
    if *q < 0 {
        let (lo, hi) = exp_bracket(&-q.clone(), terms);
        // e^q = 1/e^{-q}, positive and monotone
        return (
            Rational::from(1u32) / hi,
            Rational::from(1u32) / lo,
        );
    }
    let mut term = Rational::from(1u32);
    let mut sum = Rational::from(1u32);
    for k in 1..=terms {
        term *= q;
        term /= Integer::from(k);
        sum += &term;
    }
    // tail: q^{N+1}/(N+1)! · Σ (q/(N+2))^j
    let mut tail = term.clone();
    tail *= q;
    tail /= Integer::from(terms + 1);
    let ratio = Rational::from(q / Integer::from(terms + 2));
    assert!(ratio < 1, "too few terms for this argument");
    let bound = tail / (Rational::from(1u32) - ratio);
    let hi = sum.clone() + bound;
    (sum, hi)
}

/// Bracket of ln 2 = 2·atanh(1/3).
pub fn ln2_bracket(terms: u32) -> (Rational, Rational) {
    atanh_series_bracket(&rat(1, 3), terms)
}

/// 2·atanh(u) = ln((1+u)/(1−u)) for 0 ≤ u < 1, all-positive series, so the
/// partial sum is a lower bound and the geometric tail an upper bound.
fn atanh_series_bracket(u: &Rational, terms: u32) -> (Rational, Rational) {
    assert!(*u >= 0 && *u < 1);
    let u2 = Rational::from(u * u);
    let mut power = u.clone(); // u^{2j+1}
    let mut sum = Rational::new();
    for j in 0..=terms {
        sum += Rational::from(&power / Integer::from(2 * j + 1));
        power *= &u2;
    }
    sum *= Integer::from(2);
    // power is now u^{2(terms+1)+1}
    let tail = Rational::from(2u32) * power
        / (Integer::from(2 * terms + 3) * (Rational::from(1u32) - u2));
    let hi = sum.clone() + tail;
    (sum, hi)
}

/// Bracket of ln x for rational x > 0, by scaling into [1, 2) and the
/// atanh series.
pub fn ln_bracket(x: &Rational, terms: u32) -> (Rational, Rational) {
    assert!(*x > 0);
    let mut y = x.clone();
    let mut k: i64 = 0;
    while y >= 2 {
        y /= Integer::from(2);
        k += 1;
    }
    while y < 1 {
        y *= Integer::from(2);
        k -= 1;
    }
    let u = Rational::from(&y - Integer::from(1)) / Rational::from(&y + Integer::from(1));
    let (mut lo, mut hi) = atanh_series_bracket(&u, terms);
    if k != 0 {
        let (l2_lo, l2_hi) = ln2_bracket(terms);
        if k > 0 {
            lo += Rational::from(&l2_lo * Integer::from(k));
            hi += Rational::from(&l2_hi * Integer::from(k));
        } else {
            lo += Rational::from(&l2_hi * Integer::from(k));
            hi += Rational::from(&l2_lo * Integer::from(k));
        }
    }
    (lo, hi)
}

/// Bracket of √n by bisection on the exact square, width 2^-width_exp.
pub fn sqrt_bracket(n: u32, width_exp: u32) -> (Rational, Rational) {
    let target = Rational::from(n);
    let mut lo = Rational::new();
    let mut hi = Rational::from(n + 1);
    let iters = width_exp + 32 - (n + 1).leading_zeros();
    for _ in 0..iters {
        let mid = Rational::from(&lo + &hi) / Integer::from(2);
        if Rational::from(&mid * &mid) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Bracket of e^{√d}.
pub fn exp_sqrt_bracket(d: u32, sqrt_width_exp: u32, terms: u32) -> (Rational, Rational) {
    let (s_lo, s_hi) = sqrt_bracket(d, sqrt_width_exp);
    let (lo, _) = exp_bracket(&s_lo, terms);
    let (_, hi) = exp_bracket(&s_hi, terms);
    (lo, hi)
}

/// Bracket of x^e for positive rational bracket x and rational exponent e,
/// via exp(e·ln x).
pub fn pow_bracket(
    x: (&Rational, &Rational),
    e: &Rational,
    terms: u32,
) -> (Rational, Rational) {
    let (lx_lo, _) = ln_bracket(x.0, terms);
    let (_, lx_hi) = ln_bracket(x.1, terms);
    // e·ln x, monotone cases by the sign of e
    let (t_lo, t_hi) = if *e >= 0 {
        (Rational::from(e * &lx_lo), Rational::from(e * &lx_hi))
    } else {
        (Rational::from(e * &lx_hi), Rational::from(e * &lx_lo))
    };
    let (lo, _) = exp_bracket(&t_lo, terms);
    let (_, hi) = exp_bracket(&t_hi, terms);
    (lo, hi)
}

/// Truncated decimal rendering of a rational (toward zero), for freezing
/// reference digits.
pub fn dec_string(q: &Rational, digits: usize) -> String {
    let neg = *q < 0;
    let a = q.clone().abs();
    let int_part = Rational::from(&a).floor().numer().clone();
    let mut frac = a - Rational::from(&int_part);
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push_str(&int_part.to_string());
    s.push('.');
    for _ in 0..digits {
        frac *= Integer::from(10);
        let digit = Rational::from(&frac).floor().numer().clone();
        s.push_str(&digit.to_string());
        frac -= Rational::from(&digit);
    }
    s
}

/// Common prefix of the decimal renderings of a bracket: digits that are
/// certain.
pub fn certain_digits(lo: &Rational, hi: &Rational, digits: usize) -> String {
    let a = dec_string(lo, digits);
    let b = dec_string(hi, digits);
    let common: String = a
        .chars()
        .zip(b.chars())
        .take_while(|(x, y)| x == y)
        .map(|(x, _)| x)
        .collect();
    common
}

/// Sieve of Eratosthenes, the primality reference.
pub fn sieve(limit: usize) -> Vec<bool> {
    let mut s = vec![true; limit];
    s[0] = false;
    if limit > 1 {
        s[1] = false;
    }
    for i in 2..limit {
        if s[i] {
            for j in (i * i..limit).step_by(i) {
                s[j] = false;
            }
        }
    }
    s
}

/// Exact-rational bisection for a root of f inside [lo, hi]; requires a
/// sign change. Returns a bracket of width (hi−lo)/2^iters.
pub fn poly_root_bracket(
    f: &IntPolynomial,
    mut lo: Rational,
    mut hi: Rational,
    iters: u32,
) -> (Rational, Rational) {
    let sign_lo = f.eval_rational(&lo) < 0;
    let sign_hi = f.eval_rational(&hi) < 0;
    assert_ne!(sign_lo, sign_hi, "no sign change on the bracket");
    for _ in 0..iters {
        let mid = Rational::from(&lo + &hi) / Integer::from(2);
        let neg = f.eval_rational(&mid) < 0;
        if neg == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}
