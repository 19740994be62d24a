//! Integer-coefficient polynomials: the representation used for minimal
//! polynomials and the Mahler-measure oracle.
//!
//! Two text formats are accepted: a dense ascending coefficient list
//! `"c0,c1,...,cd"` and a human form like `"x^10 + x^9 - x^7"` (ASCII only,
//! integer coefficients, single variable `x`).

use std::fmt;
use std::str::FromStr;

use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Dense integer polynomial, coefficients in ascending degree order.
///
/// Normalized: no trailing zero coefficients, so `coeffs.last()` is the
/// leading coefficient. The zero polynomial is the empty list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<Integer>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<Integer>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    /// x^d − p, the minimal polynomial of a radical generator.
    pub fn radical_minpoly(d: u32, p: &Integer) -> Self {
        assert!(d >= 1);
        let mut coeffs = vec![Integer::new(); d as usize + 1];
        coeffs[0] = -p.clone();
        coeffs[d as usize] = Integer::from(1);
        Self::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Integer {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&Integer> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| *c == 1)
    }

    pub fn derivative(&self) -> IntPolynomial {
        let d: Vec<Integer> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| {
                let mut v = c.clone();
                v *= i as u64;
                v
            })
            .collect();
        IntPolynomial::new(d)
    }

    /// gcd of all coefficients, nonnegative; 0 for the zero polynomial.
    pub fn content(&self) -> Integer {
        let mut g = Integer::new();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        g
    }

    /// Divide out the content and make the leading coefficient positive.
    /// Returns (unit·content, primitive part); content carries the sign so
    /// that `self = content · primitive`.
    pub fn primitive(&self) -> (Integer, IntPolynomial) {
        if self.is_zero() {
            return (Integer::new(), IntPolynomial::zero());
        }
        let mut c = self.content();
        if *self.leading().unwrap() < 0 {
            c = -c;
        }
        let prim = IntPolynomial::new(
            self.coeffs
                .iter()
                .map(|x| Integer::from(x.div_exact_ref(&c)))
                .collect(),
        );
        (c, prim)
    }

    pub fn eval_integer(&self, x: &Integer) -> Integer {
        let mut acc = Integer::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || other.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![Integer::new(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += Integer::from(a * b);
            }
        }
        IntPolynomial::new(out)
    }

    /// Strip the x^k factor; returns (k, remaining polynomial).
    pub fn strip_zero_roots(&self) -> (usize, IntPolynomial) {
        let k = self
            .coeffs
            .iter()
            .position(|c| *c != 0)
            .unwrap_or(self.coeffs.len());
        (k, IntPolynomial::new(self.coeffs[k..].to_vec()))
    }

    /// Cheap reducibility screen: search for rational roots u/v with
    /// u | constant, v | leading, enumerating divisors only when the ends
    /// are small enough to factor by trial division.
    pub fn has_rational_root(&self) -> bool {
        if self.is_zero() || self.degree() == Some(0) {
            return false;
        }
        let (k, f) = self.strip_zero_roots();
        if k > 0 {
            return true; // root 0
        }
        let a0 = f.coeff(0);
        let an = f.leading().unwrap().clone();
        let nums = small_divisors(&a0);
        let dens = small_divisors(&an);
        for u in &nums {
            for v in &dens {
                for sign in [1, -1] {
                    let cand = Rational::from((Integer::from(sign) * u, v.clone()));
                    if f.eval_rational(&cand) == 0 {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// Parse either the dense form `"c0,c1,...,cd"` or the human form
    /// `"x^3 - 2"`.
    pub fn parse(text: &str) -> Result<IntPolynomial> {
        let t = text.trim();
        if t.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        if !t.is_ascii() {
            return Err(Error::Parse("polynomial text must be ASCII".into()));
        }
        if t.contains(',') {
            Self::parse_dense(t)
        } else {
            Self::parse_human(t)
        }
    }

    fn parse_dense(t: &str) -> Result<IntPolynomial> {
        let mut coeffs = Vec::new();
        for piece in t.split(',') {
            let piece = piece.trim();
            let c = Integer::from_str(piece)
                .map_err(|_| Error::Parse(format!("bad coefficient {piece:?}")))?;
            coeffs.push(c);
        }
        Ok(IntPolynomial::new(coeffs))
    }

    fn parse_human(t: &str) -> Result<IntPolynomial> {
        // "2 2" must not silently concatenate to 22.
        let mut prev_digit = false;
        let mut gap = false;
        for b in t.bytes() {
            if b.is_ascii_whitespace() {
                gap = prev_digit;
            } else {
                if b.is_ascii_digit() && gap {
                    return Err(Error::Parse(format!(
                        "whitespace splits a number in {t:?}"
                    )));
                }
                prev_digit = b.is_ascii_digit();
                gap = false;
            }
        }
        let s: Vec<u8> = t.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let bad = |i: usize| Error::Parse(format!("unexpected character at byte {i} in {t:?}"));
        let mut terms: Vec<(usize, Integer)> = Vec::new();
        let mut i = 0usize;
        while i < s.len() {
            let mut sign = 1i32;
            // leading sign (mandatory between terms, optional on the first)
            if s[i] == b'+' || s[i] == b'-' {
                if s[i] == b'-' {
                    sign = -1;
                }
                i += 1;
            } else if !terms.is_empty() {
                return Err(bad(i));
            }
            let digits_start = i;
            while i < s.len() && s[i].is_ascii_digit() {
                i += 1;
            }
            let coeff_digits = &s[digits_start..i];
            let has_x = i < s.len() && s[i] == b'x';
            if !has_x && coeff_digits.is_empty() {
                return Err(bad(i));
            }
            let mut coeff = if coeff_digits.is_empty() {
                Integer::from(1)
            } else {
                Integer::from_str(std::str::from_utf8(coeff_digits).unwrap())
                    .map_err(|_| bad(digits_start))?
            };
            if sign < 0 {
                coeff = -coeff;
            }
            let mut power = 0usize;
            if has_x {
                i += 1;
                power = 1;
                if i < s.len() && s[i] == b'^' {
                    i += 1;
                    let exp_start = i;
                    while i < s.len() && s[i].is_ascii_digit() {
                        i += 1;
                    }
                    if exp_start == i {
                        return Err(bad(i));
                    }
                    power = std::str::from_utf8(&s[exp_start..i])
                        .unwrap()
                        .parse::<usize>()
                        .map_err(|_| bad(exp_start))?;
                }
            }
            terms.push((power, coeff));
        }
        let max_pow = terms.iter().map(|(p, _)| *p).max().unwrap_or(0);
        let mut coeffs = vec![Integer::new(); max_pow + 1];
        for (p, c) in terms {
            coeffs[p] += c;
        }
        Ok(IntPolynomial::new(coeffs))
    }
}

/// Divisors of |n| up to trial-division practicality; falls back to {1, |n|}
/// when |n| is large, keeping the screen cheap.
fn small_divisors(n: &Integer) -> Vec<Integer> {
    let a = n.clone().abs();
    if a == 0 {
        return vec![Integer::from(1)];
    }
    if let Some(v) = a.to_u64() {
        if v <= 1_000_000 {
            let mut divs = Vec::new();
            let mut i = 1u64;
            while i * i <= v {
                if v % i == 0 {
                    divs.push(Integer::from(i));
                    if i != v / i {
                        divs.push(Integer::from(v / i));
                    }
                }
                i += 1;
            }
            divs.sort();
            return divs;
        }
    }
    vec![Integer::from(1), a]
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (pow, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let mag = c.clone().abs();
            if first {
                if *c < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else if *c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match pow {
                0 => write!(f, "{mag}")?,
                _ => {
                    if mag != 1 {
                        write!(f, "{mag}")?;
                    }
                    if pow == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{pow}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Rational-coefficient polynomial helpers for exact gcd work
/// (Yun square-free decomposition in the Mahler module).
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct RatPoly {
    /// ascending, trailing zeros trimmed
    pub coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_int(p: &IntPolynomial) -> Self {
        RatPoly::new(p.coeffs().iter().map(|c| Rational::from(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| {
                    let mut v = c.clone();
                    v *= i as u64;
                    v
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![Rational::new(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] -= c;
        }
        RatPoly::new(out)
    }

    /// Euclidean division; divisor must be nonzero.
    pub fn divrem(&self, divisor: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let dlead = divisor.coeffs.last().unwrap().clone();
        let ddeg = divisor.degree().unwrap();
        let mut rem = self.coeffs.clone();
        if self.degree().unwrap_or(0) < ddeg || self.is_zero() {
            return (RatPoly::new(Vec::new()), self.clone());
        }
        let qdeg = self.degree().unwrap() - ddeg;
        let mut quot = vec![Rational::new(); qdeg + 1];
        for k in (0..=qdeg).rev() {
            let top = rem[k + ddeg].clone();
            if top == 0 {
                continue;
            }
            let q = top / &dlead;
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                let sub = Rational::from(&q * dc);
                rem[k + j] -= sub;
            }
            quot[k] = q;
        }
        (RatPoly::new(quot), RatPoly::new(rem))
    }

    pub fn div_exact(&self, divisor: &RatPoly) -> RatPoly {
        let (q, r) = self.divrem(divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lead = a.coeffs.last().unwrap().clone();
        RatPoly::new(a.coeffs.iter().map(|c| Rational::from(c / &lead)).collect())
    }

    /// Clear denominators, returning the primitive integer polynomial with
    /// positive leading coefficient.
    pub fn to_primitive_int(&self) -> IntPolynomial {
        if self.is_zero() {
            return IntPolynomial::zero();
        }
        let mut den = Integer::from(1);
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let ints: Vec<Integer> = self
            .coeffs
            .iter()
            .map(|c| {
                let scaled = Rational::from(c * &den);
                debug_assert!(*scaled.denom() == 1);
                scaled.numer().clone()
            })
            .collect();
        let (_, prim) = IntPolynomial::new(ints).primitive();
        prim
    }
}

/// Yun's square-free decomposition: returns primitive factors with their
/// multiplicities, `f = content · ∏ gᵢ^{mᵢ}` and each gᵢ square-free with
/// positive leading coefficient.
pub(crate) fn squarefree_decomposition(f: &IntPolynomial) -> Vec<(IntPolynomial, usize)> {
    let deg = f.degree().expect("nonzero polynomial");
    if deg == 0 {
        return Vec::new();
    }
    let fq = RatPoly::from_int(f);
    let g0 = fq.gcd(&fq.derivative());
    if g0.degree() == Some(0) {
        let (_, prim) = f.primitive();
        return vec![(prim, 1)];
    }
    let mut factors = Vec::new();
    let mut w = fq.div_exact(&g0);
    let mut y = fq.derivative().div_exact(&g0);
    let mut i = 1usize;
    loop {
        let z = y.sub(&w.derivative());
        if z.is_zero() {
            if w.degree().unwrap_or(0) >= 1 {
                factors.push((w.to_primitive_int(), i));
            }
            break;
        }
        let g = w.gcd(&z);
        if g.degree().unwrap_or(0) >= 1 {
            factors.push((g.to_primitive_int(), i));
        }
        w = w.div_exact(&g);
        y = z.div_exact(&g);
        i += 1;
        if w.degree() == Some(0) {
            break;
        }
    }
    factors
}
