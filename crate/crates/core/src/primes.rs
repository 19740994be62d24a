//! Big-integer primality testing and smallest-prime interval search.
//!
//! Verdicts are deterministic and honest about their strength: trial
//! division and the fixed-base Miller–Rabin set prove primality below 2^64;
//! beyond that the Baillie–PSW combination is reported as `ProbablePrime`
//! so downstream reports can flag it.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use rug::Integer;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimalityStatus {
    Composite,
    ProvablePrime,
    ProbablePrime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimalityMethod {
    TrialDivision,
    DeterministicMr,
    Bpsw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimalityVerdict {
    pub status: PrimalityStatus,
    pub method: PrimalityMethod,
    /// Miller–Rabin rounds actually executed.
    pub rounds: u32,
}

impl PrimalityVerdict {
    pub fn is_prime(&self) -> bool {
        self.status != PrimalityStatus::Composite
    }
}

/// Wheel limit: every candidate is trial-divided by primes below 1000 first.
const SMALL_PRIME_LIMIT: u32 = 1000;

/// Composites below NEXT_PRIME_AFTER_WHEEL² always have a wheel factor, so
/// survivors below it are proven prime by trial division alone.
const TRIAL_PROOF_BOUND: u64 = 1009 * 1009;

/// Fixed Miller–Rabin base set proving primality for all n < 3.3·10^24 ⊃ u64.
const DETERMINISTIC_MR_BASES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let limit = SMALL_PRIME_LIMIT as usize;
        let mut sieve = vec![true; limit];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..limit {
            if sieve[i] {
                for j in (i * i..limit).step_by(i) {
                    sieve[j] = false;
                }
            }
        }
        (2..limit as u32).filter(|&i| sieve[i as usize]).collect()
    })
}

fn verdict(status: PrimalityStatus, method: PrimalityMethod, rounds: u32) -> PrimalityVerdict {
    PrimalityVerdict {
        status,
        method,
        rounds,
    }
}

/// Classify `n ≥ 0`. Composite covers n < 2 as well.
pub fn is_prime(n: &Integer) -> PrimalityVerdict {
    use PrimalityMethod::*;
    use PrimalityStatus::*;

    if *n < 2 {
        return verdict(Composite, TrialDivision, 0);
    }
    for &q in small_primes() {
        if *n == q {
            return verdict(ProvablePrime, TrialDivision, 0);
        }
        if n.is_divisible_u(q) {
            return verdict(Composite, TrialDivision, 0);
        }
        if u64::from(q) * u64::from(q) > *n {
            // q² > n and no factor ≤ q found.
            return verdict(ProvablePrime, TrialDivision, 0);
        }
    }
    if *n < TRIAL_PROOF_BOUND {
        return verdict(ProvablePrime, TrialDivision, 0);
    }

    if n.significant_bits() <= 64 {
        let mut rounds = 0;
        for &base in &DETERMINISTIC_MR_BASES {
            rounds += 1;
            if !miller_rabin_round(n, &Integer::from(base)) {
                return verdict(Composite, DeterministicMr, rounds);
            }
        }
        return verdict(ProvablePrime, DeterministicMr, rounds);
    }

    // Baillie–PSW: strong base-2 Miller–Rabin plus a strong Lucas test.
    if !miller_rabin_round(n, &Integer::from(2)) {
        return verdict(Composite, Bpsw, 1);
    }
    if n.is_perfect_square() {
        return verdict(Composite, Bpsw, 1);
    }
    if strong_lucas_selfridge(n) {
        verdict(ProbablePrime, Bpsw, 1)
    } else {
        verdict(Composite, Bpsw, 1)
    }
}

/// One strong-probable-prime round; `n` odd, `n > base ≥ 2`.
fn miller_rabin_round(n: &Integer, base: &Integer) -> bool {
    let n_minus_1 = Integer::from(n - 1u32);
    let s = n_minus_1.find_one(0).expect("n ≥ 3 is odd, so n−1 ≥ 2");
    let d = Integer::from(&n_minus_1 >> s);

    let mut x = base
        .clone()
        .pow_mod(&d, n)
        .expect("nonnegative exponent");
    if x == 1 || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x.square_mut();
        x %= n;
        if x == n_minus_1 {
            return true;
        }
        if x == 1 {
            return false;
        }
    }
    false
}

/// Halve `x` modulo odd `n`, with `x` already reduced into [0, n).
fn halve_mod(mut x: Integer, n: &Integer) -> Integer {
    if x.is_odd() {
        x += n;
    }
    x >> 1
}

fn reduce(mut x: Integer, n: &Integer) -> Integer {
    x %= n;
    if x < 0 {
        x += n;
    }
    x
}

/// Strong Lucas probable-prime test with Selfridge parameter selection
/// (method A): first D in 5, −7, 9, −11, … with Jacobi(D|n) = −1, then
/// P = 1, Q = (1 − D)/4. Caller guarantees n odd, coprime to the wheel,
/// and not a perfect square.
fn strong_lucas_selfridge(n: &Integer) -> bool {
    let mut d_abs = 5u32;
    let mut positive = true;
    let d: Integer = loop {
        let cand = if positive {
            Integer::from(d_abs)
        } else {
            -Integer::from(d_abs)
        };
        match cand.jacobi(n) {
            -1 => break cand,
            0 => {
                // Shares a factor with n; n > |D| here, so composite.
                return false;
            }
            _ => {
                d_abs += 2;
                positive = !positive;
            }
        }
    };

    // P = 1, Q = (1 − D)/4; D ≡ 1 (mod 4) by construction.
    let q: Integer = (Integer::from(1) - &d) / 4u32;

    // n + 1 = k·2^s with k odd.
    let n_plus_1 = Integer::from(n + 1u32);
    let s = n_plus_1.find_one(0).expect("n odd, so n+1 even");
    let k = Integer::from(&n_plus_1 >> s);

    // Binary ladder for U_k, V_k, Q^k (mod n); P = 1 simplifies the odd step.
    let mut u = Integer::from(1);
    let mut v = Integer::from(1);
    let mut qk = reduce(q.clone(), n);
    let bits = k.significant_bits();
    for i in (0..bits - 1).rev() {
        // double: (U, V, q) -> (U·V, V² − 2q, q²)
        u = reduce(Integer::from(&u * &v), n);
        v = reduce(Integer::from(&v * &v) - Integer::from(&qk << 1), n);
        qk = reduce(Integer::from(&qk * &qk), n);
        if k.get_bit(i) {
            // advance index by one: U' = (U + V)/2, V' = (D·U + V)/2
            let nu = halve_mod(reduce(Integer::from(&u + &v), n), n);
            let nv = halve_mod(reduce(Integer::from(&d * &u) + &v, n), n);
            u = reduce(nu, n);
            v = reduce(nv, n);
            qk = reduce(qk * &q, n);
        }
    }

    if u == 0 || v == 0 {
        return true;
    }
    for _ in 1..s {
        v = reduce(Integer::from(&v * &v) - Integer::from(&qk << 1), n);
        if v == 0 {
            return true;
        }
        qk = reduce(Integer::from(&qk * &qk), n);
    }
    false
}

/// Smallest prime q with `lo ≤ q ≤ hi` and `q ∉ exclude`, or `None`.
///
/// Sequential upward scan, so minimality and run-to-run determinism are
/// structural.
pub fn find_prime_in_interval(
    lo: &Integer,
    hi: &Integer,
    exclude: &BTreeSet<Integer>,
) -> Option<Integer> {
    if lo > hi || *hi < 2 {
        return None;
    }
    let mut candidate = if *lo < 2 { Integer::from(2) } else { lo.clone() };
    // After 2, step through odd numbers only.
    if candidate > 2 && candidate.is_even() {
        candidate += 1;
    }
    while candidate <= *hi {
        if !exclude.contains(&candidate) && is_prime(&candidate).is_prime() {
            return Some(candidate);
        }
        if candidate == 2 {
            candidate += 1;
        } else {
            candidate += 2;
        }
    }
    None
}

/// Smallest prime ≥ `start` not in `exclude`; errors only if the scan cap
/// (practically unreachable, Bertrand guarantees a hit long before) is hit.
pub fn next_prime_at_least(
    start: &Integer,
    exclude: &BTreeSet<Integer>,
    scan_cap: u64,
) -> Result<Integer> {
    let mut candidate = if *start < 2 { Integer::from(2) } else { start.clone() };
    if candidate > 2 && candidate.is_even() {
        candidate += 1;
    }
    let mut scanned: u64 = 0;
    loop {
        if scanned >= scan_cap {
            return Err(Error::SearchExhausted {
                start: start.clone(),
                scanned,
            });
        }
        scanned += 1;
        if !exclude.contains(&candidate) && is_prime(&candidate).is_prime() {
            return Ok(candidate);
        }
        if candidate == 2 {
            candidate += 1;
        } else {
            candidate += 2;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use PrimalityMethod::*;
    use PrimalityStatus::*;

    fn sieve(limit: usize) -> Vec<bool> {
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

    #[test]
    fn carmichael_561_is_composite() {
        let v = is_prime(&Integer::from(561));
        assert_eq!(v.status, Composite);
    }

    #[test]
    fn small_prime_proved_by_trial_division() {
        let v = is_prime(&Integer::from(293));
        assert_eq!(v.status, ProvablePrime);
        assert_eq!(v.method, TrialDivision);
    }

    #[test]
    fn mersenne_61_proved_by_deterministic_mr() {
        let m61 = (Integer::from(1) << 61) - 1u32;
        assert_eq!(m61, Integer::from(2305843009213693951u64));
        let v = is_prime(&m61);
        assert_eq!(v.status, ProvablePrime);
        assert_eq!(v.method, DeterministicMr);
        assert_eq!(v.rounds, 12);
    }

    #[test]
    fn strong_pseudoprime_to_small_bases_caught() {
        // 3825123056546413051 = 149491·747451·34233211 is a strong
        // pseudoprime to every base up to 31; base 37 exposes it. All its
        // factors clear the trial-division wheel.
        let n = Integer::from(3825123056546413051u64);
        assert_eq!(
            Integer::from(149491u64) * 747451u64 * 34233211u64,
            n
        );
        let v = is_prime(&n);
        assert_eq!(v.status, Composite);
        assert_eq!(v.method, DeterministicMr);
        assert_eq!(v.rounds, 12);
    }

    #[test]
    fn bpsw_on_large_prime_and_composite() {
        // 2^89 − 1 is a Mersenne prime, 89 bits wide.
        let m89 = (Integer::from(1) << 89) - 1u32;
        let v = is_prime(&m89);
        assert_eq!(v.status, ProbablePrime);
        assert_eq!(v.method, Bpsw);

        // 2^101 − 1 = 7432339208719 · 341117531003194129 is composite.
        let m101 = (Integer::from(1) << 101) - 1u32;
        assert_eq!(is_prime(&m101).status, Composite);

        // A composite with no wheel factor: product of two 40-bit-ish primes
        // squared past 2^64.
        let p = Integer::from(1099511627791u64); // prime
        let n = p.clone() * &p;
        assert!(n.significant_bits() > 64);
        assert_eq!(is_prime(&n).status, Composite);
    }

    #[test]
    fn lucas_and_mr_disagree_on_their_pseudoprimes() {
        // 2047 = 23·89 is a strong pseudoprime base 2 but fails Lucas.
        let n = Integer::from(2047);
        assert!(miller_rabin_round(&n, &Integer::from(2)));
        assert!(!strong_lucas_selfridge(&n));

        // 5459 is a strong Lucas pseudoprime but fails MR base 2.
        let n = Integer::from(5459);
        assert!(strong_lucas_selfridge(&n));
        assert!(!miller_rabin_round(&n, &Integer::from(2)));
    }

    #[test]
    fn agreement_with_sieve_to_one_million() {
        let limit = 1_000_000usize;
        let s = sieve(limit);
        for n in 0..limit {
            let got = is_prime(&Integer::from(n)).is_prime();
            assert_eq!(got, s[n], "disagreement at {n}");
        }
    }

    #[test]
    fn interval_search_examples() {
        let ex: BTreeSet<Integer> = [Integer::from(5)].into_iter().collect();
        assert_eq!(
            find_prime_in_interval(&Integer::from(4), &Integer::from(8), &ex),
            Some(Integer::from(7))
        );
        assert_eq!(
            find_prime_in_interval(&Integer::from(24), &Integer::from(28), &BTreeSet::new()),
            None
        );
        assert_eq!(
            find_prime_in_interval(&Integer::from(2), &Integer::from(2), &BTreeSet::new()),
            Some(Integer::from(2))
        );
    }

    #[test]
    fn interval_search_minimality_exhaustive() {
        let s = sieve(3000);
        let exclude: BTreeSet<Integer> =
            [7, 11, 101, 103].into_iter().map(Integer::from).collect();
        for lo in (0..200).chain(980..1100) {
            for span in [0usize, 1, 5, 50] {
                let hi = lo + span;
                let got = find_prime_in_interval(
                    &Integer::from(lo),
                    &Integer::from(hi),
                    &exclude,
                );
                let want = (lo..=hi)
                    .find(|&n| s[n] && !exclude.contains(&Integer::from(n)))
                    .map(Integer::from);
                assert_eq!(got, want, "range [{lo}, {hi}]");
            }
        }
    }

    #[test]
    fn next_prime_at_least_skips_exclusions() {
        let ex: BTreeSet<Integer> = [2, 5].into_iter().map(Integer::from).collect();
        assert_eq!(
            next_prime_at_least(&Integer::from(4), &ex, 1 << 20).unwrap(),
            Integer::from(7)
        );
        assert_eq!(
            next_prime_at_least(&Integer::from(0), &BTreeSet::new(), 1 << 20).unwrap(),
            Integer::from(2)
        );
    }

    #[test]
    fn scan_cap_is_a_clean_error() {
        // Cap of 1 starting inside a prime gap cannot find anything.
        let err = next_prime_at_least(&Integer::from(24), &BTreeSet::new(), 1).unwrap_err();
        assert!(matches!(err, crate::error::Error::SearchExhausted { .. }));
    }
}
