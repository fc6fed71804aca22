//! Prime windows, factorization, multiplicative order and perfect powers.
//!
//! Windows are enumerated with a segmented sieve so that a window such as
//! `[10^6, 2*10^6]` only sieves its own range plus the base primes up to
//! `sqrt(max_p)`.

use std::sync::OnceLock;

use num_integer::{Integer, Roots};
use serde::Serialize;

use crate::arith::{add_mod, mul_mod, pow_mod, reduce_signed};
use crate::error::{Error, Result};

const SEGMENT_LEN: u64 = 1 << 16;

/// Primes below this bound are removed by trial division before Pollard rho.
const TRIAL_BOUND: u64 = 1 << 16;

/// Inclusive range of primes `[min_p, max_p]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PrimeWindow {
    min_p: u64,
    max_p: u64,
}

impl PrimeWindow {
    pub fn new(min_p: u64, max_p: u64) -> Result<Self> {
        if min_p < 2 || min_p > max_p {
            return Err(Error::InvalidWindow { min_p, max_p });
        }
        Ok(PrimeWindow { min_p, max_p })
    }

    /// Window `[2, max_p]`.
    pub fn up_to(max_p: u64) -> Result<Self> {
        Self::new(2, max_p)
    }

    pub fn min_p(&self) -> u64 {
        self.min_p
    }

    pub fn max_p(&self) -> u64 {
        self.max_p
    }

    pub fn contains(&self, n: u64) -> bool {
        (self.min_p..=self.max_p).contains(&n)
    }

    pub fn primes(&self) -> Vec<u64> {
        primes_in(*self)
    }

    /// Splits the window into at most `count` disjoint, contiguous,
    /// ascending sub-windows covering the same integers.
    pub fn shards(&self, count: usize) -> Vec<PrimeWindow> {
        let count = count.max(1) as u64;
        let span = self.max_p - self.min_p + 1;
        let step = span.div_ceil(count).max(1);
        let mut out = Vec::new();
        let mut lo = self.min_p;
        loop {
            let hi = lo.saturating_add(step - 1).min(self.max_p);
            out.push(PrimeWindow { min_p: lo, max_p: hi });
            if hi == self.max_p {
                break;
            }
            lo = hi + 1;
        }
        out
    }
}

fn small_sieve(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

fn trial_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| small_sieve(TRIAL_BOUND))
}

/// All primes in the window, ascending.
pub fn primes_in(window: PrimeWindow) -> Vec<u64> {
    let (lo, hi) = (window.min_p, window.max_p);
    let base = small_sieve(hi.sqrt());
    let mut out = Vec::new();
    let mut seg_lo = lo;
    while seg_lo <= hi {
        let seg_hi = seg_lo.saturating_add(SEGMENT_LEN - 1).min(hi);
        let mut composite = vec![false; (seg_hi - seg_lo + 1) as usize];
        for &q in &base {
            if q * q > seg_hi {
                break;
            }
            let first = (q * q).max(seg_lo.div_ceil(q) * q);
            let mut j = first;
            while j <= seg_hi {
                composite[(j - seg_lo) as usize] = true;
                j += q;
            }
        }
        out.extend(
            composite
                .iter()
                .enumerate()
                .filter(|(_, &c)| !c)
                .map(|(i, _)| seg_lo + i as u64)
                .filter(|&n| n >= 2),
        );
        if seg_hi == hi {
            break;
        }
        seg_lo = seg_hi + 1;
    }
    out
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A positive integer with its prime factorization, factors ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactoredInteger {
    pub value: u64,
    pub factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Multiplies the factorization back out.
    pub fn product(&self) -> u64 {
        self.factors.iter().map(|&(p, e)| p.pow(e)).product()
    }
}

// Pollard rho with Floyd cycle detection; `n` must be composite with no
// factor below the trial bound.
fn pollard_rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| add_mod(mul_mod(x, x, n), c, n);
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    split_large(d, out);
    split_large(n / d, out);
}

pub fn factorize(n: u64) -> Result<FactoredInteger> {
    if n == 0 {
        return Err(Error::FactorizeZero);
    }
    let mut rest = n;
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for &p in trial_primes() {
        if p * p > rest {
            break;
        }
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if rest > 1 {
        let mut large = Vec::new();
        split_large(rest, &mut large);
        large.sort_unstable();
        for p in large {
            match factors.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
    }
    Ok(FactoredInteger { value: n, factors })
}

/// Least `d >= 1` with `a^d = 1 (mod p)`, found by stripping prime factors
/// from `p - 1` while the power stays 1.
pub fn multiplicative_order(a: i64, p: u64) -> Result<u64> {
    let base = reduce_signed(a as i128, p);
    if base == 0 || p < 2 {
        return Err(Error::NotCoprime { a, p });
    }
    let group = factorize(p - 1)?;
    let mut order = p - 1;
    for (q, e) in group.factors {
        for _ in 0..e {
            if pow_mod(base, order / q, p) == 1 {
                order /= q;
            } else {
                break;
            }
        }
    }
    Ok(order)
}

/// Writes `q = base^exponent` with `exponent` maximal, so `base` is not a
/// perfect power.
pub fn perfect_power_decompose(q: u64) -> Result<(u64, u32)> {
    if q <= 1 {
        return Err(Error::NotAbovePowerBase(q as i128));
    }
    let max_exp = 63 - q.leading_zeros();
    for exp in (2..=max_exp).rev() {
        let root = q.nth_root(exp);
        if root.checked_pow(exp) == Some(q) {
            return Ok((root, exp));
        }
    }
    Ok((q, 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_windows() {
        assert_eq!(primes_in(PrimeWindow::new(2, 10).unwrap()), vec![2, 3, 5, 7]);
        assert!(primes_in(PrimeWindow::new(14, 16).unwrap()).is_empty());
        assert_eq!(primes_in(PrimeWindow::new(2, 2).unwrap()), vec![2]);
        assert_eq!(primes_in(PrimeWindow::new(97, 97).unwrap()), vec![97]);
    }

    #[test]
    fn window_rejects_bad_bounds() {
        assert!(PrimeWindow::new(1, 10).is_err());
        assert!(PrimeWindow::new(11, 10).is_err());
    }

    #[test]
    fn segmented_window_far_from_origin() {
        let w = PrimeWindow::new(1_000_000, 1_000_200).unwrap();
        let expected: Vec<u64> = (1_000_000..=1_000_200).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes_in(w), expected);
    }

    #[test]
    fn shards_cover_window() {
        let w = PrimeWindow::new(7, 1000).unwrap();
        for k in [1, 2, 3, 7, 64, 5000] {
            let shards = w.shards(k);
            assert_eq!(shards.first().unwrap().min_p(), 7);
            assert_eq!(shards.last().unwrap().max_p(), 1000);
            for pair in shards.windows(2) {
                assert_eq!(pair[0].max_p() + 1, pair[1].min_p());
            }
            let merged: Vec<u64> = shards.iter().flat_map(|s| s.primes()).collect();
            assert_eq!(merged, w.primes());
        }
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(12).unwrap().factors, vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(6).unwrap().factors, vec![(2, 1), (3, 1)]);
        assert!(factorize(1).unwrap().factors.is_empty());
        assert_eq!(factorize(0), Err(Error::FactorizeZero));
    }

    #[test]
    fn factorize_beyond_trial_bound() {
        // 65537 and 65539 are both prime, so rho has to split the product.
        let n = 65537u64 * 65539;
        assert_eq!(factorize(n).unwrap().factors, vec![(65537, 1), (65539, 1)]);
        let n = 4 * 1_000_000_007u64 * 998_244_353;
        let f = factorize(n).unwrap();
        assert_eq!(f.factors, vec![(2, 2), (998_244_353, 1), (1_000_000_007, 1)]);
        assert_eq!(f.product(), n);
    }

    #[test]
    fn order_examples() {
        assert_eq!(multiplicative_order(2, 7).unwrap(), 3);
        assert_eq!(multiplicative_order(2, 3).unwrap(), 2);
        for p in [2, 3, 101, 10007] {
            assert_eq!(multiplicative_order(1, p).unwrap(), 1);
        }
        assert_eq!(multiplicative_order(-1, 11).unwrap(), 2);
        assert!(multiplicative_order(14, 7).is_err());
    }

    #[test]
    fn perfect_power_examples() {
        assert_eq!(perfect_power_decompose(8).unwrap(), (2, 3));
        assert_eq!(perfect_power_decompose(6).unwrap(), (6, 1));
        assert_eq!(perfect_power_decompose(36).unwrap(), (6, 2));
        assert_eq!(perfect_power_decompose(64).unwrap(), (2, 6));
        assert_eq!(perfect_power_decompose(2).unwrap(), (2, 1));
        assert!(perfect_power_decompose(1).is_err());
        assert!(perfect_power_decompose(0).is_err());
    }
}
