//! Bernoulli numbers modulo `p` through inverse power sums.
//!
//! For odd `m > 1` and primes `p > m`:
//!
//! ```text
//! ((m-1)/m) p B_{p-m}              = sum_{k<p} k^{-(m-1)}  (mod p^2)
//! -((m-1)(m-2)/(2m)) p^2 B_{p-m}   = sum_{k<p} k^{-(m-2)}  (mod p^3)
//! ```
//!
//! Each congruence yields `B_{p-m} mod p` on its own, which gives two
//! independent routes. Exact Bernoulli rationals are only used for the
//! sign calibration at `p = 5, 7`; their numerators grow too fast for
//! scans.

use std::sync::OnceLock;

use num_rational::Ratio;
use serde::Serialize;

use crate::adele::AdeleElement;
use crate::arith;
use crate::error::{Error, Result};
use crate::prime_engine::{is_prime, PrimeWindow};
use crate::report::{serialize_or_inf, CongruenceReport, Record, Status};
use crate::residue::{Modulus, Residue};
use crate::shard::{filter_primes, map_primes};

/// `sum_{k=1}^{p-1} k^{-m} mod p^e`. The inverses come from one batch
/// inversion over `1..p`.
pub fn inverse_power_sum(m: u64, p: u64, e: u32) -> Result<Residue> {
    if p < 3 {
        return Err(Error::precondition(format!("inverse power sums need p >= 3, got {p}")));
    }
    let modulus = Modulus::new(p, e)?;
    let pe = modulus.value();
    let ks: Vec<u64> = (1..p).collect();
    let inverses = arith::batch_inverse(&ks, pe).expect("1..p are units mod p^e");
    let sum = inverses
        .into_iter()
        .fold(0u64, |acc, inv| arith::add_mod(acc, arith::pow_mod(inv, m, pe), pe));
    Ok(modulus.residue(sum as i128))
}

fn check_m(m: u64) -> Result<()> {
    if m < 3 || m % 2 == 0 {
        return Err(Error::precondition(format!("m must be odd and > 1, got {m}")));
    }
    Ok(())
}

fn check_m_p(m: u64, p: u64) -> Result<()> {
    check_m(m)?;
    if p <= m || !is_prime(p) {
        return Err(Error::precondition(format!("p must be a prime > m = {m}, got {p}")));
    }
    Ok(())
}

fn divide_out(sum: Residue, k: u32, what: &str) -> Result<Residue> {
    sum.divide_by_prime_power(k).ok_or_else(|| {
        Error::CongruenceFailure(format!(
            "{what} = {sum} is not divisible by {}^{k}",
            sum.prime()
        ))
    })
}

// The quotient `a / b mod p` of small positive integers known to be units.
fn ratio_mod(num: i128, den: i128, p: u64) -> Residue {
    let m = Modulus::prime_unchecked(p);
    m.residue(num) * m.residue(den).inverse().expect("unit denominator")
}

/// `B_{p-m} mod p` from the mod `p^2` congruence.
pub fn bernoulli_residue(m: u64, p: u64) -> Result<Residue> {
    check_m_p(m, p)?;
    let s = inverse_power_sum(m - 1, p, 2)?;
    let quotient = divide_out(s, 1, "sum of k^-(m-1)")?;
    Ok(quotient * ratio_mod(m as i128, m as i128 - 1, p))
}

// B_{p-m} mod p from the mod p^3 congruence, with the sum it came from.
fn bernoulli_from_cubic(m: u64, p: u64) -> Result<(Residue, Residue)> {
    let s = inverse_power_sum(m - 2, p, 3)?;
    let quotient = divide_out(s, 2, "sum of k^-(m-2)")?;
    let m = m as i128;
    Ok((s, quotient * ratio_mod(-2 * m, (m - 1) * (m - 2), p)))
}

/// Both Glaisher sums and the Bernoulli residue they determine.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GlaisherPair {
    pub p: u64,
    pub m: u64,
    /// `sum k^-(m-1) mod p^2`.
    pub sum_m1: Residue,
    /// `sum k^-(m-2) mod p^3`.
    pub sum_m2: Residue,
    /// `B_{p-m} mod p` via the square congruence.
    pub bernoulli_residue: Residue,
    /// `B_{p-m} mod p` via the cube congruence.
    pub bernoulli_from_cubic: Residue,
}

fn glaisher_pair(m: u64, p: u64) -> Result<GlaisherPair> {
    check_m_p(m, p)?;
    let sum_m1 = inverse_power_sum(m - 1, p, 2)?;
    let bernoulli_residue = bernoulli_residue(m, p)?;
    let (sum_m2, bernoulli_from_cubic) = bernoulli_from_cubic(m, p)?;
    Ok(GlaisherPair {
        p,
        m,
        sum_m1,
        sum_m2,
        bernoulli_residue,
        bernoulli_from_cubic,
    })
}

/// Computes `B_{p-m} mod p` along both routes and fails if they differ.
pub fn glaisher_cross_check(m: u64, p: u64) -> Result<GlaisherPair> {
    let pair = glaisher_pair(m, p)?;
    if pair.bernoulli_residue != pair.bernoulli_from_cubic {
        return Err(Error::CongruenceFailure(format!(
            "Glaisher routes disagree at m = {m}, p = {p}: {} (mod p^2 route) vs {} (mod p^3 route)",
            pair.bernoulli_residue.value(),
            pair.bernoulli_from_cubic.value()
        )));
    }
    Ok(pair)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GlaisherRecord {
    pub p: u64,
    pub m: u64,
    #[serde(serialize_with = "serialize_or_inf")]
    pub route_p2: Option<Residue>,
    #[serde(serialize_with = "serialize_or_inf")]
    pub route_p3: Option<Residue>,
    pub status: Status,
}

impl Record for GlaisherRecord {
    fn prime(&self) -> u64 {
        self.p
    }
    fn status(&self) -> &Status {
        &self.status
    }
}

/// Dual-route table over a window; primes `p <= m` are skipped.
pub fn glaisher_report(
    m: u64,
    window: PrimeWindow,
    jobs: usize,
) -> Result<CongruenceReport<GlaisherRecord>> {
    check_m(m)?;
    let records = map_primes(window, jobs, |p| {
        if p <= m {
            return GlaisherRecord {
                p,
                m,
                route_p2: None,
                route_p3: None,
                status: Status::skipped("p<=m"),
            };
        }
        match glaisher_pair(m, p) {
            Ok(pair) => GlaisherRecord {
                p,
                m,
                route_p2: Some(pair.bernoulli_residue),
                route_p3: Some(pair.bernoulli_from_cubic),
                status: Status::from_agreement(pair.bernoulli_residue == pair.bernoulli_from_cubic),
            },
            Err(_) => GlaisherRecord {
                p,
                m,
                route_p2: None,
                route_p3: None,
                status: Status::Mismatch,
            },
        }
    });
    Ok(CongruenceReport::new("bernoulli", records)
        .with_param("m", m)
        .with_param("min_p", window.min_p())
        .with_param("max_p", window.max_p()))
}

type Exact = Ratio<i128>;

// Exact B_0..=B_n by the recurrence sum_{j<=n} C(n+1, j) B_j = 0.
fn exact_bernoulli(n: usize) -> Vec<Exact> {
    let mut b = vec![Exact::from_integer(1)];
    for k in 1..=n {
        let mut binom = 1i128;
        let mut acc = Exact::from_integer(0);
        for (j, bj) in b.iter().enumerate() {
            acc += *bj * binom;
            binom = binom * (k as i128 + 1 - j as i128) / (j as i128 + 1);
        }
        b.push(-acc / (k as i128 + 1));
    }
    b
}

fn exact_divisible(x: Exact, modulus: i128) -> bool {
    x.numer() % modulus == 0 && x.denom() % modulus != 0
}

/// Sign `s` in `H_{p-1} = s (1/3) p^2 B_{p-3} (mod p^3)`, measured once
/// with exact rationals at `p = 5` and `p = 7`.
pub fn wolstenholme_sign() -> Result<i8> {
    static SIGN: OnceLock<Result<i8>> = OnceLock::new();
    SIGN.get_or_init(|| {
        let bern = exact_bernoulli(4);
        let holds = |sign: i8| {
            [5i128, 7].iter().all(|&p| {
                let h: Exact = (1..p).map(|k| Exact::new(1, k)).sum();
                let rhs = Exact::new(sign as i128 * p * p, 3) * bern[(p - 3) as usize];
                exact_divisible(h - rhs, p * p * p)
            })
        };
        match (holds(1), holds(-1)) {
            (true, false) => Ok(1),
            (false, true) => Ok(-1),
            _ => Err(Error::CongruenceFailure(
                "Wolstenholme sign calibration at p = 5, 7 is inconclusive".into(),
            )),
        }
    })
    .clone()
}

/// `H_{p-1} mod p^2` and the `p^3`-level consistency check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WolstenholmeRecord {
    pub p: u64,
    #[serde(serialize_with = "serialize_or_inf")]
    pub h1_mod_p2: Option<Residue>,
    /// `H_{p-1} / p^2 mod p`.
    #[serde(serialize_with = "serialize_or_inf")]
    pub h1_over_p2: Option<Residue>,
    /// `sign * B_{p-3} / 3 mod p`.
    #[serde(serialize_with = "serialize_or_inf")]
    pub predicted: Option<Residue>,
    pub sign: i8,
    pub consistent_mod_p3: bool,
    pub status: Status,
}

impl Record for WolstenholmeRecord {
    fn prime(&self) -> u64 {
        self.p
    }
    fn status(&self) -> &Status {
        &self.status
    }
}

pub fn wolstenholme_check(p: u64) -> Result<WolstenholmeRecord> {
    if p <= 3 || !is_prime(p) {
        return Err(Error::precondition(format!("Wolstenholme check needs a prime p > 3, got {p}")));
    }
    let sign = wolstenholme_sign()?;
    let h = inverse_power_sum(1, p, 3)?;
    let h1_mod_p2 = h.reduce_to(2);
    let h1_over_p2 = h.divide_by_prime_power(2);
    let predicted = bernoulli_residue(3, p)? * ratio_mod(sign as i128, 3, p);
    let consistent_mod_p3 = h1_over_p2 == Some(predicted);
    Ok(WolstenholmeRecord {
        p,
        h1_mod_p2: Some(h1_mod_p2),
        h1_over_p2,
        predicted: Some(predicted),
        sign,
        consistent_mod_p3,
        status: Status::from_agreement(h1_mod_p2.is_zero() && consistent_mod_p3),
    })
}

pub fn wolstenholme_report(
    window: PrimeWindow,
    jobs: usize,
) -> Result<CongruenceReport<WolstenholmeRecord>> {
    let sign = wolstenholme_sign()?;
    let records = map_primes(window, jobs, |p| {
        if p <= 3 {
            let h1_mod_p2 = (p == 3).then(|| inverse_power_sum(1, 3, 2).expect("p = 3"));
            return WolstenholmeRecord {
                p,
                h1_mod_p2,
                h1_over_p2: None,
                predicted: None,
                sign,
                consistent_mod_p3: false,
                status: Status::skipped("p<=3"),
            };
        }
        wolstenholme_check(p).expect("p > 3 is prime")
    });
    Ok(CongruenceReport::new("wolstenholme", records)
        .with_param("min_p", window.min_p())
        .with_param("max_p", window.max_p())
        .with_meta("sign", sign)
        .with_meta("sign_source", "exact rationals at p = 5, 7"))
}

/// Primes `3 < p <= limit` with `B_{p-3} = 0 (mod p)`.
pub fn wolstenholme_prime_scan(limit: u64, jobs: usize) -> Result<Vec<u64>> {
    if limit < 5 {
        return Err(Error::precondition(format!("scan limit must be >= 5, got {limit}")));
    }
    let window = PrimeWindow::new(5, limit)?;
    Ok(filter_primes(window, jobs, |p| {
        bernoulli_residue(3, p).expect("p > 3").is_zero()
    }))
}

/// `p -> B_{p-k} / k mod p`, undefined for `p <= k`.
pub fn fmzv_element(k: u64) -> Result<AdeleElement> {
    if k < 3 || k % 2 == 0 {
        return Err(Error::precondition(format!("k must be odd and > 1, got {k}")));
    }
    Ok(AdeleElement::new(format!("fmzv({k})"), move |p| {
        if p <= k {
            return None;
        }
        let b = bernoulli_residue(k, p).expect("Glaisher sum divisible by p");
        Some(b * ratio_mod(1, k as i128, p))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_power_sum_examples() {
        assert_eq!(inverse_power_sum(1, 5, 2).unwrap().value(), 0);
        assert_eq!(inverse_power_sum(2, 7, 2).unwrap().value(), 14);
        assert_eq!(inverse_power_sum(1, 3, 2).unwrap().value(), 6);
        assert_eq!(inverse_power_sum(0, 11, 3).unwrap().value(), 10);
        assert!(inverse_power_sum(1, 2, 1).is_err());
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(bernoulli_residue(3, 7).unwrap().value(), 3);
        assert_eq!(bernoulli_residue(3, 5).unwrap().value(), 1);
        assert_eq!(bernoulli_residue(5, 7).unwrap().value(), 6);
        assert!(bernoulli_residue(3, 3).is_err());
        assert!(bernoulli_residue(4, 7).is_err());
    }

    #[test]
    fn cross_check_examples() {
        let pair = glaisher_cross_check(3, 7).unwrap();
        assert_eq!(pair.bernoulli_from_cubic.value(), 3);
        let pair = glaisher_cross_check(3, 5).unwrap();
        assert_eq!(pair.bernoulli_residue.value(), 1);
        // H_4 = 25/12 = 75 mod 125.
        assert_eq!(pair.sum_m2.value(), 75);
        assert!(glaisher_cross_check(2, 7).is_err());
    }

    #[test]
    fn exact_bernoulli_table() {
        let b = exact_bernoulli(8);
        assert_eq!(b[1], Exact::new(-1, 2));
        assert_eq!(b[2], Exact::new(1, 6));
        assert_eq!(b[4], Exact::new(-1, 30));
        assert_eq!(b[6], Exact::new(1, 42));
        assert_eq!(b[8], Exact::new(-1, 30));
        assert_eq!(b[7], Exact::from_integer(0));
    }

    #[test]
    fn measured_sign_is_negative() {
        assert_eq!(wolstenholme_sign().unwrap(), -1);
    }

    #[test]
    fn wolstenholme_examples() {
        let r = wolstenholme_check(5).unwrap();
        assert!(r.h1_mod_p2.unwrap().is_zero() && r.consistent_mod_p3);
        assert!(wolstenholme_check(13).unwrap().h1_mod_p2.unwrap().is_zero());
        assert!(wolstenholme_check(3).is_err());
    }

    #[test]
    fn small_scans() {
        assert!(wolstenholme_prime_scan(10, 1).unwrap().is_empty());
        assert!(wolstenholme_prime_scan(4, 1).is_err());
    }

    #[test]
    fn fmzv_examples() {
        let z3 = fmzv_element(3).unwrap();
        assert_eq!(z3.eval(7).unwrap().value(), 1);
        assert_eq!(z3.eval(3), None);
        assert!(fmzv_element(4).is_err());
    }
}
