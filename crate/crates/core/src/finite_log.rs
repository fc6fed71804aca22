//! The finite analogue of `log 2` and its neighbours.
//!
//! `t_n = (-1)^(n-1) sum_{k=1}^{n-1} (-1)^k / k` obeys `t_{n+1} + t_n = 1/n`.
//! Modulo an odd prime, `t_p` is a fixed multiple of the Fermat quotient
//! `q_p(2) = (2^(p-1) - 1) / p`, so `t_p = 0 (mod p)` exactly at the
//! Wieferich primes. The sign of that multiple is measured with exact
//! arithmetic rather than assumed.
//!
//! Also here: the truncated `sqrt(1 + x)` series at `x = 1`, whose
//! residues reproduce `2 (2/p)`.

use std::sync::OnceLock;

use num_rational::Ratio;
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::prime_engine::{is_prime, PrimeWindow};
use crate::report::{serialize_or_inf, CongruenceReport, Record, Status};
use crate::residue::{
    jacobi_odd, serialize_maybe_centered, MaybeResidue, Modulus, Residue,
};
use crate::shard::{filter_primes, map_primes};

fn odd_prime(p: u64, what: &str) -> Result<Modulus> {
    if p == 2 || !is_prime(p) {
        return Err(Error::precondition(format!("{what} needs an odd prime, got {p}")));
    }
    Modulus::new(p, 1)
}

// Inverses of 1..p-1 modulo p, index k-1 holding 1/k.
fn inverses_mod_p(p: u64) -> Vec<u64> {
    let ks: Vec<u64> = (1..p).collect();
    arith::batch_inverse(&ks, p).expect("1..p are units mod p")
}

/// `t_p mod p` straight from the defining alternating sum.
pub fn finite_log2(p: u64) -> Result<Residue> {
    let m = odd_prime(p, "finite_log2")?;
    let sum = inverses_mod_p(p)
        .into_iter()
        .enumerate()
        .fold(0u64, |acc, (i, inv)| {
            // k = i + 1, so (-1)^k is negative for even i.
            if i % 2 == 0 {
                arith::sub_mod(acc, inv, p)
            } else {
                arith::add_mod(acc, inv, p)
            }
        });
    // (-1)^(p-1) = 1 for odd p.
    Ok(m.residue(sum as i128))
}

/// `(a^(p-1) - 1) / p mod p`, via a power modulo `p^2`.
pub fn fermat_quotient(a: i64, p: u64) -> Result<Residue> {
    let square = Modulus::new(p, 2)?;
    let base = square.residue(a as i128);
    if base.value() % p == 0 {
        return Err(Error::NotCoprime { a, p });
    }
    let shifted = base.pow(p - 1) - square.one();
    Ok(shifted
        .divide_by_prime_power(1)
        .expect("Fermat's little theorem"))
}

/// Odd primes `p <= limit` with `2^(p-1) = 1 (mod p^2)`.
pub fn wieferich_scan(limit: u64, jobs: usize) -> Result<Vec<u64>> {
    if limit < 3 {
        return Err(Error::precondition(format!("scan limit must be >= 3, got {limit}")));
    }
    let window = PrimeWindow::new(3, limit)?;
    Ok(filter_primes(window, jobs, |p| {
        fermat_quotient(2, p).expect("odd prime").is_zero()
    }))
}

/// Odd primes `p <= limit` with `t_p = 0 (mod p)`.
pub fn finite_log_zero_scan(limit: u64, jobs: usize) -> Result<Vec<u64>> {
    if limit < 3 {
        return Err(Error::precondition(format!("scan limit must be >= 3, got {limit}")));
    }
    let window = PrimeWindow::new(3, limit)?;
    Ok(filter_primes(window, jobs, |p| {
        finite_log2(p).expect("odd prime").is_zero()
    }))
}

type Exact = Ratio<i64>;

/// Exact `t_n` for small `n`.
fn exact_t(n: i64) -> Exact {
    let sum: Exact = (1..n)
        .map(|k| Exact::new(if k % 2 == 0 { 1 } else { -1 }, k))
        .sum();
    if n % 2 == 1 {
        sum
    } else {
        -sum
    }
}

/// Global sign `s` in `t_p = s * 2 * q_p(2) (mod p)`, fixed by exact
/// arithmetic at `p = 3, 5, 7`.
pub fn finite_log_sign() -> Result<i8> {
    static SIGN: OnceLock<Result<i8>> = OnceLock::new();
    SIGN.get_or_init(|| {
        let holds = |sign: i64| {
            [3i64, 5, 7].iter().all(|&p| {
                let quotient = ((1i64 << (p - 1)) - 1) / p;
                let diff = exact_t(p) - Exact::from_integer(sign * 2 * quotient);
                diff.numer() % p == 0 && diff.denom() % p != 0
            })
        };
        match (holds(1), holds(-1)) {
            (true, false) => Ok(1),
            (false, true) => Ok(-1),
            _ => Err(Error::CongruenceFailure(
                "finite log sign calibration at p = 3, 5, 7 is inconclusive".into(),
            )),
        }
    })
    .clone()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteLogRecord {
    pub p: u64,
    pub t_p: Residue,
    pub fermat_q2: Residue,
    pub sigma: i8,
    pub identity_holds: bool,
    pub status: Status,
}

impl Record for FiniteLogRecord {
    fn prime(&self) -> u64 {
        self.p
    }
    fn status(&self) -> &Status {
        &self.status
    }
}

pub fn finite_log_record(p: u64) -> Result<FiniteLogRecord> {
    let sigma = finite_log_sign()?;
    let t_p = finite_log2(p)?;
    let fermat_q2 = fermat_quotient(2, p)?;
    let m = t_p.modulus();
    let identity_holds = t_p == m.residue(2 * sigma as i128) * fermat_q2;
    Ok(FiniteLogRecord {
        p,
        t_p,
        fermat_q2,
        sigma,
        identity_holds,
        status: Status::from_agreement(identity_holds),
    })
}

/// Identity check over the odd primes of a window.
pub fn finite_log_report(
    window: PrimeWindow,
    jobs: usize,
) -> Result<CongruenceReport<FiniteLogRecord>> {
    let sigma = finite_log_sign()?;
    let lo = window.min_p().max(3);
    if lo > window.max_p() {
        return Err(Error::precondition("window contains no odd primes"));
    }
    let odd = PrimeWindow::new(lo, window.max_p())?;
    let records = map_primes(odd, jobs, |p| finite_log_record(p).expect("odd prime"));
    Ok(CongruenceReport::new("finite-log", records)
        .with_param("min_p", odd.min_p())
        .with_param("max_p", odd.max_p())
        .with_meta("sigma", sigma)
        .with_meta("sigma_source", "exact rationals at p = 3, 5, 7"))
}

/// `s_p(1) mod p` where `s_p` truncates the `sqrt(1 + x)` series after
/// `x^(p-1)`:
/// `1 + sum_{k=1}^{p-1} (-1)^(k-1) C_{k-1} / 2^(2k-1)`.
pub fn sqrt_series_residue(p: u64) -> Result<Residue> {
    let m = odd_prime(p, "sqrt_series_residue")?;
    let inv2 = m.residue(2).inverse().expect("p odd");
    let inv4 = inv2 * inv2;
    let mut catalan = m.one(); // C_{k-1}
    let mut weight = inv2; // 2^-(2k-1)
    let mut total = m.one();
    for k in 1..p {
        let term = catalan * weight;
        total = if k % 2 == 1 { total + term } else { total - term };
        if k + 1 < p {
            // C_k = C_{k-1} * 2(2k-1) / (k+1)
            let num = m.residue(2 * (2 * k as i128 - 1));
            let den = m.residue(k as i128 + 1).inverse().expect("k + 1 < p");
            catalan = catalan * num * den;
        }
        weight = weight * inv4;
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SqrtSeriesRecord {
    pub p: u64,
    /// Centered representative of `s_p(1) mod p`; `inf` at `p = 2`.
    #[serde(serialize_with = "serialize_maybe_centered")]
    pub s_p: MaybeResidue,
    /// `2 (2/p)` as an integer.
    #[serde(serialize_with = "serialize_or_inf")]
    pub two_legendre: Option<i8>,
    pub status: Status,
}

impl Record for SqrtSeriesRecord {
    fn prime(&self) -> u64 {
        self.p
    }
    fn status(&self) -> &Status {
        &self.status
    }
}

/// `s_p(1)` next to `2 (2/p)` for each prime of the window.
pub fn sqrt2_report(window: PrimeWindow, jobs: usize) -> CongruenceReport<SqrtSeriesRecord> {
    let records = map_primes(window, jobs, |p| {
        if p == 2 {
            return SqrtSeriesRecord {
                p,
                s_p: None,
                two_legendre: None,
                status: Status::Undefined,
            };
        }
        let s = sqrt_series_residue(p).expect("odd prime");
        let expected = 2 * jacobi_odd(2, p);
        SqrtSeriesRecord {
            p,
            s_p: Some(s),
            two_legendre: Some(expected),
            status: Status::from_agreement(s.is_congruent_to(expected as i128)),
        }
    });
    CongruenceReport::new("sqrt2-demo", records)
        .with_param("min_p", window.min_p())
        .with_param("max_p", window.max_p())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_log_examples() {
        assert_eq!(finite_log2(3).unwrap().value(), 1);
        assert_eq!(finite_log2(5).unwrap().value(), 4);
        assert!(finite_log2(2).is_err());
        assert!(finite_log2(9).is_err());
    }

    #[test]
    fn exact_t_matches_hand_values() {
        assert_eq!(exact_t(3), Exact::new(-1, 2));
        assert_eq!(exact_t(5), Exact::new(-7, 12));
        for n in 1..30 {
            assert_eq!(exact_t(n + 1) + exact_t(n), Exact::new(1, n));
        }
    }

    #[test]
    fn fermat_quotient_examples() {
        assert_eq!(fermat_quotient(2, 5).unwrap().value(), 3);
        assert_eq!(fermat_quotient(2, 3).unwrap().value(), 1);
        for p in [3, 5, 7, 1093] {
            assert_eq!(fermat_quotient(1, p).unwrap().value(), 0);
        }
        assert!(fermat_quotient(10, 5).is_err());
        assert_eq!(fermat_quotient(2, 1093).unwrap().value(), 0);
        assert_eq!(fermat_quotient(-1, 7).unwrap().value(), 0);
    }

    #[test]
    fn measured_sign_is_negative() {
        assert_eq!(finite_log_sign().unwrap(), -1);
    }

    #[test]
    fn wieferich_small_limits() {
        assert!(wieferich_scan(1000, 1).unwrap().is_empty());
        assert!(wieferich_scan(2, 1).is_err());
    }

    #[test]
    fn sqrt_series_examples() {
        let centered = |p| sqrt_series_residue(p).unwrap().centered();
        // s_3(1) = 11/8 = 1 = -2 (mod 3).
        assert_eq!(centered(3), 1);
        assert!(sqrt_series_residue(3).unwrap().is_congruent_to(-2));
        assert_eq!(centered(5), -2);
        assert_eq!(centered(7), 2);
        assert_eq!(centered(11), -2);
        assert!(sqrt_series_residue(2).is_err());
    }

    #[test]
    fn sqrt2_report_marks_two_undefined() {
        let report = sqrt2_report(PrimeWindow::new(2, 11).unwrap(), 1);
        assert_eq!(report.records[0].status, Status::Undefined);
        assert_eq!(report.summary.matched, 4);
    }
}
