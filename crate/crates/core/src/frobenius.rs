//! Frobenius traces of `y^2 = x^3 + a x + b` over prime fields.
//!
//! `a_p = -sum_x ((x^3 + a x + b) / p)`, so `#E(F_p) = p + 1 - a_p`. One
//! quadratic-residue table per prime makes each trace `O(p)`; there is no
//! Schoof-style counting, so censuses are meant for limits up to about
//! `10^5`.

use serde::Serialize;

use crate::adele::AdeleElement;
use crate::arith::{add_mod, mul_mod, reduce_signed};
use crate::error::{Error, Result};
use crate::prime_engine::{is_prime, PrimeWindow};
use crate::report::{serialize_or_inf, CongruenceReport, Record, Status};
use crate::residue::Modulus;
use crate::shard::{filter_primes, map_primes};

/// Census limits above this are slow enough to warrant a warning.
pub const CENSUS_SOFT_LIMIT: u64 = 100_000;
pub const CENSUS_DEFAULT_LIMIT: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CurveParams {
    pub a: i64,
    pub b: i64,
}

impl CurveParams {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        let curve = CurveParams { a, b };
        if curve.discriminant() == 0 {
            return Err(Error::precondition(format!(
                "y^2 = x^3 + {a}x + {b} is singular (4a^3 + 27b^2 = 0)"
            )));
        }
        Ok(curve)
    }

    /// `4 a^3 + 27 b^2`.
    pub fn discriminant(&self) -> i128 {
        let (a, b) = (self.a as i128, self.b as i128);
        4 * a * a * a + 27 * b * b
    }

    pub fn has_good_reduction(&self, p: u64) -> bool {
        p != 2 && self.discriminant() % p as i128 != 0
    }
}

/// The Hasse bound `a_p^2 <= 4p`.
pub fn within_hasse(ap: i64, p: u64) -> bool {
    (ap as i128) * (ap as i128) <= 4 * p as i128
}

/// Trace of Frobenius at `p`; `None` at primes of bad reduction.
pub fn ap_trace(curve: CurveParams, p: u64) -> Result<Option<i64>> {
    if p < 3 || !is_prime(p) {
        return Err(Error::precondition(format!("ap_trace needs an odd prime, got {p}")));
    }
    if !curve.has_good_reduction(p) {
        return Ok(None);
    }
    let mut is_square = vec![false; p as usize];
    for y in 1..p {
        is_square[mul_mod(y, y, p) as usize] = true;
    }
    let (a, b) = (reduce_signed(curve.a as i128, p), reduce_signed(curve.b as i128, p));
    let mut sum = 0i64;
    for x in 0..p {
        let rhs = add_mod(mul_mod(add_mod(mul_mod(x, x, p), a, p), x, p), b, p);
        if rhs != 0 {
            sum += if is_square[rhs as usize] { 1 } else { -1 };
        }
    }
    let ap = -sum;
    if !within_hasse(ap, p) {
        return Err(Error::CongruenceFailure(format!(
            "Hasse bound violated: a_{p} = {ap}"
        )));
    }
    Ok(Some(ap))
}

/// `p -> a_p mod p`; undefined at `p = 2` and at bad primes.
pub fn ap_element(curve: CurveParams) -> AdeleElement {
    AdeleElement::new(format!("ap({},{})", curve.a, curve.b), move |p| {
        if p == 2 {
            return None;
        }
        let ap = ap_trace(curve, p).expect("odd prime")?;
        Some(Modulus::prime_unchecked(p).residue(ap as i128))
    })
}

/// Good odd primes `p <= limit` with `a_p = 0`.
pub fn ap_zero_census(curve: CurveParams, limit: u64, jobs: usize) -> Result<Vec<u64>> {
    if limit < 3 {
        return Err(Error::precondition(format!("census limit must be >= 3, got {limit}")));
    }
    let window = PrimeWindow::new(3, limit)?;
    Ok(filter_primes(window, jobs, |p| {
        ap_trace(curve, p).expect("odd prime") == Some(0)
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceRecord {
    pub p: u64,
    /// `None` at bad primes and `p = 2`.
    #[serde(serialize_with = "serialize_or_inf")]
    pub ap: Option<i64>,
    #[serde(serialize_with = "serialize_or_inf")]
    pub points: Option<u64>,
    #[serde(serialize_with = "serialize_or_inf")]
    pub hasse_ok: Option<bool>,
    pub status: Status,
}

impl Record for TraceRecord {
    fn prime(&self) -> u64 {
        self.p
    }
    fn status(&self) -> &Status {
        &self.status
    }
}

/// Traces over a window. Status is `match` when the Hasse bound holds,
/// `undefined` at bad primes and `p = 2`.
pub fn trace_report(
    curve: CurveParams,
    window: PrimeWindow,
    jobs: usize,
) -> CongruenceReport<TraceRecord> {
    let records = map_primes(window, jobs, |p| {
        let ap = if p == 2 { Ok(None) } else { ap_trace(curve, p) };
        match ap {
            Ok(Some(ap)) => TraceRecord {
                p,
                ap: Some(ap),
                points: Some((p as i64 + 1 - ap) as u64),
                hasse_ok: Some(true),
                status: Status::Match,
            },
            Ok(None) => TraceRecord {
                p,
                ap: None,
                points: None,
                hasse_ok: None,
                status: Status::Undefined,
            },
            Err(_) => TraceRecord {
                p,
                ap: None,
                points: None,
                hasse_ok: Some(false),
                status: Status::Mismatch,
            },
        }
    });
    CongruenceReport::new("ap", records)
        .with_param("a", curve.a)
        .with_param("b", curve.b)
        .with_param("min_p", window.min_p())
        .with_param("max_p", window.max_p())
        .with_meta("check", "Hasse bound |a_p| <= 2 sqrt(p)")
}
