//! Schur q-Fibonacci numbers modulo primes and the residual-index congruence
//!
//! ```text
//! F_p(q) = F_{I_p(q) + (ord_p(q) / 5)}  (mod p)
//! ```
//!
//! valid when `p` divides neither `q` nor `q - 1` and `5` does not divide
//! `ord_p(q)`; here `I_p(q) = (p - 1) / ord_p(q)` and `(. / 5)` is the
//! Legendre symbol. The congruence is stated for rational `q` other than
//! 0 and 1; the verifier accepts any integer `q` outside `{0, 1}`.
//! Transcendence of `(F_p(q) mod p)` is only established for integers
//! `q > 1`, and nothing here claims more.

use std::f64::consts::LN_2;

use serde::Serialize;

use crate::adele::AdeleElement;
use crate::arith::{add_mod, mul_mod, reduce_signed, sub_mod};
use crate::error::{Error, Result};
use crate::prime_engine::{multiplicative_order, perfect_power_decompose, PrimeWindow};
use crate::report::{serialize_or_inf, CongruenceReport, Record, Status};
use crate::residue::{jacobi_odd, Modulus, Residue};
use crate::shard::map_primes;

/// Reference value of the Erdos-Ford-Tenenbaum constant, to six digits.
pub const EFT_DELTA_REFERENCE: f64 = 0.086071;

/// `1 - (1 + log log 2) / log 2`.
pub fn eft_delta() -> f64 {
    1.0 - (1.0 + LN_2.ln()) / LN_2
}

fn prime_modulus(p: u64) -> Result<Modulus> {
    Modulus::new(p, 1)
}

// F_n(q) mod p by the three-term recurrence; q already reduced mod p.
fn qfib_raw(n: u64, q: u64, p: u64) -> u64 {
    let (mut a, mut b, mut qk) = (0u64, 1 % p, 1 % p);
    for _ in 0..n {
        let next = add_mod(b, mul_mod(qk, a, p), p);
        a = b;
        b = next;
        qk = mul_mod(qk, q, p);
    }
    a
}

/// `F_n(q) mod p` from `F_0 = 0`, `F_1 = 1`, `F_{k+2} = F_{k+1} + q^k F_k`.
pub fn qfib_mod(n: u64, q: i64, p: u64) -> Result<Residue> {
    let m = prime_modulus(p)?;
    let q = reduce_signed(q as i128, p);
    Ok(m.residue(qfib_raw(n, q, p) as i128))
}

/// `F_n(q) mod p` as the (1,1) entry of `M_0 M_1 ... M_{n-2}` with
/// `M_j = [[1, 1], [q^j, 0]]`.
pub fn qfib_matrix(n: u64, q: i64, p: u64) -> Result<Residue> {
    if n == 0 {
        return Err(Error::precondition("qfib_matrix needs n >= 1"));
    }
    let m = prime_modulus(p)?;
    let q = reduce_signed(q as i128, p);
    // Running product [[a, b], [c, d]], starting from the identity.
    let (mut a, mut b, mut c, mut d) = (1 % p, 0, 0, 1 % p);
    let mut qj = 1 % p;
    for _ in 0..n - 1 {
        (a, b) = (add_mod(a, mul_mod(b, qj, p), p), a);
        (c, d) = (add_mod(c, mul_mod(d, qj, p), p), c);
        qj = mul_mod(qj, q, p);
    }
    Ok(m.residue(a as i128))
}

// (F_k, F_{k+1}) mod p by fast doubling.
fn fib_pair(k: u64, p: u64) -> (u64, u64) {
    let (mut f, mut g) = (0u64, 1 % p);
    for bit in (0..64 - k.leading_zeros()).rev() {
        // F_2j = F_j (2 F_{j+1} - F_j), F_2j+1 = F_j^2 + F_{j+1}^2
        let two_g = add_mod(g, g, p);
        let even = mul_mod(f, sub_mod(two_g, f, p), p);
        let odd = add_mod(mul_mod(f, f, p), mul_mod(g, g, p), p);
        if (k >> bit) & 1 == 1 {
            (f, g) = (odd, add_mod(even, odd, p));
        } else {
            (f, g) = (even, odd);
        }
    }
    (f, g)
}

/// Classical `F_m mod p` in `O(log m)` steps.
pub fn fibonacci_mod(m: u64, p: u64) -> Result<Residue> {
    let modulus = prime_modulus(p)?;
    Ok(modulus.residue(fib_pair(m, p).0 as i128))
}

/// Why a prime falls outside the hypotheses of the congruence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Applicability {
    Applicable,
    PDividesQ,
    PDividesQMinusOne,
    FiveDividesOrder,
}

impl Applicability {
    pub fn skip_reason(self) -> Option<&'static str> {
        match self {
            Applicability::Applicable => None,
            Applicability::PDividesQ => Some("p|q"),
            Applicability::PDividesQMinusOne => Some("p|q-1"),
            Applicability::FiveDividesOrder => Some("5|ord"),
        }
    }
}

/// Right-hand side of the congruence at one prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AfPrediction {
    pub p: u64,
    /// `None` when `p | q`.
    pub ord: Option<u64>,
    pub index: Option<u64>,
    pub eta: Option<i8>,
    /// `F_{index + eta} mod p`, present only when applicable.
    pub predicted: Option<Residue>,
    pub applicability: Applicability,
}

impl AfPrediction {
    pub fn is_applicable(&self) -> bool {
        self.applicability == Applicability::Applicable
    }
}

fn check_q(q: i64) -> Result<()> {
    if q == 0 || q == 1 {
        return Err(Error::precondition(format!(
            "q must not be 0 or 1 (got {q}); the recurrence degenerates"
        )));
    }
    Ok(())
}

pub fn af_prediction(q: i64, p: u64) -> Result<AfPrediction> {
    check_q(q)?;
    prime_modulus(p)?;
    Ok(af_prediction_unchecked(q, p))
}

fn af_prediction_unchecked(q: i64, p: u64) -> AfPrediction {
    let m = Modulus::prime_unchecked(p);
    let q_res = m.residue(q as i128);
    if q_res.is_zero() {
        return AfPrediction {
            p,
            ord: None,
            index: None,
            eta: None,
            predicted: None,
            applicability: Applicability::PDividesQ,
        };
    }
    let ord = multiplicative_order(q, p).expect("q is a unit mod p");
    let index = (p - 1) / ord;
    let eta = jacobi_odd(ord % 5, 5);
    let applicability = if q_res.value() == 1 {
        Applicability::PDividesQMinusOne
    } else if ord % 5 == 0 {
        Applicability::FiveDividesOrder
    } else {
        Applicability::Applicable
    };
    let predicted = (applicability == Applicability::Applicable).then(|| {
        let subscript = index as i64 + eta as i64;
        assert!(
            subscript >= 0,
            "negative Fibonacci subscript {subscript} at p = {p}, q = {q}"
        );
        m.residue(fib_pair(subscript as u64, p).0 as i128)
    });
    AfPrediction {
        p,
        ord: Some(ord),
        index: Some(index),
        eta: Some(eta),
        predicted,
        applicability,
    }
}

/// One row of the verifier output; columns `p,ord,index,eta,predicted,actual,status`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AfRecord {
    pub p: u64,
    #[serde(serialize_with = "serialize_or_inf")]
    pub ord: Option<u64>,
    #[serde(serialize_with = "serialize_or_inf")]
    pub index: Option<u64>,
    #[serde(serialize_with = "serialize_or_inf")]
    pub eta: Option<i8>,
    #[serde(serialize_with = "serialize_or_inf")]
    pub predicted: Option<Residue>,
    #[serde(serialize_with = "serialize_or_inf")]
    pub actual: Option<Residue>,
    pub status: Status,
}

impl Record for AfRecord {
    fn prime(&self) -> u64 {
        self.p
    }
    fn status(&self) -> &Status {
        &self.status
    }
}

fn af_record(q: i64, p: u64) -> AfRecord {
    let pred = af_prediction_unchecked(q, p);
    let (actual, status) = match (pred.applicability.skip_reason(), pred.predicted) {
        (None, Some(predicted)) => {
            let q_mod = reduce_signed(q as i128, p);
            let actual = Modulus::prime_unchecked(p).residue(qfib_raw(p, q_mod, p) as i128);
            (Some(actual), Status::from_agreement(actual == predicted))
        }
        (reason, _) => (None, Status::skipped(reason.unwrap_or("not applicable"))),
    };
    AfRecord {
        p,
        ord: pred.ord,
        index: pred.index,
        eta: pred.eta,
        predicted: pred.predicted,
        actual,
        status,
    }
}

/// Checks `F_p(q) mod p` against the predicted Fibonacci residue at every
/// prime of the window.
pub fn verify_af(q: i64, window: PrimeWindow, jobs: usize) -> Result<CongruenceReport<AfRecord>> {
    check_q(q)?;
    let records = map_primes(window, jobs, |p| af_record(q, p));
    Ok(CongruenceReport::new("verify-af", records)
        .with_param("q", q)
        .with_param("min_p", window.min_p())
        .with_param("max_p", window.max_p())
        .with_meta("hypotheses", "p does not divide q or q-1; 5 does not divide ord_p(q)")
        .with_meta(
            "scope",
            "congruence proved for rational q not in {0,1}; transcendence only for integers q > 1",
        ))
}

/// `p -> F_p(q) mod p`.
pub fn qfib_element(q: i64) -> AdeleElement {
    AdeleElement::new(format!("qfib({q})"), move |p| {
        let q_mod = reduce_signed(q as i128, p);
        Some(Modulus::prime_unchecked(p).residue(qfib_raw(p, q_mod, p) as i128))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ProofCase {
    #[serde(rename = "1")]
    SmallOrder,
    #[serde(rename = "2")]
    SmallIndex,
    #[serde(rename = "3")]
    Balanced,
}

/// A selected prime with `n = ord_p(q)` and `m = (p - 1) / n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseTriple {
    pub p: u64,
    pub m: u64,
    pub n: u64,
    pub case: ProofCase,
}

/// Classification of the primes in `[X, 2X]` selected by
/// `p = 1 mod r`, `p = -1 mod 5*lambda`, `ord_p(q) | (p - 1)/r`.
#[derive(Debug, Clone, Serialize)]
pub struct CaseStats {
    pub q: u64,
    pub q0: u64,
    pub lambda: u32,
    pub x: f64,
    pub r: u64,
    pub window: PrimeWindow,
    /// `sqrt(X) / ln X`.
    pub threshold: f64,
    pub selected: usize,
    pub case1: usize,
    pub case2: usize,
    pub case3: usize,
    pub delta: f64,
    pub delta_reference: f64,
    pub tie_rule: &'static str,
    pub triples: Vec<CaseTriple>,
}

pub const CASE_TIE_RULE: &str =
    "a prime with both n and m at or below the threshold is counted in case 1 only";

pub fn case_statistics(q: u64, x: f64, r: u64, jobs: usize) -> Result<CaseStats> {
    let (q0, lambda) = perfect_power_decompose(q)?;
    if !x.is_finite() || x < 100.0 {
        return Err(Error::precondition(format!("X must be a finite number >= 100, got {x}")));
    }
    let five_lambda = 5 * lambda as u64;
    if r == 0 || num_integer::gcd(r, five_lambda) != 1 {
        return Err(Error::precondition(format!(
            "r = {r} must be positive and coprime to 5*lambda = {five_lambda}"
        )));
    }
    let window = PrimeWindow::new(x.ceil() as u64, (2.0 * x).floor() as u64)?;
    let threshold = x.sqrt() / x.ln();
    let q_signed = i64::try_from(q).map_err(|_| Error::precondition("q too large"))?;

    let triples: Vec<CaseTriple> = map_primes(window, jobs, |p| {
        if (p - 1) % r != 0 || (p + 1) % five_lambda != 0 || q % p == 0 {
            return None;
        }
        let n = multiplicative_order(q_signed, p).expect("p does not divide q");
        if ((p - 1) / r) % n != 0 {
            return None;
        }
        let m = (p - 1) / n;
        let case = if n as f64 <= threshold {
            ProofCase::SmallOrder
        } else if m as f64 <= threshold {
            ProofCase::SmallIndex
        } else {
            ProofCase::Balanced
        };
        Some(CaseTriple { p, m, n, case })
    })
    .into_iter()
    .flatten()
    .collect();

    let count = |c: ProofCase| triples.iter().filter(|t| t.case == c).count();
    Ok(CaseStats {
        q,
        q0,
        lambda,
        x,
        r,
        window,
        threshold,
        selected: triples.len(),
        case1: count(ProofCase::SmallOrder),
        case2: count(ProofCase::SmallIndex),
        case3: count(ProofCase::Balanced),
        delta: eft_delta(),
        delta_reference: EFT_DELTA_REFERENCE,
        tie_rule: CASE_TIE_RULE,
        triples,
    })
}
