//! Computable elements of the poor man's adele ring: rules that assign a
//! residue mod `p` (or nothing) to each prime.
//!
//! Two elements are equal in the ring when they agree at all sufficiently
//! large primes, which no finite computation can confirm. Everything here
//! works on a [`PrimeWindow`]: an `EquivalentOnWindow` verdict is evidence
//! of equality, never a proof. Elements are lazy, so only the primes of the
//! requested window are ever evaluated.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::prime_engine::PrimeWindow;
use crate::report::{Record, Status};
use crate::residue::{
    combine, jacobi_odd, reduce_rational_in, serialize_maybe, MaybeResidue, Modulus, Rational,
};
use crate::shard::map_primes;

type Rule = dyn Fn(u64) -> MaybeResidue + Send + Sync;

/// A named, pure rule `p -> x_p mod p`.
#[derive(Clone)]
pub struct AdeleElement {
    name: String,
    rule: Arc<Rule>,
}

impl fmt::Debug for AdeleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AdeleElement").field("name", &self.name).finish()
    }
}

impl AdeleElement {
    /// Wraps a rule. The rule is only ever called with primes and must
    /// return residues modulo that prime (exponent 1).
    pub fn new(
        name: impl Into<String>,
        rule: impl Fn(u64) -> MaybeResidue + Send + Sync + 'static,
    ) -> Self {
        AdeleElement {
            name: name.into(),
            rule: Arc::new(rule),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, p: u64) -> MaybeResidue {
        let value = (self.rule)(p);
        debug_assert!(value.map_or(true, |r| r.modulus().value() == p));
        value
    }

    /// Components over a window, ascending.
    pub fn values(&self, window: PrimeWindow, jobs: usize) -> Vec<(u64, MaybeResidue)> {
        map_primes(window, jobs, |p| (p, self.eval(p)))
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

/// The diagonal image of a rational: `p -> r mod p`, undefined where `p`
/// divides the denominator.
pub fn diagonal(r: Rational) -> AdeleElement {
    AdeleElement::new(r.to_string(), move |p| {
        reduce_rational_in(r, Modulus::prime_unchecked(p))
    })
}

/// Diagonal image of an integer.
pub fn constant(c: i64) -> AdeleElement {
    diagonal(Rational::from_integer(c))
}

/// `p -> (a/p)`, undefined at `p = 2`.
pub fn legendre_element(a: i64) -> AdeleElement {
    AdeleElement::new(format!("legendre({a})"), move |p| {
        if p == 2 {
            return None;
        }
        let m = Modulus::prime_unchecked(p);
        let symbol = jacobi_odd(m.residue(a as i128).value(), p);
        Some(m.residue(symbol as i128))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RingOp {
    Add,
    Sub,
    Mul,
}

impl RingOp {
    fn symbol(self) -> &'static str {
        match self {
            RingOp::Add => "+",
            RingOp::Sub => "-",
            RingOp::Mul => "*",
        }
    }
}

/// Pointwise sum, difference or product.
pub fn ring_op(x: &AdeleElement, y: &AdeleElement, op: RingOp) -> AdeleElement {
    let name = format!("({} {} {})", x.name, op.symbol(), y.name);
    let (xr, yr) = (Arc::clone(&x.rule), Arc::clone(&y.rule));
    AdeleElement::new(name, move |p| {
        combine(xr(p), yr(p), |a, b| match op {
            RingOp::Add => a + b,
            RingOp::Sub => a - b,
            RingOp::Mul => a * b,
        })
    })
}

impl std::ops::Add for &AdeleElement {
    type Output = AdeleElement;
    fn add(self, rhs: &AdeleElement) -> AdeleElement {
        ring_op(self, rhs, RingOp::Add)
    }
}

impl std::ops::Sub for &AdeleElement {
    type Output = AdeleElement;
    fn sub(self, rhs: &AdeleElement) -> AdeleElement {
        ring_op(self, rhs, RingOp::Sub)
    }
}

impl std::ops::Mul for &AdeleElement {
    type Output = AdeleElement;
    fn mul(self, rhs: &AdeleElement) -> AdeleElement {
        ring_op(self, rhs, RingOp::Mul)
    }
}

/// One prime of a side-by-side comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparisonRecord {
    pub p: u64,
    #[serde(serialize_with = "serialize_maybe")]
    pub lhs: MaybeResidue,
    #[serde(serialize_with = "serialize_maybe")]
    pub rhs: MaybeResidue,
    pub status: Status,
}

impl Record for ComparisonRecord {
    fn prime(&self) -> u64 {
        self.p
    }
    fn status(&self) -> &Status {
        &self.status
    }
}

/// Evaluates both elements at every prime of the window.
pub fn compare_on_window(
    x: &AdeleElement,
    y: &AdeleElement,
    window: PrimeWindow,
    jobs: usize,
) -> Vec<ComparisonRecord> {
    map_primes(window, jobs, |p| {
        let (lhs, rhs) = (x.eval(p), y.eval(p));
        let status = match (lhs, rhs) {
            (Some(a), Some(b)) => Status::from_agreement(a == b),
            _ => Status::Undefined,
        };
        ComparisonRecord { p, lhs, rhs, status }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    EquivalentOnWindow,
    Distinct,
}

#[derive(Debug, Clone, Serialize)]
pub struct Mismatch {
    pub p: u64,
    pub lhs: crate::residue::Residue,
    pub rhs: crate::residue::Residue,
}

/// Window-level comparison of two elements.
#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceVerdict {
    pub window: PrimeWindow,
    pub mismatches: Vec<Mismatch>,
    pub undefined_primes: Vec<u64>,
    pub verdict: Verdict,
}

impl EquivalenceVerdict {
    pub fn from_records(window: PrimeWindow, records: &[ComparisonRecord]) -> Self {
        let mut mismatches = Vec::new();
        let mut undefined_primes = Vec::new();
        for r in records {
            match (r.lhs, r.rhs) {
                (Some(lhs), Some(rhs)) if lhs != rhs => {
                    mismatches.push(Mismatch { p: r.p, lhs, rhs })
                }
                (Some(_), Some(_)) => {}
                _ => undefined_primes.push(r.p),
            }
        }
        let verdict = if mismatches.is_empty() {
            Verdict::EquivalentOnWindow
        } else {
            Verdict::Distinct
        };
        EquivalenceVerdict {
            window,
            mismatches,
            undefined_primes,
            verdict,
        }
    }

    pub fn is_equivalent(&self) -> bool {
        self.verdict == Verdict::EquivalentOnWindow
    }

    pub fn mismatch_primes(&self) -> Vec<u64> {
        self.mismatches.iter().map(|m| m.p).collect()
    }
}

pub fn equivalent_on_window(
    x: &AdeleElement,
    y: &AdeleElement,
    window: PrimeWindow,
    jobs: usize,
) -> EquivalenceVerdict {
    EquivalenceVerdict::from_records(window, &compare_on_window(x, y, window, jobs))
}

/// How often each small integer `a` (`|a| <= bound`) shows up as a
/// component, comparing through the centered representative.
///
/// Primes `p <= 2 * bound` are left out: there the residue class does not
/// pin down a single integer of absolute value at most `bound`.
#[derive(Debug, Clone, Serialize)]
pub struct OccurrenceCensus {
    pub window: PrimeWindow,
    pub bound: u64,
    /// Attained values only; absent keys have count zero.
    pub counts: BTreeMap<i64, u64>,
    /// Primes that entered the census (defined and above `2 * bound`).
    pub considered: usize,
    pub undefined_primes: Vec<u64>,
    pub excluded_small_primes: Vec<u64>,
}

impl OccurrenceCensus {
    pub fn count(&self, a: i64) -> u64 {
        self.counts.get(&a).copied().unwrap_or(0)
    }

    /// Share of considered primes whose component equals `a`.
    pub fn fraction(&self, a: i64) -> f64 {
        if self.considered == 0 {
            0.0
        } else {
            self.count(a) as f64 / self.considered as f64
        }
    }

    /// Values hit at two or more primes.
    pub fn repeated_values(&self) -> Vec<i64> {
        self.counts
            .iter()
            .filter(|(_, &c)| c >= 2)
            .map(|(&a, _)| a)
            .collect()
    }

    pub fn total_hits(&self) -> u64 {
        self.counts.values().sum()
    }
}

pub fn occurrence_census(
    x: &AdeleElement,
    window: PrimeWindow,
    bound: u64,
    jobs: usize,
) -> Result<OccurrenceCensus> {
    if bound == 0 {
        return Err(Error::precondition("census bound must be at least 1"));
    }
    let limit = bound.saturating_mul(2);
    let values = map_primes(window, jobs, |p| (p, (p > limit).then(|| x.eval(p))));
    let mut census = OccurrenceCensus {
        window,
        bound,
        counts: BTreeMap::new(),
        considered: 0,
        undefined_primes: Vec::new(),
        excluded_small_primes: Vec::new(),
    };
    for (p, value) in values {
        match value {
            None => census.excluded_small_primes.push(p),
            Some(None) => census.undefined_primes.push(p),
            Some(Some(r)) => {
                census.considered += 1;
                let c = r.centered();
                if c.unsigned_abs() <= bound {
                    *census.counts.entry(c).or_insert(0) += 1;
                }
            }
        }
    }
    Ok(census)
}
