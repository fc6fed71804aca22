//! Prime-indexed residue sequences and desk-scale congruence verifiers.
//!
//! An element of the poor man's adele ring is a rule assigning a residue
//! mod `p` to each prime, two rules being identified when they agree at all
//! large primes. This crate evaluates such rules over finite prime windows
//! and checks concrete congruences prime by prime: q-Fibonacci residues
//! against their residual-index prediction, Bernoulli residues through the
//! Glaisher sums, Wolstenholme and Wieferich conditions, the truncated
//! `sqrt(1 + x)` series, and Frobenius traces of elliptic curves.
//!
//! Window computations take a `jobs` argument. Output never depends on it.

mod arith;

pub mod adele;
pub mod bernoulli;
pub mod error;
pub mod finite_log;
pub mod frobenius;
pub mod prime_engine;
pub mod qfib;
pub mod report;
pub mod residue;
pub mod shard;

pub use adele::{
    compare_on_window, constant, diagonal, equivalent_on_window, legendre_element,
    occurrence_census, ring_op, AdeleElement, EquivalenceVerdict, OccurrenceCensus, RingOp,
    Verdict,
};
pub use error::{Error, Result};
pub use prime_engine::{
    factorize, is_prime, multiplicative_order, perfect_power_decompose, primes_in,
    FactoredInteger, PrimeWindow,
};
pub use report::{CongruenceReport, Record, Status, Summary};
pub use residue::{kronecker, pow_mod, reduce_rational, MaybeResidue, Modulus, Rational, Residue};
