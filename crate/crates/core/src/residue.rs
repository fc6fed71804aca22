//! Exact arithmetic in `Z/p^e Z` for `e` in `{1, 2, 3}`.
//!
//! A [`Residue`] carries its modulus. Combining residues with different
//! moduli panics: mixing up `mod p` and `mod p^3` values is a programming
//! error, not something to coerce silently.
//!
//! Partial values are modelled as [`MaybeResidue`] (`None` is the undefined
//! component, displayed as `inf`). Arithmetic on `MaybeResidue` goes through
//! [`combine`], which makes `None` absorbing.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Rational64;
use serde::{Serialize, Serializer};

use crate::arith;
use crate::error::{Error, Result};
use crate::prime_engine::is_prime;

/// Reduced fraction with positive denominator.
pub type Rational = Rational64;

/// A prime power modulus `p^e` with `e <= 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Modulus {
    p: u64,
    e: u32,
    m: u64,
}

impl Modulus {
    pub fn new(p: u64, e: u32) -> Result<Self> {
        let m = p
            .checked_pow(e)
            .filter(|&m| m < 1 << 63)
            .ok_or(Error::UnsupportedModulus { p, e })?;
        if !(1..=3).contains(&e) || !is_prime(p) {
            return Err(Error::UnsupportedModulus { p, e });
        }
        Ok(Modulus { p, e, m })
    }

    /// Modulus `p`; caller guarantees primality.
    pub(crate) fn prime_unchecked(p: u64) -> Self {
        Modulus { p, e: 1, m: p }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }

    pub fn value(&self) -> u64 {
        self.m
    }

    pub fn residue(&self, value: i128) -> Residue {
        Residue {
            modulus: *self,
            value: arith::reduce_signed(value, self.m),
        }
    }

    pub fn zero(&self) -> Residue {
        self.residue(0)
    }

    pub fn one(&self) -> Residue {
        self.residue(1)
    }
}

/// An element of `Z/p^e Z`, stored as its canonical value in `[0, p^e)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    modulus: Modulus,
    value: u64,
}

/// A residue or the undefined marker (`None`).
pub type MaybeResidue = Option<Residue>;

impl Residue {
    pub fn new(value: i128, p: u64, e: u32) -> Result<Self> {
        Ok(Modulus::new(p, e)?.residue(value))
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn prime(&self) -> u64 {
        self.modulus.p
    }

    pub fn exponent(&self) -> u32 {
        self.modulus.e
    }

    /// Canonical representative in `[0, p^e)`.
    pub fn value(&self) -> u64 {
        self.value
    }

    /// Representative in `(-p^e/2, p^e/2]`.
    pub fn centered(&self) -> i64 {
        let m = self.modulus.m;
        if self.value > m / 2 {
            self.value as i64 - m as i64
        } else {
            self.value as i64
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// True when the residue is congruent to the integer `a`.
    pub fn is_congruent_to(&self, a: i128) -> bool {
        arith::reduce_signed(a, self.modulus.m) == self.value
    }

    pub fn pow(&self, exp: u64) -> Residue {
        Residue {
            modulus: self.modulus,
            value: arith::pow_mod(self.value, exp, self.modulus.m),
        }
    }

    /// Multiplicative inverse, `None` when `p` divides the value.
    pub fn inverse(&self) -> Option<Residue> {
        arith::inv_mod(self.value, self.modulus.m).map(|value| Residue {
            modulus: self.modulus,
            value,
        })
    }

    /// Image under the projection `Z/p^e -> Z/p^k`, `k <= e`.
    pub fn reduce_to(&self, k: u32) -> Residue {
        assert!(k >= 1 && k <= self.modulus.e, "cannot lift {self} to exponent {k}");
        let modulus = Modulus {
            p: self.modulus.p,
            e: k,
            m: self.modulus.p.pow(k),
        };
        Residue {
            modulus,
            value: self.value % modulus.m,
        }
    }

    /// Divides by `p^k` when the value is divisible by it, landing in
    /// `Z/p^(e-k)`.
    pub fn divide_by_prime_power(&self, k: u32) -> Option<Residue> {
        let p = self.modulus.p;
        if k == 0 || k >= self.modulus.e {
            return None;
        }
        let pk = p.pow(k);
        if self.value % pk != 0 {
            return None;
        }
        let e = self.modulus.e - k;
        let modulus = Modulus { p, e, m: p.pow(e) };
        Some(Residue {
            modulus,
            value: self.value / pk,
        })
    }

    fn check_same(&self, other: &Residue) {
        assert!(
            self.modulus == other.modulus,
            "mixed-modulus arithmetic: {} vs {}",
            describe(&self.modulus),
            describe(&other.modulus)
        );
    }
}

fn describe(m: &Modulus) -> String {
    format!("{}^{}", m.p, m.e)
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus.m)
    }
}

impl Serialize for Residue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u64(self.value)
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        self.check_same(&rhs);
        Residue {
            modulus: self.modulus,
            value: arith::add_mod(self.value, rhs.value, self.modulus.m),
        }
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        self.check_same(&rhs);
        Residue {
            modulus: self.modulus,
            value: arith::sub_mod(self.value, rhs.value, self.modulus.m),
        }
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        self.check_same(&rhs);
        Residue {
            modulus: self.modulus,
            value: arith::mul_mod(self.value, rhs.value, self.modulus.m),
        }
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        Residue {
            modulus: self.modulus,
            value: arith::sub_mod(0, self.value, self.modulus.m),
        }
    }
}

/// Applies `op` when both sides are defined; undefined absorbs.
pub fn combine(
    x: MaybeResidue,
    y: MaybeResidue,
    op: impl FnOnce(Residue, Residue) -> Residue,
) -> MaybeResidue {
    Some(op(x?, y?))
}

/// Serializes an undefined residue as the string `inf`.
pub fn serialize_maybe<S: Serializer>(
    value: &MaybeResidue,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match value {
        Some(r) => s.serialize_u64(r.value()),
        None => s.serialize_str("inf"),
    }
}

/// Like [`serialize_maybe`] but writes the centered representative.
pub fn serialize_maybe_centered<S: Serializer>(
    value: &MaybeResidue,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match value {
        Some(r) => s.serialize_i64(r.centered()),
        None => s.serialize_str("inf"),
    }
}

/// `numerator / denominator mod p^e`, undefined when `p` divides the
/// denominator.
pub fn reduce_rational(r: Rational, p: u64, e: u32) -> Result<MaybeResidue> {
    let modulus = Modulus::new(p, e)?;
    Ok(reduce_rational_in(r, modulus))
}

pub(crate) fn reduce_rational_in(r: Rational, modulus: Modulus) -> MaybeResidue {
    let den = modulus.residue(*r.denom() as i128);
    let num = modulus.residue(*r.numer() as i128);
    den.inverse().map(|inv| num * inv)
}

/// `a^n mod m` by square-and-multiply; `n = 0` gives 1.
pub fn pow_mod(a: i64, n: u64, modulus: Modulus) -> Residue {
    modulus.residue(a as i128).pow(n)
}

/// Jacobi symbol `(a/n)` for odd positive `n`; the Legendre symbol when `n`
/// is prime.
pub fn kronecker(a: i64, n: u64) -> Result<i8> {
    if n % 2 == 0 {
        return Err(Error::EvenModulus(n));
    }
    Ok(jacobi_odd(arith::reduce_signed(a as i128, n), n))
}

pub(crate) fn jacobi_odd(mut a: u64, mut n: u64) -> i8 {
    let mut sign = 1i8;
    a %= n;
    while a != 0 {
        let twos = a.trailing_zeros();
        a >>= twos;
        if twos % 2 == 1 && matches!(n % 8, 3 | 5) {
            sign = -sign;
        }
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        (a, n) = (n % a, a);
    }
    if n == 1 {
        sign
    } else {
        0
    }
}
