//! Raw word-level modular helpers shared by the typed layers.
//!
//! Moduli are `u64`; every product is formed at 128-bit width unless the
//! modulus fits in 32 bits, where the 64-bit product cannot overflow.

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    if m <= u32::MAX as u64 {
        (a * b) % m
    } else {
        ((a as u128 * b as u128) % m as u128) as u64
    }
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let (s, overflow) = a.overflowing_add(b);
    if overflow || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    base %= m;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Canonical representative of a signed integer modulo `m`.
#[inline]
pub(crate) fn reduce_signed(a: i128, m: u64) -> u64 {
    a.rem_euclid(m as i128) as u64
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm.
pub(crate) fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = ((a % m) as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    if old_r != 1 {
        return if m == 1 { Some(0) } else { None };
    }
    Some(reduce_signed(old_s, m))
}

/// Inverts every entry with one extended gcd plus three multiplications
/// per element (prefix-product trick). Returns `None` if any entry is not
/// a unit.
pub(crate) fn batch_inverse(values: &[u64], m: u64) -> Option<Vec<u64>> {
    let mut prefix = Vec::with_capacity(values.len());
    let mut acc = 1 % m;
    for &v in values {
        prefix.push(acc);
        acc = mul_mod(acc, v % m, m);
    }
    let mut inv_acc = inv_mod(acc, m)?;
    let mut out = vec![0u64; values.len()];
    for i in (0..values.len()).rev() {
        out[i] = mul_mod(inv_acc, prefix[i], m);
        inv_acc = mul_mod(inv_acc, values[i] % m, m);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wide_products_do_not_overflow() {
        let m = (1u64 << 61) - 1;
        let a = m - 1;
        assert_eq!(mul_mod(a, a, m), 1);
        assert_eq!(add_mod(a, a, m), m - 2);
        assert_eq!(sub_mod(0, 1, m), m - 1);
    }

    #[test]
    fn batch_matches_single_inverse() {
        let m = 7u64.pow(3);
        let vals: Vec<u64> = (1..7).collect();
        let inv = batch_inverse(&vals, m).unwrap();
        for (v, i) in vals.iter().zip(&inv) {
            assert_eq!(Some(*i), inv_mod(*v, m));
            assert_eq!(mul_mod(*v, *i, m), 1);
        }
        assert!(batch_inverse(&[3, 7], 49).is_none());
    }
}
