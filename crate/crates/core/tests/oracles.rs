//! Checks against independent oracles: exact big rationals, brute-force
//! enumeration and naive sieves. None of these share code paths with the
//! library routines they check.

use adele_lab::bernoulli::{bernoulli_residue, glaisher_cross_check, inverse_power_sum};
use adele_lab::finite_log::{finite_log2, fermat_quotient};
use adele_lab::frobenius::{ap_trace, CurveParams};
use adele_lab::qfib::{fibonacci_mod, qfib_matrix, qfib_mod};
use adele_lab::{primes_in, PrimeWindow};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

fn naive_primes(limit: u64) -> Vec<u64> {
    (2..=limit)
        .filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
        .collect()
}

fn reduce_big(x: &BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let den = (x.denom() % &pb + &pb) % &pb;
    if den.is_zero() {
        return None;
    }
    let num = ((x.numer() % &pb) + &pb) % &pb;
    let den = den.to_u64().unwrap();
    let inv = (1..p).find(|i| den * i % p == 1).unwrap();
    Some(num.to_u64().unwrap() * inv % p)
}

fn exact_bernoulli(n: usize) -> Vec<BigRational> {
    // B_m = -1/(m+1) sum_{j<m} C(m+1, j) B_j
    let mut b: Vec<BigRational> = vec![BigRational::one()];
    for m in 1..=n {
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += bj * BigRational::from_integer(binom.clone());
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

#[test]
fn prime_count_to_ten_thousand() {
    let fast = primes_in(PrimeWindow::new(2, 10_000).unwrap());
    assert_eq!(fast.len(), 1229);
    assert_eq!(fast, naive_primes(10_000));
}

#[test]
fn bernoulli_residues_match_exact_rationals() {
    let b = exact_bernoulli(200);
    assert_eq!(b[2], BigRational::new(1.into(), 6.into()));
    for p in primes_in(PrimeWindow::new(5, 200).unwrap()) {
        for m in [3u64, 5, 7, 9] {
            if p <= m {
                continue;
            }
            let exact = reduce_big(&b[(p - m) as usize], p).expect("von Staudt: p-m < p-1");
            assert_eq!(bernoulli_residue(m, p).unwrap().value(), exact, "m={m} p={p}");
            assert_eq!(glaisher_cross_check(m, p).unwrap().bernoulli_from_cubic.value(), exact);
        }
    }
}

#[test]
fn inverse_power_sums_match_exact_sums() {
    for (m, p, e) in [(2u64, 7u64, 2u32), (1, 13, 3), (3, 11, 3), (4, 17, 2)] {
        let exact: BigRational = (1..p)
            .map(|k| BigRational::new(BigInt::one(), BigInt::from(k).pow(m as u32)))
            .sum();
        let pe = p.pow(e);
        let pb = BigInt::from(pe);
        let den = (exact.denom() % &pb).to_u64().unwrap();
        let inv = (1..pe).find(|i| (den as u128 * *i as u128) % pe as u128 == 1).unwrap();
        let num = ((exact.numer() % &pb + &pb) % &pb).to_u64().unwrap();
        let expected = (num as u128 * inv as u128 % pe as u128) as u64;
        assert_eq!(inverse_power_sum(m, p, e).unwrap().value(), expected, "m={m} p={p} e={e}");
    }
}

#[test]
fn harmonic_numbers_vanish_mod_p_squared_for_p_above_three() {
    // Wolstenholme via exact rationals for small p, and the p = 3 exception.
    for p in primes_in(PrimeWindow::new(5, 60).unwrap()) {
        let h: BigRational = (1..p).map(|k| BigRational::new(1.into(), k.into())).sum();
        let p2 = BigInt::from(p * p);
        assert!((h.numer() % &p2).is_zero(), "p={p}");
        assert!(inverse_power_sum(1, p, 2).unwrap().is_zero());
    }
    assert_eq!(inverse_power_sum(1, 3, 2).unwrap().value(), 6);
}

fn exact_t(n_max: usize) -> Vec<BigRational> {
    // t_n = (-1)^(n-1) sum_{k=1}^{n-1} (-1)^k / k, index 0 unused.
    (0..=n_max)
        .map(|n| {
            if n == 0 {
                return BigRational::zero();
            }
            let s: BigRational = (1..n)
                .map(|k| {
                    let sign = if k % 2 == 0 { 1 } else { -1 };
                    BigRational::new(sign.into(), BigInt::from(k))
                })
                .sum();
            if n % 2 == 1 {
                s
            } else {
                -s
            }
        })
        .collect()
}

#[test]
fn finite_log_recursions_hold_exactly() {
    let t = exact_t(101);
    for n in 1..=100usize {
        let one_over_n = BigRational::new(BigInt::one(), BigInt::from(n));
        assert_eq!(&t[n + 1] + &t[n], one_over_n, "inhomogeneous n={n}");
    }
    for n in 2..=100usize {
        let lhs = BigRational::from_integer(n.into()) * &t[n + 1] + &t[n]
            - BigRational::from_integer(BigInt::from(n - 1)) * &t[n - 1];
        assert!(lhs.is_zero(), "homogenized n={n}");
    }
    for p in primes_in(PrimeWindow::new(3, 100).unwrap()) {
        assert_eq!(Some(finite_log2(p).unwrap().value()), reduce_big(&t[p as usize], p));
    }
}

#[test]
fn fermat_quotient_matches_big_integers() {
    for p in primes_in(PrimeWindow::new(3, 400).unwrap()) {
        let big: BigInt = (BigInt::from(2).pow(p as u32 - 1) - 1) / BigInt::from(p);
        let expected = (big % BigInt::from(p)).to_u64().unwrap();
        assert_eq!(fermat_quotient(2, p).unwrap().value(), expected);
    }
}

fn enumerate_points(a: i64, b: i64, p: u64) -> u64 {
    let p = p as i64;
    let mut count = 1; // point at infinity
    for x in 0..p {
        for y in 0..p {
            if (y * y - (x * x * x + a * x + b)).rem_euclid(p) == 0 {
                count += 1;
            }
        }
    }
    count
}

#[test]
fn trace_examples_by_enumeration() {
    assert_eq!(enumerate_points(1, 1, 5), 9);
    assert_eq!(ap_trace(CurveParams::new(1, 1).unwrap(), 5).unwrap(), Some(-3));
    assert_eq!(enumerate_points(-1, 0, 7), 8);
    assert_eq!(ap_trace(CurveParams::new(-1, 0).unwrap(), 7).unwrap(), Some(0));
}

#[test]
fn cm_curve_supersingular_primes_to_one_hundred() {
    let curve = CurveParams::new(-1, 0).unwrap();
    let zeros: Vec<u64> = primes_in(PrimeWindow::new(3, 100).unwrap())
        .into_iter()
        .filter(|&p| enumerate_points(-1, 0, p) == p + 1)
        .collect();
    assert_eq!(zeros, vec![3, 7, 11, 19, 23, 31, 43, 47, 59, 67, 71, 79, 83]);
    assert_eq!(adele_lab::frobenius::ap_zero_census(curve, 100, 1).unwrap(), zeros);
}

fn exact_qfib(n: usize, q: i64) -> BigInt {
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    let mut qk = BigInt::one();
    for _ in 0..n {
        let next = &b + &qk * &a;
        a = b;
        b = next;
        qk *= q;
    }
    a
}

#[test]
fn qfib_unrolled_values() {
    // 0, 1, 1, 3, 7, 31, 143, 1135 for q = 2.
    let seq: Vec<i64> = (0..8).map(|n| exact_qfib(n, 2).to_i64().unwrap()).collect();
    assert_eq!(seq, vec![0, 1, 1, 3, 7, 31, 143, 1135]);
    for p in [3u64, 7, 101, 10007] {
        for q in [-4i64, -1, 2, 3, 10] {
            for n in 0..60usize {
                let big = exact_qfib(n, q);
                let pb = BigInt::from(p);
                let expected = ((big % &pb + &pb) % &pb).to_u64().unwrap();
                assert_eq!(qfib_mod(n as u64, q, p).unwrap().value(), expected);
                if n >= 1 {
                    assert_eq!(qfib_matrix(n as u64, q, p).unwrap().value(), expected);
                }
            }
        }
    }
}

#[test]
fn q_equal_one_is_fibonacci() {
    let mut fib = vec![0u64, 1];
    for n in 2..=30 {
        fib.push(fib[n - 1] + fib[n - 2]);
    }
    for p in [1_000_003u64, 97] {
        for (n, f) in fib.iter().enumerate() {
            assert_eq!(qfib_mod(n as u64, 1, p).unwrap().value(), f % p);
            assert_eq!(fibonacci_mod(n as u64, p).unwrap().value(), f % p);
        }
    }
}
