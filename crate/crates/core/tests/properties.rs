use adele_lab::adele::{
    constant, diagonal, equivalent_on_window, legendre_element, occurrence_census, AdeleElement,
};
use adele_lab::bernoulli::inverse_power_sum;
use adele_lab::qfib::{fibonacci_mod, qfib_matrix, qfib_mod};
use adele_lab::residue::{kronecker, pow_mod, reduce_rational, Modulus, Rational};
use adele_lab::{factorize, is_prime, multiplicative_order, perfect_power_decompose, PrimeWindow};
use proptest::prelude::*;

fn primes_upto(n: u64) -> Vec<u64> {
    PrimeWindow::new(2, n).unwrap().primes()
}

fn prime_below(limit: u64) -> impl Strategy<Value = u64> {
    (3..limit).prop_map(|n| (n..).find(|&m| is_prime(m)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn factorize_round_trip(n in 1u64..=1_000_000) {
        let f = factorize(n).unwrap();
        prop_assert_eq!(f.product(), n);
        prop_assert!(f.factors.windows(2).all(|w| w[0].0 < w[1].0));
        prop_assert!(f.factors.iter().all(|&(p, e)| is_prime(p) && e >= 1));
    }

    #[test]
    fn order_is_least_and_divides_group_order(p in prime_below(200_000), a in 1i64..1_000_000) {
        prop_assume!(a as u64 % p != 0);
        let d = multiplicative_order(a, p).unwrap();
        let m = Modulus::new(p, 1).unwrap();
        prop_assert_eq!((p - 1) % d, 0);
        prop_assert_eq!(pow_mod(a, d, m).value(), 1);
        // Oracle: scan every divisor of p - 1 below d.
        for k in 1..d {
            if (p - 1) % k == 0 {
                prop_assert_ne!(pow_mod(a, k, m).value(), 1);
            }
        }
    }

    #[test]
    fn perfect_power_is_maximal(base in 2u64..2000, exp in 1u32..5) {
        let q = base.pow(exp);
        let (q0, lambda) = perfect_power_decompose(q).unwrap();
        prop_assert_eq!(q0.pow(lambda), q);
        prop_assert_eq!(perfect_power_decompose(q0).unwrap(), (q0, 1));
        prop_assert_eq!(lambda % exp, 0);
    }

    #[test]
    fn reduce_rational_is_a_ring_homomorphism(
        p in prime_below(1000),
        e in 1u32..=3,
        (a, b, c, d) in (-500i64..500, 1i64..500, -500i64..500, 1i64..500),
    ) {
        let (r, s) = (Rational::new(a, b), Rational::new(c, d));
        let red = |x: Rational| reduce_rational(x, p, e).unwrap();
        if let (Some(x), Some(y)) = (red(r), red(s)) {
            if let Some(sum) = red(r + s) {
                prop_assert_eq!(sum, x + y);
            }
            if let Some(prod) = red(r * s) {
                prop_assert_eq!(prod, x * y);
            }
        }
    }

    #[test]
    fn reduction_is_compatible_across_exponents(
        p in prime_below(2000),
        a in -10_000i64..10_000,
        b in 1i64..10_000,
    ) {
        let r = Rational::new(a, b);
        let cube = reduce_rational(r, p, 3).unwrap();
        let base = reduce_rational(r, p, 1).unwrap();
        prop_assert_eq!(cube.map(|x| x.reduce_to(1)), base);
    }

    #[test]
    fn matrix_route_agrees_with_recurrence(
        p in prime_below(1_000_000),
        q in 0i64..=50,
        n in 1u64..=500,
    ) {
        prop_assert_eq!(qfib_matrix(n, q, p).unwrap(), qfib_mod(n, q, p).unwrap());
    }

    #[test]
    fn fibonacci_satisfies_recurrence(p in prime_below(1_000_000), m in 1u64..1_000_000) {
        let f = |k| fibonacci_mod(k, p).unwrap();
        prop_assert_eq!(f(m + 1), f(m) + f(m - 1));
    }

    #[test]
    fn power_sums_vanish_unless_p_minus_one_divides(p in prime_below(500), m in 0u64..=20) {
        prop_assume!(p >= 3);
        let s = inverse_power_sum(m, p, 1).unwrap();
        let expected = if m % (p - 1) == 0 { p - 1 } else { 0 };
        prop_assert_eq!(s.value(), expected);
    }

    #[test]
    fn ring_laws_hold_pointwise(
        (a, b, c) in (-50i64..50, -50i64..50, -50i64..50),
        (da, db) in (1i64..20, 1i64..20),
    ) {
        let x = diagonal(Rational::new(a, da));
        let y = diagonal(Rational::new(b, db));
        let z = legendre_element(c);
        let w = PrimeWindow::new(2, 300).unwrap();
        let same = |l: &AdeleElement, r: &AdeleElement| equivalent_on_window(l, r, w, 1).is_equivalent();
        prop_assert!(same(&(&x + &y), &(&y + &x)));
        prop_assert!(same(&(&x * &y), &(&y * &x)));
        prop_assert!(same(&(&(&x + &y) + &z), &(&x + &(&y + &z))));
        prop_assert!(same(&(&(&x * &y) * &z), &(&x * &(&y * &z))));
        prop_assert!(same(&(&x * &(&y + &z)), &(&(&x * &y) + &(&x * &z))));
        // diagonal is multiplicative
        let prod = diagonal(Rational::new(a, da) * Rational::new(b, db));
        prop_assert!(same(&(&x * &y), &prod));
    }

    #[test]
    fn equivalence_is_an_equivalence_relation(
        c in -100i64..100,
        plants in proptest::collection::vec(0usize..25, 0..4),
    ) {
        let small = primes_upto(100);
        let planted: Vec<u64> = plants.iter().map(|&i| small[i]).collect();
        let corrupt = |shift: i64| {
            let planted = planted.clone();
            AdeleElement::new("corrupted", move |p| {
                let m = Modulus::new(p, 1).unwrap();
                let bump = if planted.contains(&p) { shift } else { 0 };
                Some(m.residue((c + bump) as i128))
            })
        };
        let (x, y, z) = (constant(c), corrupt(1), corrupt(2));
        let full = PrimeWindow::new(2, 400).unwrap();
        let tail = PrimeWindow::new(101, 400).unwrap();
        prop_assert!(equivalent_on_window(&x, &x, full, 1).is_equivalent());
        prop_assert_eq!(
            equivalent_on_window(&x, &y, full, 1).mismatch_primes(),
            equivalent_on_window(&y, &x, full, 1).mismatch_primes()
        );
        let xy = equivalent_on_window(&x, &y, tail, 1).is_equivalent();
        let yz = equivalent_on_window(&y, &z, tail, 1).is_equivalent();
        if xy && yz {
            prop_assert!(equivalent_on_window(&x, &z, tail, 1).is_equivalent());
        }
        prop_assert!(xy && yz);
    }

    #[test]
    fn census_buckets_are_disjoint(b in 1u64..40, c in -60i64..60) {
        let min_p = 2 * b + 1;
        let w = PrimeWindow::new(min_p, 3000).unwrap();
        let census = occurrence_census(&legendre_element(c), w, b, 1).unwrap();
        prop_assert!(census.total_hits() as usize <= census.considered);
        prop_assert!(census.excluded_small_primes.is_empty());
    }
}

#[test]
fn euler_criterion() {
    for p in primes_upto(10_000).into_iter().skip(1) {
        let m = Modulus::new(p, 1).unwrap();
        for a in [2i64, 3, 5, -1] {
            if a.rem_euclid(p as i64) == 0 {
                continue;
            }
            let euler = pow_mod(a, (p - 1) / 2, m);
            assert!(euler.is_congruent_to(kronecker(a, p).unwrap() as i128), "a={a} p={p}");
        }
    }
}

#[test]
fn twice_legendre_of_two_has_period_eight_with_sign_flip() {
    let b = |n: u64| 2 * kronecker(2, n).unwrap() as i64;
    for n in (3..=10_000u64).step_by(2) {
        assert_eq!(b(n + 4) + b(n), 0, "n={n}");
    }
}
