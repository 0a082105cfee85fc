use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use tdq_core::arith::{self, factorize, FactoredInteger, PrimeSieve};

#[test]
fn jacobi_is_multiplicative_in_the_top_argument() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10_000 {
        let n = 2 * rng.gen_range(0..500_000u64) + 1;
        let a = rng.gen_range(-1_000_000i64..1_000_000);
        let b = rng.gen_range(-1_000_000i64..1_000_000);
        let lhs = arith::jacobi(a, n).unwrap() * arith::jacobi(b, n).unwrap();
        assert_eq!(lhs, arith::jacobi(a * b, n).unwrap(), "a={a} b={b} n={n}");
    }
}

#[test]
fn mod_sqrt_is_complete_for_small_prime_powers() {
    let sieve = PrimeSieve::new(10_000).unwrap();
    let mut moduli = Vec::new();
    for &l in &sieve.primes()[1..] {
        let l = l as u64;
        let (mut q, mut k) = (l, 1u32);
        while q <= 10_000 {
            moduli.push((l, k, q));
            q *= l;
            k += 1;
        }
    }
    moduli.par_iter().for_each(|&(l, k, q)| {
        // All square roots of every residue at once.
        let mut roots = vec![Vec::new(); q as usize];
        for x in 0..q {
            roots[(x * x % q) as usize].push(x);
        }
        for a in 0..q {
            let got = arith::mod_sqrt(a as i64, l, k).unwrap();
            assert_eq!(got, roots[a as usize], "a={a} mod {l}^{k}");
        }
    });
}

#[test]
fn mod_sqrt_reduces_negative_inputs() {
    for a in -50i64..0 {
        let got = arith::mod_sqrt(a, 13, 2).unwrap();
        assert_eq!(got, arith::mod_sqrt(arith::reduce(a, 169) as i64, 13, 2).unwrap());
        for x in got {
            assert_eq!((x * x) % 169, arith::reduce(a, 169));
        }
    }
}

#[test]
fn factorize_round_trips_random_63_bit_integers() {
    let sieve = PrimeSieve::new(1 << 16).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let inputs: Vec<u64> = (0..100_000).map(|_| rng.gen_range(1..=i64::MAX as u64)).collect();
    inputs.par_iter().for_each(|&n| {
        let f = factorize(n, &sieve).unwrap();
        let mut product = 1u64;
        for w in f.factors().windows(2) {
            assert!(w[0].0 < w[1].0, "factors of {n} not strictly ascending");
        }
        for &(p, e) in f.factors() {
            assert!(arith::is_prime_u64(p), "{p} in factorization of {n} is not prime");
            product = product.checked_mul(p.pow(e)).unwrap();
        }
        assert_eq!(product, n);
    });
}

#[test]
fn sieve_and_miller_rabin_agree() {
    let sieve = PrimeSieve::new(2_000_000).unwrap();
    for n in 0..=2_000_000u64 {
        assert_eq!(sieve.is_prime(n), arith::is_prime_u64(n), "n={n}");
    }
}

#[test]
fn strong_pseudoprimes_are_rejected() {
    // Strong pseudoprimes to several small bases and Carmichael numbers.
    for n in [2047u64, 1_373_653, 25_326_001, 3_215_031_751, 2_152_302_898_747, 561, 41041, 3_825_123_056_546_413_051] {
        assert!(!arith::is_prime_u64(n), "{n}");
    }
    assert!(arith::is_prime_u64((1 << 61) - 1));
}

proptest! {
    #[test]
    fn crt_combine_recovers_residues(x in 0u64..1_000_000_000, a in 1u64..2000, b in 1u64..2000) {
        prop_assume!(arith::gcd(a, b) == 1);
        let (r, m) = arith::crt_combine(&[(x % a, a), (x % b, b)]).unwrap();
        prop_assert_eq!(m, a * b);
        prop_assert_eq!(r, x % (a * b));
    }

    #[test]
    fn inverse_is_an_inverse(a in 1u64..1_000_000, m in 2u64..1_000_000) {
        match arith::inv_mod(a, m) {
            Some(inv) => prop_assert_eq!(arith::mul_mod(a, inv, m), 1 % m),
            None => prop_assert!(arith::gcd(a, m) > 1),
        }
    }

    #[test]
    fn divisors_match_tau(n in 1u64..10_000_000) {
        let f = FactoredInteger::new(n).unwrap();
        let divs = f.divisors();
        prop_assert_eq!(divs.len() as u64, f.tau());
        prop_assert!(divs.iter().all(|d| n % d == 0));
        prop_assert!(divs.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn isqrt_brackets(n in any::<u64>()) {
        let r = arith::isqrt(n) as u128;
        prop_assert!(r * r <= n as u128);
        prop_assert!((r + 1) * (r + 1) > n as u128);
    }

    #[test]
    fn d_star_is_one_mod_four(k in 0u64..10_000_000) {
        let d = 2 * k + 1;
        let star = arith::d_star(d).unwrap();
        prop_assert_eq!(star.value().rem_euclid(4), 1);
        prop_assert_eq!(star.modulus(), d);
    }
}
