use std::sync::OnceLock;

use super::modular::{gcd, is_prime_u64, mul_mod};
use super::sieve::PrimeSieve;
use crate::error::{Error, Result};

/// A positive integer together with its canonical factorization
/// `n = prod p_i^{a_i}`, primes strictly ascending, exponents `>= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FactoredInteger {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    /// Factors `n` without a caller-supplied sieve (small trial division,
    /// then Miller-Rabin and Brent's rho).
    pub fn new(n: u64) -> Result<Self> {
        check_range(n)?;
        let mut primes = Vec::new();
        let mut rem = n;
        for &p in small_primes() {
            let p = p as u64;
            if p * p > rem {
                break;
            }
            while rem % p == 0 {
                rem /= p;
                primes.push(p);
            }
        }
        if rem > 1 {
            split_into(rem, &mut primes);
        }
        Ok(Self::from_prime_list(n, primes))
    }

    /// Builds from an explicit `(prime, exponent)` list, validating every
    /// invariant.
    pub fn from_factors(factors: Vec<(u64, u32)>) -> Result<Self> {
        let mut n = 1u64;
        for (i, &(p, a)) in factors.iter().enumerate() {
            if a == 0 || !is_prime_u64(p) || (i > 0 && factors[i - 1].0 >= p) {
                return Err(Error::Domain(format!("invalid factor list {factors:?}")));
            }
            n = p
                .checked_pow(a)
                .and_then(|pa| n.checked_mul(pa))
                .ok_or_else(|| Error::Domain("factor product overflows".into()))?;
        }
        check_range(n)?;
        Ok(Self { n, factors })
    }

    fn from_prime_list(n: u64, mut primes: Vec<u64>) -> Self {
        primes.sort_unstable();
        let mut factors: Vec<(u64, u32)> = Vec::new();
        for p in primes {
            match factors.last_mut() {
                Some((q, a)) if *q == p => *a += 1,
                _ => factors.push((p, 1)),
            }
        }
        Self { n, factors }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Number of divisors, `prod (a_i + 1)`.
    pub fn tau(&self) -> u64 {
        self.factors.iter().map(|&(_, a)| a as u64 + 1).product()
    }

    /// Euler's totient.
    pub fn phi(&self) -> u64 {
        self.factors.iter().map(|&(p, a)| (p - 1) * p.pow(a - 1)).product()
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    pub fn is_odd(&self) -> bool {
        self.n % 2 == 1
    }

    /// The prime powers `p^a` exactly dividing `n`, in prime order.
    pub fn prime_powers(&self) -> impl Iterator<Item = (u64, u32, u64)> + '_ {
        self.factors.iter().map(|&(p, a)| (p, a, p.pow(a)))
    }

    /// All divisors, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, a) in &self.factors {
            let len = divs.len();
            let mut pk = 1;
            for _ in 0..a {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

/// Factors `n` by trial division over the sieve primes up to
/// `min(limit, sqrt(n))`, falling back to Miller-Rabin plus Brent's rho for
/// any cofactor the sieve cannot certify.
pub fn factorize(n: u64, sieve: &PrimeSieve) -> Result<FactoredInteger> {
    check_range(n)?;
    let mut primes = Vec::new();
    let rem = trial_divide(n, sieve, &mut primes);
    if rem > 1 {
        let limit = sieve.limit();
        if limit.checked_mul(limit).is_some_and(|sq| rem <= sq) {
            // No prime factor <= limit remains, so rem < limit^2 is prime.
            primes.push(rem);
        } else {
            split_into(rem, &mut primes);
        }
    }
    Ok(FactoredInteger::from_prime_list(n, primes))
}

/// Divides out every sieve prime `p` with `p^2 <= remaining cofactor`,
/// pushing each prime found, and returns the cofactor. The cofactor is 1,
/// a prime, or a number with all prime factors above `sieve.limit()`.
pub(crate) fn trial_divide(n: u64, sieve: &PrimeSieve, out: &mut Vec<u64>) -> u64 {
    let mut rem = n;
    for &p in sieve.primes() {
        let p = p as u64;
        if p * p > rem {
            break;
        }
        if rem % p == 0 {
            while rem % p == 0 {
                rem /= p;
                out.push(p);
            }
        }
    }
    rem
}

fn check_range(n: u64) -> Result<()> {
    if n == 0 || n > i64::MAX as u64 {
        return Err(Error::Domain(format!("factorization needs 1 <= n <= 2^63 - 1, got {n}")));
    }
    Ok(())
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| PrimeSieve::new(1 << 12).expect("static limit").primes().to_vec())
}

/// Pushes the prime factors (with multiplicity) of `n > 1` onto `out`.
pub(crate) fn split_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    for p in [2u64, 3, 5, 7] {
        if n % p == 0 {
            out.push(p);
            split_into(n / p, out);
            return;
        }
    }
    let d = brent_rho(n);
    split_into(d, out);
    split_into(n / d, out);
}

/// Nontrivial factor of the odd composite `n` via Brent's cycle detection.
/// Starting points come from a fixed SplitMix64 stream so output is
/// reproducible.
fn brent_rho(n: u64) -> u64 {
    const BATCH: u64 = 128;
    let mut seed = 0x9E37_79B9_7F4A_7C15u64;
    loop {
        let y0 = splitmix64(&mut seed) % n;
        let c = splitmix64(&mut seed) % (n - 1) + 1;
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;

        let (mut x, mut y, mut ys) = (0u64, y0, y0);
        let (mut g, mut r, mut q) = (1u64, 1u64, 1u64);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            // batch overshot: replay one step at a time
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
