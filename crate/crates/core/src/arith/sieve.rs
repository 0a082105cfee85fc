use crate::error::{Error, Result};

pub const MAX_SIEVE_LIMIT: u64 = 1_000_000_000;

/// Odd numbers covered by one sieving segment (32 KiB of bits).
const SEGMENT_BITS: usize = 1 << 18;

/// Immutable primality table and prime list for `0..=limit`.
///
/// Only odd numbers are stored in the bit table; bit `i` stands for `2i + 1`.
#[derive(Debug, Clone)]
pub struct PrimeSieve {
    limit: u64,
    odd_bits: Vec<u64>,
    primes: Vec<u32>,
}

impl PrimeSieve {
    pub fn new(limit: u64) -> Result<Self> {
        if !(2..=MAX_SIEVE_LIMIT).contains(&limit) {
            return Err(Error::Config(format!(
                "sieve limit must lie in [2, {MAX_SIEVE_LIMIT}], got {limit}"
            )));
        }
        let n_odd = (limit as usize + 1) / 2;
        let mut bits = vec![u64::MAX; n_odd.div_ceil(64)];
        // clear the padding past the limit and the entry for 1
        let tail = n_odd % 64;
        if tail != 0 {
            *bits.last_mut().unwrap() = (1u64 << tail) - 1;
        }
        bits[0] &= !1;

        let root = super::isqrt(limit) as usize;
        let base = small_odd_primes(root);
        let mut lo = 0usize;
        while lo < n_odd {
            let hi = (lo + SEGMENT_BITS).min(n_odd);
            let seg_last = 2 * (hi - 1) + 1;
            for &p in &base {
                if p * p > seg_last {
                    break;
                }
                let seg_first = 2 * lo + 1;
                let mut m = (p * p).max(seg_first.div_ceil(p) * p);
                if m % 2 == 0 {
                    m += p;
                }
                let mut idx = (m - 1) / 2;
                while idx < hi {
                    bits[idx / 64] &= !(1u64 << (idx % 64));
                    idx += p;
                }
            }
            lo = hi;
        }

        let mut primes = Vec::with_capacity(prime_count_estimate(limit));
        primes.push(2u32);
        for (w, &word) in bits.iter().enumerate() {
            let mut word = word;
            while word != 0 {
                let b = word.trailing_zeros() as usize;
                primes.push((2 * (w * 64 + b) + 1) as u32);
                word &= word - 1;
            }
        }
        Ok(Self { limit, odd_bits: bits, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Primality of `n`; panics if `n` exceeds the sieve limit.
    pub fn is_prime(&self, n: u64) -> bool {
        assert!(n <= self.limit, "{n} is beyond the sieve limit {}", self.limit);
        if n % 2 == 0 {
            return n == 2;
        }
        let i = (n / 2) as usize;
        self.odd_bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Primes `<= bound`, as a prefix of [`Self::primes`].
    pub fn primes_up_to(&self, bound: u64) -> &[u32] {
        let end = self.primes.partition_point(|&p| p as u64 <= bound);
        &self.primes[..end]
    }
}

fn small_odd_primes(bound: usize) -> Vec<usize> {
    let mut composite = vec![false; bound + 1];
    let mut out = Vec::new();
    for i in 3..=bound {
        if i % 2 == 1 && !composite[i] {
            out.push(i);
            let mut j = i * i;
            while j <= bound {
                composite[j] = true;
                j += 2 * i;
            }
        }
    }
    out
}

fn prime_count_estimate(limit: u64) -> usize {
    let x = limit as f64;
    if x < 17.0 {
        8
    } else {
        (1.26 * x / x.ln()) as usize
    }
}
