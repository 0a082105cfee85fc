//! Prime-pair divisor sums.
//!
//! Pairs are ordered and include `p = q` and the prime 2. With
//! `n = p^2 + q^2 + 1`, every divisor count splits exactly as
//! `tau(n) = 2 #{d | n : d^2 <= n} - [n square]`, so
//!
//! ```text
//!     S(N) = M1(Z) + M2(Z) - Q
//! ```
//!
//! where `M1` counts (twice) the pairs `(pair, d)` with `d <= Z`, `M2` those
//! with `Z < d <= sqrt(N + 1)`, and `Q` the pairs for which `n` is a perfect
//! square. All three are computed by enumeration.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::arith::{self, factorize, PrimeSieve};
use crate::error::{Error, Result};
use crate::solution_counts::SingularConstant;

/// Smallest `N` with a prime pair (`2^2 + 2^2 = 8`).
pub const MIN_N: u64 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairStats {
    pub n: u64,
    pub pair_count: u64,
    pub sum_tau: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecompositionReport {
    pub n: u64,
    pub z: u64,
    pub m1: u64,
    pub m2: u64,
    pub q: u64,
    pub s: u64,
}

impl DecompositionReport {
    pub fn identity_holds(&self) -> bool {
        self.m1 + self.m2 == self.s + self.q
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MainTermReport {
    pub n: u64,
    pub s: u64,
    /// `(pi/4) C0 N / log N`
    pub main_term: f64,
    pub ratio: f64,
    /// `(log log N)^2 / log N`
    pub error_budget: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairCountCheck {
    pub n: u64,
    pub pair_count: u64,
    /// `pi N / log^2 N`
    pub predicted: f64,
    pub ratio: f64,
    /// `K log log N / log N`
    pub budget: f64,
    pub pass: bool,
}

/// Aggregates over all ordered prime pairs with `p^2 + q^2 <= N`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Tally {
    pairs: u64,
    sum_tau: u64,
    m1: u64,
    m2: u64,
    squares: u64,
}

impl Tally {
    fn merge(self, o: Self) -> Self {
        Self {
            pairs: self.pairs + o.pairs,
            sum_tau: self.sum_tau + o.sum_tau,
            m1: self.m1 + o.m1,
            m2: self.m2 + o.m2,
            squares: self.squares + o.squares,
        }
    }
}

fn check_inputs(n: u64, sieve: &PrimeSieve) -> Result<()> {
    if n < MIN_N {
        return Err(Error::Domain(format!("N must be >= {MIN_N}, got {n}")));
    }
    if n >= i64::MAX as u64 {
        return Err(Error::Domain(format!("N + 1 must fit in 63 bits, got {n}")));
    }
    if sieve.limit() < arith::isqrt(n) {
        return Err(Error::Config(format!(
            "sieve limit {} is below floor(sqrt(N)) = {}",
            sieve.limit(),
            arith::isqrt(n)
        )));
    }
    Ok(())
}

/// Enumerates the pairs, partitioned by the outer prime. With `split = Some(z)`
/// the divisors of every `n` are also classified against `z`.
fn tally(n_max: u64, split: Option<u64>, sieve: &PrimeSieve) -> Result<Tally> {
    let primes = sieve.primes_up_to(arith::isqrt(n_max));
    primes
        .par_iter()
        .map(|&p| {
            let p2 = p as u64 * p as u64;
            let mut t = Tally::default();
            for &q in primes {
                let sum = p2 + q as u64 * q as u64;
                if sum > n_max {
                    break;
                }
                let n = sum + 1;
                let f = factorize(n, sieve)?;
                t.pairs += 1;
                t.sum_tau += f.tau();
                let root = arith::isqrt(n);
                let square = root * root == n;
                t.squares += u64::from(square);
                if let Some(z) = split {
                    for d in f.divisors().into_iter().take_while(|&d| d <= root) {
                        if d <= z {
                            t.m1 += 2;
                        } else {
                            t.m2 += 2;
                        }
                    }
                }
            }
            Ok(t)
        })
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))
}

pub fn pair_stats(n: u64, sieve: &PrimeSieve) -> Result<PairStats> {
    check_inputs(n, sieve)?;
    let t = tally(n, None, sieve)?;
    Ok(PairStats { n, pair_count: t.pairs, sum_tau: t.sum_tau })
}

/// Exact `(M1, M2, Q, S)` at threshold `1 <= Z <= floor(sqrt(N + 1))`.
/// Returns [`Error::Invariant`] if `S = M1 + M2 - Q` fails.
pub fn decompose(n: u64, z: u64, sieve: &PrimeSieve) -> Result<DecompositionReport> {
    check_inputs(n, sieve)?;
    let z_max = arith::isqrt(n + 1);
    if !(1..=z_max).contains(&z) {
        return Err(Error::Domain(format!("Z must lie in [1, {z_max}], got {z}")));
    }
    let t = tally(n, Some(z), sieve)?;
    let report = DecompositionReport { n, z, m1: t.m1, m2: t.m2, q: t.squares, s: t.sum_tau };
    if !report.identity_holds() {
        return Err(Error::Invariant(format!("S != M1 + M2 - Q in {report:?}")));
    }
    Ok(report)
}

/// Number of ordered pairs for which `p^2 + q^2 + 1` is a perfect square.
pub fn square_count(n: u64, sieve: &PrimeSieve) -> Result<u64> {
    check_inputs(n, sieve)?;
    let primes = sieve.primes_up_to(arith::isqrt(n));
    let mut count = 0;
    for &p in primes {
        for &q in primes {
            let sum = p as u64 * p as u64 + q as u64 * q as u64;
            if sum > n {
                break;
            }
            count += u64::from(arith::is_square(sum + 1));
        }
    }
    Ok(count)
}

/// Default split point `floor(sqrt(N) / log N)`, at least 1.
pub fn default_z(n: u64) -> u64 {
    let nf = n as f64;
    ((nf.sqrt() / nf.ln()).floor() as u64).clamp(1, arith::isqrt(n + 1))
}

/// `floor(sqrt(N + 1) (log N)^-A)`, floored at 1.
pub fn z_from_exponent(n: u64, a: f64) -> u64 {
    let nf = n as f64;
    let z = ((nf + 1.0).sqrt() * nf.ln().powf(-a)).floor();
    (z.max(1.0) as u64).min(arith::isqrt(n + 1))
}

pub fn main_term(n: u64, s: u64, c: &SingularConstant) -> Result<MainTermReport> {
    if n < 3 {
        return Err(Error::Domain(format!("main term needs N >= 3, got {n}")));
    }
    let nf = n as f64;
    let log_n = nf.ln();
    let main_term = PI / 4.0 * c.value * nf / log_n;
    Ok(MainTermReport {
        n,
        s,
        main_term,
        ratio: s as f64 / main_term,
        error_budget: log_n.ln().powi(2) / log_n,
    })
}

/// One [`MainTermReport`] per `N`, in input order.
pub fn ratio_table(ns: &[u64], c: &SingularConstant, sieve: &PrimeSieve) -> Result<Vec<MainTermReport>> {
    if ns.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Domain("ratio table expects ascending N".into()));
    }
    ns.iter()
        .map(|&n| main_term(n, pair_stats(n, sieve)?.sum_tau, c))
        .collect()
}

/// Compares the pair count with `pi N / log^2 N` under the budget
/// `K log log N / log N`. Pass `f64::INFINITY` to disable the assertion.
pub fn pair_count_check(n: u64, k: f64, sieve: &PrimeSieve) -> Result<PairCountCheck> {
    if n < 1000 {
        return Err(Error::Domain(format!("pair count check needs N >= 1000, got {n}")));
    }
    let stats = pair_stats(n, sieve)?;
    Ok(pair_count_verdict(n, stats.pair_count, k))
}

pub fn pair_count_verdict(n: u64, pair_count: u64, k: f64) -> PairCountCheck {
    let log_n = (n as f64).ln();
    let predicted = PI * n as f64 / (log_n * log_n);
    let ratio = pair_count as f64 / predicted;
    let budget = k * log_n.ln() / log_n;
    PairCountCheck { n, pair_count, predicted, ratio, budget, pass: (ratio - 1.0).abs() <= budget }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sieve() -> PrimeSieve {
        PrimeSieve::new(1000).unwrap()
    }

    #[test]
    fn small_pair_stats() {
        let s = sieve();
        assert_eq!(pair_stats(8, &s).unwrap(), PairStats { n: 8, pair_count: 1, sum_tau: 3 });
        assert_eq!(pair_stats(13, &s).unwrap(), PairStats { n: 13, pair_count: 3, sum_tau: 11 });
        assert!(matches!(pair_stats(7, &s), Err(Error::Domain(_))));
        let tiny = PrimeSieve::new(10).unwrap();
        assert!(matches!(pair_stats(200, &tiny), Err(Error::Config(_))));
    }

    #[test]
    fn small_decompositions() {
        let s = sieve();
        let r = decompose(8, 1, &s).unwrap();
        assert_eq!((r.m1, r.m2, r.q, r.s), (2, 2, 1, 3));
        let r = decompose(8, 3, &s).unwrap();
        assert_eq!((r.m1, r.m2, r.q, r.s), (4, 0, 1, 3));
        let r = decompose(13, 3, &s).unwrap();
        assert_eq!(r.s, 11);
        assert!(r.identity_holds());
        assert!(matches!(decompose(8, 0, &s), Err(Error::Domain(_))));
        assert!(matches!(decompose(8, 4, &s), Err(Error::Domain(_))));
    }

    #[test]
    fn square_counts() {
        let s = sieve();
        assert_eq!(square_count(8, &s).unwrap(), 1);
        assert_eq!(square_count(13, &s).unwrap(), 1);
        assert_eq!(decompose(10_000, 5, &s).unwrap().q, square_count(10_000, &s).unwrap());
    }

    #[test]
    fn main_term_sanity() {
        let c = SingularConstant { p_limit: 3, value: 1.0, tail_bound: 0.0 };
        let r = main_term(1000, 0, &c).unwrap();
        let s = r.main_term.round() as u64;
        let r2 = main_term(1000, s, &c).unwrap();
        assert!((r2.ratio - 1.0).abs() < 1.0 / r.main_term);
        assert!(r.main_term > 0.0);
        assert!(main_term(2, 1, &c).is_err());
    }

    #[test]
    fn ratio_table_shapes() {
        let s = sieve();
        let c = SingularConstant { p_limit: 3, value: 1.0, tail_bound: 0.0 };
        assert!(ratio_table(&[], &c, &s).unwrap().is_empty());
        let one = ratio_table(&[8], &c, &s).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].s, 3);
        assert!(ratio_table(&[100, 8], &c, &s).is_err());
    }

    #[test]
    fn pair_count_check_degenerate_budget() {
        let s = sieve();
        let r = pair_count_check(10_000, f64::INFINITY, &s).unwrap();
        assert!(r.pass);
        assert!(pair_count_check(999, 5.0, &s).is_err());
    }

    #[test]
    fn z_policies() {
        assert_eq!(default_z(8), 1);
        assert_eq!(default_z(100_000_000), (1e4 / 1e8f64.ln()).floor() as u64);
        assert_eq!(z_from_exponent(100_000_000, 5.0), 1);
        assert_eq!(z_from_exponent(99, 0.0), 10);
    }
}
