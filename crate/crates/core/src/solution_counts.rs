//! The solution count
//!
//! ```text
//!     s(d) = #{ (u, v) in [1, d]^2 : u^2 + v^2 = -1 (mod d), (uv, d) = 1 }
//! ```
//!
//! together with its weighted partial sums `sum_{d <= Z, d odd} s(d)/phi(d)^2`
//! and the Euler product
//!
//! ```text
//!     C0 = prod_{p > 2} (1 - (1 + 3p(-1/p)) / ((p - 1)^2 p)).
//! ```
//!
//! `s` is multiplicative, with `s(l) = l - 2 - 3(-1/l)` and
//! `s(l^{k+1}) = l^k s(l)` at odd primes. The multiplicative route
//! ([`s_mult`]) is only used for odd `d`; even `d` is handled by
//! [`s_brute`] alone.

use std::f64::consts::PI;

use crate::arith::{self, FactoredInteger, PrimeSieve};
use crate::error::{Error, Result};

/// Largest modulus accepted by [`s_brute`].
pub const S_BRUTE_MAX: u64 = 100_000;

/// Largest `Z` accepted by [`partial_sum_s_phi2`] (the smallest-prime-factor
/// table costs 4 bytes per integer).
pub const PARTIAL_SUM_MAX: u64 = 200_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMethod {
    Brute,
    Multiplicative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolutionCountRecord {
    pub d: u64,
    pub s_value: u64,
    pub method: CountMethod,
}

impl SolutionCountRecord {
    pub fn brute(d: u64) -> Result<Self> {
        Ok(Self { d, s_value: s_brute(d)?, method: CountMethod::Brute })
    }

    pub fn multiplicative(f: &FactoredInteger) -> Result<Self> {
        Ok(Self { d: f.n(), s_value: s_mult(f)?, method: CountMethod::Multiplicative })
    }

    /// `d * prod_{p | d} (1 + 1/p) = prod p^{k-1} (p + 1)`, the upper bound
    /// every `s(d)` obeys. Attained when every prime of `d` is `3 mod 4`.
    pub fn upper_bound(f: &FactoredInteger) -> u64 {
        f.factors().iter().map(|&(p, k)| p.pow(k - 1) * (p + 1)).product()
    }
}

/// Counts the pairs directly. Each unit `v` is binned by `v^2 mod d`; then
/// every unit `u` looks up how many `v` satisfy `v^2 = -1 - u^2`. Linear in `d`.
pub fn s_brute(d: u64) -> Result<u64> {
    if d == 0 {
        return Err(Error::Domain("s(d) needs d >= 1".into()));
    }
    if d > S_BRUTE_MAX {
        return Err(Error::Size(format!(
            "s_brute is limited to d <= {S_BRUTE_MAX}, got {d}; use s_mult"
        )));
    }
    let m = d as usize;
    let units: Vec<u64> = (1..=d).filter(|&x| arith::gcd(x, d) == 1).collect();
    let mut square_hist = vec![0u32; m];
    for &v in &units {
        square_hist[((v * v) % d) as usize] += 1;
    }
    let total = units
        .iter()
        .map(|&u| {
            let target = (2 * d - 1 - (u * u) % d) % d;
            square_hist[target as usize] as u64
        })
        .sum();
    Ok(total)
}

/// `s(l^k) = l^{k-1} (l - 2 - 3(-1/l))` at one odd prime power.
pub fn s_prime_power(l: u64, k: u32) -> u64 {
    debug_assert!(l % 2 == 1 && k >= 1);
    let base = if l % 4 == 1 { l - 5 } else { l + 1 };
    base * l.pow(k - 1)
}

/// `s(d)` from the factorization of an odd `d`.
pub fn s_mult(f: &FactoredInteger) -> Result<u64> {
    if !f.is_odd() {
        return Err(Error::Domain(format!(
            "the multiplicative formula covers odd d only, got {}",
            f.n()
        )));
    }
    Ok(f.factors().iter().map(|&(l, k)| s_prime_power(l, k)).product())
}

/// `#{v mod d : u^2 + v^2 + 1 = 0 (mod d)}` for odd `d`, computed as the
/// product over `l^k || d` of the local square-root counts.
///
/// This can exceed `tau(d)` once some `l^2 | d` divides `u^2 + 1`: for
/// `u = 7, d = 25` every multiple of 5 is a root. The `tau(d)` bound holds
/// for the unit roots counted by [`v_count_units`].
pub fn v_count(u: i64, d: u64) -> Result<u64> {
    local_root_counts(u, d, false).map(|(count, _)| count)
}

/// `#{v mod d : u^2 + v^2 + 1 = 0 (mod d), (v, d) = 1}`; at most two roots
/// per prime power, hence at most `2^omega(d) <= tau(d)`. Exceeding `tau(d)`
/// is reported as [`Error::Invariant`].
pub fn v_count_units(u: i64, d: u64) -> Result<u64> {
    let (count, tau) = local_root_counts(u, d, true)?;
    if count > tau {
        return Err(Error::Invariant(format!("{count} unit roots exceed tau({d}) = {tau}")));
    }
    Ok(count)
}

fn local_root_counts(u: i64, d: u64, units_only: bool) -> Result<(u64, u64)> {
    if d % 2 == 0 {
        return Err(Error::Domain(format!("v_count needs an odd modulus, got {d}")));
    }
    let f = FactoredInteger::new(d)?;
    let mut count = 1u64;
    for (l, k, q) in f.prime_powers() {
        let u = arith::reduce(u, q);
        let target = -1 - arith::mul_mod(u, u, q) as i64;
        let roots = arith::mod_sqrt(target, l, k)?;
        count *= if units_only {
            roots.iter().filter(|&&v| v % l != 0).count() as u64
        } else {
            roots.len() as u64
        };
        if count == 0 {
            break;
        }
    }
    Ok((count, f.tau()))
}

/// Compensated (Neumaier) summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// `sum_{d <= Z, d odd} s(d) / phi(d)^2`.
///
/// Only odd `d` contribute: `p^2 + q^2 + 1` is odd unless one of the primes
/// is 2, so even moduli are dropped before the asymptotic is taken. Terms
/// are accumulated in ascending `d`, giving a bit-reproducible result.
pub fn partial_sum_s_phi2(z: f64) -> Result<f64> {
    Ok(*partial_sums_s_phi2(&[z])?.first().expect("one checkpoint"))
}

/// [`partial_sum_s_phi2`] at several cut-offs in one pass. The output is
/// aligned with `checkpoints`, which need not be sorted.
pub fn partial_sums_s_phi2(checkpoints: &[f64]) -> Result<Vec<f64>> {
    let mut cuts = Vec::with_capacity(checkpoints.len());
    for &z in checkpoints {
        if !(z >= 1.0) {
            return Err(Error::Domain(format!("partial sum needs Z >= 1, got {z}")));
        }
        let z = z.floor();
        if z > PARTIAL_SUM_MAX as f64 {
            return Err(Error::Size(format!("Z is limited to {PARTIAL_SUM_MAX}, got {z}")));
        }
        cuts.push(z as u64);
    }
    let top = cuts.iter().copied().max().unwrap_or(1);
    let spf = smallest_odd_prime_factor(top);

    let mut order: Vec<usize> = (0..cuts.len()).collect();
    order.sort_by_key(|&i| cuts[i]);
    let mut out = vec![0.0; cuts.len()];
    let mut acc = CompensatedSum::default();
    let mut next = 0;
    let mut d = 1u64;
    while next < order.len() {
        while d <= cuts[order[next]] {
            let (s, phi) = s_and_phi(d, &spf);
            let phi = phi as f64;
            acc.add(s as f64 / (phi * phi));
            d += 2;
        }
        out[order[next]] = acc.value();
        next += 1;
    }
    Ok(out)
}

/// Smallest prime factor of every odd `n <= limit`, indexed by `n / 2`.
fn smallest_odd_prime_factor(limit: u64) -> Vec<u32> {
    let n_odd = (limit as usize + 1) / 2;
    let mut spf = vec![0u32; n_odd];
    for i in 1..n_odd {
        if spf[i] != 0 {
            continue;
        }
        let p = 2 * i + 1;
        spf[i] = p as u32;
        let mut j = p * p;
        while j <= limit as usize {
            if spf[j / 2] == 0 {
                spf[j / 2] = p as u32;
            }
            j += 2 * p;
        }
    }
    spf
}

fn s_and_phi(mut d: u64, spf: &[u32]) -> (u64, u64) {
    let (mut s, mut phi) = (1u64, 1u64);
    while d > 1 {
        let p = spf[(d / 2) as usize] as u64;
        let mut k = 0;
        while d % p == 0 {
            d /= p;
            k += 1;
        }
        s *= s_prime_power(p, k);
        phi *= (p - 1) * p.pow(k - 1);
    }
    (s, phi)
}

/// Truncation of `C0 = prod_{p > 2} (1 - theta_p)`, with
/// `theta_p = (1 + 3p(-1/p)) / ((p - 1)^2 p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularConstant {
    pub p_limit: u64,
    pub value: f64,
    /// Bound on `|log(prod_{p > p_limit} (1 - theta_p))|`.
    pub tail_bound: f64,
}

/// Euler factor `1 - theta_p` at an odd prime.
///
/// Numerator and denominator are formed exactly in integers, so small
/// factors such as `5/3` at `p = 3` are correctly rounded.
pub fn euler_factor(p: u64) -> f64 {
    let p = p as i128;
    let chi = if p % 4 == 1 { 1 } else { -1 };
    let den = (p - 1) * (p - 1) * p;
    (den - 1 - 3 * p * chi) as f64 / den as f64
}

/// Multiplies the Euler factors over odd primes `<= p_limit` in ascending
/// order. Every factor lies in `[0.8, 1.7]`, so the accumulated relative
/// rounding error stays below `pi(p_limit)` ulps, far inside the tail bound.
///
/// The tail bound is `10 / p_limit`: for `p >= 5`,
/// `|theta_p| <= (3p + 1)/(p (p - 1)^2) <= 5/p^2 <= 1/5`, so
/// `|log(1 - theta_p)| <= 2|theta_p| <= 10/p^2`, and
/// `sum_{n > P} 10/n^2 < 10/P`.
pub fn singular_constant(p_limit: u64) -> Result<SingularConstant> {
    if p_limit < 3 {
        return Err(Error::Domain(format!("p_limit must be >= 3, got {p_limit}")));
    }
    let sieve = PrimeSieve::new(p_limit)?;
    let value = sieve.primes()[1..].iter().map(|&p| euler_factor(p as u64)).product();
    Ok(SingularConstant {
        p_limit,
        value,
        tail_bound: 10.0 / p_limit as f64,
    })
}

/// The main-term coefficient `(pi/4) C0`.
pub fn leading_constant(c: &SingularConstant) -> f64 {
    PI / 4.0 * c.value
}
