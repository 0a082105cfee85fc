//! Complete exponential sums, `e(x) = exp(2 pi i x)`.
//!
//! Each sum has a literal evaluator and, where one exists, a closed form.
//! Closed forms are stated for odd moduli only.
//!
//! * Gauss: `S(a, b, d) = sum_{n mod d} e((a n^2 + b n)/d)`
//! * Kloosterman: `K(a, b; m) = sum_{(x, m) = 1} e((a x + b x^-1)/m)`
//! * Salie: `T(m, n; d) = sum_{x mod d} (x/d) e((m x^-1 + n x)/d)`
//! * conic sum: `E(e1, e2, h1, h2, d) = sum e((u h1 + v h2)/d)` over
//!   `e1^2 u^2 + e2^2 v^2 = -1 (mod d)`, `(uv, d) = 1`
//!
//! Values compare with absolute tolerance `1e-6 * sqrt(modulus)`
//! ([`tolerance`]).

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::{self, FactoredInteger};
use crate::error::{Error, Result};

pub type ComplexValue = Complex64;

/// Largest modulus [`e_sum_direct`] evaluates.
pub const E_DIRECT_MAX: u64 = 10_000;

/// Largest modulus the literal Gauss/Kloosterman/Salie/unit sums accept.
pub const DIRECT_SUM_MAX: u64 = 100_000_000;

/// Sweep ceiling on the implied constant `C` in `|E| <= C^omega(d) sqrt((h1, h2, d) d)`.
pub const IMPLIED_CONSTANT_CEILING: f64 = 10.0;

/// Upper end of the range the sweeps draw `e1`, `e2` from.
const SWEEP_E_MAX: u64 = 64;

pub fn tolerance(modulus: u64) -> f64 {
    1e-6 * (modulus as f64).sqrt()
}

pub fn approx_eq(a: ComplexValue, b: ComplexValue, modulus: u64) -> bool {
    (a - b).norm() <= tolerance(modulus)
}

/// `e(k/m)` for `k = 0..m`.
struct PhaseTable {
    m: u64,
    table: Vec<Complex64>,
}

impl PhaseTable {
    fn new(m: u64) -> Self {
        let table = (0..m).map(|k| Complex64::cis(TAU * k as f64 / m as f64)).collect();
        Self { m, table }
    }

    #[inline]
    fn get(&self, k: u64) -> Complex64 {
        self.table[(k % self.m) as usize]
    }
}

/// `e(k/m)` without a table.
fn phase(k: u64, m: u64) -> Complex64 {
    Complex64::cis(TAU * (k % m) as f64 / m as f64)
}

fn check_direct_size(m: u64) -> Result<()> {
    if m == 0 {
        return Err(Error::Domain("modulus must be positive".into()));
    }
    if m > DIRECT_SUM_MAX {
        return Err(Error::Size(format!("literal sums are limited to modulus {DIRECT_SUM_MAX}")));
    }
    Ok(())
}

fn require_odd(d: u64, what: &str) -> Result<()> {
    if d % 2 == 0 {
        return Err(Error::Domain(format!("{what} needs an odd modulus, got {d}")));
    }
    Ok(())
}

/// `sqrt(d*)` on the principal branch: `sqrt(d)` for `d = 1 (mod 4)`,
/// `i sqrt(d)` for `d = 3 (mod 4)`.
pub fn sqrt_d_star(d: u64) -> Result<ComplexValue> {
    let star = arith::d_star(d)?;
    let root = (star.modulus() as f64).sqrt();
    Ok(if star.value() > 0 { Complex64::new(root, 0.0) } else { Complex64::new(0.0, root) })
}

pub fn gauss_direct(a: i64, b: i64, d: u64) -> Result<ComplexValue> {
    check_direct_size(d)?;
    let phases = PhaseTable::new(d);
    let (a, b) = (arith::reduce(a, d), arith::reduce(b, d));
    Ok((0..d)
        .map(|n| {
            let k = (arith::mul_mod(arith::mul_mod(a, n, d), n, d) + arith::mul_mod(b, n, d)) % d;
            phases.get(k)
        })
        .sum())
}

/// `S(1, 0, p^alpha)` by the two-step recursion down to `S(1, 0, p) = sqrt(p*)`
/// and `S(1, 0, p^2) = p`.
fn gauss_unit_prime_power(p: u64, alpha: u32) -> Result<ComplexValue> {
    match alpha {
        0 => Ok(Complex64::new(1.0, 0.0)),
        1 => sqrt_d_star(p),
        2 => Ok(Complex64::new(p as f64, 0.0)),
        _ => Ok(gauss_unit_prime_power(p, alpha - 2)? * p as f64),
    }
}

/// Closed-form `S(a, b, d)` for odd `d` with `(a, d) = 1`: split `d` into
/// prime powers `q` with cofactors `c = d/q`, so that
/// `S(a, b, d) = prod S(a c, b, q)`, then complete the square at each `q`:
/// `S(A, b, q) = (A/q) S(1, 0, q) e(-(4A)^-1 b^2 / q)`.
pub fn gauss_closed(a: i64, b: i64, d: u64) -> Result<ComplexValue> {
    require_odd(d, "closed-form Gauss sum")?;
    let a_r = arith::reduce(a, d);
    if arith::gcd(a_r, d) != 1 {
        return Err(Error::Domain(format!(
            "closed-form Gauss sum needs (a, d) = 1; reduce ({a}, {d}) by the gcd first"
        )));
    }
    let f = FactoredInteger::new(d)?;
    let mut value = Complex64::new(1.0, 0.0);
    for (p, alpha, q) in f.prime_powers() {
        let big_a = arith::mul_mod(a_r % q, (d / q) % q, q);
        let b_q = arith::reduce(b, q);
        let sign = arith::jacobi(big_a as i64, q)? as f64;
        let inv4a = arith::inv_mod(arith::mul_mod(4, big_a, q), q).expect("4A is a unit");
        let shift = arith::mul_mod(inv4a, arith::mul_mod(b_q, b_q, q), q);
        value *= gauss_unit_prime_power(p, alpha)? * sign * phase((q - shift) % q, q);
    }
    Ok(value)
}

pub fn kloosterman(a: i64, b: i64, m: u64) -> Result<ComplexValue> {
    check_direct_size(m)?;
    let phases = PhaseTable::new(m);
    let (a, b) = (arith::reduce(a, m), arith::reduce(b, m));
    let value: Complex64 = (0..m)
        .filter_map(|x| arith::inv_mod(x, m).map(|xi| (x, xi)))
        .map(|(x, xi)| phases.get((arith::mul_mod(a, x, m) + arith::mul_mod(b, xi, m)) % m))
        .sum();
    debug_assert!(value.im.abs() <= tolerance(m), "K({a},{b};{m}) has im {}", value.im);
    Ok(value)
}

/// Outcome of checking `|K(a, b; m)| <= tau(m) sqrt((a, b, m)) sqrt(m)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KloostermanBound {
    pub value: ComplexValue,
    pub magnitude: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Absolute slack added to the Weil bound before comparing.
pub const KLOOSTERMAN_SLACK: f64 = 1e-6;

pub fn kloosterman_bound_check(a: i64, b: i64, m: u64) -> Result<KloostermanBound> {
    let value = kloosterman(a, b, m)?;
    let g = arith::gcd(arith::gcd_i64(a, b), m);
    let tau = FactoredInteger::new(m)?.tau() as f64;
    let bound = tau * (g as f64).sqrt() * (m as f64).sqrt();
    let magnitude = value.norm();
    Ok(KloostermanBound { value, magnitude, bound, pass: magnitude <= bound + KLOOSTERMAN_SLACK })
}

pub fn salie_direct(m: i64, n: i64, d: u64) -> Result<ComplexValue> {
    require_odd(d, "Salie sum")?;
    check_direct_size(d)?;
    let phases = PhaseTable::new(d);
    let (m, n) = (arith::reduce(m, d), arith::reduce(n, d));
    let mut acc = Complex64::new(0.0, 0.0);
    for x in 0..d {
        let Some(xi) = arith::inv_mod(x, d) else { continue };
        let chi = arith::modular_jacobi(x, d);
        let k = (arith::mul_mod(m, xi, d) + arith::mul_mod(n, x, d)) % d;
        acc += phases.get(k) * chi as f64;
    }
    Ok(acc)
}

/// Closed form for `(d, 2mn) = 1`:
/// `T(m, n; d) = sqrt(d*) (n/d) sum_{rs = d, (r, s) = 1} e(2a(r'/s - s'/r))`
/// with `a^2 = mn (mod d)`, `r r' = 1 (mod s)`, `s s' = 1 (mod r)`; zero
/// when `mn` is a non-residue at some prime of `d`.
///
/// The factorization sum is evaluated for both roots `a` and `-a`; a
/// disagreement is reported as [`Error::Invariant`].
pub fn salie_closed(m: i64, n: i64, d: u64) -> Result<ComplexValue> {
    require_odd(d, "Salie closed form")?;
    let mn = (m as i128 * n as i128).rem_euclid(d as i128) as u64;
    if arith::gcd(mn, d) != 1 {
        return Err(Error::Domain(format!("Salie closed form needs (d, 2mn) = 1, got m={m} n={n} d={d}")));
    }
    if d == 1 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let f = FactoredInteger::new(d)?;
    let mut local_roots = Vec::with_capacity(f.factors().len());
    for (l, k, q) in f.prime_powers() {
        let roots = arith::mod_sqrt((mn % q) as i64, l, k)?;
        let Some(&root) = roots.first() else {
            return Ok(Complex64::new(0.0, 0.0));
        };
        local_roots.push((root, q));
    }
    let (root, _) = arith::crt_combine(&local_roots)?;
    let moduli: Vec<u64> = local_roots.iter().map(|&(_, q)| q).collect();

    let factor_sum = |a: u64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for mask in 0..1u32 << moduli.len() {
            let r: u64 = moduli
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &q)| q)
                .product();
            let s = d / r;
            let r_bar = arith::inv_mod(r % s, s).expect("coprime split");
            let s_bar = arith::inv_mod(s % r, r).expect("coprime split");
            let x = (arith::mul_mod(r, r_bar, d) + d - arith::mul_mod(s, s_bar, d)) % d;
            let x = arith::mul_mod(a, x, d);
            acc += phase(arith::mul_mod(2, x, d), d);
        }
        acc
    };
    let sum = factor_sum(root);
    let mirrored = factor_sum(d - root);
    if !approx_eq(sum, mirrored, d) {
        return Err(Error::Invariant(format!(
            "Salie factorization sum depends on the root choice at m={m} n={n} d={d}"
        )));
    }
    let chi_n = arith::jacobi(n, d)? as f64;
    Ok(sqrt_d_star(d)? * chi_n * sum)
}

/// `|T(m, n; d)| <= sqrt(d) 2^omega(d)` plus tolerance.
pub fn salie_bound_holds(value: ComplexValue, d: u64) -> Result<bool> {
    let omega = FactoredInteger::new(d)?.omega();
    let bound = (d as f64).sqrt() * 2f64.powi(omega as i32);
    Ok(value.norm() <= bound + tolerance(d))
}

/// Sum of `e(a / l^k)` over units `a mod l^k`; exactly `-1` for `k = 1`
/// and `0` for `k >= 2`.
pub fn unit_sum(l: u64, k: u32) -> Result<i64> {
    if !arith::is_prime_u64(l) || k == 0 {
        return Err(Error::Domain(format!("unit_sum needs a prime and k >= 1, got {l}^{k}")));
    }
    let q = l
        .checked_pow(k)
        .ok_or_else(|| Error::Size(format!("{l}^{k} overflows")))?;
    check_direct_size(q)?;
    let total: Complex64 = (1..q).filter(|a| a % l != 0).map(|a| phase(a, q)).sum();
    let rounded = total.re.round();
    if (total - Complex64::new(rounded, 0.0)).norm() > tolerance(q) || !(-1.0..=0.0).contains(&rounded) {
        return Err(Error::Invariant(format!("unit sum mod {q} evaluated to {total}")));
    }
    Ok(rounded as i64)
}

/// Parameters of `E(e1, e2, h1, h2, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExpSumParams {
    pub e1: u64,
    pub e2: u64,
    pub h1: i64,
    pub h2: i64,
    pub d: u64,
}

impl ExpSumParams {
    pub fn new(e1: u64, e2: u64, h1: i64, h2: i64, d: u64) -> Self {
        Self { e1, e2, h1, h2, d }
    }

    fn validate(&self) -> Result<FactoredInteger> {
        if self.e1 == 0 || self.e2 == 0 {
            return Err(Error::Domain("e1 and e2 must be positive".into()));
        }
        if self.d == 0 {
            return Err(Error::Domain("d must be positive".into()));
        }
        require_odd(self.d, "E")?;
        if arith::gcd(self.e1 % self.d, self.d) != 1 || arith::gcd(self.e2 % self.d, self.d) != 1 {
            return Err(Error::Domain(format!("E needs (e1 e2, d) = 1, got {self:?}")));
        }
        FactoredInteger::new(self.d)
    }

    fn sort_key(&self) -> (u64, u64, u64, i64, i64) {
        (self.d, self.e1, self.e2, self.h1, self.h2)
    }
}

/// Literal evaluation of `E`. For each unit `u` the admissible `v` are the
/// unit square roots of `(-1 - e1^2 u^2) / e2^2`, found prime power by
/// prime power and glued with CRT.
pub fn e_sum_direct(p: &ExpSumParams) -> Result<ComplexValue> {
    let f = p.validate()?;
    if p.d > E_DIRECT_MAX {
        return Err(Error::Size(format!(
            "e_sum_direct is limited to d <= {E_DIRECT_MAX}, got {}; use e_sum_crt",
            p.d
        )));
    }
    Ok(enumerate_conic(p.e1, p.e2, arith::reduce(p.h1, p.d), arith::reduce(p.h2, p.d), &f))
}

/// `E` as a product of prime-power sums. For `q = l^alpha || d` with
/// cofactor `c = d/q`, the local factor is `E(e1, e2, h1 c^-1, h2 c^-1, q)`
/// with `c^-1` taken modulo `q`.
pub fn e_sum_crt(p: &ExpSumParams) -> Result<ComplexValue> {
    let f = p.validate()?;
    let mut value = Complex64::new(1.0, 0.0);
    for (l, alpha, q) in f.prime_powers() {
        let c_inv = arith::inv_mod((p.d / q) % q, q).expect("coprime cofactor");
        let h1 = arith::mul_mod(arith::reduce(p.h1, q), c_inv, q);
        let h2 = arith::mul_mod(arith::reduce(p.h2, q), c_inv, q);
        let local = FactoredInteger::from_factors(vec![(l, alpha)])?;
        value *= enumerate_conic(p.e1, p.e2, h1, h2, &local);
    }
    Ok(value)
}

fn enumerate_conic(e1: u64, e2: u64, h1: u64, h2: u64, f: &FactoredInteger) -> Complex64 {
    let d = f.n();
    if d == 1 {
        return Complex64::new(1.0, 0.0);
    }
    let phases = PhaseTable::new(d);
    let e1_sq = arith::mul_mod(e1 % d, e1 % d, d);
    let e2_sq_inv = arith::inv_mod(arith::mul_mod(e2 % d, e2 % d, d), d).expect("(e2, d) = 1");
    // CRT basis: v = sum v_i * basis_i (mod d)
    let locals: Vec<(u64, u32, u64, u64)> = f
        .prime_powers()
        .map(|(l, k, q)| {
            let c = d / q;
            let basis = arith::mul_mod(c, arith::inv_mod(c % q, q).expect("coprime"), d);
            (l, k, q, basis)
        })
        .collect();

    let mut acc = Complex64::new(0.0, 0.0);
    let mut vs: Vec<u64> = Vec::with_capacity(1 << locals.len());
    'units: for u in 1..d {
        if arith::gcd(u, d) != 1 {
            continue;
        }
        let u_sq = arith::mul_mod(u, u, d);
        let w = arith::mul_mod((2 * d - 1 - arith::mul_mod(e1_sq, u_sq, d)) % d, e2_sq_inv, d);
        vs.clear();
        vs.push(0);
        for &(l, k, q, basis) in &locals {
            let w_q = w % q;
            if w_q % l == 0 {
                continue 'units;
            }
            let roots = arith::sqrt_unit_mod_prime_power(w_q, l, k, q);
            if roots.is_empty() {
                continue 'units;
            }
            let len = vs.len();
            for &r in &roots[1..] {
                for i in 0..len {
                    let v = (vs[i] + arith::mul_mod(r, basis, d)) % d;
                    vs.push(v);
                }
            }
            let r0 = arith::mul_mod(roots[0], basis, d);
            for v in &mut vs[..len] {
                *v = (*v + r0) % d;
            }
        }
        let uh = arith::mul_mod(u, h1, d);
        for &v in &vs {
            acc += phases.get((uh + arith::mul_mod(v, h2, d)) % d);
        }
    }
    acc
}

/// One sampled evaluation of `E` against `sqrt((h1, h2, d) d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub params: ExpSumParams,
    pub value: ComplexValue,
    pub magnitude: f64,
    pub normalizer: f64,
    pub ratio: f64,
    pub omega_d: u32,
    /// `ratio^(1/omega(d))`, the smallest `C` this sample allows.
    pub implied_constant: f64,
}

impl BoundReport {
    pub fn new(params: ExpSumParams, value: ComplexValue) -> Result<Self> {
        let omega_d = FactoredInteger::new(params.d)?.omega();
        let g = arith::gcd(arith::gcd_i64(params.h1, params.h2), params.d);
        let normalizer = ((g as f64) * params.d as f64).sqrt();
        let magnitude = value.norm();
        let ratio = magnitude / normalizer;
        let implied_constant = if omega_d == 0 { ratio } else { ratio.powf(1.0 / omega_d as f64) };
        Ok(Self { params, value, magnitude, normalizer, ratio, omega_d, implied_constant })
    }
}

/// A sweep sample: both evaluation routes plus the bound report built from
/// the direct value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSample {
    pub report: BoundReport,
    pub crt: ComplexValue,
    /// `|direct - crt| / sqrt(d)`.
    pub deviation: f64,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub d_max: u64,
    pub samples: usize,
    pub seed: u64,
    /// Restrict `d` to odd composites.
    pub composite_only: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSummary {
    pub config: SweepConfig,
    /// Sorted by `(d, e1, e2, h1, h2)`.
    pub samples: Vec<SweepSample>,
    /// Largest implied constant over the sweep (0 for an empty sweep).
    pub c_est: f64,
    pub max_deviation: f64,
}

impl SweepSummary {
    pub fn all_agree(&self) -> bool {
        self.samples.iter().all(|s| s.agrees)
    }

    pub fn within_ceiling(&self) -> bool {
        self.c_est.is_finite() && self.c_est <= IMPLIED_CONSTANT_CEILING
    }

    pub fn passed(&self) -> bool {
        self.all_agree() && self.within_ceiling()
    }
}

/// Draws the parameter tuples for a sweep. Deterministic in the seed.
pub fn sample_params(cfg: &SweepConfig) -> Result<Vec<ExpSumParams>> {
    let min_d = if cfg.composite_only { 9 } else { 3 };
    if cfg.d_max < min_d || cfg.d_max > E_DIRECT_MAX {
        return Err(Error::Config(format!(
            "sweep d_max must lie in [{min_d}, {E_DIRECT_MAX}], got {}",
            cfg.d_max
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let top = (cfg.d_max - 1) / 2;
    let mut out = Vec::with_capacity(cfg.samples);
    while out.len() < cfg.samples {
        let d = 2 * rng.gen_range(1..=top) + 1;
        if cfg.composite_only && arith::is_prime_u64(d) {
            continue;
        }
        let mut draw_e = || loop {
            let e = rng.gen_range(1..=SWEEP_E_MAX);
            if arith::gcd(e, d) == 1 {
                break e;
            }
        };
        let (e1, e2) = (draw_e(), draw_e());
        let (h1, h2) = loop {
            let h1 = rng.gen_range(0..d) as i64;
            let h2 = rng.gen_range(0..d) as i64;
            if (h1, h2) != (0, 0) {
                break (h1, h2);
            }
        };
        out.push(ExpSumParams { e1, e2, h1, h2, d });
    }
    Ok(out)
}

/// Evaluates `E` both ways on every sampled tuple and records the bound
/// ratios.
pub fn e_sweep(cfg: &SweepConfig) -> Result<SweepSummary> {
    let mut params = sample_params(cfg)?;
    params.sort_by_key(ExpSumParams::sort_key);
    let samples = params
        .par_iter()
        .map(|p| {
            let direct = e_sum_direct(p)?;
            let crt = e_sum_crt(p)?;
            let deviation = (direct - crt).norm() / (p.d as f64).sqrt();
            Ok(SweepSample {
                report: BoundReport::new(*p, direct)?,
                crt,
                deviation,
                agrees: approx_eq(direct, crt, p.d),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let c_est = samples.iter().map(|s| s.report.implied_constant).fold(0.0, f64::max);
    let max_deviation = samples.iter().map(|s| s.deviation).fold(0.0, f64::max);
    Ok(SweepSummary { config: cfg.clone(), samples, c_est, max_deviation })
}

/// Bound sweep over odd `d <= d_max` with `(h1, h2) != (0, 0)`.
pub fn e_bound_sweep(d_max: u64, samples: usize, seed: u64) -> Result<SweepSummary> {
    e_sweep(&SweepConfig { d_max, samples, seed, composite_only: false })
}
