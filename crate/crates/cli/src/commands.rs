use rayon::prelude::*;

use tdq_core::arith::{self, factorize, PrimeSieve};
use tdq_core::exp_sums::{self, SweepConfig};
use tdq_core::solution_counts::{self, S_BRUTE_MAX};
use tdq_core::titchmarsh;

use crate::args::{ConstantArgs, DecomposeArgs, PairsArgs, STableArgs, SumArgs, VerifyArgs};
use crate::error::CliError;
use crate::report::{Cell, Document, Format};

/// A finished report plus, when a checked property failed, the reason. The
/// report is still emitted so the failing values can be inspected.
pub struct Outcome {
    pub doc: Document,
    pub default_format: Format,
    pub failure: Option<String>,
}

impl Outcome {
    fn ok(doc: Document, default_format: Format) -> Self {
        Self { doc, default_format, failure: None }
    }
}

pub struct Context {
    pub seed: u64,
    pub sieve_limit: Option<u64>,
}

impl Context {
    fn meta(&self, command: &str) -> Vec<(&'static str, Cell)> {
        vec![("command", Cell::S(command.into())), ("seed", Cell::U(self.seed))]
    }

    /// Sieve covering `floor(sqrt(N + 1))` unless the user chose a bound.
    fn sieve(&self, n: u64) -> Result<PrimeSieve, CliError> {
        let limit = self.sieve_limit.unwrap_or_else(|| arith::isqrt(n.saturating_add(1)).max(2));
        Ok(PrimeSieve::new(limit)?)
    }
}

fn require_min_n(n: u64) -> Result<(), CliError> {
    if n < titchmarsh::MIN_N {
        return Err(CliError::Usage(format!("N = {n} is below the minimum {}", titchmarsh::MIN_N)));
    }
    Ok(())
}

pub fn constant(ctx: &Context, args: &ConstantArgs) -> Result<Outcome, CliError> {
    let c = solution_counts::singular_constant(args.p_limit)?;
    let doc = Document::single(
        ctx.meta("constant"),
        vec![
            ("p_limit", Cell::U(c.p_limit)),
            ("value", Cell::F(c.value)),
            ("tail_bound", Cell::F(c.tail_bound)),
            ("leading_constant", Cell::F(solution_counts::leading_constant(&c))),
        ],
    );
    Ok(Outcome::ok(doc, Format::Json))
}

pub fn s_table(ctx: &Context, args: &STableArgs) -> Result<Outcome, CliError> {
    if args.max_d == 0 {
        return Err(CliError::Usage("--max must be at least 1".into()));
    }
    if !args.skip_brute && args.max_d > S_BRUTE_MAX {
        return Err(CliError::Usage(format!(
            "brute-force column is limited to d <= {S_BRUTE_MAX}; pass --skip-brute"
        )));
    }
    let sieve = ctx.sieve(args.max_d)?;
    let ds: Vec<u64> = (1..=args.max_d).step_by(2).collect();
    let rows = ds
        .par_iter()
        .map(|&d| -> Result<Vec<Cell>, CliError> {
            let f = factorize(d, &sieve)?;
            let s = solution_counts::s_mult(&f)?;
            let brute = if args.skip_brute {
                Cell::Empty
            } else {
                let b = solution_counts::s_brute(d)?;
                if b != s {
                    return Err(CliError::Invariant(format!("s({d}): brute {b} != multiplicative {s}")));
                }
                Cell::U(b)
            };
            let phi = f.phi();
            Ok(vec![Cell::U(d), brute, Cell::U(s), Cell::U(phi), Cell::F(s as f64 / (phi as f64 * phi as f64))])
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut meta = ctx.meta("s-table");
    meta.push(("max_d", Cell::U(args.max_d)));
    meta.push(("skip_brute", Cell::B(args.skip_brute)));
    let doc = Document::rows(meta, vec!["d", "s_brute", "s_mult", "phi", "ratio_term"], rows);
    Ok(Outcome::ok(doc, Format::Csv))
}

pub fn expsum_verify(ctx: &Context, args: &VerifyArgs) -> Result<Outcome, CliError> {
    let cfg = SweepConfig {
        d_max: args.d_max,
        samples: args.samples as usize,
        seed: ctx.seed,
        composite_only: args.composite_only,
    };
    let summary = exp_sums::e_sweep(&cfg)?;
    let rows = summary
        .samples
        .iter()
        .map(|s| {
            let r = &s.report;
            let p = r.params;
            vec![
                Cell::U(p.e1),
                Cell::U(p.e2),
                Cell::I(p.h1),
                Cell::I(p.h2),
                Cell::U(p.d),
                Cell::U(r.omega_d as u64),
                Cell::F(r.value.re),
                Cell::F(r.value.im),
                Cell::F(r.magnitude),
                Cell::F(r.normalizer),
                Cell::F(r.ratio),
                Cell::F(r.implied_constant),
            ]
        })
        .collect();
    let pass = summary.passed();
    let mut meta = ctx.meta("expsum verify");
    meta.extend([
        ("d_max", Cell::U(args.d_max)),
        ("samples", Cell::U(args.samples)),
        ("composite_only", Cell::B(args.composite_only)),
        ("c_est", Cell::F(summary.c_est)),
        ("c_ceiling", Cell::F(exp_sums::IMPLIED_CONSTANT_CEILING)),
        ("max_deviation", Cell::F(summary.max_deviation)),
        ("pass", Cell::B(pass)),
    ]);
    eprintln!(
        "C_est = {} over {} samples, max |direct - crt|/sqrt(d) = {:.3e}: {}",
        crate::report::format_float(summary.c_est),
        summary.samples.len(),
        summary.max_deviation,
        if pass { "pass" } else { "FAIL" }
    );
    let failure = (!pass).then(|| {
        if summary.all_agree() {
            format!("implied constant {} exceeds {}", summary.c_est, exp_sums::IMPLIED_CONSTANT_CEILING)
        } else {
            format!("direct and CRT evaluations disagree (max deviation {:.3e})", summary.max_deviation)
        }
    });
    let columns = vec!["e1", "e2", "h1", "h2", "d", "omega", "re", "im", "magnitude", "normalizer", "ratio", "implied_C"];
    Ok(Outcome { doc: Document::rows(meta, columns, rows), default_format: Format::Csv, failure })
}

pub fn sum(ctx: &Context, args: &SumArgs) -> Result<Outcome, CliError> {
    require_min_n(args.n)?;
    let n = args.n;
    let z = match (args.z, args.z_exponent) {
        (Some(z), _) => z,
        (None, Some(a)) => titchmarsh::z_from_exponent(n, a),
        (None, None) => titchmarsh::default_z(n),
    };
    let sieve = ctx.sieve(n)?;
    let c = solution_counts::singular_constant(args.p_limit)?;
    let stats = titchmarsh::pair_stats(n, &sieve)?;
    let dec = titchmarsh::decompose(n, z, &sieve)?;
    if dec.s != stats.sum_tau {
        return Err(CliError::Invariant(format!("S(N) = {} from the decomposition, {} from the pair sum", dec.s, stats.sum_tau)));
    }
    let mt = titchmarsh::main_term(n, dec.s, &c)?;
    let doc = Document::single(
        ctx.meta("sum"),
        vec![
            ("n", Cell::U(n)),
            ("pair_count", Cell::U(stats.pair_count)),
            ("sum_tau", Cell::U(stats.sum_tau)),
            ("z", Cell::U(z)),
            ("m1", Cell::U(dec.m1)),
            ("m2", Cell::U(dec.m2)),
            ("q", Cell::U(dec.q)),
            ("main_term", Cell::F(mt.main_term)),
            ("ratio", Cell::F(mt.ratio)),
            ("error_budget", Cell::F(mt.error_budget)),
            ("constant_p_limit", Cell::U(c.p_limit)),
            ("constant_value", Cell::F(c.value)),
        ],
    );
    Ok(Outcome::ok(doc, Format::Json))
}

pub fn decompose(ctx: &Context, args: &DecomposeArgs) -> Result<Outcome, CliError> {
    require_min_n(args.n)?;
    let n = args.n;
    let mut zs = if args.z.is_empty() {
        vec![1, arith::isqrt(arith::isqrt(n)), titchmarsh::default_z(n), arith::isqrt(n + 1)]
    } else {
        args.z.clone()
    };
    zs.sort_unstable();
    zs.dedup();
    let sieve = ctx.sieve(n)?;
    let rows = zs
        .iter()
        .map(|&z| {
            let r = titchmarsh::decompose(n, z, &sieve)?;
            Ok(vec![Cell::U(r.n), Cell::U(r.z), Cell::U(r.m1), Cell::U(r.m2), Cell::U(r.q), Cell::U(r.s)])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let doc = Document::rows(ctx.meta("decompose"), vec!["n", "z", "m1", "m2", "q", "s"], rows);
    Ok(Outcome::ok(doc, Format::Csv))
}

pub fn pairs(ctx: &Context, args: &PairsArgs) -> Result<Outcome, CliError> {
    require_min_n(args.n)?;
    if args.k.is_nan() || args.k < 0.0 {
        return Err(CliError::Usage(format!("K must be a non-negative number, got {}", args.k)));
    }
    let sieve = ctx.sieve(args.n)?;
    let check = titchmarsh::pair_count_check(args.n, args.k, &sieve)?;
    let mut meta = ctx.meta("pairs");
    meta.push(("k", Cell::F(args.k)));
    let doc = Document::single(
        meta,
        vec![
            ("n", Cell::U(check.n)),
            ("pair_count", Cell::U(check.pair_count)),
            ("predicted", Cell::F(check.predicted)),
            ("ratio", Cell::F(check.ratio)),
            ("budget", Cell::F(check.budget)),
            ("pass", Cell::B(check.pass)),
        ],
    );
    let failure = (!check.pass).then(|| {
        format!("|ratio - 1| = {:.6} exceeds the budget {:.6}", (check.ratio - 1.0).abs(), check.budget)
    });
    Ok(Outcome { doc, default_format: Format::Json, failure })
}
