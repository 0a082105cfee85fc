use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::report::Format;

/// Parses a non-negative integer written either plainly (`100000000`) or in
/// scientific notation with an integer mantissa (`1e8`, `25E3`). Fractional
/// mantissas such as `1.5e3` are rejected even when the value is integral.
pub fn parse_int(s: &str) -> Result<u64, String> {
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let exp = s[i + 1..].strip_prefix('+').unwrap_or(&s[i + 1..]);
            (&s[..i], Some(exp))
        }
        None => (s, None),
    };
    if !digits(mantissa) || exponent.is_some_and(|e| !digits(e)) {
        return Err(format!("expected an integer such as 1000 or 1e3, got {s:?}"));
    }
    let overflow = || format!("{s} does not fit in 64 bits");
    let m: u64 = mantissa.parse().map_err(|_| overflow())?;
    let Some(exp) = exponent else { return Ok(m) };
    let e: u32 = exp.parse().map_err(|_| overflow())?;
    10u64.checked_pow(e).and_then(|p| m.checked_mul(p)).ok_or_else(overflow)
}

#[derive(Debug, Parser)]
#[command(name = "tdq", version, about = "Divisor sums over p^2 + q^2 + 1 and the exponential sums behind them")]
pub struct Cli {
    /// Seed for every random draw; recorded in each output.
    #[arg(long, global = true, default_value = "42", value_parser = parse_int)]
    pub seed: u64,

    /// Output format (default depends on the subcommand).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write to this file instead of stdout. CSV output also writes
    /// `PATH.meta.json` with the seed and run configuration.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Prime sieve bound used for factorization (default: floor(sqrt(N + 1))).
    #[arg(long, global = true, value_parser = parse_int)]
    pub sieve_limit: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Truncated Euler product C0 and its tail bound.
    Constant(ConstantArgs),
    /// s(d) for odd d by brute force and by multiplicativity.
    STable(STableArgs),
    /// Exponential-sum checks.
    Expsum {
        #[command(subcommand)]
        action: ExpsumCommand,
    },
    /// Full report for S(N): pair count, decomposition and main-term ratio.
    Sum(SumArgs),
    /// M1, M2, Q at one or more thresholds Z.
    Decompose(DecomposeArgs),
    /// Prime-pair count against pi N / log^2 N.
    Pairs(PairsArgs),
}

#[derive(Debug, Args)]
pub struct ConstantArgs {
    /// Largest prime in the truncated product.
    #[arg(long, default_value = "1e6", value_parser = parse_int)]
    pub p_limit: u64,
}

#[derive(Debug, Args)]
pub struct STableArgs {
    /// Largest d (inclusive).
    #[arg(long = "max", value_parser = parse_int)]
    pub max_d: u64,

    /// Leave the brute-force column empty (required above 1e5).
    #[arg(long)]
    pub skip_brute: bool,
}

#[derive(Debug, Subcommand)]
pub enum ExpsumCommand {
    /// Sample E(e1, e2, h1, h2, d), compare both evaluation routes and
    /// estimate the implied constant of the bound.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "3000", value_parser = parse_int)]
    pub d_max: u64,

    #[arg(long, default_value = "1000", value_parser = parse_int)]
    pub samples: u64,

    /// Only sample odd composite d.
    #[arg(long)]
    pub composite_only: bool,
}

#[derive(Debug, Args)]
pub struct SumArgs {
    #[arg(long, value_parser = parse_int)]
    pub n: u64,

    /// Split point (default: floor(sqrt(N) / log N)).
    #[arg(long, value_parser = parse_int, conflicts_with = "z_exponent")]
    pub z: Option<u64>,

    /// Take Z = floor(sqrt(N + 1) (log N)^-A), floored at 1.
    #[arg(long, value_name = "A")]
    pub z_exponent: Option<f64>,

    #[arg(long, default_value = "1e6", value_parser = parse_int)]
    pub p_limit: u64,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[arg(long, value_parser = parse_int)]
    pub n: u64,

    /// Thresholds to report; repeatable. Default: 1, floor(N^(1/4)),
    /// floor(sqrt(N) / log N) and floor(sqrt(N + 1)).
    #[arg(long, value_parser = parse_int)]
    pub z: Vec<u64>,
}

#[derive(Debug, Args)]
pub struct PairsArgs {
    #[arg(long, value_parser = parse_int)]
    pub n: u64,

    /// Budget constant K in K log log N / log N; `inf` disables the check.
    #[arg(long, default_value_t = 5.0)]
    pub k: f64,
}
