//! Integer and modular-arithmetic kernels.
//!
//! Everything operates on 64-bit integers; modular products go through
//! 128-bit intermediates so no operation here can overflow for moduli below
//! `2^63`.

mod factor;
mod functions;
mod modular;
mod sieve;

pub use factor::{factorize, FactoredInteger};
pub use functions::{is_square, isqrt, r2, tau, tau_via_sqrt};
pub use modular::{
    crt_combine, d_star, gcd, gcd_i64, inv_mod, is_prime_u64, jacobi, mod_sqrt, mul_mod,
    pow_mod, reduce, SignedSquareClass,
};
pub use sieve::{PrimeSieve, MAX_SIEVE_LIMIT};

pub(crate) use modular::{jacobi_unchecked as modular_jacobi, sqrt_unit_mod_prime_power};
