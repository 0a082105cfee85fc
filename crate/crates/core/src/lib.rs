//! Computational toolkit for the binary quadratic Titchmarsh divisor problem
//!
//! ```text
//!     S(N) = sum over primes p, q with p^2 + q^2 <= N of tau(p^2 + q^2 + 1)
//! ```
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`] - sieving, factorization, Jacobi symbols, modular square roots,
//!   CRT and the classical arithmetic functions.
//! * [`solution_counts`] - the multiplicative count `s(d)` of solutions to
//!   `u^2 + v^2 = -1 (mod d)` with `(uv, d) = 1`, its partial sums and the
//!   singular-series constant.
//! * [`exp_sums`] - quadratic Gauss, Kloosterman and Salie sums, and the
//!   twisted conic sum `E(e1, e2, h1, h2, d)` with its CRT factorization.
//! * [`titchmarsh`] - prime-pair enumeration, the exact small/large divisor
//!   decomposition and the main-term comparison.

pub mod arith;
pub mod error;
pub mod exp_sums;
pub mod solution_counts;
pub mod titchmarsh;

pub use error::{Error, Result};
