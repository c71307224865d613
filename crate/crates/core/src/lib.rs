//! Moments of the weight distribution of a random binary linear code.
//!
//! The code is the kernel `C` of a uniformly random `m x n` parity-check
//! matrix over GF(2), and `X = |L ∩ C|` counts its words of weight `i`.
//! The crate computes `E (X - E X)^k` exactly (as rationals), estimates it by
//! Monte Carlo, and evaluates the finite-`n` exponents that govern its growth.
//!
//! Modules:
//!
//! * [`arith`]: big rationals, binomials, entropy, fixed-point `log2`.
//! * [`krawtchouk`]: exact Krawtchouk tables and their norms.
//! * [`gf2`]: bit vectors, ranks, coloops, kernel weight counts.
//! * [`moments`]: exact central moments, sandwich sums, cover configurations.
//! * [`montecarlo`]: seeded, worker-count independent sampling.
//! * [`exponents`]: `psi_n`, the theorem exponent, `k0`, diagnostics.
//! * [`verify`]: the acceptance checks behind `rlcm verify`.
//!
//! ```
//! use rlc_moments::limits::Limits;
//! use rlc_moments::moments::{central_moment_exact, EnsembleParams, Method};
//!
//! let params = EnsembleParams::new(4, 2, 1).unwrap();
//! let (var, _) = central_moment_exact(&params, 2, Method::Auto, &Limits::default()).unwrap();
//! assert_eq!(var.to_string(), "3/2");
//! ```
//!
//! Runnable programs live in `examples/`: `krawtchouk_norms`, `gf2_coloops`,
//! `moment_formula`, `sandwich_bounds`, `monte_carlo`, `exponent_grid`,
//! `dual_character_sum` and `trend_report`.

pub mod arith;
pub mod error;
pub mod exponents;
pub mod gf2;
pub mod krawtchouk;
pub mod limits;
pub mod moments;
pub mod montecarlo;
pub mod report;
pub mod verify;
