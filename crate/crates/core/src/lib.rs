//! Two-sample closeness testing for discrete distributions.
//!
//! Given `2n` samples from each of two unknown distributions `p`, `q` over
//! `[k]`, the tester flattens the domain to `[4k]`, counts four batches
//! `X, X'` (from `p`) and `Y, Y'` (from `q`), and thresholds
//!
//! ```text
//! Z = (1/n) Σ_i ( |X_i - Y_i| + |X'_i - Y'_i| - |X_i - X'_i| - |Y_i - Y'_i| ).
//! ```
//!
//! `E[Z] = 0` when `p = q`, and `E[Z]` is bounded away from zero when
//! `TV(p, q) > ε`. The [`gap`] module computes that expectation gap exactly,
//! through characteristic-function integrals, and through closed-form
//! lower bounds, so the pieces can be checked against each other.

pub mod cli;
pub mod distributions;
pub mod error;
pub mod gap;
pub mod harness;
pub mod rng;
pub mod statistic;
pub mod tester;

pub use error::{Error, Result};
