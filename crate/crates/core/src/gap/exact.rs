//! Exact expectation gaps by enumeration over the joint PMF grid.
//!
//! For independent `X, X' ~ a` and `Y, Y' ~ b` on the nonnegative integers,
//!
//! ```text
//! Δ = E|X-Y| + E|X'-Y'| - E|X-X'| - E|Y-Y'|
//!   = Σ_{i,j} |i-j| (2 a_i b_j - a_i a_j - b_i b_j)
//!   = -Σ_{i,j} |i-j| d_i d_j,          d = a - b.
//! ```
//!
//! The last form never subtracts two large nearly-equal expectations, so
//! it stays accurate when `a ≈ b`.

use super::pmf::{binomial_pmf, poisson_pmf_truncated, CompensatedSum, POISSON_TAIL_MASS};
use crate::error::{Error, Result};

/// `E|A - B|` for independent `A ~ a`, `B ~ b` supported on `0..`.
pub fn expected_abs_difference(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = CompensatedSum::new();
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            acc.add(ai * bj * i.abs_diff(j) as f64);
        }
    }
    acc.value()
}

/// `Δ` for two PMFs given on `0..`; the shorter one is zero-padded.
pub fn gap_from_pmfs(a: &[f64], b: &[f64]) -> f64 {
    let len = a.len().max(b.len());
    let d: Vec<f64> = (0..len)
        .map(|i| a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0))
        .collect();
    let mut acc = CompensatedSum::new();
    for (i, &di) in d.iter().enumerate() {
        if di == 0.0 {
            continue;
        }
        for (j, &dj) in d.iter().enumerate().skip(i + 1) {
            // off-diagonal pairs appear twice; the diagonal has |i-j| = 0
            acc.add(-2.0 * di * dj * (j - i) as f64);
        }
    }
    acc.value()
}

/// Exact `Δ` for `X, X' ~ Bin(n, p)` and `Y, Y' ~ Bin(n, q)`.
pub fn exact_gap_binomial(n: u64, p: f64, q: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("binomial gap needs n >= 1".into()));
    }
    let a = binomial_pmf(n, p)?;
    let b = binomial_pmf(n, q)?;
    Ok(gap_from_pmfs(&a, &b))
}

/// Exact `Δ` for `X, X' ~ Poisson(mu)` and `Y, Y' ~ Poisson(lambda)`, each
/// support cut where its upper tail drops below `1e-12`.
pub fn exact_gap_poisson(mu: f64, lambda: f64) -> Result<f64> {
    let a = poisson_pmf_truncated(mu, POISSON_TAIL_MASS)?;
    let b = poisson_pmf_truncated(lambda, POISSON_TAIL_MASS)?;
    Ok(gap_from_pmfs(&a, &b))
}
