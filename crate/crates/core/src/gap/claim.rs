//! Phase-gap inequalities for the binomial factor `1 - p + p e^{it}` and the
//! facts about its polar form that they rest on.

use std::f64::consts::PI;

use super::bounds::check_small_probability;
use super::cf::cf_polar_binomial;
use crate::error::{Error, Result};

/// Proven floor on the modulus `r(t)` for `p ≤ 1/4`, `t ∈ [0, π]`:
/// `r(t)² = 1 - 2p(1-p)(1 - cos t) ≥ (1 - 2p)² ≥ 1/4`.
pub const MODULUS_FLOOR: f64 = 0.5;

/// Ceiling on `p sin t / r(t)` over the same range.
pub const ARCSIN_ARGUMENT_CEILING: f64 = 0.5;

/// Multiplier in the upper phase bound `2n|θ - η| ≤ 14 n |p - q| t`.
pub const PHASE_UPPER_CONSTANT: f64 = 14.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClaimCheck {
    /// `2n |θ(t) - η(t)|`.
    pub lhs: f64,
    /// `2n |p - q| sin t`.
    pub lower: f64,
    /// `14 n |p - q| t`.
    pub upper: f64,
    pub ok: bool,
}

impl ClaimCheck {
    /// `lhs - lower`; strictly positive when `p ≠ q` and the claim holds.
    pub fn lower_margin(&self) -> f64 {
        self.lhs - self.lower
    }

    pub fn upper_margin(&self) -> f64 {
        self.upper - self.lhs
    }
}

/// Evaluates both phase inequalities at one point. The lower one is strict
/// for `p ≠ q`; at `p = q` every side is zero and equality is accepted.
pub fn claim_inequality_check(n: u64, p: f64, q: f64, t: f64) -> Result<ClaimCheck> {
    check_small_probability("p", p)?;
    check_small_probability("q", q)?;
    if !(t > 0.0 && t <= PI) {
        return Err(Error::Domain(format!("t = {t} not in (0, π]")));
    }
    let theta = cf_polar_binomial(p, t)?.argument;
    let eta = cf_polar_binomial(q, t)?.argument;
    let n = n as f64;
    let lhs = 2.0 * n * (theta - eta).abs();
    let lower = 2.0 * n * (p - q).abs() * t.sin();
    let upper = PHASE_UPPER_CONSTANT * n * (p - q).abs() * t;
    let lower_ok = if p == q { lhs >= lower } else { lhs > lower };
    Ok(ClaimCheck {
        lhs,
        lower,
        upper,
        ok: lower_ok && lhs <= upper,
    })
}

/// `p sin t / r(t)`, the sine of the phase `θ(t)`.
pub fn arcsin_argument(p: f64, t: f64) -> Result<f64> {
    let polar = cf_polar_binomial(p, t)?;
    Ok(p * t.sin() / polar.modulus)
}

/// `r(t)` for any `p ∈ [0, 1]`; used for the monotonicity fact on `[0, 1/2]`.
pub fn modulus(p: f64, t: f64) -> f64 {
    let re = 1.0 - p * (1.0 - t.cos());
    let im = p * t.sin();
    (re * re + im * im).sqrt()
}
