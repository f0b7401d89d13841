//! `E|X| = (2/π) ∫_0^∞ (1 - Re φ(t)) / t² dt` evaluated numerically for
//! integer-valued `X`.
//!
//! For a lattice law every integrand of the form `f(t) / t²` considered
//! here has `f` 2π-periodic, so the half-line folds onto one period:
//!
//! ```text
//! ∫_0^∞ f(t)/t² dt = ∫_0^{2π} f(t) K(t) dt,   K(t) = Σ_{j≥0} (t + 2πj)^{-2}.
//! ```
//!
//! `K` keeps `fold_terms` translates explicitly and closes the rest with an
//! Euler-Maclaurin tail. The `j = 0` term carries the removable singularity
//! at `t = 0`, handled by [`RemovableRatio`].

use std::f64::consts::PI;

use num_complex::Complex64;

use super::quadrature::{integrate, QuadratureConfig};
use crate::error::Result;

const TWO_PI: f64 = 2.0 * PI;

/// Below this `t`, `f(t)/t²` is replaced by its limit at zero.
pub const SMALL_T: f64 = 1e-6;

/// Step used to recover the limit of `f(t)/t²` at zero.
const LIMIT_STEP: f64 = 1e-3;

/// `Σ_{j≥start} (t + 2πj)^{-2}` by Euler-Maclaurin through the third
/// derivative term.
fn kernel_tail(t: f64, start: usize) -> f64 {
    let a = t + TWO_PI * start as f64;
    let a2 = a * a;
    1.0 / (TWO_PI * a) + 0.5 / a2 + PI / (3.0 * a2 * a) - 24.0 * TWO_PI.powi(3) / (720.0 * a2 * a2 * a)
}

/// `Σ_{j≥1} (t + 2πj)^{-2}`: explicit up to `fold_terms`, then the tail.
pub fn kernel_translates(t: f64, fold_terms: usize) -> f64 {
    let mut rest = 0.0;
    for j in 1..fold_terms.max(1) {
        let s = t + TWO_PI * j as f64;
        rest += 1.0 / (s * s);
    }
    rest + kernel_tail(t, fold_terms.max(1))
}

/// `t² K(t) = 1 + t² Σ_{j≥1} (t + 2πj)^{-2}`, smooth on `[0, 2π]`.
pub fn scaled_folded_kernel(t: f64, fold_terms: usize) -> f64 {
    1.0 + t * t * kernel_translates(t, fold_terms)
}

/// `g(t) = f(t) / t²` for an even `f` vanishing to second order at zero.
///
/// `g` is even and smooth, so `g(t) = g(0) + O(t²)`; for `t < SMALL_T` the
/// constant term is recovered by one Richardson step from `t = h, 2h`.
struct RemovableRatio<F> {
    f: F,
    at_zero: f64,
}

impl<F: Fn(f64) -> f64> RemovableRatio<F> {
    fn new(f: F) -> Self {
        let h = LIMIT_STEP;
        let g1 = f(h) / (h * h);
        let g2 = f(2.0 * h) / (4.0 * h * h);
        Self {
            f,
            at_zero: (4.0 * g1 - g2) / 3.0,
        }
    }

    fn eval(&self, t: f64) -> f64 {
        if t < SMALL_T {
            self.at_zero
        } else {
            (self.f)(t) / (t * t)
        }
    }
}

/// `(2/π) ∫_0^∞ f(t)/t² dt` for an even, 2π-periodic, nonnegative `f` with
/// `f(t) = O(t²)` at zero.
pub fn folded_integral<F: Fn(f64) -> f64>(f: F, config: &QuadratureConfig) -> Result<f64> {
    config.validate()?;
    let ratio = RemovableRatio::new(f);
    let fold = config.fold_terms;
    let integrand = |t: f64| ratio.eval(t) * scaled_folded_kernel(t, fold);
    let raw = integrate(
        integrand,
        0.0,
        TWO_PI,
        config.abs_tolerance * PI / 2.0,
        config.panel_rule,
        config.max_intervals,
    )?;
    Ok(2.0 / PI * raw.value)
}

/// `E|X|` from the characteristic function of an integer-valued `X`.
pub fn zolotarev_abs_mean<C: Fn(f64) -> Complex64>(cf: C, config: &QuadratureConfig) -> Result<f64> {
    folded_integral(|t| 1.0 - cf(t).re, config)
}

/// `Δ = (2/π) ∫_0^∞ |u(t) - v(t)|² / t² dt`, the expectation gap between
/// the laws with characteristic functions `u` and `v`.
pub fn zolotarev_gap<U, V>(cf_u: U, cf_v: V, config: &QuadratureConfig) -> Result<f64>
where
    U: Fn(f64) -> Complex64,
    V: Fn(f64) -> Complex64,
{
    folded_integral(|t| (cf_u(t) - cf_v(t)).norm_sqr(), config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gap::cf::{cf_binomial, cf_poisson};
    use crate::gap::exact::{exact_gap_binomial, exact_gap_poisson};
    use crate::gap::quadrature::PanelRule;
    use approx::assert_abs_diff_eq;

    #[test]
    fn kernel_matches_long_direct_sum() {
        for t in [1e-3, 0.5, 3.0, 6.2] {
            let direct: f64 =
                (1..2_000_000).map(|j| (t + TWO_PI * j as f64).powi(-2)).sum::<f64>() + kernel_tail(t, 2_000_000);
            assert_abs_diff_eq!(kernel_translates(t, 64), direct, epsilon = 1e-12);
        }
    }

    #[test]
    fn kernel_tail_is_accurate_at_default_fold() {
        // explicit sum to 10^6 plus tail vs 64 terms plus tail
        for t in [0.1, 2.0, 5.0] {
            let long: f64 =
                (64..1_000_000).map(|j| (t + TWO_PI * j as f64).powi(-2)).sum::<f64>() + kernel_tail(t, 1_000_000);
            assert_abs_diff_eq!(kernel_tail(t, 64), long, epsilon = 1e-13);
        }
    }

    #[test]
    fn constant_and_rademacher() {
        let cfg = QuadratureConfig::default();
        assert_eq!(zolotarev_abs_mean(|_| Complex64::new(1.0, 0.0), &cfg).unwrap(), 0.0);
        let m = zolotarev_abs_mean(|t: f64| Complex64::new(t.cos(), 0.0), &cfg).unwrap();
        assert_abs_diff_eq!(m, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn bernoulli_difference() {
        // Y1 - Y2 for Y ~ Bernoulli(1/4): |.| = 1 w.p. 2·(1/4)(3/4)
        let cf = |t: f64| cf_binomial(1, 0.25, t) * cf_binomial(1, 0.25, -t);
        for rule in [PanelRule::GaussKronrod, PanelRule::AdaptiveSimpson] {
            let cfg = QuadratureConfig {
                panel_rule: rule,
                ..Default::default()
            };
            assert_abs_diff_eq!(zolotarev_abs_mean(cf, &cfg).unwrap(), 0.375, epsilon = 1e-8);
        }
    }

    #[test]
    fn equal_cfs_give_zero_gap() {
        let cfg = QuadratureConfig::default();
        let g = zolotarev_gap(|t| cf_binomial(20, 0.1, t), |t| cf_binomial(20, 0.1, t), &cfg).unwrap();
        assert_eq!(g, 0.0);
    }

    #[test]
    fn gap_agrees_with_enumeration() {
        let cfg = QuadratureConfig::default();
        let z = zolotarev_gap(|t| cf_binomial(16, 0.05, t), |t| cf_binomial(16, 0.20, t), &cfg).unwrap();
        assert_abs_diff_eq!(z, exact_gap_binomial(16, 0.05, 0.20).unwrap(), epsilon = 1e-6);
        let z = zolotarev_gap(|t| cf_poisson(2.0, t), |t| cf_poisson(5.0, t), &cfg).unwrap();
        assert_abs_diff_eq!(z, exact_gap_poisson(2.0, 5.0).unwrap(), epsilon = 1e-6);
    }

    #[test]
    fn simpson_agrees_with_kronrod() {
        let gk = QuadratureConfig::default();
        let simpson = QuadratureConfig {
            panel_rule: PanelRule::AdaptiveSimpson,
            ..gk
        };
        let a = zolotarev_gap(|t| cf_poisson(3.0, t), |t| cf_poisson(9.5, t), &gk).unwrap();
        let b = zolotarev_gap(|t| cf_poisson(3.0, t), |t| cf_poisson(9.5, t), &simpson).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 2e-8);
    }

    #[test]
    fn limit_at_zero_is_squared_mean_difference() {
        let r = RemovableRatio::new(|t: f64| (cf_poisson(2.0, t) - cf_poisson(5.0, t)).norm_sqr());
        assert_abs_diff_eq!(r.eval(0.0), 9.0, epsilon = 1e-6);
    }
}
