//! Closed-form three-term lower bounds on the expectation gap.

use crate::error::{Error, Result};

/// Which term of the three-way minimum is active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// Quadratic in the mean difference; small total mass.
    SmallMass,
    /// Linear in the mean difference; separation beyond the noise scale.
    LargeSeparation,
    /// Quadratic in the difference over the standard deviation scale.
    CltRegime,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::SmallMass => "SmallMass",
            Regime::LargeSeparation => "LargeSeparation",
            Regime::CltRegime => "CltRegime",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapBound {
    pub value: f64,
    pub regime: Regime,
    /// The three candidate terms, in regime order.
    pub terms: [f64; 3],
}

impl GapBound {
    /// Minimum of the three terms; ties go to the earlier regime.
    pub fn from_terms(terms: [f64; 3]) -> Self {
        let regimes = [Regime::SmallMass, Regime::LargeSeparation, Regime::CltRegime];
        let mut best = 0;
        for i in 1..3 {
            if terms[i] < terms[best] {
                best = i;
            }
        }
        Self {
            value: terms[best],
            regime: regimes[best],
            terms,
        }
    }
}

/// Multipliers of the three terms. The defaults are the proven constants;
/// other values exist to exercise the checkers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConstants {
    pub small_mass: f64,
    pub large_separation: f64,
    pub clt: f64,
}

impl BoundConstants {
    /// Binomial counts: `1/8`, `1/16`, `1/40`.
    pub const BINOMIAL: Self = Self {
        small_mass: 1.0 / 8.0,
        large_separation: 1.0 / 16.0,
        clt: 1.0 / 40.0,
    };

    /// Poisson counts: `1/20`, `1/5`, `1/7`.
    pub const POISSON: Self = Self {
        small_mass: 1.0 / 20.0,
        large_separation: 1.0 / 5.0,
        clt: 1.0 / 7.0,
    };

    /// The bound as a function of the means `mu`, `lambda`:
    /// `min(c1 (mu-lambda)², c2 |mu-lambda|, c3 (mu-lambda)² / sqrt(mu+lambda))`.
    ///
    /// The third term is `+∞` when `mu + lambda = 0`.
    pub fn bound(&self, mu: f64, lambda: f64) -> GapBound {
        let diff = mu - lambda;
        let sq = diff * diff;
        let total = mu + lambda;
        let clt = if total > 0.0 {
            self.clt * sq / total.sqrt()
        } else {
            f64::INFINITY
        };
        GapBound::from_terms([self.small_mass * sq, self.large_separation * diff.abs(), clt])
    }
}

pub(crate) fn check_small_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=0.25).contains(&p) {
        return Err(Error::Domain(format!("{name} = {p} not in [0, 1/4]")));
    }
    Ok(())
}

pub fn lower_bound_binomial_with(constants: &BoundConstants, n: u64, p: f64, q: f64) -> Result<GapBound> {
    check_small_probability("p", p)?;
    check_small_probability("q", q)?;
    if n < 16 {
        return Err(Error::Domain(format!("binomial gap bound needs n >= 16, got {n}")));
    }
    let n = n as f64;
    Ok(constants.bound(n * p, n * q))
}

/// `min(n²(p-q)²/8, n|p-q|/16, n²(p-q)²/(40 sqrt(n(p+q))))` for
/// `p, q ∈ [0, 1/4]`, `n ≥ 16`.
pub fn lower_bound_binomial(n: u64, p: f64, q: f64) -> Result<GapBound> {
    lower_bound_binomial_with(&BoundConstants::BINOMIAL, n, p, q)
}

pub fn lower_bound_poisson_with(constants: &BoundConstants, mu: f64, lambda: f64) -> Result<GapBound> {
    for (name, x) in [("mu", mu), ("lambda", lambda)] {
        if !x.is_finite() || x < 0.0 {
            return Err(Error::Domain(format!("{name} = {x} must be finite and >= 0")));
        }
    }
    Ok(constants.bound(mu, lambda))
}

/// `min((mu-lambda)²/20, |mu-lambda|/5, (mu-lambda)²/(7 sqrt(mu+lambda)))`.
pub fn lower_bound_poisson(mu: f64, lambda: f64) -> Result<GapBound> {
    lower_bound_poisson_with(&BoundConstants::POISSON, mu, lambda)
}
