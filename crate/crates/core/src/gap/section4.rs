//! Assembling per-symbol gap bounds into a bound on `E[Z]`.
//!
//! With `x_i = n|p_i - q_i|` and `m_i = n(p_i + q_i)`, each symbol
//! contributes `min(x_i/8, x_i²/16, x_i²/(40 sqrt(m_i))) / n`. Splitting the
//! symbols by the active term and applying Cauchy-Schwarz to each part gives
//! the closed-form floor
//!
//! ```text
//! (1/12) min(ε, (ε²/3)(n/k), (ε²/11) sqrt(n/k))     whenever TV(p, q) > ε.
//! ```

use crate::distributions::{tv_distance, DiscreteDistribution};
use crate::error::{Error, Result};

/// Which term of a symbol's minimum is active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolSet {
    S1,
    S2,
    S3,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Section4Gap {
    pub n: u64,
    pub k: usize,
    pub tv: f64,
    /// `(1/n) Σ_i min(...)`, a lower bound on `E[Z]`.
    pub per_symbol_sum: f64,
    pub partition: Vec<SymbolSet>,
}

impl Section4Gap {
    /// Closed-form floor at distance parameter `epsilon` on this domain.
    pub fn floor(&self, epsilon: f64) -> f64 {
        closed_form_floor(epsilon, self.n, self.k)
    }

    pub fn members(&self, set: SymbolSet) -> impl Iterator<Item = usize> + '_ {
        self.partition
            .iter()
            .enumerate()
            .filter(move |(_, s)| **s == set)
            .map(|(i, _)| i + 1)
    }
}

/// `(1/12) min(ε, (ε²/3)(n/k), (ε²/11) sqrt(n/k))`.
pub fn closed_form_floor(epsilon: f64, n: u64, k: usize) -> f64 {
    let ratio = n as f64 / k as f64;
    let e2 = epsilon * epsilon;
    epsilon.min(e2 / 3.0 * ratio).min(e2 / 11.0 * ratio.sqrt()) / 12.0
}

/// Per-symbol terms `[x/8, x²/16, x²/(40 sqrt(m))]` (unnormalized by `n`).
pub fn symbol_terms(n: u64, p: f64, q: f64) -> [f64; 3] {
    let n = n as f64;
    let x = n * (p - q).abs();
    let m = n * (p + q);
    let third = if m > 0.0 {
        x * x / (40.0 * m.sqrt())
    } else {
        f64::INFINITY
    };
    [x / 8.0, x * x / 16.0, third]
}

pub fn section4_gap_bound(p: &DiscreteDistribution, q: &DiscreteDistribution, n: u64) -> Result<Section4Gap> {
    let tv = tv_distance(p, q)?;
    if n < 16 {
        return Err(Error::Domain(format!("needs n >= 16, got {n}")));
    }
    let heavy = p.max_mass().max(q.max_mass());
    if heavy > 0.25 {
        return Err(Error::Domain(format!(
            "largest mass {heavy} exceeds 1/4; flatten the distributions first"
        )));
    }
    let mut sum = 0.0;
    let mut partition = Vec::with_capacity(p.k());
    for (&pi, &qi) in p.probs().iter().zip(q.probs()) {
        let terms = symbol_terms(n, pi, qi);
        let (set, value) = if terms[0] <= terms[1] && terms[0] <= terms[2] {
            (SymbolSet::S1, terms[0])
        } else if terms[1] <= terms[2] {
            (SymbolSet::S2, terms[1])
        } else {
            (SymbolSet::S3, terms[2])
        };
        sum += value;
        partition.push(set);
    }
    Ok(Section4Gap {
        n,
        k: p.k(),
        tv,
        per_symbol_sum: sum / n as f64,
        partition,
    })
}

/// `Σ a_i²/b_i ≥ (Σ|a_i|)² / Σ b_i` for positive `b`.
///
/// Returns whether it holds up to a few ulps of the right-hand side.
pub fn csum_inequality_check(a: &[f64], b: &[f64]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::Dimension(format!(
            "vectors of length {} and {}",
            a.len(),
            b.len()
        )));
    }
    if let Some(bad) = b.iter().find(|&&x| x.is_nan() || x <= 0.0) {
        return Err(Error::Domain(format!("b entries must be positive, found {bad}")));
    }
    let lhs: f64 = a.iter().zip(b).map(|(x, y)| x * x / y).sum();
    let l1: f64 = a.iter().map(|x| x.abs()).sum();
    let rhs = l1 * l1 / b.iter().sum::<f64>();
    let slack = 8.0 * f64::EPSILON * a.len().max(1) as f64 * rhs;
    Ok(lhs + slack >= rhs)
}
