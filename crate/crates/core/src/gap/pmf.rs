//! Log-space PMFs and compensated summation.

use crate::error::{Error, Result};

/// Default upper-tail mass left out when truncating a Poisson support.
pub const POISSON_TAIL_MASS: f64 = 1e-12;

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// `ln(j!)` for `j = 0..=m`.
fn ln_factorials(m: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(m + 1);
    let mut acc = CompensatedSum::new();
    out.push(0.0);
    for j in 1..=m {
        acc.add((j as f64).ln());
        out.push(acc.value());
    }
    out
}

/// `Bin(n, p)` probabilities for `0..=n`.
pub fn binomial_pmf(n: u64, p: f64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("binomial p = {p} not in [0, 1]")));
    }
    let n = n as usize;
    let mut pmf = vec![0.0; n + 1];
    if p == 0.0 {
        pmf[0] = 1.0;
        return Ok(pmf);
    }
    if p == 1.0 {
        pmf[n] = 1.0;
        return Ok(pmf);
    }
    let lf = ln_factorials(n);
    let (lp, lq) = (p.ln(), (-p).ln_1p());
    for (x, slot) in pmf.iter_mut().enumerate() {
        let ln = lf[n] - lf[x] - lf[n - x] + x as f64 * lp + (n - x) as f64 * lq;
        *slot = ln.exp();
    }
    Ok(pmf)
}

/// `Poisson(mu)` probabilities for `0..=m`, where `m` is the smallest cut
/// whose upper tail `P[X > m]` is certified below `tail_mass`.
///
/// Past the mode the tail is dominated by a geometric series with ratio
/// `mu / (j + 2)`, which gives the certificate.
pub fn poisson_pmf_truncated(mu: f64, tail_mass: f64) -> Result<Vec<f64>> {
    if !mu.is_finite() || mu < 0.0 {
        return Err(Error::Domain(format!(
            "Poisson mean {mu} is not a finite nonnegative number"
        )));
    }
    if mu == 0.0 {
        return Ok(vec![1.0]);
    }
    let ln_mu = mu.ln();
    let mut pmf = Vec::new();
    let mut ln_fact = CompensatedSum::new();
    for j in 0usize.. {
        if j > 0 {
            ln_fact.add((j as f64).ln());
        }
        pmf.push((j as f64 * ln_mu - mu - ln_fact.value()).exp());
        let next_ratio = mu / (j + 1) as f64;
        let after_ratio = mu / (j + 2) as f64;
        if after_ratio < 1.0 {
            let next = pmf[j] * next_ratio;
            if next / (1.0 - after_ratio) < tail_mass {
                break;
            }
        }
    }
    Ok(pmf)
}
