//! Discrete distributions over `[k] = {1, ..., k}`, total variation distance,
//! the four-way flattening reduction, and exact samplers.
//!
//! Symbols are 1-based everywhere a value crosses the public API (sample
//! batches, files); probability vectors are stored 0-based internally.

use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::{Binomial, Distribution, Poisson};

use crate::error::{Error, Result};

/// Absolute tolerance on the total mass of a probability vector.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// Number of sub-symbols each symbol is split into by flattening.
pub const FLATTEN_FACTOR: usize = 4;

/// A probability vector over `[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    probs: Vec<f64>,
}

impl DiscreteDistribution {
    /// Validates and, when the mass is off by less than
    /// [`NORMALIZATION_TOLERANCE`], renormalizes.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Domain("distribution over an empty domain".into()));
        }
        if let Some((i, &x)) = probs
            .iter()
            .enumerate()
            .find(|(_, x)| !x.is_finite() || **x < 0.0 || **x > 1.0)
        {
            return Err(Error::Domain(format!(
                "probability of symbol {} is {x}, expected a value in [0, 1]",
                i + 1
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::Domain(format!(
                "probabilities sum to {total:.15}, not 1 (tolerance {NORMALIZATION_TOLERANCE:e})"
            )));
        }
        let probs = if total == 1.0 {
            probs
        } else {
            probs.into_iter().map(|x| x / total).collect()
        };
        Ok(Self { probs })
    }

    pub fn uniform(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("uniform distribution needs k >= 1".into()));
        }
        Ok(Self {
            probs: vec![1.0 / k as f64; k],
        })
    }

    /// Uniform on `[k]` with `+a` on odd symbols and `-a` on even ones,
    /// `a = 2 tv / k`, so that `TV(uniform, result) = tv`. Needs `k` even and
    /// `tv ≤ 1/2`.
    pub fn paired_perturbation(k: usize, tv: f64) -> Result<Self> {
        if k == 0 || !k.is_multiple_of(2) {
            return Err(Error::Domain(format!(
                "paired perturbation needs an even k >= 2, got {k}"
            )));
        }
        if !(0.0..=0.5).contains(&tv) {
            return Err(Error::Domain(format!(
                "paired perturbation distance {tv} not in [0, 1/2]"
            )));
        }
        let base = 1.0 / k as f64;
        let a = 2.0 * tv / k as f64;
        let probs = (0..k)
            .map(|i| if i % 2 == 0 { base + a } else { (base - a).max(0.0) })
            .collect();
        Ok(Self { probs })
    }

    /// Point mass on the 1-based `symbol`.
    pub fn point_mass(k: usize, symbol: usize) -> Result<Self> {
        if symbol == 0 || symbol > k {
            return Err(Error::Range(format!("symbol {symbol} not in 1..={k}")));
        }
        let mut probs = vec![0.0; k];
        probs[symbol - 1] = 1.0;
        Ok(Self { probs })
    }

    pub fn k(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Mass of the 1-based `symbol`.
    pub fn mass(&self, symbol: usize) -> f64 {
        self.probs[symbol - 1]
    }

    pub fn max_mass(&self) -> f64 {
        self.probs.iter().copied().fold(0.0, f64::max)
    }
}

/// A batch of 1-based symbols drawn from a distribution over `[k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleBatch {
    symbols: Vec<usize>,
    k: usize,
}

impl SampleBatch {
    pub fn new(symbols: Vec<usize>, k: usize) -> Result<Self> {
        if let Some((pos, &s)) = symbols.iter().enumerate().find(|(_, &s)| s == 0 || s > k) {
            return Err(Error::Range(format!(
                "sample {} has symbol {s}, outside 1..={k}",
                pos + 1
            )));
        }
        Ok(Self { symbols, k })
    }

    pub fn empty(k: usize) -> Self {
        Self { symbols: Vec::new(), k }
    }

    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// The first `len` samples, over the same domain.
    pub fn truncated(&self, len: usize) -> Self {
        Self {
            symbols: self.symbols[..len.min(self.symbols.len())].to_vec(),
            k: self.k,
        }
    }
}

/// Total variation distance `(1/2) Σ_i |p_i - q_i|`.
pub fn tv_distance(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<f64> {
    if p.k() != q.k() {
        return Err(Error::Dimension(format!(
            "distributions over {} and {} symbols",
            p.k(),
            q.k()
        )));
    }
    let l1: f64 = p.probs.iter().zip(&q.probs).map(|(a, b)| (a - b).abs()).sum();
    Ok((0.5 * l1).min(1.0))
}

/// Splits every symbol `i` into `4i-3, 4i-2, 4i-1, 4i`, each carrying `p_i / 4`.
pub fn flatten_distribution(p: &DiscreteDistribution) -> DiscreteDistribution {
    let probs = p
        .probs
        .iter()
        .flat_map(|&x| std::iter::repeat_n(x / FLATTEN_FACTOR as f64, FLATTEN_FACTOR))
        .collect();
    DiscreteDistribution { probs }
}

/// Maps each sample `i` independently and uniformly to one of `4i-3, ..., 4i`.
///
/// Applied to i.i.d. samples of `p` this yields i.i.d. samples of
/// [`flatten_distribution`]`(p)`.
pub fn flatten_samples<R: Rng + ?Sized>(batch: &SampleBatch, rng: &mut R) -> SampleBatch {
    let symbols = batch
        .symbols
        .iter()
        .map(|&s| FLATTEN_FACTOR * (s - 1) + 1 + rng.random_range(0..FLATTEN_FACTOR))
        .collect();
    SampleBatch {
        symbols,
        k: FLATTEN_FACTOR * batch.k,
    }
}

/// `n` i.i.d. draws from `p` (alias method).
pub fn sample_categorical<R: Rng + ?Sized>(p: &DiscreteDistribution, n: usize, rng: &mut R) -> SampleBatch {
    if n == 0 {
        return SampleBatch::empty(p.k());
    }
    let symbols = if p.k() == 1 {
        vec![1; n]
    } else {
        let table = WeightedAliasIndex::new(p.probs.clone())
            .expect("a validated distribution has nonnegative weights with positive total");
        (0..n).map(|_| table.sample(rng) + 1).collect()
    };
    SampleBatch { symbols, k: p.k() }
}

/// Exact `Bin(n, p)` draw.
pub fn sample_binomial<R: Rng + ?Sized>(n: u64, p: f64, rng: &mut R) -> Result<u64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("binomial p = {p} not in [0, 1]")));
    }
    if p == 0.0 || n == 0 {
        return Ok(0);
    }
    if p == 1.0 {
        return Ok(n);
    }
    let law = Binomial::new(n, p).map_err(|e| Error::Domain(e.to_string()))?;
    Ok(law.sample(rng))
}

/// Exact `Poisson(lambda)` draw.
pub fn sample_poisson<R: Rng + ?Sized>(lambda: f64, rng: &mut R) -> Result<u64> {
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::Domain(format!(
            "Poisson rate {lambda} is not a finite nonnegative number"
        )));
    }
    if lambda == 0.0 {
        return Ok(0);
    }
    let law = Poisson::new(lambda).map_err(|e| Error::Domain(e.to_string()))?;
    Ok(law.sample(rng) as u64)
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some((i + 1, body))
    })
}

/// Parses a distribution file: one probability per line, `#` starts a comment.
pub fn parse_distribution(text: &str, origin: &str) -> Result<DiscreteDistribution> {
    let mut probs = Vec::new();
    for (line, body) in content_lines(text) {
        let x: f64 = body.parse().map_err(|_| Error::Parse {
            path: origin.to_string(),
            line,
            message: format!("expected a probability, found {body:?}"),
        })?;
        probs.push(x);
    }
    DiscreteDistribution::new(probs)
}

/// Parses a sample file: one 1-based symbol per line, `#` starts a comment.
///
/// Every symbol must lie in `1..=k`.
pub fn parse_samples(text: &str, k: usize, origin: &str) -> Result<SampleBatch> {
    let mut symbols = Vec::new();
    for (line, body) in content_lines(text) {
        let s: usize = body.parse().map_err(|_| Error::Parse {
            path: origin.to_string(),
            line,
            message: format!("expected a positive integer symbol, found {body:?}"),
        })?;
        if s == 0 || s > k {
            return Err(Error::Parse {
                path: origin.to_string(),
                line,
                message: format!("symbol {s} outside 1..={k}"),
            });
        }
        symbols.push(s);
    }
    Ok(SampleBatch { symbols, k })
}

pub fn read_distribution(path: &Path) -> Result<DiscreteDistribution> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_distribution(&text, &path.display().to_string())
}

pub fn read_samples(path: &Path, k: usize) -> Result<SampleBatch> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_samples(&text, k, &path.display().to_string())
}

pub fn format_samples(batch: &SampleBatch) -> String {
    let mut out = String::with_capacity(batch.len() * 4);
    for s in &batch.symbols {
        let _ = writeln!(out, "{s}");
    }
    out
}

pub fn format_distribution(p: &DiscreteDistribution) -> String {
    let mut out = String::new();
    for x in &p.probs {
        let _ = writeln!(out, "{x:e}");
    }
    out
}

pub fn write_samples(path: &Path, batch: &SampleBatch) -> Result<()> {
    std::fs::write(path, format_samples(batch)).map_err(|e| Error::io(path, e))
}
