//! Batch checks of the gap bounds and phase inequalities over fixed grids.
//!
//! Every grid point yields one [`GridRow`]; a failed check is a row with
//! `ok = false`, never an error.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use crate::distributions::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::gap::bounds::{lower_bound_binomial_with, lower_bound_poisson_with, BoundConstants};
use crate::gap::cf::{cf_binomial, cf_poisson, cf_polar_binomial};
use crate::gap::claim::{claim_inequality_check, modulus, ARCSIN_ARGUMENT_CEILING, MODULUS_FLOOR};
use crate::gap::exact::{exact_gap_binomial, exact_gap_poisson};
use crate::gap::quadrature::QuadratureConfig;
use crate::gap::section4::closed_form_floor;
use crate::gap::zolotarev::zolotarev_gap;
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GridFamily {
    BinomialLemma,
    PoissonLemma,
    Zolotarev,
    Claim,
    ModulusFloor,
    ArcsinRange,
    Monotonicity,
    Section4,
}

impl GridFamily {
    pub const ALL: [GridFamily; 8] = [
        GridFamily::BinomialLemma,
        GridFamily::PoissonLemma,
        GridFamily::Zolotarev,
        GridFamily::Claim,
        GridFamily::ModulusFloor,
        GridFamily::ArcsinRange,
        GridFamily::Monotonicity,
        GridFamily::Section4,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GridFamily::BinomialLemma => "binomial-lemma",
            GridFamily::PoissonLemma => "poisson-lemma",
            GridFamily::Zolotarev => "zolotarev",
            GridFamily::Claim => "claim",
            GridFamily::ModulusFloor => "modulus-floor",
            GridFamily::ArcsinRange => "arcsin-range",
            GridFamily::Monotonicity => "monotonicity",
            GridFamily::Section4 => "section4",
        }
    }

    fn stream_base(self) -> u64 {
        (self as u64 + 1) << 32
    }
}

impl fmt::Display for GridFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GridFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GridFamily::ALL.into_iter().find(|f| f.as_str() == s).ok_or_else(|| {
            let names: Vec<_> = GridFamily::ALL.iter().map(|f| f.as_str()).collect();
            Error::Domain(format!(
                "unknown grid family {s:?}; expected one of {}",
                names.join(", ")
            ))
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    pub families: Vec<GridFamily>,
    pub binomial_constants: BoundConstants,
    pub poisson_constants: BoundConstants,
    pub quadrature: QuadratureConfig,
    pub seed: u64,
    /// Random pairs per law in the characteristic-function cross-check.
    pub zolotarev_pairs: usize,
    pub zolotarev_tolerance: f64,
    pub section4_pairs: usize,
    /// Accepted negative margin of the binomial bound.
    pub binomial_slack: f64,
    /// Accepted negative margin of the Poisson bound (truncation).
    pub poisson_slack: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            families: GridFamily::ALL.to_vec(),
            binomial_constants: BoundConstants::BINOMIAL,
            poisson_constants: BoundConstants::POISSON,
            quadrature: QuadratureConfig::default(),
            seed: 0,
            zolotarev_pairs: 100,
            zolotarev_tolerance: 1e-6,
            section4_pairs: 50,
            binomial_slack: 1e-10,
            poisson_slack: 1e-9,
        }
    }
}

impl GridConfig {
    pub fn only(families: &[GridFamily]) -> Self {
        Self {
            families: families.to_vec(),
            ..Self::default()
        }
    }
}

/// One grid point. Coordinates a family does not use are `None`.
///
/// `value` is the computed quantity, `bound` what it is compared against and
/// `margin` the signed slack of the comparison (negative means violated,
/// before tolerances).
#[derive(Debug, Clone, PartialEq)]
pub struct GridRow {
    pub family: GridFamily,
    pub index: u64,
    pub n: Option<u64>,
    pub k: Option<usize>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub mu: Option<f64>,
    pub lambda: Option<f64>,
    pub t: Option<f64>,
    pub epsilon: Option<f64>,
    pub value: f64,
    pub bound: f64,
    pub margin: f64,
    pub ok: bool,
}

impl GridRow {
    fn new(family: GridFamily) -> Self {
        Self {
            family,
            index: 0,
            n: None,
            k: None,
            p: None,
            q: None,
            mu: None,
            lambda: None,
            t: None,
            epsilon: None,
            value: f64::NAN,
            bound: f64::NAN,
            margin: f64::NAN,
            ok: false,
        }
    }

    fn compare(mut self, value: Result<f64>, bound: f64, slack: f64) -> Self {
        if let Ok(v) = value {
            self.value = v;
            self.bound = bound;
            self.margin = v - bound;
            self.ok = self.margin >= -slack;
        } else {
            self.bound = bound;
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridReport {
    pub rows: Vec<GridRow>,
}

impl GridReport {
    pub fn violations(&self) -> impl Iterator<Item = &GridRow> {
        self.rows.iter().filter(|r| !r.ok)
    }

    pub fn violation_count(&self) -> usize {
        self.violations().count()
    }

    pub fn family_counts(&self, family: GridFamily) -> (usize, usize) {
        let rows = self.rows.iter().filter(|r| r.family == family);
        let (mut total, mut bad) = (0, 0);
        for r in rows {
            total += 1;
            bad += usize::from(!r.ok);
        }
        (total, bad)
    }
}

/// `{0, 0.01, ..., 0.25}`.
pub fn probability_grid() -> Vec<f64> {
    (0..=25).map(|j| j as f64 / 100.0).collect()
}

pub const BINOMIAL_GRID_N: [u64; 5] = [16, 24, 32, 64, 128];
pub const POISSON_GRID_N: [u64; 4] = [16, 32, 64, 128];
pub const CLAIM_GRID_N: [u64; 2] = [16, 64];
pub const SECTION4_EPSILONS: [f64; 3] = [0.1, 0.3, 0.5];
pub const SECTION4_N: [u64; 2] = [64, 256];
const T_STEPS: u64 = 200;

/// Distinct means `n·p` over the Poisson grid, ascending.
pub fn poisson_grid_means() -> Vec<f64> {
    // n·j/100 is identified by the integer n·j
    let mut keys: Vec<u64> = POISSON_GRID_N
        .iter()
        .flat_map(|&n| (0..=25u64).map(move |j| n * j))
        .collect();
    keys.sort_unstable();
    keys.dedup();
    keys.into_iter().map(|x| x as f64 / 100.0).collect()
}

fn binomial_lemma(config: &GridConfig) -> Vec<GridRow> {
    let ps = probability_grid();
    let mut points = Vec::new();
    for &n in &BINOMIAL_GRID_N {
        for &p in &ps {
            points.extend(ps.iter().map(|&q| (n, p, q)));
        }
    }
    points
        .into_par_iter()
        .map(|(n, p, q)| {
            let row = GridRow {
                n: Some(n),
                p: Some(p),
                q: Some(q),
                ..GridRow::new(GridFamily::BinomialLemma)
            };
            match lower_bound_binomial_with(&config.binomial_constants, n, p, q) {
                Ok(b) => row.compare(exact_gap_binomial(n, p, q), b.value, config.binomial_slack),
                Err(_) => row,
            }
        })
        .collect()
}

fn poisson_lemma(config: &GridConfig) -> Vec<GridRow> {
    let means = poisson_grid_means();
    let points: Vec<(f64, f64)> = means
        .iter()
        .flat_map(|&mu| means.iter().map(move |&lambda| (mu, lambda)))
        .collect();
    points
        .into_par_iter()
        .map(|(mu, lambda)| {
            let row = GridRow {
                mu: Some(mu),
                lambda: Some(lambda),
                ..GridRow::new(GridFamily::PoissonLemma)
            };
            match lower_bound_poisson_with(&config.poisson_constants, mu, lambda) {
                Ok(b) => row.compare(exact_gap_poisson(mu, lambda), b.value, config.poisson_slack),
                Err(_) => row,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy)]
enum PairLaw {
    Binomial { n: u64, p: f64, q: f64 },
    Poisson { mu: f64, lambda: f64 },
}

/// The random parameter pairs of the cross-check: `pairs` binomial ones
/// (`n ≤ 128`, `p, q ≤ 1/4`) followed by `pairs` Poisson ones (`mu, lambda ≤ 32`).
fn zolotarev_points(config: &GridConfig) -> Vec<PairLaw> {
    let base = RngStream::new(config.seed, GridFamily::Zolotarev.stream_base());
    let mut rng = base.generator();
    let mut out = Vec::with_capacity(2 * config.zolotarev_pairs);
    for _ in 0..config.zolotarev_pairs {
        out.push(PairLaw::Binomial {
            n: rng.random_range(1..=128),
            p: rng.random_range(0.0..=0.25),
            q: rng.random_range(0.0..=0.25),
        });
    }
    for _ in 0..config.zolotarev_pairs {
        out.push(PairLaw::Poisson {
            mu: rng.random_range(0.0..=32.0),
            lambda: rng.random_range(0.0..=32.0),
        });
    }
    out
}

fn zolotarev(config: &GridConfig) -> Vec<GridRow> {
    let quad = config.quadrature;
    zolotarev_points(config)
        .into_par_iter()
        .map(|law| {
            let (row, integral, exact) = match law {
                PairLaw::Binomial { n, p, q } => (
                    GridRow {
                        n: Some(n),
                        p: Some(p),
                        q: Some(q),
                        ..GridRow::new(GridFamily::Zolotarev)
                    },
                    zolotarev_gap(|t| cf_binomial(n, p, t), |t| cf_binomial(n, q, t), &quad),
                    exact_gap_binomial(n, p, q),
                ),
                PairLaw::Poisson { mu, lambda } => (
                    GridRow {
                        mu: Some(mu),
                        lambda: Some(lambda),
                        ..GridRow::new(GridFamily::Zolotarev)
                    },
                    zolotarev_gap(|t| cf_poisson(mu, t), |t| cf_poisson(lambda, t), &quad),
                    exact_gap_poisson(mu, lambda),
                ),
            };
            match (integral, exact) {
                (Ok(v), Ok(e)) => GridRow {
                    value: v,
                    bound: e,
                    margin: config.zolotarev_tolerance - (v - e).abs(),
                    ok: (v - e).abs() <= config.zolotarev_tolerance,
                    ..row
                },
                _ => row,
            }
        })
        .collect()
}

fn t_grid(first: u64, last: u64) -> impl Iterator<Item = f64> + Clone {
    (first..=last).map(|j| PI * j as f64 / T_STEPS as f64)
}

fn claim(_: &GridConfig) -> Vec<GridRow> {
    let ps: Vec<f64> = (0..=5).map(|j| j as f64 * 0.05).collect();
    let mut points = Vec::new();
    for &n in &CLAIM_GRID_N {
        for &p in &ps {
            for &q in &ps {
                if p != q {
                    points.extend(t_grid(1, T_STEPS).map(|t| (n, p, q, t)));
                }
            }
        }
    }
    points
        .into_par_iter()
        .map(|(n, p, q, t)| {
            let row = GridRow {
                n: Some(n),
                p: Some(p),
                q: Some(q),
                t: Some(t),
                ..GridRow::new(GridFamily::Claim)
            };
            match claim_inequality_check(n, p, q, t) {
                Ok(c) => GridRow {
                    value: c.lhs,
                    bound: c.lower,
                    margin: c.lower_margin().min(c.upper_margin()),
                    ok: c.ok,
                    ..row
                },
                Err(_) => row,
            }
        })
        .collect()
}

fn polar_points() -> Vec<(f64, f64)> {
    probability_grid()
        .into_iter()
        .flat_map(|p| t_grid(0, T_STEPS).map(move |t| (p, t)))
        .collect()
}

fn modulus_floor(_: &GridConfig) -> Vec<GridRow> {
    polar_points()
        .into_iter()
        .map(|(p, t)| {
            let row = GridRow {
                p: Some(p),
                t: Some(t),
                ..GridRow::new(GridFamily::ModulusFloor)
            };
            row.compare(cf_polar_binomial(p, t).map(|c| c.modulus), MODULUS_FLOOR, 0.0)
        })
        .collect()
}

fn arcsin_range(_: &GridConfig) -> Vec<GridRow> {
    polar_points()
        .into_iter()
        .map(|(p, t)| {
            let row = GridRow {
                p: Some(p),
                t: Some(t),
                bound: ARCSIN_ARGUMENT_CEILING,
                ..GridRow::new(GridFamily::ArcsinRange)
            };
            match cf_polar_binomial(p, t) {
                Ok(c) => {
                    let v = p * t.sin() / c.modulus;
                    let margin = v.min(ARCSIN_ARGUMENT_CEILING - v);
                    GridRow {
                        value: v,
                        margin,
                        ok: margin >= 0.0,
                        ..row
                    }
                }
                Err(_) => row,
            }
        })
        .collect()
}

/// Consecutive `p` on `{0, 0.01, ..., 0.5}` at each interior `t`: `p sin t`
/// must not decrease and `r(t)` must not increase. `p` and `q` hold the
/// smaller and the larger probability, `value` and `bound` the moduli at `q`
/// and at `p`.
fn monotonicity(_: &GridConfig) -> Vec<GridRow> {
    let mut rows = Vec::new();
    for t in t_grid(1, T_STEPS - 1) {
        for i in 0..50 {
            let (p, q) = (i as f64 / 100.0, (i + 1) as f64 / 100.0);
            let (rp, rq) = (modulus(p, t), modulus(q, t));
            let phase_step = q * t.sin() - p * t.sin();
            let margin = (rp - rq).min(phase_step);
            rows.push(GridRow {
                p: Some(p),
                q: Some(q),
                t: Some(t),
                value: rq,
                bound: rp,
                margin,
                ok: margin >= 0.0,
                ..GridRow::new(GridFamily::Monotonicity)
            });
        }
    }
    rows
}

/// A random pair on `k ∈ [8, 20]` symbols with all masses at most `1/4` and
/// `TV > 1/2`: `p` is heavy on a random half of the symbols, `q` on the other.
pub fn separated_pair<R: Rng + ?Sized>(rng: &mut R) -> (DiscreteDistribution, DiscreteDistribution) {
    loop {
        let k = rng.random_range(8..=20);
        let side: Vec<bool> = (0..k).map(|_| rng.random_bool(0.5)).collect();
        let mut draw = |heavy: bool| {
            let w: Vec<f64> = side
                .iter()
                .map(|&s| rng.random_range(0.05..1.0) * if s == heavy { 1.0 } else { 0.1 })
                .collect();
            let total: f64 = w.iter().sum();
            w.into_iter().map(|x| x / total).collect::<Vec<_>>()
        };
        let (pv, qv) = (draw(true), draw(false));
        if pv.iter().chain(&qv).any(|&x| x > 0.25) {
            continue;
        }
        let tv = 0.5 * pv.iter().zip(&qv).map(|(a, b)| (a - b).abs()).sum::<f64>();
        if tv > 0.5 {
            let p = DiscreteDistribution::new(pv).expect("normalized weights");
            let q = DiscreteDistribution::new(qv).expect("normalized weights");
            return (p, q);
        }
    }
}

/// `(1/n) Σ_i Δ(n, p_i, q_i)` over a pair of distributions.
pub fn exact_symbol_sum(p: &DiscreteDistribution, q: &DiscreteDistribution, n: u64) -> Result<f64> {
    let mut total = 0.0;
    for (&a, &b) in p.probs().iter().zip(q.probs()) {
        total += exact_gap_binomial(n, a, b)?;
    }
    Ok(total / n as f64)
}

fn section4(config: &GridConfig) -> Vec<GridRow> {
    let mut rng = RngStream::new(config.seed, GridFamily::Section4.stream_base()).generator();
    let pairs: Vec<_> = (0..config.section4_pairs).map(|_| separated_pair(&mut rng)).collect();
    let points: Vec<_> = pairs
        .iter()
        .flat_map(|pair| {
            SECTION4_EPSILONS
                .iter()
                .flat_map(move |&eps| SECTION4_N.iter().map(move |&n| (pair, eps, n)))
        })
        .collect();
    points
        .into_par_iter()
        .map(|((p, q), eps, n)| {
            let row = GridRow {
                n: Some(n),
                k: Some(p.k()),
                epsilon: Some(eps),
                ..GridRow::new(GridFamily::Section4)
            };
            row.compare(exact_symbol_sum(p, q, n), closed_form_floor(eps, n, p.k()), 0.0)
        })
        .collect()
}

pub fn family_rows(family: GridFamily, config: &GridConfig) -> Vec<GridRow> {
    let mut rows = match family {
        GridFamily::BinomialLemma => binomial_lemma(config),
        GridFamily::PoissonLemma => poisson_lemma(config),
        GridFamily::Zolotarev => zolotarev(config),
        GridFamily::Claim => claim(config),
        GridFamily::ModulusFloor => modulus_floor(config),
        GridFamily::ArcsinRange => arcsin_range(config),
        GridFamily::Monotonicity => monotonicity(config),
        GridFamily::Section4 => section4(config),
    };
    for (i, r) in rows.iter_mut().enumerate() {
        r.index = i as u64;
    }
    rows
}

/// Runs the selected families in their canonical order.
pub fn verify_grids(config: &GridConfig) -> GridReport {
    let mut families = config.families.clone();
    families.sort();
    families.dedup();
    GridReport {
        rows: families.into_iter().flat_map(|f| family_rows(f, config)).collect(),
    }
}
