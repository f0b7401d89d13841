//! Globally adaptive quadrature on a finite interval.
//!
//! The interval with the largest error estimate is bisected until the
//! summed estimate drops under the absolute tolerance or the interval budget
//! runs out. Two panel rules are available: Gauss-Kronrod 7/15 and Simpson
//! with one Richardson step.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PanelRule {
    AdaptiveSimpson,
    #[default]
    GaussKronrod,
}

/// Accuracy and folding parameters for the characteristic-function integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Target absolute error of the final integral value.
    pub abs_tolerance: f64,
    /// Number of period translates summed explicitly in the folded kernel.
    pub fold_terms: usize,
    pub panel_rule: PanelRule,
    /// Bisection budget.
    pub max_intervals: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tolerance: 1e-8,
            fold_terms: 64,
            panel_rule: PanelRule::GaussKronrod,
            max_intervals: 4096,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.abs_tolerance.is_nan() || self.abs_tolerance <= 0.0 || self.abs_tolerance.is_infinite() {
            return Err(Error::Domain(format!(
                "abs_tolerance must be positive, got {}",
                self.abs_tolerance
            )));
        }
        if self.fold_terms == 0 {
            return Err(Error::Domain("fold_terms must be at least 1".into()));
        }
        if self.max_intervals == 0 {
            return Err(Error::Domain("max_intervals must be at least 1".into()));
        }
        Ok(())
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error_estimate: f64,
    pub intervals: usize,
    pub evaluations: usize,
}

// Kronrod abscissae in decreasing order; the Gauss nodes are the odd entries.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, usize) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs(), 15)
}

fn simpson_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, usize) {
    let h = b - a;
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let (fl, fr) = (f(0.5 * (a + m)), f(0.5 * (m + b)));
    let coarse = h / 6.0 * (fa + 4.0 * fm + fb);
    let fine = h / 12.0 * (fa + 4.0 * fl + 2.0 * fm + 4.0 * fr + fb);
    let diff = fine - coarse;
    (fine + diff / 15.0, diff.abs() / 15.0, 5)
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// Integrates `f` over `[a, b]` to absolute accuracy `tolerance`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tolerance: f64,
    rule: PanelRule,
    max_intervals: usize,
) -> Result<Integral> {
    let panel = |lo: f64, hi: f64| match rule {
        PanelRule::GaussKronrod => kronrod_panel(&f, lo, hi),
        PanelRule::AdaptiveSimpson => simpson_panel(&f, lo, hi),
    };
    let initial = 16.min(max_intervals).max(1);
    let width = (b - a) / initial as f64;
    let mut evaluations = 0;
    let mut segments: Vec<Segment> = (0..initial)
        .map(|i| {
            let lo = a + width * i as f64;
            let hi = if i + 1 == initial { b } else { lo + width };
            let (value, error, evals) = panel(lo, hi);
            evaluations += evals;
            Segment {
                a: lo,
                b: hi,
                value,
                error,
            }
        })
        .collect();

    let min_width = (b - a).abs() * 1e-13;
    loop {
        let total_error: f64 = segments.iter().map(|s| s.error).sum();
        if total_error <= tolerance {
            break;
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .filter(|(_, s)| (s.b - s.a).abs() > min_width)
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .unwrap_or((usize::MAX, &segments[0]));
        if segments.len() >= max_intervals || worst == usize::MAX {
            return Err(Error::Numeric {
                estimate: segments.iter().map(|s| s.value).sum(),
                error_estimate: total_error,
                tolerance,
                intervals: segments.len(),
            });
        }
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        for (lo, hi) in [(seg.a, mid), (mid, seg.b)] {
            let (value, error, evals) = panel(lo, hi);
            evaluations += evals;
            segments.push(Segment {
                a: lo,
                b: hi,
                value,
                error,
            });
        }
    }
    segments.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = segments
        .iter()
        .map(|s| s.value)
        .collect::<super::pmf::CompensatedSum>()
        .value();
    Ok(Integral {
        value,
        error_estimate: segments.iter().map(|s| s.error).sum(),
        intervals: segments.len(),
        evaluations,
    })
}
