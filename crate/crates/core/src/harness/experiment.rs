//! Repeated end-to-end tests on known distributions.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::distributions::{sample_categorical, DiscreteDistribution};
use crate::error::{Error, Result};
use crate::gap::pmf::CompensatedSum;
use crate::rng::RngStream;
use crate::tester::{mcdiarmid_bound, run_test, Decision, TestPlan};

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub p: DiscreteDistribution,
    pub q: DiscreteDistribution,
    pub plan: TestPlan,
    pub trials: u64,
    pub seed: u64,
    /// Keep every trial's record in the result.
    pub keep_trials: bool,
}

impl ExperimentSpec {
    pub fn new(
        p: DiscreteDistribution,
        q: DiscreteDistribution,
        plan: TestPlan,
        trials: u64,
        seed: u64,
    ) -> Result<Self> {
        if trials == 0 {
            return Err(Error::Domain("an experiment needs at least one trial".into()));
        }
        for (name, d) in [("p", &p), ("q", &q)] {
            if d.k() != plan.params.k {
                return Err(Error::Dimension(format!(
                    "{name} is over {} symbols, the plan is for k = {}",
                    d.k(),
                    plan.params.k
                )));
            }
        }
        Ok(Self {
            p,
            q,
            plan,
            trials,
            seed,
            keep_trials: true,
        })
    }

    pub fn without_trial_records(mut self) -> Self {
        self.keep_trials = false;
        self
    }

    fn validate(&self) -> Result<()> {
        Self::new(self.p.clone(), self.q.clone(), self.plan, self.trials, self.seed).map(|_| ())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord {
    pub trial: u64,
    pub stream: u64,
    pub z: f64,
    pub threshold: f64,
    pub decision: Decision,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub trials: u64,
    pub far_count: u64,
    pub far_rate: f64,
    pub z_mean: f64,
    /// Sample standard deviation (`trials - 1` denominator; 0 for one trial).
    pub z_stddev: f64,
    pub wall_time: Duration,
    pub records: Option<Vec<TrialRecord>>,
}

impl ExperimentResult {
    pub fn equal_count(&self) -> u64 {
        self.trials - self.far_count
    }

    pub fn equal_rate(&self) -> f64 {
        self.equal_count() as f64 / self.trials as f64
    }

    /// Standard error of `z_mean`.
    pub fn z_stderr(&self) -> f64 {
        self.z_stddev / (self.trials as f64).sqrt()
    }
}

/// One trial on stream `trial` of `seed`: draw `2n` samples from `p`, then
/// `2n` from `q`, then run the tester with the same generator.
pub fn run_trial(spec: &ExperimentSpec, trial: u64) -> Result<TrialRecord> {
    let stream = RngStream::new(spec.seed, trial);
    let mut rng = stream.generator();
    let m = spec.plan.samples_per_side();
    let from_p = sample_categorical(&spec.p, m, &mut rng);
    let from_q = sample_categorical(&spec.q, m, &mut rng);
    let verdict = run_test(&spec.plan, &from_p, &from_q, &mut rng)?;
    Ok(TrialRecord {
        trial,
        stream: stream.stream,
        z: verdict.z_value,
        threshold: verdict.threshold,
        decision: verdict.decision,
    })
}

fn run_trials(spec: &ExperimentSpec) -> Result<Vec<TrialRecord>> {
    spec.validate()?;
    (0..spec.trials).into_par_iter().map(|t| run_trial(spec, t)).collect()
}

fn mean_and_stddev(z: &[f64]) -> (f64, f64) {
    let n = z.len() as f64;
    let mean = z.iter().copied().collect::<CompensatedSum>().value() / n;
    if z.len() < 2 {
        return (mean, 0.0);
    }
    let ss = z
        .iter()
        .map(|x| (x - mean) * (x - mean))
        .collect::<CompensatedSum>()
        .value();
    (mean, (ss / (n - 1.0)).sqrt())
}

/// Runs the trials on the current rayon pool. Records come back in trial
/// order and are reduced sequentially, so the result does not depend on the
/// number of threads.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    let start = Instant::now();
    let records = run_trials(spec)?;
    let far_count = records.iter().filter(|r| r.decision == Decision::Far).count() as u64;
    let z: Vec<f64> = records.iter().map(|r| r.z).collect();
    let (z_mean, z_stddev) = mean_and_stddev(&z);
    Ok(ExperimentResult {
        trials: spec.trials,
        far_count,
        far_rate: far_count as f64 / spec.trials as f64,
        z_mean,
        z_stddev,
        wall_time: start.elapsed(),
        records: spec.keep_trials.then_some(records),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    /// `bins + 1` increasing edges; the last bin is closed on the right.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn new(values: &[f64], bins: usize) -> Self {
        let bins = bins.max(1);
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if values.is_empty() {
            return Self {
                edges: vec![0.0; bins + 1],
                counts: vec![0; bins],
            };
        }
        let width = if hi > lo { (hi - lo) / bins as f64 } else { 1.0 };
        let edges = (0..=bins).map(|i| lo + width * i as f64).collect();
        let mut counts = vec![0; bins];
        for &v in values {
            let i = (((v - lo) / width) as usize).min(bins - 1);
            counts[i] += 1;
        }
        Self { edges, counts }
    }
}

/// Empirical law of `Z` next to the concentration bound of the plan.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcentrationProfile {
    pub trials: u64,
    pub z_values: Vec<f64>,
    pub histogram: Histogram,
    pub mean: f64,
    /// Standard error of `mean`.
    pub stderr: f64,
    /// `Δ*/3`.
    pub deviation: f64,
    /// Trials with `|Z - mean| > Δ*/3`.
    pub tail_count: u64,
    pub tail_rate: f64,
    /// Binomial standard error of `tail_rate` at the bound.
    pub tail_stderr: f64,
    /// `exp(-n Δ*² / 288)`.
    pub bound: f64,
}

impl ConcentrationProfile {
    /// `tail_rate ≤ bound + 3 · tail_stderr`.
    pub fn within_bound(&self) -> bool {
        self.tail_rate <= self.bound + 3.0 * self.tail_stderr
    }
}

pub fn concentration_profile(spec: &ExperimentSpec, bins: usize) -> Result<ConcentrationProfile> {
    let records = run_trials(spec)?;
    let z_values: Vec<f64> = records.iter().map(|r| r.z).collect();
    let (mean, sd) = mean_and_stddev(&z_values);
    let trials = spec.trials;
    let deviation = spec.plan.delta_star / 3.0;
    let tail_count = z_values.iter().filter(|z| (*z - mean).abs() > deviation).count() as u64;
    let bound = mcdiarmid_bound(spec.plan.n, spec.plan.delta_star);
    Ok(ConcentrationProfile {
        trials,
        histogram: Histogram::new(&z_values, bins),
        z_values,
        mean,
        stderr: sd / (trials as f64).sqrt(),
        deviation,
        tail_count,
        tail_rate: tail_count as f64 / trials as f64,
        tail_stderr: (bound * (1.0 - bound) / trials as f64).sqrt(),
        bound,
    })
}
