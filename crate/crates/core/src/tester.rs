//! The end-to-end closeness tester: sample size, threshold and verdict.
//!
//! The plan is certified with the constants of the gap floor and of
//! McDiarmid's inequality. Moving one of the `4n` samples shifts `Z` by at
//! most `c/n` with `c = 4`, so
//!
//! ```text
//! P[|Z - E Z| > Δ*/3] ≤ exp(-2 (Δ*/3)² / (4n (c/n)²)) = exp(-n Δ*² / (18 c²)),
//! ```
//!
//! and `n` is the smallest value making this at most `δ`, where `Δ*` is the
//! floor on `E[Z]` over the flattened domain `[4k]`. The threshold sits at
//! `Δ*/2`, so either error needs a deviation of at least `Δ*/2 > Δ*/3`.

use rand::Rng;

use crate::distributions::{flatten_samples, SampleBatch, FLATTEN_FACTOR};
use crate::error::{Error, Result};
use crate::gap::section4::closed_form_floor;
use crate::statistic::{compute_z, split_samples, MAX_SAMPLE_INFLUENCE};

/// Smallest per-batch sample size the gap floor is proven for.
pub const MIN_BATCH: u64 = 16;

/// Denominator `D` of the concentration exponent `n Δ*² / D` for a
/// per-sample influence of `influence / n`.
pub fn concentration_denominator(influence: f64) -> f64 {
    18.0 * influence * influence
}

/// `D = 288` for the statistic's actual per-sample influence `4/n`.
pub const CONCENTRATION_DENOMINATOR: f64 = 18.0 * MAX_SAMPLE_INFLUENCE * MAX_SAMPLE_INFLUENCE;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestParams {
    pub k: usize,
    pub epsilon: f64,
    pub delta: f64,
}

impl TestParams {
    pub fn new(k: usize, epsilon: f64, delta: f64) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("k must be at least 1".into()));
        }
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::Domain(format!("epsilon = {epsilon} not in (0, 1]")));
        }
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::Domain(format!("delta = {delta} not in (0, 1]")));
        }
        Ok(Self { k, epsilon, delta })
    }

    pub fn effective_k(&self) -> usize {
        FLATTEN_FACTOR * self.k
    }
}

/// The three shapes of the optimal sample complexity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ComplexityBranch {
    /// `log(1/δ) / ε²`
    Log,
    /// `k^{2/3} log^{1/3}(1/δ) / ε^{4/3}`
    KTwoThirds,
    /// `k^{1/2} log^{1/2}(1/δ) / ε²`
    KHalf,
}

impl ComplexityBranch {
    pub fn as_str(self) -> &'static str {
        match self {
            ComplexityBranch::Log => "log(1/delta)/eps^2",
            ComplexityBranch::KTwoThirds => "k^(2/3) log^(1/3)(1/delta)/eps^(4/3)",
            ComplexityBranch::KHalf => "k^(1/2) log^(1/2)(1/delta)/eps^2",
        }
    }

    /// Exponents of `(1/ε, k, log(1/δ))` in this branch.
    pub fn exponents(self) -> (f64, f64, f64) {
        match self {
            ComplexityBranch::Log => (2.0, 0.0, 1.0),
            ComplexityBranch::KTwoThirds => (4.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0),
            ComplexityBranch::KHalf => (2.0, 0.5, 0.5),
        }
    }
}

fn check_gap_args(n: u64, k: usize, epsilon: f64) -> Result<()> {
    if n < MIN_BATCH {
        return Err(Error::Domain(format!("n = {n} below the minimum {MIN_BATCH}")));
    }
    if k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::Domain(format!("epsilon = {epsilon} not in (0, 1]")));
    }
    Ok(())
}

/// `Δ*(n, k, ε) = (1/12) min(ε, (ε²/3)(n/k), (ε²/11) sqrt(n/k))`.
///
/// Callers applying flattening pass the flattened domain size.
pub fn delta_star(n: u64, k: usize, epsilon: f64) -> Result<f64> {
    check_gap_args(n, k, epsilon)?;
    Ok(closed_form_floor(epsilon, n, k))
}

/// Which term of `Δ*` is active, as a sample-complexity branch.
pub fn delta_star_branch(n: u64, k: usize, epsilon: f64) -> ComplexityBranch {
    let ratio = n as f64 / k as f64;
    let e2 = epsilon * epsilon;
    let terms = [epsilon, e2 / 3.0 * ratio, e2 / 11.0 * ratio.sqrt()];
    if terms[0] <= terms[1] && terms[0] <= terms[2] {
        ComplexityBranch::Log
    } else if terms[1] <= terms[2] {
        ComplexityBranch::KTwoThirds
    } else {
        ComplexityBranch::KHalf
    }
}

/// `exp(-n Δ*² / 288)`, the bound on `P[|Z - E Z| > Δ*/3]`.
pub fn mcdiarmid_bound(n: u64, delta_star: f64) -> f64 {
    mcdiarmid_bound_with(n, delta_star, CONCENTRATION_DENOMINATOR)
}

pub fn mcdiarmid_bound_with(n: u64, delta_star: f64, denominator: f64) -> f64 {
    (-(n as f64) * delta_star * delta_star / denominator).exp()
}

fn certified(n: u64, params: &TestParams) -> bool {
    let ds = closed_form_floor(params.epsilon, n, params.effective_k());
    mcdiarmid_bound(n, ds) <= params.delta
}

/// Smallest `n ≥ 16` with `exp(-n Δ*(n, 4k, ε)² / 288) ≤ δ`.
///
/// `n Δ*(n)²` is increasing in `n`, so a doubling pass followed by
/// bisection finds the exact threshold.
pub fn required_samples(params: &TestParams) -> u64 {
    if certified(MIN_BATCH, params) {
        return MIN_BATCH;
    }
    let mut hi = 2 * MIN_BATCH;
    while !certified(hi, params) {
        hi = hi.checked_mul(2).expect("sample size overflowed u64");
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if certified(mid, params) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// The three sample-complexity expressions at the unflattened `k`, without
/// constants, and the largest of them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexityTerms {
    pub log: f64,
    pub k_two_thirds: f64,
    pub k_half: f64,
    pub dominant: ComplexityBranch,
}

pub fn complexity_terms(params: &TestParams) -> ComplexityTerms {
    let l = (1.0 / params.delta).ln();
    let k = params.k as f64;
    let e = params.epsilon;
    let log = l / (e * e);
    let k_two_thirds = k.powf(2.0 / 3.0) * l.cbrt() / e.powf(4.0 / 3.0);
    let k_half = k.sqrt() * l.sqrt() / (e * e);
    let dominant = if log >= k_two_thirds && log >= k_half {
        ComplexityBranch::Log
    } else if k_two_thirds >= k_half {
        ComplexityBranch::KTwoThirds
    } else {
        ComplexityBranch::KHalf
    };
    ComplexityTerms {
        log,
        k_two_thirds,
        k_half,
        dominant,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestPlan {
    pub params: TestParams,
    /// Samples per batch; the tester consumes `2n` from each distribution.
    pub n: u64,
    pub effective_k: usize,
    pub delta_star: f64,
    pub threshold: f64,
}

impl TestPlan {
    /// Samples required from each of `p` and `q`.
    pub fn samples_per_side(&self) -> usize {
        2 * self.n as usize
    }
}

pub fn make_plan(params: TestParams, n_override: Option<u64>) -> Result<TestPlan> {
    let n = match n_override {
        Some(n) if n < MIN_BATCH => return Err(Error::Domain(format!("n = {n} below the minimum {MIN_BATCH}"))),
        Some(n) => n,
        None => required_samples(&params),
    };
    let effective_k = params.effective_k();
    let delta_star = delta_star(n, effective_k, params.epsilon)?;
    Ok(TestPlan {
        params,
        n,
        effective_k,
        delta_star,
        threshold: delta_star / 2.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decision {
    Equal,
    Far,
}

impl Decision {
    pub fn as_str(self) -> &'static str {
        match self {
            Decision::Equal => "equal",
            Decision::Far => "far",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verdict {
    pub decision: Decision,
    pub z_value: f64,
    pub threshold: f64,
    pub plan: TestPlan,
}

/// Flattens both batches with `rng` (first `p`, then `q`), splits them and
/// thresholds `Z`.
pub fn run_test<R: Rng + ?Sized>(
    plan: &TestPlan,
    samples_p: &SampleBatch,
    samples_q: &SampleBatch,
    rng: &mut R,
) -> Result<Verdict> {
    let need = plan.samples_per_side();
    for (name, batch) in [("p", samples_p), ("q", samples_q)] {
        if batch.len() != need {
            return Err(Error::Dimension(format!(
                "{name} batch has {} samples, the plan needs 2n = {need}",
                batch.len()
            )));
        }
        if batch.k() != plan.params.k {
            return Err(Error::Dimension(format!(
                "{name} batch is over {} symbols, the plan is for k = {}",
                batch.k(),
                plan.params.k
            )));
        }
    }
    let flat_p = flatten_samples(samples_p, rng);
    let flat_q = flatten_samples(samples_q, rng);
    let z_value = compute_z(&split_samples(&flat_p, &flat_q)?)?;
    let decision = if z_value >= plan.threshold {
        Decision::Far
    } else {
        Decision::Equal
    };
    Ok(Verdict {
        decision,
        z_value,
        threshold: plan.threshold,
        plan: *plan,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{sample_categorical, DiscreteDistribution};
    use crate::rng::RngStream;
    use approx::assert_abs_diff_eq;

    #[test]
    fn delta_star_examples() {
        assert_abs_diff_eq!(delta_star(900, 400, 0.3).unwrap(), 0.012272727 / 12.0, epsilon = 1e-9);
        assert_abs_diff_eq!(delta_star(900, 400, 0.3).unwrap(), 0.0010227, epsilon = 1e-7);
        assert!(delta_star(10_000, 1, 1e-9).unwrap() < 1e-10);
        assert_abs_diff_eq!(delta_star(u64::MAX / 4, 1, 0.5).unwrap(), 0.5 / 12.0, epsilon = 1e-15);
        assert!(delta_star(15, 4, 0.5).is_err());
        assert!(delta_star(16, 0, 0.5).is_err());
        assert!(delta_star(16, 4, 0.0).is_err());
    }

    #[test]
    fn required_samples_is_the_smallest_certified_n() {
        for (k, eps, delta) in [(1, 1.0, 0.5), (100, 0.5, 0.1), (400, 0.3, 0.1), (10, 0.2, 0.01)] {
            let params = TestParams::new(k, eps, delta).unwrap();
            let n = required_samples(&params);
            assert!(n >= MIN_BATCH);
            let ds = delta_star(n, 4 * k, eps).unwrap();
            assert!(mcdiarmid_bound(n, ds) <= delta);
            if n > MIN_BATCH {
                let prev = delta_star(n - 1, 4 * k, eps).unwrap();
                assert!(mcdiarmid_bound(n - 1, prev) > delta);
            }
        }
    }

    #[test]
    fn denominator_for_influence() {
        assert_eq!(concentration_denominator(2.0), 72.0);
        assert_eq!(CONCENTRATION_DENOMINATOR, 288.0);
    }

    #[test]
    fn certified_n_also_meets_the_weaker_exponent() {
        let params = TestParams::new(400, 0.3, 0.1).unwrap();
        let plan = make_plan(params, None).unwrap();
        assert!(mcdiarmid_bound_with(plan.n, plan.delta_star, 72.0) <= 0.1);
    }

    #[test]
    fn smallest_instance_closed_form() {
        // k' = 4, ε = 1: once n ≥ 484 the floor is Δ* = 1/12, so the
        // condition reads n / (144 · 288) ≥ ln 2, i.e. n ≥ 28746.2
        let n = required_samples(&TestParams::new(1, 1.0, 0.5).unwrap());
        assert_eq!(n, 28747);
        assert_eq!(delta_star_branch(n, 4, 1.0), ComplexityBranch::Log);
    }

    #[test]
    fn delta_one_needs_only_the_minimum() {
        assert_eq!(required_samples(&TestParams::new(50, 0.1, 1.0).unwrap()), MIN_BATCH);
    }

    #[test]
    fn plan_fields() {
        let params = TestParams::new(400, 0.3, 0.1).unwrap();
        let plan = make_plan(params, None).unwrap();
        assert_eq!(plan.effective_k, 1600);
        assert_eq!(plan.threshold, plan.delta_star / 2.0);
        assert!(mcdiarmid_bound(plan.n, plan.delta_star) <= 0.1);
        let fixed = make_plan(params, Some(64)).unwrap();
        assert_eq!(fixed.n, 64);
        assert!(make_plan(params, Some(15)).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(TestParams::new(0, 0.5, 0.5).is_err());
        assert!(TestParams::new(3, 1.5, 0.5).is_err());
        assert!(TestParams::new(3, 0.5, 0.0).is_err());
        assert!(TestParams::new(3, 1.0, 1.0).is_ok());
    }

    #[test]
    fn complexity_branches() {
        let t = complexity_terms(&TestParams::new(1_000_000, 0.5, 0.5).unwrap());
        assert_eq!(t.dominant, ComplexityBranch::KTwoThirds);
        // log(1/δ)/ε² needs log(1/δ) > k ε and log(1/δ) > k
        let t = complexity_terms(&TestParams::new(1, 0.5, 1e-6).unwrap());
        assert_eq!(t.dominant, ComplexityBranch::Log);
        let t = complexity_terms(&TestParams::new(10, 0.01, 0.5).unwrap());
        assert_eq!(t.dominant, ComplexityBranch::KHalf);
        assert!(t.k_half > t.log);
    }

    #[test]
    fn identical_batches_at_k1_give_zero() {
        let params = TestParams::new(1, 0.5, 0.5).unwrap();
        let plan = make_plan(params, Some(16)).unwrap();
        let batch = SampleBatch::new(vec![1; 32], 1).unwrap();
        let mut rng = RngStream::new(5, 0).generator();
        let v = run_test(&plan, &batch, &batch, &mut rng).unwrap();
        // flattened to 4 symbols, Z is a sum of integer terms that need not vanish
        assert_eq!(v.decision == Decision::Far, v.z_value >= v.threshold);
    }

    #[test]
    fn run_test_is_reproducible_and_checks_sizes() {
        let params = TestParams::new(20, 0.5, 0.2).unwrap();
        let plan = make_plan(params, Some(200)).unwrap();
        let p = DiscreteDistribution::uniform(20).unwrap();
        let mut rng = RngStream::new(9, 0).generator();
        let a = sample_categorical(&p, 400, &mut rng);
        let b = sample_categorical(&p, 400, &mut rng);
        let v1 = run_test(&plan, &a, &b, &mut RngStream::new(9, 1).generator()).unwrap();
        let v2 = run_test(&plan, &a, &b, &mut RngStream::new(9, 1).generator()).unwrap();
        assert_eq!(v1, v2);
        assert_eq!(v1.decision == Decision::Far, v1.z_value >= v1.threshold);
        let short = a.truncated(399);
        assert!(matches!(
            run_test(&plan, &short, &b, &mut rng),
            Err(Error::Dimension(_))
        ));
    }
}
