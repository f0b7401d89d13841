//! Error rates over repeated trials and the empirical concentration of Z.

use closeness::distributions::DiscreteDistribution;
use closeness::harness::{concentration_profile, run_experiment, ExperimentSpec, RateTest, RATE_TEST_ALPHA};
use closeness::tester::{make_plan, TestParams};

fn main() -> closeness::Result<()> {
    let params = TestParams::new(30, 0.5, 0.1)?;
    let plan = make_plan(params, None)?;
    let u = DiscreteDistribution::uniform(30)?;
    let far = DiscreteDistribution::paired_perturbation(30, 0.5)?;

    let null = ExperimentSpec::new(u.clone(), u.clone(), plan, 100, 42)?;
    let r = run_experiment(&null)?;
    let check = RateTest::new(r.far_count, r.trials, params.delta, RATE_TEST_ALPHA)?;
    println!(
        "p = q:   far {}/{}  mean Z {:.2e} +- {:.1e}  p-value {:.3}",
        r.far_count,
        r.trials,
        r.z_mean,
        r.z_stderr(),
        check.p_value
    );

    let alt = ExperimentSpec::new(u, far, plan, 100, 42)?;
    let r = run_experiment(&alt)?;
    println!(
        "TV 0.5:  equal {}/{}  mean Z {:.4}  threshold {:.4}",
        r.equal_count(),
        r.trials,
        r.z_mean,
        plan.threshold
    );

    let profile = concentration_profile(&null, 12)?;
    println!(
        "P[|Z - mean| > {:.4}] = {} (bound {:.3e})",
        profile.deviation, profile.tail_rate, profile.bound
    );
    for (i, c) in profile.histogram.counts.iter().enumerate() {
        println!("{:>10.2e} {}", profile.histogram.edges[i], "#".repeat(*c as usize));
    }
    Ok(())
}
