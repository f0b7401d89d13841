//! End-to-end acceptance checks. Each test writes one status line.

mod common;

use std::f64::consts::PI;

use closeness::distributions::{tv_distance, DiscreteDistribution, SampleBatch};
use closeness::gap::{
    cf_binomial, cf_poisson, claim_inequality_check, exact_gap_binomial, exact_gap_poisson, lower_bound_binomial,
    lower_bound_poisson, zolotarev_gap, QuadratureConfig,
};
use closeness::harness::grids::{poisson_grid_means, probability_grid, separated_pair, BINOMIAL_GRID_N};
use closeness::harness::{
    run_experiment, verify_grids, ExperimentSpec, GridConfig, GridFamily, RateTest, RATE_TEST_ALPHA,
};
use closeness::rng::RngStream;
use closeness::statistic::{bounded_difference_audit, compute_z, split_samples, Table};
use closeness::tester::{
    complexity_terms, delta_star_branch, make_plan, required_samples, ComplexityBranch, TestParams,
};
use common::status;
use rand::Rng;

#[test]
fn criterion_1_binomial_lemma_grid() {
    let c = [1.0 / 8.0, 1.0 / 16.0, 1.0 / 40.0];
    let ps = probability_grid();
    let (mut points, mut violations, mut worst) = (0, 0, f64::INFINITY);
    for &n in &BINOMIAL_GRID_N {
        for &p in &ps {
            for &q in &ps {
                let oracle = common::gap(
                    &common::binomial_pmf(n as usize, p),
                    &common::binomial_pmf(n as usize, q),
                );
                let exact = exact_gap_binomial(n, p, q).unwrap();
                assert!(
                    (exact - oracle).abs() <= 1e-11 * (1.0 + oracle),
                    "exact {exact} vs oracle {oracle}"
                );
                let bound = common::three_term_min(c, n as f64 * p, n as f64 * q);
                let lib = lower_bound_binomial(n, p, q).unwrap().value;
                assert!((lib - bound).abs() <= 1e-15 * (1.0 + bound), "bound {lib} vs {bound}");
                let margin = exact - bound;
                if p != q {
                    worst = worst.min(margin);
                }
                violations += usize::from(margin < -1e-10);
                points += 1;
            }
        }
    }
    let report = verify_grids(&GridConfig::only(&[GridFamily::BinomialLemma]));
    let pass = points == 3380 && violations == 0 && report.rows.len() == points && report.violation_count() == 0;
    status(
        1,
        pass,
        &format!("{points} points, {violations} violations, smallest margin off the diagonal {worst:.3e}"),
    );
    assert!(pass);
}

#[test]
fn criterion_2_poisson_lemma_grid() {
    let c = [1.0 / 20.0, 1.0 / 5.0, 1.0 / 7.0];
    let means = poisson_grid_means();
    let pmfs: Vec<Vec<f64>> = means.iter().map(|&m| common::poisson_pmf(m)).collect();
    let (mut points, mut violations, mut worst) = (0, 0, f64::INFINITY);
    for (i, &mu) in means.iter().enumerate() {
        for (j, &lambda) in means.iter().enumerate() {
            let oracle = common::gap(&pmfs[i], &pmfs[j]);
            let exact = exact_gap_poisson(mu, lambda).unwrap();
            assert!(
                (exact - oracle).abs() <= 1e-9,
                "mu {mu} lambda {lambda}: {exact} vs {oracle}"
            );
            let bound = common::three_term_min(c, mu, lambda);
            assert!((lower_bound_poisson(mu, lambda).unwrap().value - bound).abs() <= 1e-15 * (1.0 + bound));
            let margin = exact - bound;
            if mu != lambda {
                worst = worst.min(margin);
            }
            violations += usize::from(margin < -1e-9);
            points += 1;
        }
    }
    let report = verify_grids(&GridConfig::only(&[GridFamily::PoissonLemma]));
    let pass = violations == 0 && report.rows.len() == points && report.violation_count() == 0;
    status(
        2,
        pass,
        &format!(
            "{} means up to {}, {points} pairs, {violations} violations, smallest margin off the diagonal {worst:.3e}",
            means.len(),
            means.last().unwrap()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_3_zolotarev_cross_validation() {
    let config = QuadratureConfig::default();
    let mut rng = RngStream::new(2024, 3).generator();
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.random_range(1..=128u64);
        let (p, q) = (rng.random_range(0.0..=0.25), rng.random_range(0.0..=0.25));
        let z = zolotarev_gap(|t| cf_binomial(n, p, t), |t| cf_binomial(n, q, t), &config).unwrap();
        let oracle = common::gap(
            &common::binomial_pmf(n as usize, p),
            &common::binomial_pmf(n as usize, q),
        );
        worst = worst.max((z - oracle).abs());
    }
    for _ in 0..100 {
        let (mu, lambda) = (rng.random_range(0.0..=32.0), rng.random_range(0.0..=32.0));
        let z = zolotarev_gap(|t| cf_poisson(mu, t), |t| cf_poisson(lambda, t), &config).unwrap();
        let oracle = common::gap(&common::poisson_pmf(mu), &common::poisson_pmf(lambda));
        worst = worst.max((z - oracle).abs());
    }
    let report = verify_grids(&GridConfig::only(&[GridFamily::Zolotarev]));
    let pass = worst <= 1e-6 && report.rows.len() == 200 && report.violation_count() == 0;
    status(3, pass, &format!("200 pairs, largest |integral - exact| = {worst:.3e}"));
    assert!(pass);
}

#[test]
fn criterion_4_claim_grid() {
    // phase of 1 - p + p e^{it} through atan2, not the library's arcsine
    let phase = |p: f64, t: f64| (p * t.sin()).atan2(1.0 - p + p * t.cos());
    let ps: Vec<f64> = (0..=5).map(|j| j as f64 * 0.05).collect();
    let (mut points, mut violations) = (0, 0);
    let mut smallest_strict = f64::INFINITY;
    for n in [16u64, 64] {
        for &p in &ps {
            for &q in &ps {
                if p == q {
                    continue;
                }
                for j in 1..=200 {
                    let t = PI * j as f64 / 200.0;
                    let lhs = 2.0 * n as f64 * (phase(p, t) - phase(q, t)).abs();
                    let lower = 2.0 * n as f64 * (p - q).abs() * t.sin();
                    let upper = 14.0 * n as f64 * (p - q).abs() * t;
                    let lib = claim_inequality_check(n, p, q, t).unwrap();
                    assert!((lib.lhs - lhs).abs() <= 1e-12 * (1.0 + lhs));
                    smallest_strict = smallest_strict.min(lhs - lower);
                    let ok = lhs > lower && lhs <= upper;
                    violations += usize::from(!ok || !lib.ok);
                    points += 1;
                }
            }
        }
    }
    let pass = points == 12000 && violations == 0 && smallest_strict > 0.0;
    status(
        4,
        pass,
        &format!("{points} points, {violations} violations, smallest strict margin {smallest_strict:.3e}"),
    );
    assert!(pass);
}

#[test]
fn criterion_5_gap_floor_assembly() {
    let floor =
        |eps: f64, n: f64, k: f64| eps.min(eps * eps / 3.0 * n / k).min(eps * eps / 11.0 * (n / k).sqrt()) / 12.0;
    let mut rng = RngStream::new(2024, 5).generator();
    let (mut checks, mut violations, mut worst_ratio) = (0, 0, f64::INFINITY);
    for _ in 0..50 {
        let (p, q) = separated_pair(&mut rng);
        let tv = tv_distance(&p, &q).unwrap();
        for eps in [0.1, 0.3, 0.5] {
            assert!(tv > eps);
            for n in [64u64, 256] {
                let sum: f64 = p
                    .probs()
                    .iter()
                    .zip(q.probs())
                    .map(|(&a, &b)| {
                        common::gap(
                            &common::binomial_pmf(n as usize, a),
                            &common::binomial_pmf(n as usize, b),
                        )
                    })
                    .sum::<f64>()
                    / n as f64;
                let f = floor(eps, n as f64, p.k() as f64);
                worst_ratio = worst_ratio.min(sum / f);
                violations += usize::from(sum < f);
                checks += 1;
            }
        }
    }
    let report = verify_grids(&GridConfig::only(&[GridFamily::Section4]));
    let pass = violations == 0 && report.violation_count() == 0 && report.rows.len() == 300;
    status(
        5,
        pass,
        &format!("{checks} checks on 50 pairs, {violations} violations, smallest sum/floor {worst_ratio:.3}"),
    );
    assert!(pass);
}

fn plan_100() -> closeness::tester::TestPlan {
    make_plan(TestParams::new(100, 0.5, 0.1).unwrap(), None).unwrap()
}

#[test]
fn criterion_6_null_calibration() {
    let u = DiscreteDistribution::uniform(100).unwrap();
    let plan = plan_100();
    let spec = ExperimentSpec::new(u.clone(), u, plan, 200, 6)
        .unwrap()
        .without_trial_records();
    let r = run_experiment(&spec).unwrap();
    let test = RateTest::new(r.far_count, r.trials, 0.1, RATE_TEST_ALPHA).unwrap();
    let pass = test.passes();
    status(
        6,
        pass,
        &format!(
            "n = {}, far in {}/200 trials, one-sided p = {:.3e}",
            plan.n, r.far_count, test.p_value
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_7_power_at_distance_one_half() {
    let u = DiscreteDistribution::uniform(100).unwrap();
    let q = DiscreteDistribution::paired_perturbation(100, 0.5).unwrap();
    assert!((tv_distance(&u, &q).unwrap() - 0.5).abs() < 1e-12);
    let plan = plan_100();
    let spec = ExperimentSpec::new(u, q, plan, 200, 7).unwrap().without_trial_records();
    let r = run_experiment(&spec).unwrap();
    let test = RateTest::new(r.equal_count(), r.trials, 0.1, RATE_TEST_ALPHA).unwrap();
    let pass = test.passes();
    status(
        7,
        pass,
        &format!(
            "n = {}, equal in {}/200 trials, one-sided p = {:.3e}",
            plan.n,
            r.equal_count(),
            test.p_value
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_8_bounded_differences() {
    let mut rng = RngStream::new(2024, 8).generator();
    let mut worst_scaled: i64 = 0;
    let mut worst_case = String::new();
    for _ in 0..1000 {
        let k = rng.random_range(2..=8usize);
        let n = rng.random_range(1..=12usize);
        let draw = |rng: &mut rand_chacha::ChaCha20Rng| {
            SampleBatch::new((0..2 * n).map(|_| rng.random_range(1..=k)).collect(), k).unwrap()
        };
        let (bp, bq) = (draw(&mut rng), draw(&mut rng));
        let split = split_samples(&bp, &bq).unwrap();
        let which = Table::ALL[rng.random_range(0..4)];
        let table = split.table(which).counts().to_vec();
        // pick one of the table's samples uniformly and a different destination
        let mut pick = rng.random_range(0..n as u64);
        let from = table.iter().position(|&c| {
            if pick < c {
                true
            } else {
                pick -= c;
                false
            }
        });
        let from = from.unwrap() + 1;
        let to = loop {
            let s = rng.random_range(1..=k);
            if s != from {
                break s;
            }
        };
        let d = bounded_difference_audit(&split, which, from, to).unwrap();
        let mut tables: Vec<Vec<u64>> = Table::ALL.iter().map(|t| split.table(*t).counts().to_vec()).collect();
        let slot = Table::ALL.iter().position(|t| *t == which).unwrap();
        tables[slot][from - 1] -= 1;
        tables[slot][to - 1] += 1;
        let before = common::z_numerator(
            split.x.counts(),
            split.xprime.counts(),
            split.y.counts(),
            split.yprime.counts(),
        );
        let after = common::z_numerator(&tables[0], &tables[1], &tables[2], &tables[3]);
        let scaled = (after - before).abs();
        assert!((d * n as f64 - scaled as f64).abs() < 1e-9, "audit {d} vs {scaled}/{n}");
        assert_eq!(compute_z(&split).unwrap(), before as f64 / n as f64);
        if scaled > worst_scaled {
            worst_scaled = scaled;
            worst_case = format!("n = {n}, k = {k}, table {which:?}, {from} -> {to}");
        }
    }
    let pass = worst_scaled <= 2;
    status(
        8,
        pass,
        &format!("1000 mutations, max |dZ| = {worst_scaled}/n against 2/n; worst: {worst_case}"),
    );
    assert!(pass, "a single move changed Z by {worst_scaled}/n > 2/n ({worst_case})");
}

/// `2^exponent` for one halving of `ε`, doubling of `k` or doubling of
/// `log(1/δ)` inside a branch.
fn predicted_factor(branch: ComplexityBranch, axis: usize) -> f64 {
    let (e, k, l) = branch.exponents();
    2f64.powf([e, k, l][axis])
}

#[test]
fn criterion_9_regime_scaling() {
    let bases: [(usize, f64, f64); 8] = [
        (1, 0.5, 0.1),
        (10, 1.0, 0.01),
        (100, 0.25, 0.05),
        (1_000, 0.5, 0.1),
        (100_000, 0.5, 0.5),
        (1_000_000, 0.5, 0.5),
        (1_000_000_000, 1.0, 0.5),
        (40_000_000_000, 0.5, 0.1),
    ];
    let axes = ["1/eps x2", "k x2", "log(1/delta) x2"];
    let (mut checks, mut failures) = (0, Vec::new());
    let mut seen = std::collections::HashSet::new();
    for &(k, eps, delta) in &bases {
        let base = TestParams::new(k, eps, delta).unwrap();
        let n0 = required_samples(&base);
        let b0 = delta_star_branch(n0, base.effective_k(), eps);
        seen.insert(b0);
        let moved = [
            TestParams::new(k, eps / 2.0, delta).unwrap(),
            TestParams::new(2 * k, eps, delta).unwrap(),
            TestParams::new(k, eps, delta * delta).unwrap(),
        ];
        for (axis, params) in moved.iter().enumerate() {
            let n1 = required_samples(params);
            let b1 = delta_star_branch(n1, params.effective_k(), params.epsilon);
            let ratio = n1 as f64 / n0 as f64;
            let (f0, f1) = (predicted_factor(b0, axis), predicted_factor(b1, axis));
            let ok = ratio >= 0.85 * f0.min(f1) && ratio <= 1.15 * f0.max(f1);
            checks += 1;
            if !ok {
                failures.push(format!(
                    "k={k} eps={eps} delta={delta} {}: ratio {ratio:.4}, predicted {f0:.4}..{f1:.4} ({} -> {}; dominant term {})",
                    axes[axis],
                    b0.as_str(),
                    b1.as_str(),
                    complexity_terms(&base).dominant.as_str()
                ));
            }
        }
    }
    let all_regimes = seen.len() == 3;
    let pass = failures.is_empty() && all_regimes;
    status(
        9,
        pass,
        &format!(
            "{checks} scaling checks over {} regimes, {} outside brackets",
            seen.len(),
            failures.len()
        ),
    );
    assert!(all_regimes, "grid covered only {seen:?}");
    assert!(failures.is_empty(), "{failures:#?}");
}
