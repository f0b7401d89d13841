//! Certified sample sizes and the three asymptotic terms they track.

use closeness::tester::{complexity_terms, delta_star_branch, make_plan, TestParams};

fn main() -> closeness::Result<()> {
    println!(
        "{:>10} {:>6} {:>6} {:>12}  active floor term / largest asymptotic term",
        "k", "eps", "delta", "n"
    );
    for (k, eps, delta) in [
        (1, 1.0, 0.5),
        (100, 0.5, 0.1),
        (10_000, 0.25, 0.05),
        (1_000_000_000, 1.0, 0.5),
    ] {
        let params = TestParams::new(k, eps, delta)?;
        let plan = make_plan(params, None)?;
        let active = delta_star_branch(plan.n, plan.effective_k, eps);
        let terms = complexity_terms(&params);
        println!(
            "{k:>10} {eps:>6} {delta:>6} {:>12}  {} / {}",
            plan.n,
            active.as_str(),
            terms.dominant.as_str()
        );
    }
    Ok(())
}
