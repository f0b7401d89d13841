//! The gap from characteristic functions, checked against enumeration.

use closeness::gap::{
    cf_binomial, cf_poisson, exact_gap_binomial, exact_gap_poisson, zolotarev_gap, PanelRule, QuadratureConfig,
};

fn main() -> closeness::Result<()> {
    let gk = QuadratureConfig::default();
    let simpson = QuadratureConfig {
        panel_rule: PanelRule::AdaptiveSimpson,
        ..gk
    };
    for (n, p, q) in [(16, 0.05, 0.2), (128, 0.1, 0.11), (40, 0.0, 0.25)] {
        let a = zolotarev_gap(|t| cf_binomial(n, p, t), |t| cf_binomial(n, q, t), &gk)?;
        let b = zolotarev_gap(|t| cf_binomial(n, p, t), |t| cf_binomial(n, q, t), &simpson)?;
        let e = exact_gap_binomial(n, p, q)?;
        println!("Bin({n}, {p}) vs Bin({n}, {q}): GK {a:.12} Simpson {b:.12} exact {e:.12}");
    }
    let (mu, lambda) = (2.0, 5.0);
    let z = zolotarev_gap(|t| cf_poisson(mu, t), |t| cf_poisson(lambda, t), &gk)?;
    println!(
        "Poi({mu}) vs Poi({lambda}): integral {z:.12} exact {:.12}",
        exact_gap_poisson(mu, lambda)?
    );
    Ok(())
}
