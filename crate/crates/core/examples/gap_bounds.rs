//! Closed-form lower bounds, their regimes, and the phase inequality.

use std::f64::consts::PI;

use closeness::gap::{claim_inequality_check, exact_gap_binomial, lower_bound_binomial, lower_bound_poisson};

fn main() -> closeness::Result<()> {
    println!(
        "{:>4} {:>6} {:>6} {:>12} {:>12}  regime",
        "n", "p", "q", "exact", "bound"
    );
    for (n, p, q) in [
        (16, 0.0, 0.03125),
        (64, 0.05, 0.25),
        (128, 0.2, 0.21),
        (128, 0.0, 0.001),
    ] {
        let b = lower_bound_binomial(n, p, q)?;
        let e = exact_gap_binomial(n, p, q)?;
        println!("{n:>4} {p:>6} {q:>6} {e:>12.6} {:>12.6}  {}", b.value, b.regime);
    }
    let b = lower_bound_poisson(10.0, 13.0)?;
    println!("Poisson 10 vs 13: bound {:.6} ({})", b.value, b.regime);

    for t in [PI / 100.0, PI / 2.0, PI] {
        let c = claim_inequality_check(64, 0.05, 0.2, t)?;
        println!(
            "t = {t:.4}: {:.6} < {:.6} <= {:.6} ok={}",
            c.lower, c.lhs, c.upper, c.ok
        );
    }
    Ok(())
}
