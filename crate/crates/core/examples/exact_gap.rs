//! Exact expectation gaps by enumeration, next to a Monte Carlo estimate.

use closeness::distributions::sample_binomial;
use closeness::gap::{exact_gap_binomial, exact_gap_poisson};
use closeness::rng::RngStream;

fn main() -> closeness::Result<()> {
    let (n, p, q) = (16, 0.05, 0.20);
    let exact = exact_gap_binomial(n, p, q)?;

    let mut rng = RngStream::new(3, 0).generator();
    let trials = 200_000;
    let mut total = 0.0;
    for _ in 0..trials {
        let x = sample_binomial(n, p, &mut rng)? as f64;
        let xp = sample_binomial(n, p, &mut rng)? as f64;
        let y = sample_binomial(n, q, &mut rng)? as f64;
        let yp = sample_binomial(n, q, &mut rng)? as f64;
        total += (x - y).abs() + (xp - yp).abs() - (x - xp).abs() - (y - yp).abs();
    }
    println!(
        "binomial n={n} p={p} q={q}: exact {exact:.6}, simulated {:.6}",
        total / trials as f64
    );

    for (mu, lambda) in [(0.0, 0.25), (2.0, 5.0), (20.0, 21.0)] {
        println!("poisson mu={mu} lambda={lambda}: {:.9}", exact_gap_poisson(mu, lambda)?);
    }
    Ok(())
}
