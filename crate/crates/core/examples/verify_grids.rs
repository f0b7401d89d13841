//! Every inequality grid, then the binomial grid again with inflated constants.

use closeness::gap::BoundConstants;
use closeness::harness::{verify_grids, write_grid, GridConfig, GridFamily};

fn main() -> closeness::Result<()> {
    let report = verify_grids(&GridConfig::default());
    for f in GridFamily::ALL {
        let (rows, bad) = report.family_counts(f);
        println!("{:<15} {rows:>6} rows {bad:>4} violations", f.as_str());
    }

    // the bound sits more than 20 times below the exact gap on this grid, so
    // the corruption has to be large to show
    let c = BoundConstants::BINOMIAL;
    let broken = GridConfig {
        families: vec![GridFamily::BinomialLemma],
        binomial_constants: BoundConstants {
            small_mass: 32.0 * c.small_mass,
            large_separation: 32.0 * c.large_separation,
            clt: 32.0 * c.clt,
        },
        ..GridConfig::default()
    };
    let report = verify_grids(&broken);
    println!("constants scaled 32x: {} violations, e.g.", report.violation_count());
    let sample: Vec<_> = report.violations().take(3).cloned().collect();
    write_grid(std::io::stdout().lock(), &sample)?;
    Ok(())
}
