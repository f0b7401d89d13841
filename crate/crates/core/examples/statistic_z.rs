//! The four-table statistic Z and how far one sample can move it.

use closeness::distributions::SampleBatch;
use closeness::statistic::{bounded_difference_audit, compute_z, split_samples, Table};

fn main() -> closeness::Result<()> {
    // 2n = 4 samples from each side over k = 2
    let from_p = SampleBatch::new(vec![1, 1, 1, 2], 2)?;
    let from_q = SampleBatch::new(vec![2, 2, 2, 2], 2)?;
    let split = split_samples(&from_p, &from_q)?;
    for t in Table::ALL {
        println!("{t:?}: {:?}", split.table(t).counts());
    }
    println!("Z = {}", compute_z(&split)?);

    // moving one Y sample from symbol 2 to symbol 1 pulls Y toward X and
    // away from Y' at once
    let d = bounded_difference_audit(&split, Table::Y, 2, 1)?;
    println!("|dZ| = {d} = {} / n", d * split.n() as f64);
    Ok(())
}
