//! Total variation distance and the four-way flattening of the domain.

use closeness::distributions::{
    flatten_distribution, flatten_samples, sample_categorical, tv_distance, DiscreteDistribution,
};
use closeness::rng::RngStream;

fn main() -> closeness::Result<()> {
    let p = DiscreteDistribution::new(vec![0.7, 0.2, 0.1])?;
    let q = DiscreteDistribution::new(vec![0.4, 0.4, 0.2])?;
    println!("TV(p, q)            = {}", tv_distance(&p, &q)?);

    let (fp, fq) = (flatten_distribution(&p), flatten_distribution(&q));
    println!("TV after flattening = {}", tv_distance(&fp, &fq)?);
    println!("max mass {} -> {} on {} symbols", p.max_mass(), fp.max_mass(), fp.k());

    let mut rng = RngStream::new(1, 0).generator();
    let batch = sample_categorical(&p, 10, &mut rng);
    let flat = flatten_samples(&batch, &mut rng);
    println!("samples   {:?}", batch.symbols());
    println!("flattened {:?}", flat.symbols());
    Ok(())
}
