//! Simulating a threshold question through the block-parity protocol, and
//! how the composed answer relates to the distance between the inputs.

use ctxlab::functions::hd_threshold;
use ctxlab::primitives::{hamming_distance, BitVector};
use ctxlab::rng::substream;
use ctxlab::simulation::{half_density_family, simulation_protocol, ExactComposed};

fn main() -> ctxlab::Result<()> {
    let (k, n) = (2, 4);
    let t_hat = half_density_family(k, n)?;
    let mut rng = substream(1, 0);
    println!("{:>4} {:>4} {:>4} {:>9} {:>10}", "u", "v", "dist", "composed", "threshold");
    for u in 0..1u64 << k {
        for v in 0..1u64 << k {
            let (u, v) = (BitVector::from_u64(u, k), BitVector::from_u64(v, k));
            let out = simulation_protocol(&u, &v, &t_hat, 0.25, 0.25, &ExactComposed, &mut rng)?;
            println!(
                "{:>4} {:>4} {:>4} {:>9} {:>10}",
                u.to_string(),
                v.to_string(),
                hamming_distance(&u, &v)?,
                out,
                hd_threshold(k, &u, &v)?
            );
        }
    }
    Ok(())
}
