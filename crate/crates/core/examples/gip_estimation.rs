//! One-way inner-product estimation: Alice sends sign bits of random
//! projections, Bob recovers the correlation from his noisy copy.

use ctxlab::primitives::SignVector;
use ctxlab::protocols::{gip_alice_message, gip_bob_estimates, CoordinateWeights, GipParams};
use ctxlab::rng::substream;

fn main() -> ctxlab::Result<()> {
    let d = 128;
    let weights = CoordinateWeights::uniform(d)?;
    let mut rng = substream(5, 0);
    let u = SignVector::random(d, &mut rng);
    let targets: Vec<SignVector> = [0, 16, 48, 64]
        .iter()
        .map(|&flips| SignVector::new((0..d).map(|i| if i < flips { -u.get(i) } else { u.get(i) }).collect()))
        .collect::<ctxlab::Result<_>>()?;
    for rho in [1.0, 0.5] {
        let params = GipParams::new(0.1, rho);
        let msg = gip_alice_message(&u, &weights, &params, targets.len(), 99)?;
        let est = gip_bob_estimates(&msg, &targets, &weights, &params, 99)?;
        println!("rho = {rho}: {} message bits", msg.len());
        for (v, e) in targets.iter().zip(&est.estimates) {
            println!("  true {:+.3}  estimate {:+.3}", weights.inner(&u, v)?, e);
        }
    }
    Ok(())
}
