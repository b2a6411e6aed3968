//! Sign disagreement of correlated Gaussians and the noise stability of
//! majority, next to their closed forms.

use ctxlab::primitives::{majority_stability_bound, sheppard};
use ctxlab::verifiers::{noise_stability_mc, sign_disagreement_mc};

fn main() -> ctxlab::Result<()> {
    println!("{:>6} {:>10} {:>10}", "rho", "sampled", "arccos/pi");
    for (i, rho) in [-0.9, -0.5, 0.0, 0.5, 0.9].into_iter().enumerate() {
        let r = sign_disagreement_mc(rho, 200_000, i as u64)?;
        println!("{rho:>6} {:>10.4} {:>10.4}", r.estimate, sheppard(rho)?);
    }
    println!();
    println!("{:>4} {:>6} {:>10} {:>10}", "k", "rho", "stability", "bound");
    for (k, rho) in [(1, 0.5), (3, 0.5), (15, 0.5), (99, 0.5), (99, 0.9)] {
        let r = noise_stability_mc(k, rho, 100_000, k as u64)?;
        println!("{k:>4} {rho:>6} {:>10.4} {:>10.4}", r.estimate, majority_stability_bound(rho)?);
    }
    Ok(())
}
