//! Exact total variation between the conditioned law and the plain noisy
//! law, with an exponential fit over the block size.

use ctxlab::functions::DEFAULT_ENUMERATION_BUDGET;
use ctxlab::simulation::closeness_fit;

fn main() -> ctxlab::Result<()> {
    let fit = closeness_fit(1, 0.25, &[4, 6, 8, 10], DEFAULT_ENUMERATION_BUDGET)?;
    for (n, tv) in fit.ns.iter().zip(&fit.tv) {
        println!("n = {n:>2}  tv = {tv:.6}  fitted bound = {:.6}", fit.bound(*n));
    }
    println!("C = {:.4}, beta = {:.4}", fit.c, fit.beta);
    Ok(())
}
