//! Distances between the subset-majority pair and the block-parity pair,
//! sampled and compared with their Gaussian predictions.

use std::f64::consts::PI;

use ctxlab::experiments::{distance_reports, DistanceParams};
use ctxlab::functions::{block_parity_distance_exact, block_parity_distance_mc};

fn main() -> ctxlab::Result<()> {
    let p = DistanceParams { ell: 1000, removed: 40, ..DistanceParams::default() };
    let r = distance_reports(&p, 200_000, 1)?.remove(0);
    let dp = p.removed as f64 / p.ell as f64;
    println!("subset majority, ell = {}, |T \\ S| = {}", p.ell, p.removed);
    println!("  sampled   {:.4} +- {:.4}", r.estimate, r.stderr);
    println!("  predicted {:.4}", (1.0 - dp).sqrt().acos() / PI);

    let r = block_parity_distance_mc(99, 0.02, 50_000, 2)?;
    println!("block parity, k = 99, delta' = 0.02");
    println!("  sampled   {:.4} +- {:.4}", r.estimate, r.stderr);
    println!("  exact     {:.4}", block_parity_distance_exact(99, 0.02));
    println!("  bound     {:.4}", (1.0f64 - 0.04).acos() / PI);
    Ok(())
}
