//! Best error of any deterministic protocol with a few message bits.

use ctxlab::functions::{FunctionSpec, DEFAULT_ENUMERATION_BUDGET};
use ctxlab::primitives::IndexSubset;
use ctxlab::protocols::brute_force_best_protocol;
use ctxlab::samplers::DistributionSpec;

fn main() -> ctxlab::Result<()> {
    let cases = [
        ("Alice's bit", FunctionSpec::AliceBit(1), DistributionSpec::UniformPairs { n: 1 }),
        ("xor", FunctionSpec::XorParity(IndexSubset::full(1)), DistributionSpec::UniformPairs { n: 1 }),
        (
            "majority of 3",
            FunctionSpec::SubsetMajority(IndexSubset::full(3)),
            DistributionSpec::NoisyPairs { k: 1, n: 3, eta: 0.2 },
        ),
    ];
    for (name, f, dist) in cases {
        for c in 0..=2 {
            let r = brute_force_best_protocol(&f, &dist, c, DEFAULT_ENUMERATION_BUDGET)?;
            println!("{name:<14} c = {c}: error {:.4}, messages {:?}", r.error, r.witness);
        }
    }
    Ok(())
}
