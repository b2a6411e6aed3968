use ctxlab::experiments::{set_recovery_failure, SetRecoveryParams};
use ctxlab::primitives::IndexSubset;
use ctxlab::protocols::hash_set_recovery;
use ctxlab::samplers::RandomnessSource;

fn main() -> ctxlab::Result<()> {
    let t = IndexSubset::full(16);
    let s = IndexSubset::new(vec![2, 3, 5, 7, 11, 13], 16)?;
    let r = hash_set_recovery(&s, &t, 0.01, &RandomnessSource::Public { shared_seed: 3 })?;
    println!("sent {} bits ({} per element), recovered {:?}", r.payload_bits, r.tag_bits, r.recovered);

    let p = SetRecoveryParams::default();
    let f = set_recovery_failure(&p, 20_000, 4)?;
    println!("failure rate {:.4} (target {})", f.estimate, p.failure_prob);
    Ok(())
}
