//! Protocol with uncertain context: Bob only knows a nearby function's
//! protocol and picks his output table by estimated correlation.

use ctxlab::experiments::{isr_family, isr_toy_bits, isr_toy_error, IsrParams};

fn main() -> ctxlab::Result<()> {
    let p = IsrParams::default();
    let (_, table, _) = isr_family(&p)?;
    println!("blocks {:?} of width {}; Bob knows a {}-message protocol", p.blocks, p.n, table.messages());
    let r = isr_toy_error(&p, 0.5, 200, 7)?;
    println!("error at rho = 0.5: {:.4} over {} runs", r.estimate, r.trials);
    for rho in [1.0, 0.5, 0.25] {
        let b = isr_toy_bits(&p, rho, 1)?;
        println!("rho = {rho:<5} message bits = {}", b.estimate);
    }
    Ok(())
}
