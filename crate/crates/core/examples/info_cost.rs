//! Exact information cost of a few message rules, plus a hand-written
//! joint table.

use ctxlab::experiments::{info_cost_report, InfoCostParams};
use ctxlab::simulation::{posterior_argmax_estimator, JointTable};

fn main() -> ctxlab::Result<()> {
    for message in ["none", "first-parity", "all-parities"] {
        let p = InfoCostParams { message: message.into(), ..InfoCostParams::default() };
        let r = info_cost_report(&p, 0)?;
        println!("{message:<13} {:.4} bits", r.estimate);
    }
    let table = JointTable::parse("# q w b p\n0 0 0 3/8\n0 1 1 3/8\n0 0 1 1/8\n0 1 0 1/8\n")?;
    let (_, success) = posterior_argmax_estimator(&table);
    println!("noisy copy: {:.4} bits, best guess right {success}", table.conditional_mutual_information());
    Ok(())
}
