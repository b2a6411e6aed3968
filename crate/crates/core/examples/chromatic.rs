use ctxlab::reductions::{chromatic_number_exact, shift_graph, shift_graph_bound};

fn main() -> ctxlab::Result<()> {
    println!("{:>3} {:>3} {:>8} {:>4} {:>8}", "m", "t", "vertices", "chi", "bound");
    for (m, t) in [(3, 1), (5, 1), (5, 3), (7, 3), (8, 3), (9, 5), (10, 5)] {
        let g = shift_graph(m, t, 4096)?;
        if g.vertices.len() > 64 {
            continue;
        }
        let chi = chromatic_number_exact(&g.graph, 64)?;
        println!("{m:>3} {t:>3} {:>8} {chi:>4} {:>8.3}", g.vertices.len(), shift_graph_bound(m, t)?);
    }
    print!("\n{}", shift_graph(5, 3, 4096)?.to_text());
    Ok(())
}
