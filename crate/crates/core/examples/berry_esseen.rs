use ctxlab::experiments::berry_esseen_series;

fn main() -> ctxlab::Result<()> {
    let reports = berry_esseen_series(&[64, 256, 1024], 0.04, 200_000, 8)?;
    for r in &reports {
        let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        println!("{:<20} {:.5}  {}", r.experiment_id, r.estimate, params.join(" "));
    }
    Ok(())
}
