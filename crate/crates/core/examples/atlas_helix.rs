// Points on a union of charts: a full turn and a separate half turn of one helix.

use riesz_lab::{best_of_restarts, InitStrategy, ManifoldSpec, OptimizerOptions, RieszParams};

pub fn run_example() -> riesz_lab::Result<()> {
    let m: ManifoldSpec = "atlas:helix:c=0.5:t0=0:t1=6.283185307179586+helix:c=0.5:t0=12.566370614359172:t1=15.707963267948966".parse()?;
    println!("{m}: total length {:.6}", m.hausdorff_measure());
    let params = RieszParams::new(2.0, 1)?;
    let r = best_of_restarts(&m, 40, &params, &InitStrategy::Random, &OptimizerOptions::default())?;
    let on_helix = r.config.chart_points().map_or(0, |cps| cps.iter().filter(|c| c.chart == 0).count());
    println!(
        "E = {:.6}, G = {:.6}, {on_helix} points on the full turn, min separation {:.5}",
        r.report.energy, r.report.normalized, r.report.min_separation
    );
    Ok(())
}

fn main() {
    run_example().expect("atlas_helix failed");
}
