// Self-similar tiling of a square configuration and the energy bound it obeys.

use riesz_lab::optimize::{check_tiling_inequality, tiling_bound_constant};
use riesz_lab::{best_of_restarts, InitStrategy, ManifoldSpec, OptimizerOptions, RieszParams};

pub fn run_example() -> riesz_lab::Result<()> {
    let s = 3.0;
    let base = best_of_restarts(
        &ManifoldSpec::cube(2)?,
        10,
        &RieszParams::new(s, 2)?,
        &InitStrategy::Random,
        &OptimizerOptions::default(),
    )?;
    println!("C = 3^d + 2^s K = {:.6}", tiling_bound_constant(2, s)?);
    for m in [2, 3] {
        for gamma in [0.5, 0.8] {
            let c = check_tiling_inequality(&base.config, m, gamma, s)?;
            println!(
                "m = {m}, gamma = {gamma}: G(tiled) = {:.4} <= {:.4}: {}",
                c.tiled_normalized, c.bound, c.holds
            );
        }
    }
    Ok(())
}

fn main() {
    run_example().expect("tiling failed");
}
