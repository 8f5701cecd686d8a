// Minimize the s = 4 energy of 24 points on S^2 and save the result.

use riesz_lab::io::{read_config_file, write_config_file};
use riesz_lab::{best_of_restarts, InitStrategy, ManifoldSpec, OptimizerOptions, RieszParams};

pub fn run_example() -> riesz_lab::Result<()> {
    let sphere: ManifoldSpec = "sphere:2".parse()?;
    let params = RieszParams::new(4.0, 2)?;
    let opts = OptimizerOptions {
        restarts: 2,
        seed: 7,
        ..OptimizerOptions::default()
    };
    let r = best_of_restarts(&sphere, 24, &params, &InitStrategy::Random, &opts)?;
    println!(
        "N = 24: E = {:.10}, G = {:.6}, {} iterations, converged = {}, restarts {:?}",
        r.report.energy, r.report.normalized, r.iterations, r.converged, r.restart_energies
    );
    if let Some(d) = &r.diagnostic {
        println!("note: {d}");
    }

    let path = std::env::temp_dir().join(format!("riesz-sphere-{}.pts", std::process::id()));
    write_config_file(&path, &r.config)?;
    let back = read_config_file(&path)?;
    println!("saved to {} (round trip exact: {})", path.display(), back.coords() == r.config.coords());
    std::fs::remove_file(&path)?;
    Ok(())
}

fn main() {
    run_example().expect("optimize_sphere failed");
}
