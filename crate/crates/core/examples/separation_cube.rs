// Minimal separation of optimal points in the unit square scales like N^{-1/2}.

use riesz_lab::analysis::separation_from_results;
use riesz_lab::{best_of_restarts, InitStrategy, ManifoldSpec, OptimizerOptions, RieszParams};

pub fn run_example() -> riesz_lab::Result<()> {
    let square = ManifoldSpec::cube(2)?;
    let params = RieszParams::new(3.0, 2)?;
    let results = [20usize, 40, 80]
        .iter()
        .map(|&n| best_of_restarts(&square, n, &params, &InitStrategy::Lattice, &OptimizerOptions::default()))
        .collect::<riesz_lab::Result<Vec<_>>>()?;
    let report = separation_from_results(&results, &params)?;
    for row in &report.rows {
        println!("N = {:>3}: delta = {:.5}, delta N^(1/2) = {:.4}", row.n, row.min_separation, row.scaled);
    }
    println!(
        "inferred constant {:.4}, drift violation: {}",
        report.inferred_constant, report.drift_violation
    );
    Ok(())
}

fn main() {
    run_example().expect("separation_cube failed");
}
