// Optimal points on a torus fill the outer half in proportion to its area.

use riesz_lab::{best_of_restarts, equidist_test, CellPartition, InitStrategy, ManifoldSpec, OptimizerOptions, RieszParams};

pub fn run_example() -> riesz_lab::Result<()> {
    let torus = ManifoldSpec::torus(2.0, 0.5)?;
    let params = RieszParams::new(3.0, 2)?;
    let r = best_of_restarts(&torus, 150, &params, &InitStrategy::Random, &OptimizerOptions::default())?;
    for cells in ["tube-halves", "tube:4"] {
        let partition: CellPartition = cells.parse()?;
        let report = equidist_test(&r.config, &torus, &partition)?;
        println!("{cells}: max discrepancy {:.4}", report.max_discrepancy);
        for c in &report.cells {
            println!(
                "  {:<28} {:>4} points, expected fraction {:.4}, z = {:+.2}",
                c.label, c.count, c.expected_fraction, c.standardized_deviation
            );
        }
    }
    Ok(())
}

fn main() {
    run_example().expect("equidistribution_torus failed");
}
