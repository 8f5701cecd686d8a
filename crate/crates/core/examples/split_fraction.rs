// Two disjoint segments of lengths 1 and 2: optimal points split about 1 : 2.

use riesz_lab::{split_fraction_test, Chart, OptimizerOptions, RieszParams};

pub fn run_example() -> riesz_lab::Result<()> {
    let short: Chart = "affine-box:x0=0:x1=1".parse()?;
    let long: Chart = "affine-box:x0=2:x1=4".parse()?;
    let params = RieszParams::new(2.0, 1)?;
    let r = split_fraction_test(&short, Some(&long), &params, 60, &OptimizerOptions::default())?;
    println!(
        "{} of {} points on the short segment: fraction {:.4}, predicted {:.4} ({} optimizations)",
        r.count_a, r.n, r.observed_fraction, r.predicted_fraction, r.optimizations
    );
    Ok(())
}

fn main() {
    run_example().expect("split_fraction failed");
}
