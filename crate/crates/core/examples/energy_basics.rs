// Energy, gradient and report for a few hand-built configurations.

use riesz_lab::{energy_report, riesz_energy, riesz_gradient, PointConfiguration, RieszParams};

pub fn run_example() -> riesz_lab::Result<()> {
    // the two endpoints of [0, 1]: each ordered pair contributes 1
    let ends = PointConfiguration::from_points(&[[0.0], [1.0]])?;
    println!("E_2(endpoints) = {}", riesz_energy(&ends, 2.0)?);
    println!("gradient       = {:?}", riesz_gradient(&ends, 2.0)?);

    // square inscribed in the unit circle: N(N^2 - 1)/12 = 5 at s = 2
    let square = PointConfiguration::from_points(&[[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])?;
    let report = energy_report(&square, &RieszParams::new(2.0, 1)?)?;
    println!(
        "square: E = {}, tau = {}, E/tau = {}, min separation = {:.6}",
        report.energy, report.tau, report.normalized, report.min_separation
    );
    println!("nearest-neighbour lower bound = {:.6}", report.nearest_neighbor_lower_bound());

    // coincident points have infinite energy
    let dup = PointConfiguration::from_points(&[[0.3], [0.3]])?;
    println!("duplicates: {}", riesz_energy(&dup, 2.0).unwrap_err());
    Ok(())
}

fn main() {
    run_example().expect("energy_basics failed");
}
