// Stereographic projection onto S^d and its chordal distance formula.

use riesz_lab::manifold::{inverse_stereographic, stereographic_distance, stereographic_project};

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub fn run_example() -> riesz_lab::Result<()> {
    let pairs = [([0.0, 0.0], [1.0, 0.0]), ([0.5, -2.0], [3.0, 1.5]), ([10.0, 10.0], [-7.0, 0.25])];
    for (x, y) in pairs {
        let (px, py) = (stereographic_project(&x), stereographic_project(&y));
        println!(
            "{x:?} -> {px:.4?}; |P(x) - P(y)| = {:.15}, closed form {:.15}",
            dist(&px, &py),
            stereographic_distance(&x, &y)
        );
        let back = inverse_stereographic(&px)?;
        println!("  inverse recovers {back:.12?}");
    }
    println!("north pole: {}", inverse_stereographic(&[0.0, 0.0, 1.0]).unwrap_err());
    Ok(())
}

fn main() {
    run_example().expect("stereographic failed");
}
