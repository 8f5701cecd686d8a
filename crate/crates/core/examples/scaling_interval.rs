// Growth of the minimal energy on [0, 1] at s = 2, against 2 zeta(2).

use riesz_lab::io::format_scaling_csv;
use riesz_lab::{scaling_study, ManifoldSpec, RieszParams, StudyOptions};

pub fn run_example() -> riesz_lab::Result<()> {
    let m = ManifoldSpec::interval(1.0)?;
    let params = RieszParams::new(2.0, 1)?;
    let (study, _) = scaling_study(&m, &params, &[10, 20, 40, 80], &StudyOptions::default())?;
    print!("{}", format_scaling_csv(&study.rows));
    println!(
        "fitted exponent {:.4} (expected {}), limit {} = {:.8}",
        study.fitted_exponent.unwrap_or(f64::NAN),
        study.expected_exponent.unwrap_or(f64::NAN),
        study.limit.description,
        study.limit.value.unwrap_or(f64::NAN)
    );
    println!("relative gap at N = 80: {:+.4}", study.relative_gap.unwrap_or(f64::NAN));
    Ok(())
}

fn main() {
    run_example().expect("scaling_interval failed");
}
