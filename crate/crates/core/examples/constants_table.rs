// Known limits of E/tau for a handful of sets, plus the lattice sums behind them.

use riesz_lab::constants::{ball_volume, hexagonal_zeta, riemann_zeta};
use riesz_lab::{theoretical_limit, ManifoldSpec, RieszParams};

pub fn run_example() -> riesz_lab::Result<()> {
    for d in 1..=5 {
        println!("H_{d}(B^{d}) = {:.15}", ball_volume(d));
    }
    println!("zeta(2) = {:.15}, zeta(3) = {:.15}", riemann_zeta(2.0)?, riemann_zeta(3.0)?);
    let hex = hexagonal_zeta(4.0, 1e-6)?;
    println!("zeta_L(4) = {:.10} +- {:.1e}", hex.value(), hex.error_bound());

    let cases = [("interval:1", 3.0), ("sphere:1", 2.0), ("sphere:2", 2.0), ("cube:2", 4.0), ("cube:3", 5.0)];
    for (name, s) in cases {
        let m: ManifoldSpec = name.parse()?;
        let lim = theoretical_limit(&RieszParams::new(s, m.intrinsic_dim())?, &m)?;
        let shown = match (lim.value, lim.upper_bound) {
            (Some(v), _) => format!("= {v:.10}"),
            (None, Some(u)) => format!("<= {u:.10}"),
            _ => "-".to_string(),
        };
        println!("{name:<11} s = {s}: {:<9} {shown:<16} {}", lim.kind, lim.description);
    }
    Ok(())
}

fn main() {
    run_example().expect("constants_table failed");
}
