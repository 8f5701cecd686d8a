use std::collections::HashSet;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{norm, ManifoldKind, ManifoldSpec};
use crate::config::{ChartPoint, ConfigMeta, PointConfiguration};
use crate::error::{invalid, Result};

/// Draws `n` i.i.d. points from the normalized Hausdorff measure on `m`.
///
/// Deterministic in `seed` (ChaCha8 stream). Exact duplicates, which occur
/// with probability zero, are redrawn.
pub fn sample_uniform(m: &ManifoldSpec, n: usize, seed: u64) -> Result<PointConfiguration> {
    if n == 0 {
        return invalid("sample size must be at least 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = m.ambient_dim();
    let mut coords = Vec::with_capacity(n * dim);
    let mut chart_points = m.is_atlas().then(Vec::new);
    let mut seen = HashSet::with_capacity(n);
    while coords.len() < n * dim {
        let (x, cp) = draw(m, &mut rng);
        let key: Vec<u64> = x.iter().map(|c| c.to_bits()).collect();
        if !seen.insert(key) {
            continue;
        }
        coords.extend_from_slice(&x);
        if let (Some(list), Some(cp)) = (chart_points.as_mut(), cp) {
            list.push(cp);
        }
    }
    let mut cfg = PointConfiguration::new(dim, coords)?.with_meta(ConfigMeta {
        manifold: m.to_string(),
        s: 0.0,
        generator: "uniform".into(),
        seed,
    });
    if let Some(cp) = chart_points {
        cfg = cfg.with_chart_points(cp)?;
    }
    Ok(cfg)
}

fn draw(m: &ManifoldSpec, rng: &mut ChaCha8Rng) -> (Vec<f64>, Option<ChartPoint>) {
    let x = match m.kind() {
        ManifoldKind::Interval { length } => vec![length * rng.gen::<f64>()],
        ManifoldKind::Cube { dim } => (0..*dim).map(|_| rng.gen::<f64>()).collect(),
        ManifoldKind::Ball { dim, radius } => {
            let dir = gaussian_direction(*dim, rng);
            let r = radius * rng.gen::<f64>().powf(1.0 / *dim as f64);
            dir.into_iter().map(|c| c * r).collect()
        }
        ManifoldKind::Sphere { dim } => gaussian_direction(dim + 1, rng),
        ManifoldKind::Torus { major, minor } => {
            let theta = torus_inverse_cdf(*major, *minor, rng.gen::<f64>());
            let phi = 2.0 * PI * rng.gen::<f64>();
            torus_point(*major, *minor, theta, phi)
        }
        ManifoldKind::Atlas(charts) => {
            let total = m.hausdorff_measure();
            let mut pick = rng.gen::<f64>() * total;
            let mut idx = charts.len() - 1;
            for (i, c) in charts.iter().enumerate() {
                if pick < c.measure() {
                    idx = i;
                    break;
                }
                pick -= c.measure();
            }
            let chart = &charts[idx];
            let (lo, hi) = chart.domain();
            let cap = chart.max_volume_factor();
            // rejection against the area element; constant for all but graph patches
            loop {
                let u: Vec<f64> = lo
                    .iter()
                    .zip(hi)
                    .map(|(a, b)| a + (b - a) * rng.gen::<f64>())
                    .collect();
                let (x, jac) = chart.eval_unchecked(&u);
                if rng.gen::<f64>() * cap <= jac.volume_factor() {
                    return (x, Some(ChartPoint { chart: idx, u }));
                }
            }
        }
    };
    (x, None)
}

fn gaussian_direction(k: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let g: Vec<f64> = (0..k).map(|_| rng.sample(StandardNormal)).collect();
        let r = norm(&g);
        if r > 1e-300 {
            return g.into_iter().map(|c| c / r).collect();
        }
    }
}

pub(crate) fn torus_point(major: f64, minor: f64, theta: f64, phi: f64) -> Vec<f64> {
    let rho = major + minor * theta.cos();
    vec![rho * phi.cos(), rho * phi.sin(), minor * theta.sin()]
}

/// Tube angle θ ∈ (-π, π] of a point on the torus; θ = 0 on the outer equator.
pub fn torus_tube_angle(major: f64, x: &[f64]) -> f64 {
    x[2].atan2(x[0].hypot(x[1]) - major)
}

/// Inverts F(θ) = (R(θ + π) + r sin θ) / (2πR) on [-π, π].
fn torus_inverse_cdf(major: f64, minor: f64, u: f64) -> f64 {
    let target = u * 2.0 * PI * major;
    let f = |t: f64| major * (t + PI) + minor * t.sin() - target;
    let (mut lo, mut hi) = (-PI, PI);
    let mut t = 2.0 * PI * u - PI;
    for _ in 0..100 {
        let v = f(t);
        if v > 0.0 {
            hi = t;
        } else {
            lo = t;
        }
        let step = v / (major + minor * t.cos());
        if step.abs() < 1e-15 {
            return (t - step).clamp(-PI, PI);
        }
        let next = t - step;
        t = if (lo..=hi).contains(&next) { next } else { 0.5 * (lo + hi) };
        if hi - lo < 1e-15 {
            break;
        }
    }
    t
}
