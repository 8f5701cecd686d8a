use crate::error::{invalid, Result};

/// Inverse stereographic map R^d -> S^d: x ↦ (t x, 1 - t), t = 2/(|x|² + 1).
///
/// The origin goes to the south pole (0, .., 0, -1); the image omits the
/// north pole.
pub fn stereographic_project(x: &[f64]) -> Vec<f64> {
    let t = 2.0 / (x.iter().map(|c| c * c).sum::<f64>() + 1.0);
    let mut y: Vec<f64> = x.iter().map(|c| t * c).collect();
    y.push(1.0 - t);
    y
}

/// Back from S^d to R^d. Fails at the north pole.
pub fn inverse_stereographic(y: &[f64]) -> Result<Vec<f64>> {
    let (last, head) = match y.split_last() {
        Some(v) => v,
        None => return invalid("empty point"),
    };
    let t = 1.0 - last;
    if t <= 0.0 {
        return invalid("north pole has no stereographic preimage");
    }
    Ok(head.iter().map(|c| c / t).collect())
}

/// Chordal distance between the images of `x` and `y`, by the closed form
/// 2|x - y| / (sqrt(1 + |x|²) sqrt(1 + |y|²)).
pub fn stereographic_distance(x: &[f64], y: &[f64]) -> f64 {
    let d2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    let nx: f64 = x.iter().map(|c| c * c).sum();
    let ny: f64 = y.iter().map(|c| c * c).sum();
    2.0 * d2.sqrt() / ((1.0 + nx).sqrt() * (1.0 + ny).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dist(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
    }

    #[test]
    fn poles_and_equator() {
        assert_eq!(stereographic_project(&[0.0, 0.0]), vec![0.0, 0.0, -1.0]);
        assert_eq!(stereographic_project(&[1.0, 0.0]), vec![1.0, 0.0, 0.0]);
        let (p, q) = (stereographic_project(&[0.0, 0.0]), stereographic_project(&[1.0, 0.0]));
        assert!((dist(&p, &q) - 2f64.sqrt()).abs() < 1e-15);
        assert!((stereographic_distance(&[0.0, 0.0], &[1.0, 0.0]) - 2.0 / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn lands_on_sphere_and_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in 1..=3 {
            for _ in 0..1000 {
                let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-10.0..10.0)).collect();
                let y = stereographic_project(&x);
                let r: f64 = y.iter().map(|c| c * c).sum::<f64>().sqrt();
                assert!((r - 1.0).abs() < 1e-14);
                let back = inverse_stereographic(&y).unwrap();
                for (a, b) in back.iter().zip(&x) {
                    assert!((a - b).abs() < 1e-10, "{x:?} -> {back:?}");
                }
            }
        }
        assert!(inverse_stereographic(&[0.0, 0.0, 1.0]).is_err());
    }
}
