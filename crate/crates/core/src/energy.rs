//! Riesz s-energy, its gradient, nearest-neighbor statistics and the
//! normalizing sequence τ_{s,d}.
//!
//! Energies count ordered pairs: E_s(ω) = Σ_{i ≠ j} |x_i - x_j|^{-s}, so each
//! unordered pair contributes twice. Sums are exact until a single final
//! rounding, which makes every reported energy independent of point order
//! and of the number of worker threads.

use rayon::prelude::*;
use serde::Serialize;

use crate::config::PointConfiguration;
use crate::error::{invalid, Error, Result};
use crate::sum::ExactSum;

/// Critical (s = d) versus hypersingular (s > d) regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Critical,
    Hypersingular,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RieszParams {
    s: f64,
    d: usize,
}

impl RieszParams {
    /// Requires s ≥ d ≥ 1.
    pub fn new(s: f64, d: usize) -> Result<Self> {
        if d == 0 {
            return invalid("dimension d must be at least 1");
        }
        if !(s.is_finite() && s >= d as f64) {
            return invalid(format!("need s >= d, got s = {s}, d = {d}"));
        }
        Ok(Self { s, d })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn regime(&self) -> Regime {
        if self.s == self.d as f64 {
            Regime::Critical
        } else {
            Regime::Hypersingular
        }
    }
}

/// τ_{s,d}(N): N^{1+s/d} for s > d, N² ln N for s = d.
pub fn tau(n: usize, params: &RieszParams) -> Result<f64> {
    let nf = n as f64;
    match params.regime() {
        Regime::Hypersingular => Ok(nf.powf(1.0 + params.s / params.d as f64)),
        Regime::Critical if n >= 2 => Ok(nf * nf * nf.ln()),
        Regime::Critical => invalid(format!("tau needs N >= 2 when s = d (got N = {n})")),
    }
}

/// Evaluates r^{-s} and r^{-s-2} from r², using integer powers where possible.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Kernel {
    s: f64,
    // Some(k) when s = k is a small integer
    int_s: Option<i32>,
}

impl Kernel {
    pub(crate) fn new(s: f64) -> Self {
        let int_s = (s.fract() == 0.0 && s > 0.0 && s <= 64.0).then_some(s as i32);
        Self { s, int_s }
    }

    #[inline]
    pub(crate) fn energy(&self, r2: f64) -> f64 {
        let inv = 1.0 / r2;
        match self.int_s {
            Some(k) if k % 2 == 0 => inv.powi(k / 2),
            Some(k) => inv.powi(k / 2) * inv.sqrt(),
            None => r2.powf(-0.5 * self.s),
        }
    }

    /// (r^{-s}, r^{-s-2})
    #[inline]
    fn energy_and_slope(&self, r2: f64) -> (f64, f64) {
        let e = self.energy(r2);
        (e, e / r2)
    }
}

#[inline]
fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Rows are grouped into blocks so threads get similar amounts of work.
const ROW_BLOCK: usize = 16;

/// E_s over ordered pairs from flat coordinates.
pub(crate) fn energy_flat(coords: &[f64], dim: usize, s: f64) -> Result<f64> {
    let n = coords.len() / dim;
    if n < 2 {
        return Ok(0.0);
    }
    let kernel = Kernel::new(s);
    let blocks: Vec<usize> = (0..n).step_by(ROW_BLOCK).collect();
    let acc = blocks
        .into_par_iter()
        .map(|start| {
            let mut acc = ExactSum::new();
            for i in start..(start + ROW_BLOCK).min(n) {
                let xi = &coords[i * dim..(i + 1) * dim];
                for j in i + 1..n {
                    let r2 = dist2(xi, &coords[j * dim..(j + 1) * dim]);
                    if r2 == 0.0 {
                        return Err(Error::DuplicatePoints(i, j));
                    }
                    acc.add(kernel.energy(r2));
                }
            }
            Ok(acc)
        })
        .try_reduce(ExactSum::new, |a, b| Ok(a.merge(b)))?;
    // doubling is exact
    Ok(2.0 * acc.value())
}

/// Gradient of E_s: -2s Σ_{j ≠ i} (x_i - x_j) |x_i - x_j|^{-s-2} per point.
pub(crate) fn gradient_flat(coords: &[f64], dim: usize, s: f64) -> Result<Vec<f64>> {
    Ok(gradient_and_stiffness(coords, dim, s)?.0)
}

/// The gradient together with Σ_{j ≠ i} |x_i - x_j|^{-s-2} per point, which
/// sets the scale of the local Hessian block.
pub(crate) fn gradient_and_stiffness(coords: &[f64], dim: usize, s: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = coords.len() / dim;
    let kernel = Kernel::new(s);
    let mut grad = vec![0.0; coords.len()];
    let mut stiff = vec![0.0; n];
    grad.par_chunks_mut(dim)
        .zip(stiff.par_iter_mut())
        .enumerate()
        .try_for_each(|(i, (gi, si))| {
            let xi = &coords[i * dim..(i + 1) * dim];
            for j in 0..n {
                if j == i {
                    continue;
                }
                let xj = &coords[j * dim..(j + 1) * dim];
                let r2 = dist2(xi, xj);
                if r2 == 0.0 {
                    return Err(Error::DuplicatePoints(i.min(j), i.max(j)));
                }
                let (_, slope) = kernel.energy_and_slope(r2);
                *si += slope;
                for k in 0..dim {
                    gi[k] += (xi[k] - xj[k]) * slope;
                }
            }
            let f = -2.0 * s;
            gi.iter_mut().for_each(|g| *g *= f);
            Ok(())
        })?;
    Ok((grad, stiff))
}

pub(crate) fn nearest_flat(coords: &[f64], dim: usize) -> Vec<f64> {
    let n = coords.len() / dim;
    (0..n)
        .into_par_iter()
        .map(|i| {
            let xi = &coords[i * dim..(i + 1) * dim];
            (0..n)
                .filter(|&j| j != i)
                .map(|j| dist2(xi, &coords[j * dim..(j + 1) * dim]))
                .fold(f64::INFINITY, f64::min)
                .sqrt()
        })
        .collect()
}

/// Per-point energy Σ_{j ≠ i} |x_i - x_j|^{-s} (half of point i's share of E_s).
pub(crate) fn point_potentials(coords: &[f64], dim: usize, s: f64) -> Vec<f64> {
    let n = coords.len() / dim;
    let kernel = Kernel::new(s);
    (0..n)
        .into_par_iter()
        .map(|i| {
            let xi = &coords[i * dim..(i + 1) * dim];
            (0..n)
                .filter(|&j| j != i)
                .map(|j| kernel.energy(dist2(xi, &coords[j * dim..(j + 1) * dim])))
                .sum()
        })
        .collect()
}

/// E_s(ω_N), summed over ordered pairs. N < 2 gives 0.
pub fn riesz_energy(config: &PointConfiguration, s: f64) -> Result<f64> {
    energy_flat(config.coords(), config.dim(), s)
}

/// ∇E_s, one ambient vector per point (row-major, like the coordinates).
pub fn riesz_gradient(config: &PointConfiguration, s: f64) -> Result<Vec<f64>> {
    gradient_flat(config.coords(), config.dim(), s)
}

/// r_i = min_{j ≠ i} |x_i - x_j|.
pub fn nearest_neighbor_distances(config: &PointConfiguration) -> Vec<f64> {
    nearest_flat(config.coords(), config.dim())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyReport {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(serialize_with = "crate::io::ser_f64")]
    pub s: f64,
    pub d: usize,
    #[serde(serialize_with = "crate::io::ser_f64")]
    pub energy: f64,
    #[serde(serialize_with = "crate::io::ser_f64")]
    pub tau: f64,
    /// energy / tau
    #[serde(serialize_with = "crate::io::ser_f64")]
    pub normalized: f64,
    #[serde(serialize_with = "crate::io::ser_f64")]
    pub min_separation: f64,
    #[serde(serialize_with = "crate::io::ser_vec_f64")]
    pub nearest_neighbor_distances: Vec<f64>,
}

impl EnergyReport {
    /// N (N / Σ r_i^d)^{s/d}: a lower bound on the energy of any
    /// configuration with these nearest-neighbor distances.
    pub fn nearest_neighbor_lower_bound(&self) -> f64 {
        let d = self.d as f64;
        let sum: f64 = self.nearest_neighbor_distances.iter().map(|r| r.powf(d)).sum();
        let n = self.n as f64;
        n * (n / sum).powf(self.s / d)
    }
}

pub fn energy_report(config: &PointConfiguration, params: &RieszParams) -> Result<EnergyReport> {
    let n = config.len();
    if n < 2 {
        return invalid(format!("energy report needs N >= 2, got {n}"));
    }
    let energy = riesz_energy(config, params.s)?;
    let tau = tau(n, params)?;
    let r = nearest_neighbor_distances(config);
    let min_separation = r.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(EnergyReport {
        n,
        s: params.s,
        d: params.d,
        energy,
        tau,
        normalized: energy / tau,
        min_separation,
        nearest_neighbor_distances: r,
    })
}
