use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

/// Registered parametric families. Every family has an analytic Jacobian
/// and is injective with a Lipschitz inverse on its (validated) domain.
#[derive(Debug, Clone, PartialEq)]
pub enum ChartFamily {
    /// t -> (cos t, sin t, c t)
    Helix { pitch: f64 },
    /// t -> (r cos t, r sin t)
    CircleArc { radius: f64 },
    /// (u, v) -> (u, v, a u^2 + b v^2)
    GraphPatch { a: f64, b: f64 },
    /// u -> u on an axis-aligned box in R^d
    AffineBox,
}

/// A chart φ: K -> R^d' with K an axis-aligned box.
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    family: ChartFamily,
    lo: Vec<f64>,
    hi: Vec<f64>,
    measure: f64,
}

/// Row-major d'×d matrix of partial derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct Jacobian {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Jacobian {
    fn new(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    /// Column `c` (the partial derivative along parameter `c`).
    pub fn column(&self, c: usize) -> Vec<f64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    /// J^T g: pulls an ambient covector back to parameter space.
    pub fn pullback(&self, g: &[f64]) -> Vec<f64> {
        (0..self.cols)
            .map(|c| (0..self.rows).map(|r| self.get(r, c) * g[r]).sum())
            .collect()
    }

    /// J v: pushes a parameter vector forward to the ambient space.
    pub fn push(&self, v: &[f64]) -> Vec<f64> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c) * v[c]).sum())
            .collect()
    }

    /// sqrt(det(J^T J)), the local area (length) element.
    pub fn volume_factor(&self) -> f64 {
        let n = self.cols;
        let mut g = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                g[i * n + j] = (0..self.rows).map(|r| self.get(r, i) * self.get(r, j)).sum();
            }
        }
        // Gram matrix is SPD for an immersion; Cholesky gives the determinant
        let mut det = 1.0;
        for k in 0..n {
            let pivot = g[k * n + k];
            if pivot <= 0.0 {
                return 0.0;
            }
            det *= pivot;
            for i in k + 1..n {
                let f = g[i * n + k] / pivot;
                for j in k..n {
                    g[i * n + j] -= f * g[k * n + j];
                }
            }
        }
        det.sqrt()
    }
}

impl Chart {
    pub fn helix(pitch: f64, t0: f64, t1: f64) -> Result<Self> {
        check_interval(t0, t1)?;
        if pitch == 0.0 && t1 - t0 >= 2.0 * PI {
            return invalid("flat helix must span less than one turn to stay injective");
        }
        let measure = (1.0 + pitch * pitch).sqrt() * (t1 - t0);
        Ok(Self {
            family: ChartFamily::Helix { pitch },
            lo: vec![t0],
            hi: vec![t1],
            measure,
        })
    }

    pub fn circle_arc(radius: f64, t0: f64, t1: f64) -> Result<Self> {
        check_interval(t0, t1)?;
        if !(radius > 0.0) {
            return invalid(format!("circle-arc radius must be positive, got {radius}"));
        }
        if t1 - t0 >= 2.0 * PI {
            return invalid("circle-arc must span less than a full turn");
        }
        Ok(Self {
            family: ChartFamily::CircleArc { radius },
            lo: vec![t0],
            hi: vec![t1],
            measure: radius * (t1 - t0),
        })
    }

    pub fn graph_patch(a: f64, b: f64, lo: [f64; 2], hi: [f64; 2]) -> Result<Self> {
        check_interval(lo[0], hi[0])?;
        check_interval(lo[1], hi[1])?;
        let mut chart = Self {
            family: ChartFamily::GraphPatch { a, b },
            lo: lo.to_vec(),
            hi: hi.to_vec(),
            measure: 0.0,
        };
        chart.measure = chart.integrate_area();
        Ok(chart)
    }

    pub fn affine_box(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return invalid("affine-box needs matching non-empty bounds");
        }
        for (&a, &b) in lo.iter().zip(&hi) {
            check_interval(a, b)?;
        }
        let measure = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
        Ok(Self {
            family: ChartFamily::AffineBox,
            lo,
            hi,
            measure,
        })
    }

    pub fn family(&self) -> &ChartFamily {
        &self.family
    }

    pub fn family_name(&self) -> &'static str {
        match self.family {
            ChartFamily::Helix { .. } => "helix",
            ChartFamily::CircleArc { .. } => "circle-arc",
            ChartFamily::GraphPatch { .. } => "graph-patch",
            ChartFamily::AffineBox => "affine-box",
        }
    }

    pub fn domain(&self) -> (&[f64], &[f64]) {
        (&self.lo, &self.hi)
    }

    pub fn intrinsic_dim(&self) -> usize {
        self.lo.len()
    }

    pub fn ambient_dim(&self) -> usize {
        match self.family {
            ChartFamily::Helix { .. } => 3,
            ChartFamily::CircleArc { .. } => 2,
            ChartFamily::GraphPatch { .. } => 3,
            ChartFamily::AffineBox => self.lo.len(),
        }
    }

    /// H_d measure of the image φ(K).
    pub fn measure(&self) -> f64 {
        self.measure
    }

    pub fn in_domain(&self, u: &[f64]) -> bool {
        u.len() == self.lo.len()
            && u
                .iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(x, (a, b))| *x >= *a && *x <= *b)
    }

    pub fn clamp(&self, u: &mut [f64]) {
        for (x, (a, b)) in u.iter_mut().zip(self.lo.iter().zip(&self.hi)) {
            *x = x.clamp(*a, *b);
        }
    }

    /// φ(u) and its Jacobian.
    pub fn evaluate(&self, u: &[f64]) -> Result<(Vec<f64>, Jacobian)> {
        if !self.in_domain(u) {
            return Err(Error::OutOfChartDomain(format!(
                "{u:?} not in {:?}..{:?} for {}",
                self.lo,
                self.hi,
                self.family_name()
            )));
        }
        Ok(self.eval_unchecked(u))
    }

    pub(crate) fn eval_unchecked(&self, u: &[f64]) -> (Vec<f64>, Jacobian) {
        match self.family {
            ChartFamily::Helix { pitch } => {
                let (s, c) = u[0].sin_cos();
                (
                    vec![c, s, pitch * u[0]],
                    Jacobian::new(3, 1, vec![-s, c, pitch]),
                )
            }
            ChartFamily::CircleArc { radius } => {
                let (s, c) = u[0].sin_cos();
                (
                    vec![radius * c, radius * s],
                    Jacobian::new(2, 1, vec![-radius * s, radius * c]),
                )
            }
            ChartFamily::GraphPatch { a, b } => {
                let (x, y) = (u[0], u[1]);
                (
                    vec![x, y, a * x * x + b * y * y],
                    Jacobian::new(3, 2, vec![1.0, 0.0, 0.0, 1.0, 2.0 * a * x, 2.0 * b * y]),
                )
            }
            ChartFamily::AffineBox => {
                let d = u.len();
                let mut id = vec![0.0; d * d];
                (0..d).for_each(|i| id[i * d + i] = 1.0);
                (u.to_vec(), Jacobian::new(d, d, id))
            }
        }
    }

    pub(crate) fn point_unchecked(&self, u: &[f64]) -> Vec<f64> {
        self.eval_unchecked(u).0
    }

    /// Largest area element over the domain; used by rejection sampling.
    pub(crate) fn max_volume_factor(&self) -> f64 {
        match self.family {
            ChartFamily::GraphPatch { a, b } => {
                let ux = self.lo[0].abs().max(self.hi[0].abs());
                let vy = self.lo[1].abs().max(self.hi[1].abs());
                (1.0 + 4.0 * a * a * ux * ux + 4.0 * b * b * vy * vy).sqrt()
            }
            _ => self.eval_unchecked(&self.lo).1.volume_factor(),
        }
    }

    /// Parameter of `x` if it lies on this chart's image within `tol`.
    pub fn invert(&self, x: &[f64], tol: f64) -> Option<Vec<f64>> {
        if x.len() != self.ambient_dim() {
            return None;
        }
        let mut u = match self.family {
            ChartFamily::Helix { pitch } if pitch != 0.0 => vec![x[2] / pitch],
            ChartFamily::Helix { .. } | ChartFamily::CircleArc { .. } => {
                let t = x[1].atan2(x[0]);
                let k = ((self.lo[0] - t) / (2.0 * PI)).ceil();
                vec![t + 2.0 * PI * k]
            }
            ChartFamily::GraphPatch { .. } => vec![x[0], x[1]],
            ChartFamily::AffineBox => x.to_vec(),
        };
        // accept tiny excursions past the box from rounding
        for (v, (a, b)) in u.iter_mut().zip(self.lo.iter().zip(&self.hi)) {
            if *v < a - tol || *v > b + tol {
                return None;
            }
            *v = v.clamp(*a, *b);
        }
        let y = self.point_unchecked(&u);
        let scale = x.iter().fold(1.0f64, |m, c| m.max(c.abs()));
        let err = y
            .iter()
            .zip(x)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        (err <= tol * scale).then_some(u)
    }

    /// Axis-aligned bounding box of the image, from a dense parameter grid
    /// padded by the largest grid-cell image diameter.
    pub(crate) fn image_bounds(&self) -> (Vec<f64>, Vec<f64>) {
        if self.family == ChartFamily::AffineBox {
            return (self.lo.clone(), self.hi.clone());
        }
        let d = self.intrinsic_dim();
        let steps = if d == 1 { 4096 } else { 256 };
        let dd = self.ambient_dim();
        let mut lo = vec![f64::INFINITY; dd];
        let mut hi = vec![f64::NEG_INFINITY; dd];
        let mut idx = vec![0usize; d];
        loop {
            let u: Vec<f64> = idx
                .iter()
                .enumerate()
                .map(|(k, &i)| self.lo[k] + (self.hi[k] - self.lo[k]) * i as f64 / steps as f64)
                .collect();
            for (k, c) in self.point_unchecked(&u).into_iter().enumerate() {
                lo[k] = lo[k].min(c);
                hi[k] = hi[k].max(c);
            }
            let mut k = 0;
            loop {
                if k == d {
                    let pad = self.max_volume_factor().max(1.0)
                        * self
                            .lo
                            .iter()
                            .zip(&self.hi)
                            .map(|(a, b)| (b - a) / steps as f64)
                            .fold(0.0, f64::max)
                        * (d as f64).sqrt();
                    lo.iter_mut().for_each(|v| *v -= pad);
                    hi.iter_mut().for_each(|v| *v += pad);
                    return (lo, hi);
                }
                idx[k] += 1;
                if idx[k] <= steps {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    fn integrate_area(&self) -> f64 {
        // composite Simpson in both directions; the integrand is smooth
        const STEPS: usize = 512;
        let simpson_w = |i: usize| {
            if i == 0 || i == STEPS {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            }
        };
        let hu = (self.hi[0] - self.lo[0]) / STEPS as f64;
        let hv = (self.hi[1] - self.lo[1]) / STEPS as f64;
        let mut total = 0.0;
        for i in 0..=STEPS {
            let u = self.lo[0] + hu * i as f64;
            let mut row = 0.0;
            for j in 0..=STEPS {
                let v = self.lo[1] + hv * j as f64;
                row += simpson_w(j) * self.eval_unchecked(&[u, v]).1.volume_factor();
            }
            total += simpson_w(i) * row;
        }
        total * hu * hv / 9.0
    }
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if a.is_finite() && b.is_finite() && a < b {
        Ok(())
    } else {
        invalid(format!("chart domain needs lo < hi, got [{a}, {b}]"))
    }
}

const AXES: [&str; 4] = ["x", "y", "z", "w"];

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            ChartFamily::Helix { pitch } => {
                write!(f, "helix:c={pitch}:t0={}:t1={}", self.lo[0], self.hi[0])
            }
            ChartFamily::CircleArc { radius } => {
                write!(f, "circle-arc:r={radius}:t0={}:t1={}", self.lo[0], self.hi[0])
            }
            ChartFamily::GraphPatch { a, b } => write!(
                f,
                "graph-patch:a={a}:b={b}:u0={}:u1={}:v0={}:v1={}",
                self.lo[0], self.hi[0], self.lo[1], self.hi[1]
            ),
            ChartFamily::AffineBox => {
                write!(f, "affine-box")?;
                for (k, (a, b)) in self.lo.iter().zip(&self.hi).enumerate() {
                    write!(f, ":{ax}0={a}:{ax}1={b}", ax = AXES[k])?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for Chart {
    type Err = Error;

    /// `helix:c=1:t0=0:t1=6.283`, `circle-arc:r=1:t0=0:t1=3`,
    /// `graph-patch:a=1:b=1:u0=-1:u1=1:v0=-1:v1=1`,
    /// `affine-box:x0=0:x1=1:y0=0:y1=1`.
    fn from_str(s: &str) -> Result<Self> {
        let mut it = s.split(':');
        let family = it.next().unwrap_or_default();
        let mut kv = Vec::new();
        for tok in it {
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("chart parameter '{tok}' is not key=value")))?;
            let v: f64 = v
                .parse()
                .map_err(|_| Error::Parse(format!("chart parameter '{tok}' is not numeric")))?;
            kv.push((k, v));
        }
        let get = |key: &str| {
            kv.iter()
                .find(|(k, _)| *k == key)
                .map(|(_, v)| *v)
                .ok_or_else(|| Error::Parse(format!("{family} chart is missing '{key}'")))
        };
        let allow = |keys: &[&str]| -> Result<()> {
            match kv.iter().find(|(k, _)| !keys.contains(k)) {
                Some((k, _)) => Err(Error::Parse(format!("{family} chart has unknown key '{k}'"))),
                None => Ok(()),
            }
        };
        match family {
            "helix" => {
                allow(&["c", "t0", "t1"])?;
                Chart::helix(get("c")?, get("t0")?, get("t1")?)
            }
            "circle-arc" => {
                allow(&["r", "t0", "t1"])?;
                Chart::circle_arc(get("r")?, get("t0")?, get("t1")?)
            }
            "graph-patch" => {
                allow(&["a", "b", "u0", "u1", "v0", "v1"])?;
                Chart::graph_patch(
                    get("a")?,
                    get("b")?,
                    [get("u0")?, get("v0")?],
                    [get("u1")?, get("v1")?],
                )
            }
            "affine-box" => {
                let mut lo = Vec::new();
                let mut hi = Vec::new();
                for ax in AXES {
                    let (k0, k1) = (format!("{ax}0"), format!("{ax}1"));
                    match (get(&k0), get(&k1)) {
                        (Ok(a), Ok(b)) => {
                            lo.push(a);
                            hi.push(b);
                        }
                        _ => break,
                    }
                }
                if lo.len() * 2 != kv.len() {
                    return Err(Error::Parse(format!(
                        "affine-box bounds must be consecutive axis pairs x0,x1,y0,y1,..: '{s}'"
                    )));
                }
                Chart::affine_box(lo, hi)
            }
            other => Err(Error::Parse(format!("unknown chart family '{other}'"))),
        }
    }
}
