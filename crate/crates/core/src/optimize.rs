//! Constructive initializers and projected-gradient energy minimization.
//!
//! The local optimizer is projected gradient descent with a backtracking
//! (Armijo) line search. Primitive manifolds are handled in ambient
//! coordinates with nearest-point retraction; atlas manifolds are handled in
//! chart parameters, with the ambient gradient pulled back through each
//! chart Jacobian and the parameters clamped to the chart box.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ChartPoint, ConfigMeta, PointConfiguration};
use crate::constants::{ball_volume, cube_shell_sum};
use crate::energy::{energy_flat, energy_report, gradient_and_stiffness, gradient_flat, tau, EnergyReport, RieszParams};
use crate::error::{invalid, Error, Result};
use crate::manifold::{sample_uniform, ManifoldKind, ManifoldSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerOptions {
    pub max_iterations: usize,
    /// Stop once the scale-free stationarity measure drops below this.
    #[serde(serialize_with = "crate::io::ser_f64")]
    pub gradient_tolerance: f64,
    /// Backtracking shrink factor, in (0, 1).
    #[serde(serialize_with = "crate::io::ser_f64")]
    pub shrink: f64,
    /// Armijo constant, in (0, 0.5].
    #[serde(serialize_with = "crate::io::ser_f64")]
    pub sufficient_decrease: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            max_iterations: 2000,
            gradient_tolerance: 1e-6,
            shrink: 0.5,
            sufficient_decrease: 1e-4,
            restarts: 1,
            seed: 0,
        }
    }
}

impl OptimizerOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.gradient_tolerance > 0.0) {
            return invalid("gradient tolerance must be positive");
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) {
            return invalid(format!("shrink factor {} not in (0, 1)", self.shrink));
        }
        if !(self.sufficient_decrease > 0.0 && self.sufficient_decrease <= 0.5) {
            return invalid(format!(
                "sufficient-decrease constant {} not in (0, 0.5]",
                self.sufficient_decrease
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitStrategy {
    Random,
    Lattice,
    /// Cube only: optimize N / m^d points from a lattice, then tile.
    Tiled { m: usize, gamma: f64 },
    File(PointConfiguration),
}

impl InitStrategy {
    pub fn name(&self) -> &'static str {
        match self {
            InitStrategy::Random => "random",
            InitStrategy::Lattice => "lattice",
            InitStrategy::Tiled { .. } => "tiled",
            InitStrategy::File(_) => "file",
        }
    }
}

#[derive(Debug, Clone)]
pub struct OptimizeResult {
    pub config: PointConfiguration,
    pub report: EnergyReport,
    pub iterations: usize,
    pub converged: bool,
    /// Final value of the stationarity measure.
    pub stationarity: f64,
    /// Energy after every accepted step, starting with the initial energy.
    pub energy_trace: Vec<f64>,
    pub diagnostic: Option<String>,
    pub seed: u64,
    /// Final energy of every restart, in seed order.
    pub restart_energies: Vec<f64>,
}

/// Greatest m with m^d ≤ n.
fn integer_root(n: usize, d: usize) -> usize {
    let mut m = (n as f64).powf(1.0 / d as f64).round() as usize;
    let pow = |m: usize| (m as u128).pow(d as u32);
    while m > 0 && pow(m) > n as u128 {
        m -= 1;
    }
    while pow(m + 1) <= n as u128 {
        m += 1;
    }
    m.max(1)
}

/// First N points, lexicographically, of (Z^d / m) ∩ [0,1]^d where m is the
/// greatest integer with m^d ≤ N.
pub fn init_lattice_cube(d: usize, n: usize) -> Result<PointConfiguration> {
    if d == 0 || n == 0 {
        return invalid("lattice needs d >= 1 and N >= 1");
    }
    let m = integer_root(n, d);
    let mut coords = Vec::with_capacity(n * d);
    let mut idx = vec![0usize; d];
    for _ in 0..n {
        coords.extend(idx.iter().map(|&k| k as f64 / m as f64));
        // odometer, last coordinate fastest
        for k in (0..d).rev() {
            idx[k] += 1;
            if idx[k] <= m {
                break;
            }
            idx[k] = 0;
        }
    }
    Ok(PointConfiguration::new(d, coords)?.with_meta(ConfigMeta {
        manifold: format!("cube:{d}"),
        generator: format!("lattice-cube m={m}"),
        ..ConfigMeta::default()
    }))
}

/// All points of (Z^d / m) ∩ B^d in lexicographic order.
pub fn ball_lattice(d: usize, m: usize) -> Vec<Vec<f64>> {
    fn rec(d: usize, m: i64, budget: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<f64>>) {
        if prefix.len() == d {
            out.push(prefix.iter().map(|&k| k as f64 / m as f64).collect());
            return;
        }
        let r = (budget as f64).sqrt().floor() as i64;
        for k in -r..=r {
            if k * k <= budget {
                prefix.push(k);
                rec(d, m, budget - k * k, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    let m = m as i64;
    rec(d, m, m * m, &mut Vec::with_capacity(d), &mut out);
    out
}

/// m = ⌈(N / H_d(B^d))^{1/d} + √d⌉ for the ball lattice initializer.
pub fn ball_lattice_scale(d: usize, n: usize) -> usize {
    ((n as f64 / ball_volume(d)).powf(1.0 / d as f64) + (d as f64).sqrt()).ceil() as usize
}

/// First N points of the ball lattice Ω^m; separation at least 1/m.
pub fn init_lattice_ball(d: usize, n: usize) -> Result<PointConfiguration> {
    if d == 0 || n < 2 {
        return invalid("ball lattice needs d >= 1 and N >= 2");
    }
    let m = ball_lattice_scale(d, n);
    let pts = ball_lattice(d, m);
    if pts.len() < n {
        return invalid(format!("ball lattice with m = {m} has only {} points", pts.len()));
    }
    Ok(PointConfiguration::from_points(&pts[..n])?.with_meta(ConfigMeta {
        manifold: format!("ball:{d}:1"),
        generator: format!("lattice-ball m={m}"),
        ..ConfigMeta::default()
    }))
}

/// Places a γ-scaled copy of `base` (points in [0,1]^d) centered in each of
/// the m^d subcubes (U^d + i)/m, subcubes in lexicographic order.
pub fn tile_cube_configuration(
    base: &PointConfiguration,
    m: usize,
    gamma: f64,
) -> Result<PointConfiguration> {
    if m < 1 {
        return invalid("tiling factor m must be at least 1");
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return invalid(format!("gamma = {gamma} not in (0, 1)"));
    }
    let d = base.dim();
    if base.coords().iter().any(|c| !(0.0..=1.0).contains(c)) {
        return invalid("tiling base must lie in the unit cube");
    }
    let offset = 0.5 * (1.0 - gamma);
    let tiles = m.pow(d as u32);
    let mut coords = Vec::with_capacity(tiles * base.coords().len());
    let mut idx = vec![0usize; d];
    for _ in 0..tiles {
        for p in base.points() {
            coords.extend(
                p.iter()
                    .zip(&idx)
                    .map(|(x, &i)| (gamma * x + offset + i as f64) / m as f64),
            );
        }
        for k in (0..d).rev() {
            idx[k] += 1;
            if idx[k] < m {
                break;
            }
            idx[k] = 0;
        }
    }
    let meta = ConfigMeta {
        manifold: format!("cube:{d}"),
        generator: format!("tiled m={m} gamma={gamma}"),
        ..base.meta.clone()
    };
    Ok(PointConfiguration::new(d, coords)?.with_meta(meta))
}

/// Both sides of G(m^d N) ≤ γ^{-s} G(N) + C (1-γ)^{-s} N^{1-s/d} for a
/// concrete base configuration and its tiling.
#[derive(Debug, Clone, Serialize)]
pub struct TilingCheck {
    pub base_n: usize,
    pub m: usize,
    #[serde(serialize_with = "crate::io::ser_f64")]
    pub gamma: f64,
    #[serde(serialize_with = "crate::io::ser_f64")]
    pub base_normalized: f64,
    #[serde(serialize_with = "crate::io::ser_f64")]
    pub tiled_normalized: f64,
    /// C = 3^d + 2^s K with K bounded from above.
    #[serde(serialize_with = "crate::io::ser_f64")]
    pub constant: f64,
    #[serde(serialize_with = "crate::io::ser_f64")]
    pub bound: f64,
    pub holds: bool,
}

pub fn tiling_bound_constant(d: usize, s: f64) -> Result<f64> {
    let k = cube_shell_sum(d, s)?;
    Ok(3f64.powi(d as i32) + 2f64.powf(s) * k.upper())
}

pub fn check_tiling_inequality(
    base: &PointConfiguration,
    m: usize,
    gamma: f64,
    s: f64,
) -> Result<TilingCheck> {
    let d = base.dim();
    let params = RieszParams::new(s, d)?;
    if params.s() <= d as f64 {
        return invalid("tiling inequality needs s > d");
    }
    let tiled = tile_cube_configuration(base, m, gamma)?;
    let n = base.len();
    let base_normalized = energy_flat(base.coords(), d, s)? / tau(n, &params)?;
    let tiled_normalized = energy_flat(tiled.coords(), d, s)? / tau(tiled.len(), &params)?;
    let constant = tiling_bound_constant(d, s)?;
    let bound = gamma.powf(-s) * base_normalized
        + constant * (1.0 - gamma).powf(-s) * (n as f64).powf(1.0 - s / d as f64);
    Ok(TilingCheck {
        base_n: n,
        m,
        gamma,
        base_normalized,
        tiled_normalized,
        constant,
        bound,
        holds: tiled_normalized <= bound,
    })
}

fn lattice_init(m: &ManifoldSpec, n: usize) -> Result<PointConfiguration> {
    use std::f64::consts::PI;
    let cfg = match m.kind() {
        ManifoldKind::Interval { length } => init_lattice_cube(1, n)?.scaled(*length),
        ManifoldKind::Cube { dim } => init_lattice_cube(*dim, n)?,
        ManifoldKind::Ball { dim, radius } => init_lattice_ball(*dim, n)?.scaled(*radius),
        ManifoldKind::Sphere { dim: 1 } => {
            let pts: Vec<[f64; 2]> = (0..n)
                .map(|k| {
                    let t = 2.0 * PI * k as f64 / n as f64;
                    [t.cos(), t.sin()]
                })
                .collect();
            PointConfiguration::from_points(&pts)?
        }
        ManifoldKind::Sphere { dim: 2 } => {
            // golden-angle spiral
            let golden = PI * (3.0 - 5f64.sqrt());
            let pts: Vec<[f64; 3]> = (0..n)
                .map(|k| {
                    let z = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
                    let r = (1.0 - z * z).sqrt();
                    let phi = golden * k as f64;
                    [r * phi.cos(), r * phi.sin(), z]
                })
                .collect();
            PointConfiguration::from_points(&pts)?
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "no lattice initializer for {m}; use random"
            )))
        }
    };
    Ok(cfg)
}

/// Places an arbitrary configuration on `m`: primitives are projected,
/// atlas points are located in their charts.
fn place_on_manifold(m: &ManifoldSpec, cfg: &PointConfiguration) -> Result<PointConfiguration> {
    if cfg.dim() != m.ambient_dim() {
        return invalid(format!(
            "configuration has dimension {} but {m} lives in R^{}",
            cfg.dim(),
            m.ambient_dim()
        ));
    }
    let meta = cfg.meta.clone();
    let out = match m.charts() {
        None => {
            let mut coords = cfg.coords().to_vec();
            for p in coords.chunks_exact_mut(m.ambient_dim()) {
                m.project_in_place(p)?;
            }
            PointConfiguration::new(m.ambient_dim(), coords)?
        }
        Some(charts) => {
            if let Some(cp) = cfg.chart_points() {
                cfg.clone().with_chart_points(cp.to_vec())?
            } else {
                let mut cps = Vec::with_capacity(cfg.len());
                for (i, p) in cfg.points().enumerate() {
                    let cp = charts
                        .iter()
                        .enumerate()
                        .find_map(|(k, c)| c.invert(p, 1e-9).map(|u| ChartPoint { chart: k, u }))
                        .ok_or_else(|| {
                            Error::InvalidArgument(format!("point {i} does not lie on any chart of {m}"))
                        })?;
                    cps.push(cp);
                }
                let coords: Vec<f64> = cps
                    .iter()
                    .flat_map(|cp| charts[cp.chart].point_unchecked(&cp.u))
                    .collect();
                PointConfiguration::new(m.ambient_dim(), coords)?.with_chart_points(cps)?
            }
        }
    };
    Ok(out.with_meta(meta))
}

pub fn initial_configuration(
    m: &ManifoldSpec,
    n: usize,
    params: &RieszParams,
    init: &InitStrategy,
    opts: &OptimizerOptions,
) -> Result<PointConfiguration> {
    let cfg = match init {
        InitStrategy::Random => sample_uniform(m, n, opts.seed)?,
        InitStrategy::Lattice => lattice_init(m, n)?,
        InitStrategy::Tiled { m: tiles, gamma } => {
            let d = match m.kind() {
                ManifoldKind::Cube { dim } => *dim,
                _ => return Err(Error::Unsupported("tiled initialization needs a cube".into())),
            };
            let per = tiles.pow(d as u32);
            if *tiles < 1 || n % per != 0 || n / per < 2 {
                return invalid(format!("tiled init needs N divisible by m^d = {per} (N = {n})"));
            }
            let base = optimize_config(m, n / per, params, &InitStrategy::Lattice, opts)?;
            tile_cube_configuration(&base.config, *tiles, *gamma)?
        }
        InitStrategy::File(cfg) => {
            if cfg.len() != n {
                return invalid(format!("initial file has {} points, N = {n}", cfg.len()));
            }
            cfg.clone()
        }
    };
    let mut cfg = place_on_manifold(m, &cfg)?;
    cfg.meta = ConfigMeta {
        manifold: m.to_string(),
        s: params.s(),
        generator: init.name().to_string(),
        seed: opts.seed,
    };
    Ok(cfg)
}

/// Optimization state: ambient coordinates, plus chart parameters on atlases.
struct State<'a> {
    m: &'a ManifoldSpec,
    dim: usize,
    coords: Vec<f64>,
    charts: Option<Vec<ChartPoint>>,
}

impl<'a> State<'a> {
    fn n(&self) -> usize {
        self.coords.len() / self.dim
    }

    /// Feasible descent direction per point in the optimization variables,
    /// the matching gradient, and the ambient length of the steepest
    /// feasible direction. Directions are divided by the point's stiffness
    /// when one is given (diagonal preconditioning).
    fn descent(&self, grad: &[f64], stiff: Option<&[f64]>) -> (Vec<Vec<f64>>, Vec<Vec<f64>>, Vec<f64>) {
        let dim = self.dim;
        (0..self.n())
            .into_par_iter()
            .map(|i| {
                let g = &grad[i * dim..(i + 1) * dim];
                let x = &self.coords[i * dim..(i + 1) * dim];
                match &self.charts {
                    None => {
                        let neg: Vec<f64> = g.iter().map(|v| -v).collect();
                        let mut v = self.m.tangent_project(&neg, x);
                        let len = v.iter().map(|c| c * c).sum::<f64>().sqrt();
                        if let Some(w) = stiff {
                            v.iter_mut().for_each(|c| *c /= w[i]);
                        }
                        (v, g.to_vec(), len)
                    }
                    Some(cps) => {
                        let chart = &self.m.charts().expect("atlas")[cps[i].chart];
                        let (_, jac) = chart.eval_unchecked(&cps[i].u);
                        let pg = jac.pullback(g);
                        let (lo, hi) = chart.domain();
                        let mut v: Vec<f64> = pg.iter().map(|c| -c).collect();
                        for (k, vk) in v.iter_mut().enumerate() {
                            let u = cps[i].u[k];
                            if (u <= lo[k] && *vk < 0.0) || (u >= hi[k] && *vk > 0.0) {
                                *vk = 0.0;
                            }
                        }
                        let amb = jac.push(&v);
                        let len = amb.iter().map(|c| c * c).sum::<f64>().sqrt();
                        if let Some(w) = stiff {
                            v.iter_mut().for_each(|c| *c /= w[i]);
                        }
                        (v, pg, len)
                    }
                }
            })
            .fold(
                || (Vec::new(), Vec::new(), Vec::new()),
                |mut acc, (v, g, l)| {
                    acc.0.push(v);
                    acc.1.push(g);
                    acc.2.push(l);
                    acc
                },
            )
            .reduce(
                || (Vec::new(), Vec::new(), Vec::new()),
                |mut a, b| {
                    a.0.extend(b.0);
                    a.1.extend(b.1);
                    a.2.extend(b.2);
                    a
                },
            )
    }

    /// Moves every point by t·dir and retracts onto the manifold. Returns the
    /// candidate state and ⟨gradient, displacement⟩ in the variables.
    fn trial(&self, dirs: &[Vec<f64>], grads: &[Vec<f64>], t: f64) -> Result<(State<'a>, f64)> {
        let dim = self.dim;
        let mut slope = 0.0;
        match &self.charts {
            None => {
                let mut coords = self.coords.clone();
                for (i, p) in coords.chunks_exact_mut(dim).enumerate() {
                    for k in 0..dim {
                        p[k] += t * dirs[i][k];
                    }
                    self.m.project_in_place(p)?;
                    for k in 0..dim {
                        slope += grads[i][k] * (p[k] - self.coords[i * dim + k]);
                    }
                }
                Ok((
                    State {
                        m: self.m,
                        dim,
                        coords,
                        charts: None,
                    },
                    slope,
                ))
            }
            Some(cps) => {
                let charts = self.m.charts().expect("atlas");
                let mut new_cps = cps.clone();
                let mut coords = Vec::with_capacity(self.coords.len());
                for (i, cp) in new_cps.iter_mut().enumerate() {
                    let chart = &charts[cp.chart];
                    for k in 0..cp.u.len() {
                        cp.u[k] += t * dirs[i][k];
                    }
                    chart.clamp(&mut cp.u);
                    for k in 0..cp.u.len() {
                        slope += grads[i][k] * (cp.u[k] - cps[i].u[k]);
                    }
                    coords.extend(chart.point_unchecked(&cp.u));
                }
                Ok((
                    State {
                        m: self.m,
                        dim,
                        coords,
                        charts: Some(new_cps),
                    },
                    slope,
                ))
            }
        }
    }
}

/// Runs the local optimizer from a given configuration.
pub fn optimize_from(
    m: &ManifoldSpec,
    start: &PointConfiguration,
    params: &RieszParams,
    opts: &OptimizerOptions,
) -> Result<OptimizeResult> {
    opts.validate()?;
    if params.d() != m.intrinsic_dim() {
        return invalid(format!(
            "params are for d = {} but {m} has dimension {}",
            params.d(),
            m.intrinsic_dim()
        ));
    }
    let n = start.len();
    if n < 2 {
        return invalid(format!("optimization needs N >= 2, got {n}"));
    }
    let start = place_on_manifold(m, start)?;
    let meta = start.meta.clone();
    let (dim, coords, charts, _) = start.into_parts();
    let s = params.s();
    let mut state = State { m, dim, coords, charts };
    let mut energy = energy_flat(&state.coords, dim, s)?;
    let mut trace = vec![energy];

    let spacing = m.spacing(n);
    // largest per-point displacement allowed in one step
    let max_move = 8.0 * spacing;
    let mut h = 0.1 * spacing;
    let mut converged = false;
    let mut diagnostic = None;
    let mut stationarity = f64::INFINITY;
    let mut iterations = 0;
    // previous accepted step, for the Barzilai–Borwein trial length
    let mut prev: Option<(Vec<Vec<f64>>, Vec<Vec<f64>>, Vec<Vec<f64>>)> = None;

    while iterations < opts.max_iterations {
        let (grad, stiff) = gradient_and_stiffness(&state.coords, dim, s)?;
        let (dirs, grads, lens) = state.descent(&grad, Some(&stiff));
        let sup = lens.iter().copied().fold(0.0, f64::max);
        stationarity = sup * spacing / (energy / n as f64);
        if stationarity <= opts.gradient_tolerance {
            converged = true;
            break;
        }
        let dir_sup = dirs
            .iter()
            .map(|v| v.iter().map(|c| c * c).sum::<f64>().sqrt())
            .fold(0.0, f64::max);

        // BB1 step from the previous iteration when it is usable
        if let Some((old_vars, old_dirs, _)) = &prev {
            let new_vars = vars_of(&state);
            let (mut ss, mut sy) = (0.0, 0.0);
            for i in 0..n {
                for k in 0..old_vars[i].len() {
                    let dx = new_vars[i][k] - old_vars[i][k];
                    // y = Δ(gradient) = -(Δ direction)
                    let dy = -(dirs[i][k] - old_dirs[i][k]);
                    ss += dx * dx;
                    sy += dx * dy;
                }
            }
            if sy > 0.0 && ss > 0.0 {
                h = (ss / sy) * dir_sup;
            }
        }
        h = h.min(max_move);

        let mut accepted = false;
        while h >= 1e-16 {
            let t = h / dir_sup;
            let (cand, slope) = match state.trial(&dirs, &grads, t) {
                Ok(c) => c,
                Err(Error::AmbiguousProjection(_)) => {
                    h *= opts.shrink;
                    continue;
                }
                Err(e) => return Err(e),
            };
            match energy_flat(&cand.coords, dim, s) {
                Ok(e) if e < energy && e <= energy + opts.sufficient_decrease * slope => {
                    prev = Some((vars_of(&state), dirs, grads));
                    state = cand;
                    energy = e;
                    trace.push(e);
                    accepted = true;
                    break;
                }
                // coincident points after retraction count as a failed trial
                Ok(_) | Err(Error::DuplicatePoints(..)) => h *= opts.shrink,
                Err(e) => return Err(e),
            }
        }
        iterations += 1;
        if !accepted {
            diagnostic = Some(format!(
                "step collapse: no sufficient decrease at step length < 1e-16 (iteration {iterations}, stationarity {stationarity:.3e})"
            ));
            break;
        }
        // grow back for the next iteration
        h /= opts.shrink;
    }
    if !converged && diagnostic.is_none() {
        // measure the final iterate when the budget ran out
        let grad = gradient_flat(&state.coords, dim, s)?;
        let (_, _, lens) = state.descent(&grad, None);
        stationarity = lens.iter().copied().fold(0.0, f64::max) * spacing / (energy / n as f64);
        converged = stationarity <= opts.gradient_tolerance;
        if !converged {
            diagnostic = Some(format!(
                "iteration budget {} exhausted at stationarity {stationarity:.3e}",
                opts.max_iterations
            ));
        }
    }

    let mut config = PointConfiguration::new(dim, state.coords)?.with_meta(meta);
    if let Some(cps) = state.charts {
        config = config.with_chart_points(cps)?;
    }
    let report = energy_report(&config, params)?;
    Ok(OptimizeResult {
        config,
        report,
        iterations,
        converged,
        stationarity,
        energy_trace: trace,
        diagnostic,
        seed: opts.seed,
        restart_energies: vec![energy],
    })
}

fn vars_of(state: &State<'_>) -> Vec<Vec<f64>> {
    match &state.charts {
        None => state.coords.chunks_exact(state.dim).map(<[f64]>::to_vec).collect(),
        Some(cps) => cps.iter().map(|c| c.u.clone()).collect(),
    }
}

/// Builds the initial configuration and minimizes from it.
pub fn optimize_config(
    m: &ManifoldSpec,
    n: usize,
    params: &RieszParams,
    init: &InitStrategy,
    opts: &OptimizerOptions,
) -> Result<OptimizeResult> {
    opts.validate()?;
    if n < 2 {
        return invalid(format!("optimization needs N >= 2, got {n}"));
    }
    let start = initial_configuration(m, n, params, init, opts)?;
    optimize_from(m, &start, params, opts)
}

/// Runs `opts.restarts` optimizations with seeds seed, seed+1, … and keeps
/// the lowest final energy (earliest seed on ties).
pub fn best_of_restarts(
    m: &ManifoldSpec,
    n: usize,
    params: &RieszParams,
    init: &InitStrategy,
    opts: &OptimizerOptions,
) -> Result<OptimizeResult> {
    if opts.restarts < 1 {
        return invalid("restarts must be at least 1");
    }
    let runs: Vec<OptimizeResult> = (0..opts.restarts as u64)
        .into_par_iter()
        .map(|k| {
            let o = OptimizerOptions {
                seed: opts.seed + k,
                ..opts.clone()
            };
            optimize_config(m, n, params, init, &o)
        })
        .collect::<Result<_>>()?;
    let energies: Vec<f64> = runs.iter().map(|r| r.report.energy).collect();
    let best = energies
        .iter()
        .enumerate()
        .fold(0, |b, (i, e)| if *e < energies[b] { i } else { b });
    let mut out = runs.into_iter().nth(best).expect("at least one run");
    out.restart_energies = energies;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_lattice_examples() {
        let c = init_lattice_cube(2, 4).unwrap();
        assert_eq!(c.coords(), &[0.0, 0.0, 0.0, 0.5, 0.0, 1.0, 0.5, 0.0]);
        let c = init_lattice_cube(1, 5).unwrap();
        assert_eq!(c.coords(), &[0.0, 0.2, 0.4, 0.6, 0.8]);
        let c = init_lattice_cube(2, 5).unwrap();
        assert_eq!(c.len(), 5);
        assert_eq!(c.point(2), &[0.0, 1.0]);
        assert_eq!(c.point(4), &[0.5, 0.5]);
        assert_eq!(integer_root(26, 3), 2);
        assert_eq!(integer_root(27, 3), 3);
    }

    #[test]
    fn ball_lattice_enumeration() {
        // i² + j² ≤ 4 by brute force
        let brute = (-2i32..=2)
            .flat_map(|i| (-2i32..=2).map(move |j| (i, j)))
            .filter(|(i, j)| i * i + j * j <= 4)
            .count();
        assert_eq!(brute, 13);
        assert_eq!(ball_lattice(2, 2).len(), 13);
        assert_eq!(ball_lattice_scale(2, 50), 6);
    }

    #[test]
    fn ball_lattice_separation() {
        for d in 1..=3 {
            for n in [2usize, 5, 17, 60, 200] {
                let c = init_lattice_ball(d, n).unwrap();
                let m = ball_lattice_scale(d, n) as f64;
                let sep = crate::energy::nearest_neighbor_distances(&c)
                    .into_iter()
                    .fold(f64::INFINITY, f64::min);
                assert!(sep >= 1.0 / m - 1e-15);
                let lemma = (n as f64).powf(-1.0 / d as f64) / (2.0 + (d as f64).sqrt());
                assert!(sep >= lemma, "d={d} n={n}: {sep} < {lemma}");
                assert!(c.points().all(|p| p.iter().map(|x| x * x).sum::<f64>() <= 1.0 + 1e-15));
            }
        }
    }

    #[test]
    fn tiling_shapes() {
        let base = PointConfiguration::from_points(&[[0.1, 0.2], [0.9, 0.5], [0.4, 1.0]]).unwrap();
        let t = tile_cube_configuration(&base, 2, 0.8).unwrap();
        assert_eq!(t.len(), 12);
        assert!(t.coords().iter().all(|c| (0.0..=1.0).contains(c)));
        let single = tile_cube_configuration(&base, 1, 0.5).unwrap();
        for (a, b) in single.coords().iter().zip(base.coords()) {
            assert!((a - (0.5 * b + 0.25)).abs() < 1e-16);
        }
        assert!(tile_cube_configuration(&base, 2, 1.0).is_err());
        assert!(tile_cube_configuration(&base, 0, 0.5).is_err());
    }

    #[test]
    fn options_validation() {
        let mut o = OptimizerOptions::default();
        o.validate().unwrap();
        o.shrink = 1.0;
        assert!(o.validate().is_err());
        o.shrink = 0.5;
        o.sufficient_decrease = 0.7;
        assert!(o.validate().is_err());
    }

    #[test]
    fn two_points_on_interval() {
        let m = ManifoldSpec::interval(1.0).unwrap();
        let p = RieszParams::new(2.0, 1).unwrap();
        let r = optimize_config(&m, 2, &p, &InitStrategy::Lattice, &OptimizerOptions::default()).unwrap();
        assert_eq!(r.report.energy, 2.0);
        assert!(r.converged);
    }

    #[test]
    fn two_points_on_sphere_are_antipodal() {
        let m = ManifoldSpec::sphere(2).unwrap();
        let p = RieszParams::new(2.0, 2).unwrap();
        let o = OptimizerOptions { seed: 4, ..Default::default() };
        let r = optimize_config(&m, 2, &p, &InitStrategy::Random, &o).unwrap();
        assert!((r.report.energy - 0.5).abs() < 1e-9, "{}", r.report.energy);
    }

    #[test]
    fn four_points_on_circle() {
        let m = ManifoldSpec::sphere(1).unwrap();
        let p = RieszParams::new(2.0, 1).unwrap();
        let o = OptimizerOptions { seed: 1, ..Default::default() };
        let r = optimize_config(&m, 4, &p, &InitStrategy::Random, &o).unwrap();
        assert!((r.report.energy - 5.0).abs() < 1e-8, "{}", r.report.energy);
        assert!(r.energy_trace.windows(2).all(|w| w[1] <= w[0]));
    }
}
