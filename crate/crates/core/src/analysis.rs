//! Verdicts on configurations and N-sweeps: scaling-law fits, cell
//! equidistribution counts, separation statistics and the two-part split.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ChartPoint, PointConfiguration};
use crate::constants::{predict_split, theoretical_limit, TheoreticalLimit};
use crate::energy::{point_potentials, tau, Regime, RieszParams};
use crate::error::{invalid, Error, Result};
use crate::manifold::{sample_uniform, torus_tube_angle, Chart, ManifoldKind, ManifoldSpec};
use crate::optimize::{best_of_restarts, optimize_from, InitStrategy, OptimizeResult, OptimizerOptions};

/// One row of a scaling study; field order matches the CSV columns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingRow {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(serialize_with = "crate::io::ser_f64")]
    pub energy: f64,
    #[serde(serialize_with = "crate::io::ser_f64")]
    pub tau: f64,
    #[serde(serialize_with = "crate::io::ser_f64")]
    pub normalized: f64,
    #[serde(serialize_with = "crate::io::ser_f64")]
    pub min_sep: f64,
    #[serde(serialize_with = "crate::io::ser_f64")]
    pub scaled_sep: f64,
    pub restarts: usize,
    pub seed: u64,
    #[serde(serialize_with = "crate::io::ser_f64")]
    pub runtime_s: f64,
}

/// δ N^{1/d} for s > d, δ (N ln N)^{1/d} for s = d.
pub fn scaled_separation(delta: f64, n: usize, params: &RieszParams) -> f64 {
    let nf = n as f64;
    let inv_d = 1.0 / params.d() as f64;
    match params.regime() {
        Regime::Hypersingular => delta * nf.powf(inv_d),
        Regime::Critical => delta * (nf * nf.ln()).powf(inv_d),
    }
}

impl ScalingRow {
    /// Row from a known energy, bypassing optimization.
    pub fn from_energy(n: usize, energy: f64, min_sep: f64, params: &RieszParams) -> Result<Self> {
        let t = tau(n, params)?;
        Ok(Self {
            n,
            energy,
            tau: t,
            normalized: energy / t,
            min_sep,
            scaled_sep: scaled_separation(min_sep, n, params),
            restarts: 0,
            seed: 0,
            runtime_s: 0.0,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingStudyResult {
    pub manifold: String,
    #[serde(serialize_with = "crate::io::ser_f64")]
    pub s: f64,
    pub d: usize,
    pub regime: Regime,
    pub rows: Vec<ScalingRow>,
    /// Least-squares slope of log E against log N (s > d only).
    #[serde(serialize_with = "crate::io::ser_opt_f64")]
    pub fitted_exponent: Option<f64>,
    #[serde(serialize_with = "crate::io::ser_opt_f64")]
    pub fitted_constant: Option<f64>,
    #[serde(serialize_with = "crate::io::ser_opt_f64")]
    pub expected_exponent: Option<f64>,
    pub limit: TheoreticalLimit,
    /// (G(N_max) - reference) / reference, reference = exact limit or bound.
    #[serde(serialize_with = "crate::io::ser_opt_f64")]
    pub relative_gap: Option<f64>,
    pub note: String,
}

/// Fits E = C N^p by least squares on (log N, log E).
pub fn fit_power_law(ns: &[usize], energies: &[f64]) -> Result<(f64, f64)> {
    if ns.len() != energies.len() || ns.len() < 2 {
        return invalid("power-law fit needs at least two (N, E) pairs");
    }
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = energies.iter().map(|e| e.ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return invalid("power-law fit needs distinct N values");
    }
    let slope = sxy / sxx;
    Ok((slope, (my - slope * mx).exp()))
}

impl ScalingStudyResult {
    /// Assembles a study from finished rows.
    pub fn from_rows(m: &ManifoldSpec, params: &RieszParams, rows: Vec<ScalingRow>) -> Result<Self> {
        if rows.len() < 3 {
            return invalid(format!("scaling study needs at least 3 values of N, got {}", rows.len()));
        }
        if rows.windows(2).any(|w| w[1].n <= w[0].n) {
            return invalid("N list must be strictly increasing");
        }
        let limit = theoretical_limit(params, m)?;
        let (fitted_exponent, fitted_constant, expected_exponent) = match params.regime() {
            Regime::Hypersingular => {
                let ns: Vec<usize> = rows.iter().map(|r| r.n).collect();
                let es: Vec<f64> = rows.iter().map(|r| r.energy).collect();
                let (p, c) = fit_power_law(&ns, &es)?;
                (Some(p), Some(c), Some(1.0 + params.s() / params.d() as f64))
            }
            Regime::Critical => (None, None, None),
        };
        let last = rows.last().expect("non-empty").normalized;
        let relative_gap = limit.reference().map(|g| (last - g) / g);
        let note = match params.regime() {
            Regime::Critical => "s = d: E/(N^2 ln N) reported directly; convergence is logarithmic".into(),
            Regime::Hypersingular => "finite-N tolerances are engineering choices; no convergence rate is known".into(),
        };
        Ok(Self {
            manifold: m.to_string(),
            s: params.s(),
            d: params.d(),
            regime: params.regime(),
            rows,
            fitted_exponent,
            fitted_constant,
            expected_exponent,
            limit,
            relative_gap,
            note,
        })
    }

    pub fn normalized(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.normalized).collect()
    }

    pub fn is_increasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].normalized > w[0].normalized)
    }

    pub fn is_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].normalized < w[0].normalized)
    }

    /// Whether |G - reference| strictly shrinks over the last `k` rows.
    pub fn approaches_reference(&self, k: usize) -> bool {
        let Some(g) = self.limit.reference() else {
            return false;
        };
        let start = self.rows.len().saturating_sub(k);
        self.rows[start..]
            .windows(2)
            .all(|w| (w[1].normalized - g).abs() < (w[0].normalized - g).abs())
    }
}

/// How the N values of a study are optimized.
#[derive(Debug, Clone)]
pub struct StudyOptions {
    pub optimizer: OptimizerOptions,
    pub init: InitStrategy,
    /// Record wall-clock time per N; off keeps outputs reproducible.
    pub record_runtime: bool,
}

impl Default for StudyOptions {
    fn default() -> Self {
        Self {
            optimizer: OptimizerOptions::default(),
            init: InitStrategy::Random,
            record_runtime: false,
        }
    }
}

/// Optimizes every N (best of restarts) and fits the growth law.
pub fn scaling_study(
    m: &ManifoldSpec,
    params: &RieszParams,
    n_list: &[usize],
    opts: &StudyOptions,
) -> Result<(ScalingStudyResult, Vec<OptimizeResult>)> {
    if n_list.len() < 3 {
        return invalid(format!("scaling study needs at least 3 values of N, got {}", n_list.len()));
    }
    let runs: Vec<(OptimizeResult, f64)> = n_list
        .par_iter()
        .map(|&n| {
            let t0 = Instant::now();
            let r = best_of_restarts(m, n, params, &opts.init, &opts.optimizer)?;
            Ok((r, t0.elapsed().as_secs_f64()))
        })
        .collect::<Result<_>>()?;
    let rows = runs
        .iter()
        .map(|(r, secs)| {
            let mut row = ScalingRow::from_energy(r.report.n, r.report.energy, r.report.min_separation, params)?;
            row.restarts = opts.optimizer.restarts;
            row.seed = r.seed;
            row.runtime_s = if opts.record_runtime { *secs } else { 0.0 };
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    let study = ScalingStudyResult::from_rows(m, params, rows)?;
    Ok((study, runs.into_iter().map(|(r, _)| r).collect()))
}

/// Almost-clopen cells partitioning a manifold.
#[derive(Debug, Clone, PartialEq)]
pub enum CellPartition {
    /// Equal boxes, `k_i` per axis, on an interval or cube.
    Grid(Vec<usize>),
    /// k bands of equal height in the last coordinate of S² (equal areas).
    SphereBands(usize),
    /// Torus tube-angle sectors [e_i, e_{i+1}); edges must span one turn.
    TubeAngle(Vec<f64>),
}

impl fmt::Display for CellPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellPartition::Grid(k) => {
                let ks: Vec<String> = k.iter().map(usize::to_string).collect();
                write!(f, "grid:{}", ks.join(","))
            }
            CellPartition::SphereBands(k) => write!(f, "bands:{k}"),
            CellPartition::TubeAngle(e) => {
                let es: Vec<String> = e.iter().map(f64::to_string).collect();
                write!(f, "tube:{}", es.join(","))
            }
        }
    }
}

impl FromStr for CellPartition {
    type Err = Error;

    /// `quadrants`, `grid:2,2`, `bands:4`, `tube-halves`, `tube:k` (k equal
    /// sectors) or `tube:e0,e1,..` (explicit edges).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed cell partition '{s}'"));
        let (head, rest) = s.split_once(':').unwrap_or((s, ""));
        match head {
            "quadrants" => Ok(CellPartition::Grid(vec![2, 2])),
            "tube-halves" => Ok(CellPartition::TubeAngle(vec![-0.5 * PI, 0.5 * PI, 1.5 * PI])),
            "grid" => rest
                .split(',')
                .map(|t| t.parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()
                .map(CellPartition::Grid),
            "bands" => rest.parse().map(CellPartition::SphereBands).map_err(|_| bad()),
            "tube" if !rest.contains(',') => {
                let k: usize = rest.parse().map_err(|_| bad())?;
                if k == 0 {
                    return Err(bad());
                }
                Ok(CellPartition::TubeAngle(
                    (0..=k).map(|i| -PI + 2.0 * PI * i as f64 / k as f64).collect(),
                ))
            }
            "tube" => rest
                .split(',')
                .map(|t| t.parse::<f64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()
                .map(CellPartition::TubeAngle),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CellStat {
    pub label: String,
    pub count: usize,
    #[serde(serialize_with = "crate::io::ser_f64")]
    pub measure: f64,
    #[serde(serialize_with = "crate::io::ser_f64")]
    pub expected_fraction: f64,
    /// (count - N p) / sqrt(N p (1 - p))
    #[serde(serialize_with = "crate::io::ser_f64")]
    pub standardized_deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquidistReport {
    pub partition: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub cells: Vec<CellStat>,
    /// max over cells of |count/N - H_d(cell)/H_d(A)|
    #[serde(serialize_with = "crate::io::ser_f64")]
    pub max_discrepancy: f64,
}

impl EquidistReport {
    pub fn max_abs_deviation(&self) -> f64 {
        self.cells
            .iter()
            .map(|c| c.standardized_deviation.abs())
            .fold(0.0, f64::max)
    }
}

struct Cells {
    labels: Vec<String>,
    measures: Vec<f64>,
}

fn build_cells(m: &ManifoldSpec, cells: &CellPartition) -> Result<Cells> {
    let mut labels = Vec::new();
    let mut measures = Vec::new();
    match (cells, m.kind()) {
        (CellPartition::Grid(k), ManifoldKind::Cube { dim }) if k.len() == *dim => {
            grid_cells(k, 1.0, &mut labels, &mut measures)?;
        }
        (CellPartition::Grid(k), ManifoldKind::Interval { length }) if k.len() == 1 => {
            grid_cells(k, *length, &mut labels, &mut measures)?;
        }
        (CellPartition::SphereBands(k), ManifoldKind::Sphere { dim: 2 }) if *k > 0 => {
            for i in 0..*k {
                let (z0, z1) = band_edges(i, *k);
                labels.push(format!("z[{z0:.6},{z1:.6}]"));
                // Archimedes: area of a zone is 2π × height
                measures.push(2.0 * PI * (z1 - z0));
            }
        }
        (CellPartition::TubeAngle(e), ManifoldKind::Torus { major, minor }) if e.len() >= 2 => {
            if e.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::InvalidPartition("tube-angle edges must increase".into()));
            }
            for w in e.windows(2) {
                labels.push(format!("theta[{:.6},{:.6})", w[0], w[1]));
                measures.push(2.0 * PI * minor * (major * (w[1] - w[0]) + minor * (w[1].sin() - w[0].sin())));
            }
        }
        _ => {
            return Err(Error::InvalidPartition(format!("{cells} does not partition {m}")));
        }
    }
    let total: f64 = measures.iter().sum();
    let h = m.hausdorff_measure();
    if (total - h).abs() > 1e-9 * h.max(1.0) {
        return Err(Error::InvalidPartition(format!(
            "cell measures sum to {total}, manifold measure is {h}"
        )));
    }
    Ok(Cells { labels, measures })
}

fn grid_cells(k: &[usize], side: f64, labels: &mut Vec<String>, measures: &mut Vec<f64>) -> Result<()> {
    if k.iter().any(|&v| v == 0) {
        return Err(Error::InvalidPartition("grid needs at least one cell per axis".into()));
    }
    let total: usize = k.iter().product();
    let vol: f64 = k.iter().map(|&v| side / v as f64).product();
    let mut idx = vec![0usize; k.len()];
    for _ in 0..total {
        labels.push(format!("{idx:?}"));
        measures.push(vol);
        for a in (0..k.len()).rev() {
            idx[a] += 1;
            if idx[a] < k[a] {
                break;
            }
            idx[a] = 0;
        }
    }
    Ok(())
}

fn band_edges(i: usize, k: usize) -> (f64, f64) {
    (-1.0 + 2.0 * i as f64 / k as f64, -1.0 + 2.0 * (i + 1) as f64 / k as f64)
}

/// Smallest index i with x ≤ upper edge of cell i (boundary points go to the
/// first cell containing them).
fn first_cell(x: f64, lo: f64, width: f64, k: usize) -> usize {
    let t = ((x - lo) / width).ceil() as i64 - 1;
    t.clamp(0, k as i64 - 1) as usize
}

fn cell_of(m: &ManifoldSpec, cells: &CellPartition, x: &[f64]) -> usize {
    match (cells, m.kind()) {
        (CellPartition::Grid(k), kind) => {
            let side = match kind {
                ManifoldKind::Interval { length } => *length,
                _ => 1.0,
            };
            k.iter().zip(x).fold(0, |acc, (&ka, &xa)| {
                acc * ka + first_cell(xa, 0.0, side / ka as f64, ka)
            })
        }
        (CellPartition::SphereBands(k), _) => first_cell(x[x.len() - 1], -1.0, 2.0 / *k as f64, *k),
        (CellPartition::TubeAngle(e), ManifoldKind::Torus { major, .. }) => {
            let mut t = torus_tube_angle(*major, x);
            let start = e[0];
            while t < start {
                t += 2.0 * PI;
            }
            while t >= start + 2.0 * PI {
                t -= 2.0 * PI;
            }
            e[1..].iter().position(|&hi| t <= hi).unwrap_or(e.len() - 2)
        }
        _ => unreachable!("validated by build_cells"),
    }
}

/// Counts points per cell and compares with the Hausdorff-measure fractions.
pub fn equidist_test(
    config: &PointConfiguration,
    m: &ManifoldSpec,
    cells: &CellPartition,
) -> Result<EquidistReport> {
    if config.dim() != m.ambient_dim() {
        return invalid(format!("configuration dimension {} does not match {m}", config.dim()));
    }
    let built = build_cells(m, cells)?;
    let mut counts = vec![0usize; built.measures.len()];
    for p in config.points() {
        counts[cell_of(m, cells, p)] += 1;
    }
    let n = config.len();
    let nf = n as f64;
    let h = m.hausdorff_measure();
    let stats: Vec<CellStat> = built
        .labels
        .into_iter()
        .zip(built.measures)
        .zip(&counts)
        .map(|((label, measure), &count)| {
            let p = measure / h;
            let var = nf * p * (1.0 - p);
            let dev = count as f64 - nf * p;
            CellStat {
                label,
                count,
                measure,
                expected_fraction: p,
                standardized_deviation: if var > 0.0 { dev / var.sqrt() } else { 0.0 },
            }
        })
        .collect();
    let max_discrepancy = stats
        .iter()
        .map(|c| (c.count as f64 / nf - c.expected_fraction).abs())
        .fold(0.0, f64::max);
    Ok(EquidistReport {
        partition: cells.to_string(),
        n,
        cells: stats,
        max_discrepancy,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SeparationRow {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(serialize_with = "crate::io::ser_f64")]
    pub min_separation: f64,
    #[serde(serialize_with = "crate::io::ser_f64")]
    pub scaled: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SeparationReport {
    #[serde(serialize_with = "crate::io::ser_f64")]
    pub s: f64,
    pub d: usize,
    pub rows: Vec<SeparationRow>,
    /// min over N of the scaled statistic
    #[serde(serialize_with = "crate::io::ser_f64")]
    pub inferred_constant: f64,
    /// Scaled statistic fell by more than half within a decade of N.
    pub drift_violation: bool,
}

impl SeparationReport {
    /// min over rows of scaled(N) / scaled(N_first).
    pub fn min_ratio_to_first(&self) -> f64 {
        let first = self.rows[0].scaled;
        self.rows.iter().map(|r| r.scaled / first).fold(f64::INFINITY, f64::min)
    }
}

/// Scaled minimal separations from (N, δ_N) samples.
pub fn separation_study(samples: &[(usize, f64)], params: &RieszParams) -> Result<SeparationReport> {
    if samples.is_empty() {
        return invalid("separation study needs at least one sample");
    }
    if let Some((n, d)) = samples.iter().find(|(_, d)| !(*d > 0.0)) {
        return invalid(format!("separation at N = {n} is not positive ({d})"));
    }
    let rows: Vec<SeparationRow> = samples
        .iter()
        .map(|&(n, delta)| SeparationRow {
            n,
            min_separation: delta,
            scaled: scaled_separation(delta, n, params),
        })
        .collect();
    let inferred_constant = rows.iter().map(|r| r.scaled).fold(f64::INFINITY, f64::min);
    let mut drift_violation = false;
    for (i, a) in rows.iter().enumerate() {
        for b in &rows[i + 1..] {
            if b.n > a.n && b.n <= 10 * a.n && b.scaled < 0.5 * a.scaled {
                drift_violation = true;
            }
        }
    }
    Ok(SeparationReport {
        s: params.s(),
        d: params.d(),
        rows,
        inferred_constant,
        drift_violation,
    })
}

pub fn separation_from_results(results: &[OptimizeResult], params: &RieszParams) -> Result<SeparationReport> {
    let samples: Vec<(usize, f64)> = results
        .iter()
        .map(|r| (r.report.n, r.report.min_separation))
        .collect();
    separation_study(&samples, params)
}

#[derive(Debug, Clone, Serialize)]
pub struct SplitResult {
    #[serde(rename = "N")]
    pub n: usize,
    pub count_a: usize,
    #[serde(serialize_with = "crate::io::ser_f64")]
    pub observed_fraction: f64,
    #[serde(serialize_with = "crate::io::ser_f64")]
    pub predicted_fraction: f64,
    #[serde(serialize_with = "crate::io::ser_f64")]
    pub energy: f64,
    /// Optimizations run while rebalancing the two parts.
    pub optimizations: usize,
}

fn box_gap(a: &(Vec<f64>, Vec<f64>), b: &(Vec<f64>, Vec<f64>)) -> f64 {
    a.0.iter()
        .zip(&a.1)
        .zip(b.0.iter().zip(&b.1))
        .map(|((alo, ahi), (blo, bhi))| (blo - ahi).max(alo - bhi).max(0.0))
        .map(|g| g * g)
        .sum::<f64>()
        .sqrt()
}

/// Minimizes over the union of two disjoint charts and reports the fraction
/// of points that settle on the first.
///
/// Points cannot cross between components during local descent, so the
/// counts are rebalanced by discrete transfers: the highest-potential
/// points of one part are moved to low-potential spots on the other and the
/// move is kept when the re-optimized energy drops. Starts from an even
/// split; the transfer batch halves whenever neither direction helps.
pub fn split_fraction_test(
    part_a: &Chart,
    part_b: Option<&Chart>,
    params: &RieszParams,
    n: usize,
    opts: &OptimizerOptions,
) -> Result<SplitResult> {
    let predicted = predict_split(part_a.measure(), part_b.map_or(0.0, Chart::measure))?;
    let Some(part_b) = part_b else {
        let m = ManifoldSpec::atlas(vec![part_a.clone()])?;
        let start = sample_uniform(&m, n, opts.seed)?;
        let r = optimize_from(&m, &start, params, opts)?;
        return Ok(SplitResult {
            n,
            count_a: n,
            observed_fraction: 1.0,
            predicted_fraction: predicted,
            energy: r.report.energy,
            optimizations: 1,
        });
    };
    let gap = box_gap(&part_a.image_bounds(), &part_b.image_bounds());
    if !(gap > 0.0) {
        return Err(Error::PartsOverlap(format!(
            "bounding boxes of {part_a} and {part_b} are not separated"
        )));
    }
    if n < 2 {
        return invalid("split test needs N >= 2");
    }
    let union = ManifoldSpec::atlas(vec![part_a.clone(), part_b.clone()])?;
    let parts = [part_a, part_b];

    let k_a = n / 2;
    let start = two_part_sample(parts, [k_a, n - k_a], opts.seed)?;
    let mut best = optimize_from(&union, &start, params, opts)?;
    let mut runs = 1;
    let mut batch = (n / 8).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed);
    loop {
        let counts = chart_counts(&best.config, 2);
        let mut improved = false;
        for (from, to) in [(0usize, 1usize), (1, 0)] {
            if counts[from] < batch {
                continue;
            }
            let moved = transfer(&best.config, parts, from, to, batch, params.s(), &mut rng)?;
            let r = optimize_from(&union, &moved, params, opts)?;
            runs += 1;
            if r.report.energy < best.report.energy {
                best = r;
                improved = true;
                break;
            }
        }
        if !improved {
            if batch == 1 {
                break;
            }
            batch /= 2;
        }
    }
    let count_a = chart_counts(&best.config, 2)[0];
    Ok(SplitResult {
        n,
        count_a,
        observed_fraction: count_a as f64 / n as f64,
        predicted_fraction: predicted,
        energy: best.report.energy,
        optimizations: runs,
    })
}

fn chart_counts(cfg: &PointConfiguration, k: usize) -> Vec<usize> {
    let mut counts = vec![0; k];
    for cp in cfg.chart_points().expect("atlas configuration") {
        counts[cp.chart] += 1;
    }
    counts
}

fn two_part_sample(parts: [&Chart; 2], counts: [usize; 2], seed: u64) -> Result<PointConfiguration> {
    let mut coords = Vec::new();
    let mut cps = Vec::new();
    for (k, (chart, &count)) in parts.iter().zip(&counts).enumerate() {
        if count == 0 {
            continue;
        }
        let single = ManifoldSpec::atlas(vec![(*chart).clone()])?;
        let c = sample_uniform(&single, count, seed.wrapping_add(k as u64))?;
        coords.extend_from_slice(c.coords());
        cps.extend(c.chart_points().expect("atlas sample").iter().map(|cp| ChartPoint {
            chart: k,
            u: cp.u.clone(),
        }));
    }
    PointConfiguration::new(parts[0].ambient_dim(), coords)?.with_chart_points(cps)
}

/// Moves `batch` points from chart `from` to chart `to`.
fn transfer(
    cfg: &PointConfiguration,
    parts: [&Chart; 2],
    from: usize,
    to: usize,
    batch: usize,
    s: f64,
    rng: &mut ChaCha8Rng,
) -> Result<PointConfiguration> {
    let dim = cfg.dim();
    let cps = cfg.chart_points().expect("atlas configuration");
    let pot = point_potentials(cfg.coords(), dim, s);
    let mut donors: Vec<usize> = (0..cfg.len()).filter(|&i| cps[i].chart == from).collect();
    donors.sort_by(|&a, &b| pot[b].total_cmp(&pot[a]).then(a.cmp(&b)));
    let removed: Vec<usize> = donors.into_iter().take(batch).collect();

    let mut coords = Vec::with_capacity(cfg.coords().len());
    let mut new_cps = Vec::with_capacity(cfg.len());
    for i in 0..cfg.len() {
        if !removed.contains(&i) {
            coords.extend_from_slice(cfg.point(i));
            new_cps.push(cps[i].clone());
        }
    }
    let target = parts[to];
    let (lo, hi) = target.domain();
    let kernel = crate::energy::Kernel::new(s);
    for _ in 0..batch {
        let mut best: Option<(f64, Vec<f64>, Vec<f64>)> = None;
        for _ in 0..32 {
            let u: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| rng.gen_range(*a..=*b)).collect();
            let x = target.point_unchecked(&u);
            let p: f64 = coords
                .chunks_exact(dim)
                .map(|q| kernel.energy(q.iter().zip(&x).map(|(a, b)| (a - b) * (a - b)).sum()))
                .sum();
            if best.as_ref().map_or(true, |(bp, _, _)| p < *bp) {
                best = Some((p, u, x));
            }
        }
        let (_, u, x) = best.expect("candidates drawn");
        coords.extend_from_slice(&x);
        new_cps.push(ChartPoint { chart: to, u });
    }
    PointConfiguration::new(dim, coords)?.with_chart_points(new_cps)
}
