//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero when any criterion fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use riesz_lab::analysis::separation_from_results;
use riesz_lab::cli::RunConfig;
use riesz_lab::constants::{ball_volume, hexagonal_zeta, riemann_zeta};
use riesz_lab::io::{format_config, format_scaling_csv, parse_config, parse_scaling_csv, to_json};
use riesz_lab::manifold::{stereographic_project, sample_uniform};
use riesz_lab::optimize::check_tiling_inequality;
use riesz_lab::{
    best_of_restarts, equidist_test, riesz_energy, riesz_gradient, scaling_study, split_fraction_test, CellPartition,
    Chart, InitStrategy, ManifoldSpec, OptimizerOptions, PointConfiguration, RieszParams, ScalingStudyResult,
    StudyOptions,
};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err(e: riesz_lab::Error) -> String {
    format!("error: {e}")
}

fn opts(restarts: usize, max_iterations: usize) -> StudyOptions {
    StudyOptions {
        optimizer: OptimizerOptions {
            restarts,
            max_iterations,
            seed: 1,
            ..OptimizerOptions::default()
        },
        ..StudyOptions::default()
    }
}

fn study(manifold: &str, s: f64, ns: &[usize], o: &StudyOptions) -> Result<ScalingStudyResult, String> {
    let m: ManifoldSpec = manifold.parse().map_err(err)?;
    let p = RieszParams::new(s, m.intrinsic_dim()).map_err(err)?;
    Ok(scaling_study(&m, &p, ns, o).map_err(err)?.0)
}

fn seq(st: &ScalingStudyResult) -> String {
    st.rows
        .iter()
        .map(|r| format!("G({})={:.5}", r.n, r.normalized))
        .collect::<Vec<_>>()
        .join(" ")
}

fn interval_limit() -> Outcome {
    let st = study("interval:1", 2.0, &[50, 100, 200, 400], &opts(3, 2000))?;
    let target = PI * PI / 3.0;
    let rel = (st.rows[3].normalized - target).abs() / target;
    check(
        rel <= 0.05 && st.is_increasing(),
        format!("{}; |G(400) - pi^2/3| / (pi^2/3) = {rel:.4} (<= 0.05); increasing: {}", seq(&st), st.is_increasing()),
    )
}

fn circle_limit() -> Outcome {
    let st = study("sphere:1", 2.0, &[32, 64, 128], &opts(1, 2000))?;
    let rel = (st.rows[2].normalized - 1.0 / 12.0).abs() * 12.0;
    // equally spaced points give exactly N(N^2 - 1)/12
    let n = 128.0f64;
    let equal = n * (n * n - 1.0) / 12.0;
    check(
        rel <= 0.02,
        format!(
            "{}; |G(128) - 1/12| * 12 = {rel:.2e} (<= 0.02); E(128) / (N(N^2-1)/12) - 1 = {:.2e}",
            seq(&st),
            st.rows[2].energy / equal - 1.0
        ),
    )
}

/// Critical case: |G - limit| must shrink strictly along the N list and the
/// last value must be within `tol` of the limit.
fn critical(manifold: &str, ns: &[usize], limit: f64, tol: f64, max_iter: usize) -> Outcome {
    let d = if manifold.starts_with("sphere") { 2.0 } else { 1.0 };
    let st = study(manifold, d, ns, &opts(1, max_iter))?;
    let lim = st.limit.value.ok_or("no exact limit")?;
    if (lim - limit).abs() > 1e-12 {
        return Err(format!("limit {lim} differs from {limit}"));
    }
    let approaching = st.approaches_reference(ns.len());
    let rel = (st.rows.last().unwrap().normalized - limit).abs() / limit;
    let side = if st.is_increasing() { "from below" } else if st.is_decreasing() { "from above" } else { "non-monotone" };
    check(
        approaching && rel <= tol,
        format!(
            "{}; |G - {limit}| strictly shrinking: {approaching} ({side}); relative gap at N={} = {rel:.4} (<= {tol})",
            seq(&st),
            ns.last().unwrap()
        ),
    )
}

fn separation() -> Outcome {
    let m = ManifoldSpec::cube(2).map_err(err)?;
    let p = RieszParams::new(3.0, 2).map_err(err)?;
    let o = opts(1, 2000).optimizer;
    let results = [50usize, 100, 200, 400, 800]
        .iter()
        .map(|&n| best_of_restarts(&m, n, &p, &InitStrategy::Random, &o))
        .collect::<riesz_lab::Result<Vec<_>>>()
        .map_err(err)?;
    let rep = separation_from_results(&results, &p).map_err(err)?;
    let ratio = rep.min_ratio_to_first();
    let rows: Vec<String> = rep.rows.iter().map(|r| format!("{}:{:.4}", r.n, r.scaled)).collect();
    check(
        ratio >= 0.5,
        format!("delta N^(1/2) = [{}]; min ratio to N=50 = {ratio:.4} (>= 0.5)", rows.join(" ")),
    )
}

fn equidistribution() -> Outcome {
    let o = opts(1, 2000).optimizer;
    let cube = ManifoldSpec::cube(2).map_err(err)?;
    let p = RieszParams::new(3.0, 2).map_err(err)?;
    let r = best_of_restarts(&cube, 500, &p, &InitStrategy::Random, &o).map_err(err)?;
    let q = equidist_test(&r.config, &cube, &CellPartition::Grid(vec![2, 2])).map_err(err)?;
    let torus = ManifoldSpec::torus(2.0, 0.5).map_err(err)?;
    let r = best_of_restarts(&torus, 600, &p, &InitStrategy::Random, &o).map_err(err)?;
    let halves: CellPartition = "tube-halves".parse().map_err(err)?;
    let t = equidist_test(&r.config, &torus, &halves).map_err(err)?;
    let counts = |rep: &riesz_lab::EquidistReport| rep.cells.iter().map(|c| c.count.to_string()).collect::<Vec<_>>().join("/");
    check(
        q.max_abs_deviation() <= 4.0 && t.max_abs_deviation() <= 4.0,
        format!(
            "cube N=500 quadrants {} max |z| = {:.3}; torus N=600 halves {} (expected outer {:.4}) max |z| = {:.3} (<= 4)",
            counts(&q),
            q.max_abs_deviation(),
            counts(&t),
            t.cells[0].expected_fraction,
            t.max_abs_deviation()
        ),
    )
}

fn split() -> Outcome {
    let small = Chart::affine_box(vec![0.0, 0.0], vec![1.0, 1.0]).map_err(err)?;
    let side = 2f64.sqrt();
    let big = Chart::affine_box(vec![2.0, 0.0], vec![2.0 + side, side]).map_err(err)?;
    let p = RieszParams::new(3.0, 2).map_err(err)?;
    let n = 300;
    let o = OptimizerOptions { max_iterations: 1000, seed: 1, ..OptimizerOptions::default() };
    let r = split_fraction_test(&small, Some(&big), &p, n, &o).map_err(err)?;
    let half_width = 3.0 / (n as f64).sqrt();
    let ok = (r.observed_fraction - 1.0 / 3.0).abs() <= half_width;
    check(
        ok,
        format!(
            "{} of {n} on the unit square: fraction {:.4}, predicted {:.4}, window [{:.4}, {:.4}] ({} optimizations)",
            r.count_a,
            r.observed_fraction,
            r.predicted_fraction,
            1.0 / 3.0 - half_width,
            1.0 / 3.0 + half_width,
            r.optimizations
        ),
    )
}

fn tiling() -> Outcome {
    let cube = ManifoldSpec::cube(2).map_err(err)?;
    let p = RieszParams::new(3.0, 2).map_err(err)?;
    let mut lines = Vec::new();
    let mut all = true;
    for n in [10usize, 20] {
        let base = best_of_restarts(&cube, n, &p, &InitStrategy::Random, &OptimizerOptions::default()).map_err(err)?;
        for m in [2usize, 3] {
            for gamma in [0.5, 0.8] {
                let c = check_tiling_inequality(&base.config, m, gamma, 3.0).map_err(err)?;
                all &= c.holds && c.tiled_normalized <= c.bound;
                lines.push(format!("N={n},m={m},g={gamma}:{:.3}<={:.3}", c.tiled_normalized, c.bound));
            }
        }
    }
    check(all, format!("C = 3^2 + 2^3 K; {}", lines.join(" ")))
}

/// Σ over the disk |v| ≤ R of the hexagonal lattice. The tail is bounded by
/// subharmonicity: each term is at most the mean over the disjoint disk of
/// radius 1/2 around its point, all of which lie outside |w| = R - 1/2.
fn brute_force_hex(s: f64, radius: f64) -> (f64, f64) {
    // |v|^2 = i^2 + ij + j^2 >= 3/4 max(|i|, |j|)^2
    let r = (2.0 * radius / 3f64.sqrt()).ceil() as i64 + 1;
    let mut sum = 0.0;
    for i in -r..=r {
        for j in -r..=r {
            let q = i * i + i * j + j * j;
            if q > 0 && (q as f64) <= radius * radius {
                sum += (q as f64).powf(-0.5 * s);
            }
        }
    }
    let tail = 8.0 * (radius - 0.5).powf(2.0 - s) / (s - 2.0);
    (sum, tail)
}

fn constants() -> Outcome {
    let closed = [2.0, PI, 4.0 * PI / 3.0, PI * PI / 2.0, 8.0 * PI * PI / 15.0];
    let ball_err = (1..=5).map(|d| (ball_volume(d) - closed[d - 1]).abs()).fold(0.0, f64::max);
    let z2 = (riemann_zeta(2.0).map_err(err)? - PI * PI / 6.0).abs();
    let z4 = (riemann_zeta(4.0).map_err(err)? - PI.powi(4) / 90.0).abs();

    let hex = hexagonal_zeta(4.0, 1e-6).map_err(err)?;
    let (brute, brute_tail) = brute_force_hex(4.0, 1500.0);
    // [partial, partial + tail] for both sums must overlap
    let overlap = hex.partial <= brute + brute_tail && brute <= hex.upper();
    // 6 ζ(2) L(2, χ_{-3})
    let epstein = PI * PI * 0.781_302_412_896_486_3;
    let epstein_inside = epstein >= hex.partial && epstein <= hex.upper() && epstein >= brute && epstein <= brute + brute_tail;

    let st = study("cube:2", 4.0, &[100, 200, 400], &opts(1, 2000))?;
    let estimate = st.rows.last().unwrap().normalized;
    let bound = 0.75 * hex.upper();
    let ok = ball_err <= 1e-13 && z2 <= 1e-12 && z4 <= 1e-12 && overlap && epstein_inside && estimate <= 1.05 * bound;
    check(
        ok,
        format!(
            "ball volume err {ball_err:.1e}; zeta(2) err {z2:.1e}; zeta(4) err {z4:.1e}; zeta_L(4) in [{:.9}, {:.9}], brute force in [{brute:.9}, {:.9}], overlap {overlap}, 6 zeta(2) L(2,chi_-3) = {epstein:.9} inside both {epstein_inside}; C_(4,2) estimate G(400) = {estimate:.4} <= 1.05 * {bound:.4}",
            hex.partial,
            hex.upper(),
            brute + brute_tail
        ),
    )
}

fn central_fd(c: &PointConfiguration, s: f64, k: usize, h: f64) -> f64 {
    let at = |dx: f64| {
        let mut x = c.coords().to_vec();
        x[k] += dx;
        riesz_energy(&PointConfiguration::new(c.dim(), x).unwrap(), s).unwrap()
    };
    let d = |h: f64| (at(h) - at(-h)) / (2.0 * h);
    (4.0 * d(0.5 * h) - d(h)) / 3.0
}

fn hygiene() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut grad_err = 0.0f64;
    for case in 0..20 {
        let dim = 1 + case % 3;
        let n = rng.gen_range(3..10);
        let s = rng.gen_range(1.0..6.0);
        let coords: Vec<f64> = (0..n * dim).map(|_| rng.gen_range(0.0..1.0)).collect();
        let c = PointConfiguration::new(dim, coords).unwrap();
        let g = riesz_gradient(&c, s).map_err(err)?;
        let scale = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (k, gk) in g.iter().enumerate() {
            grad_err = grad_err.max((gk - central_fd(&c, s, k, 1e-4)).abs() / scale);
        }
    }

    let mut stereo_err = 0.0f64;
    for _ in 0..1000 {
        let d = rng.gen_range(1..4);
        let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let y: Vec<f64> = (0..d).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let (px, py) = (stereographic_project(&x), stereographic_project(&y));
        let lhs = px.iter().zip(&py).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        let n2 = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>();
        let dxy = x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        let rhs = 2.0 * dxy / ((1.0 + n2(&x)) * (1.0 + n2(&y))).sqrt();
        stereo_err = stereo_err.max((lhs - rhs).abs() / rhs);
    }

    // exact isometries of the coordinate grid: permutations of the points,
    // reflections and coordinate swaps
    let sq = ManifoldSpec::cube(2).map_err(err)?;
    let c = sample_uniform(&sq, 200, 3).map_err(err)?;
    let e = riesz_energy(&c, 3.5).map_err(err)?;
    let rev: Vec<&[f64]> = c.points().rev().collect();
    let refl: Vec<[f64; 2]> = c.points().map(|p| [-p[0], -p[1]]).collect();
    let swap: Vec<[f64; 2]> = c.points().map(|p| [p[1], p[0]]).collect();
    let variants = [
        PointConfiguration::from_points(&rev).unwrap(),
        PointConfiguration::from_points(&refl).unwrap(),
        PointConfiguration::from_points(&swap).unwrap(),
    ];
    let rigid_exact = variants.iter().all(|v| riesz_energy(v, 3.5).unwrap().to_bits() == e.to_bits());

    let sphere = ManifoldSpec::sphere(2).map_err(err)?;
    let cfg = sample_uniform(&sphere, 50, 5).map_err(err)?;
    let cfg_ok = parse_config(&format_config(&cfg))
        .map(|b| b.coords().iter().zip(cfg.coords()).all(|(a, b)| a.to_bits() == b.to_bits()))
        .unwrap_or(false);
    let st = study("interval:1", 2.0, &[5, 10, 20], &opts(1, 200))?;
    let csv_ok = parse_scaling_csv(&format_scaling_csv(&st.rows)).map(|r| r == st.rows).unwrap_or(false);
    let rc = RunConfig {
        command: "scaling".into(),
        manifold: "interval:1".into(),
        s: 2.0,
        n: vec![5, 10, 20],
        init: "random".into(),
        optimizer: OptimizerOptions { gradient_tolerance: 0.1 + 0.2, ..OptimizerOptions::default() },
        outputs: vec![],
    };
    let json_ok = RunConfig::from_json(&to_json(&rc).map_err(err)?).map(|b| b == rc).unwrap_or(false);

    check(
        grad_err <= 1e-6 && stereo_err <= 1e-12 && rigid_exact && cfg_ok && csv_ok && json_ok,
        format!(
            "gradient vs finite differences {grad_err:.1e} (<= 1e-6); stereographic identity {stereo_err:.1e} (<= 1e-12); exact isometry invariance {rigid_exact}; round trips: config {cfg_ok}, csv {csv_ok}, run config {json_ok}"
        ),
    )
}

fn main() {
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("interval limit 2 zeta(2)", Box::new(interval_limit)),
        ("circle limit 1/12", Box::new(circle_limit)),
        ("s = d = 1 interval toward 2", Box::new(|| critical("interval:1", &[100, 400, 1600], 2.0, 0.30, 600))),
        ("s = d = 2 sphere toward 1/4", Box::new(|| critical("sphere:2", &[100, 300, 900], 0.25, 0.35, 2000))),
        ("separation N^(-1/2)", Box::new(separation)),
        ("equidistribution", Box::new(equidistribution)),
        ("split fraction 1/3", Box::new(split)),
        ("tiling inequality", Box::new(tiling)),
        ("constants", Box::new(constants)),
        ("numerical hygiene", Box::new(hygiene)),
    ];
    let mut failed = 0;
    let mut total = Duration::ZERO;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let dt = t.elapsed();
        total += dt;
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        if outcome.is_err() {
            failed += 1;
        }
        println!("criterion {:>2} [{tag}] {name} ({:.1}s): {detail}", i + 1, dt.as_secs_f64());
    }
    println!("acceptance: {} passed, {failed} failed, {:.1}s", criteria.len() - failed, total.as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
