use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use riesz_lab::cli::RunConfig;
use riesz_lab::io::{format_config, format_scaling_csv, parse_config, parse_scaling_csv};
use riesz_lab::manifold::{sample_uniform, stereographic_project};
use riesz_lab::{
    best_of_restarts, optimize_config, riesz_energy, riesz_gradient, ConfigMeta, InitStrategy, ManifoldSpec,
    OptimizerOptions, PointConfiguration, RieszParams, ScalingRow,
};

fn bits(xs: &[f64]) -> Vec<u64> {
    xs.iter().map(|x| x.to_bits()).collect()
}

fn config_strategy(dim: usize) -> impl Strategy<Value = PointConfiguration> {
    prop::collection::vec(prop::collection::vec(-10.0f64..10.0, dim), 2..24)
        .prop_filter("distinct points", |pts| {
            pts.iter()
                .enumerate()
                .all(|(i, p)| pts[i + 1..].iter().all(|q| p.iter().zip(q).any(|(a, b)| (a - b).abs() > 1e-6)))
        })
        .prop_map(|pts| PointConfiguration::from_points(&pts).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn energy_scales_like_lambda_pow_minus_s(c in config_strategy(3), lambda in 0.1f64..10.0, s in 1.0f64..6.0) {
        let e = riesz_energy(&c, s).unwrap();
        let scaled = riesz_energy(&c.scaled(lambda), s).unwrap();
        let expected = lambda.powf(-s) * e;
        prop_assert!((scaled - expected).abs() <= 1e-12 * expected, "{scaled} vs {expected}");
    }

    #[test]
    fn power_of_two_scaling_is_exact(c in config_strategy(2), k in -4i32..5, s in 1u32..7) {
        let lambda = 2f64.powi(k);
        let e = riesz_energy(&c, s as f64).unwrap();
        let scaled = riesz_energy(&c.scaled(lambda), s as f64).unwrap();
        prop_assert_eq!(scaled, lambda.powi(-(s as i32)) * e);
    }

    #[test]
    fn energy_is_permutation_invariant(c in config_strategy(3), seed in any::<u64>(), s in 1.0f64..6.0) {
        let mut idx: Vec<usize> = (0..c.len()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in (1..idx.len()).rev() {
            idx.swap(i, rng.gen_range(0..=i));
        }
        let shuffled: Vec<&[f64]> = idx.iter().map(|&i| c.point(i)).collect();
        let p = PointConfiguration::from_points(&shuffled).unwrap();
        prop_assert_eq!(riesz_energy(&p, s).unwrap().to_bits(), riesz_energy(&c, s).unwrap().to_bits());
    }

    #[test]
    fn reflections_and_plane_swaps_are_exact(c in config_strategy(2), s in 1.0f64..6.0) {
        let e = riesz_energy(&c, s).unwrap();
        let reflect: Vec<[f64; 2]> = c.points().map(|p| [-p[0], p[1]]).collect();
        let swap: Vec<[f64; 2]> = c.points().map(|p| [p[1], p[0]]).collect();
        prop_assert_eq!(riesz_energy(&PointConfiguration::from_points(&reflect).unwrap(), s).unwrap(), e);
        prop_assert_eq!(riesz_energy(&PointConfiguration::from_points(&swap).unwrap(), s).unwrap(), e);
    }

    #[test]
    fn rotations_and_translations_agree_to_rounding(c in config_strategy(3), a in 0.0f64..6.3, t in prop::array::uniform3(-5.0f64..5.0), s in 1.0f64..6.0) {
        let e = riesz_energy(&c, s).unwrap();
        let (sn, cs) = a.sin_cos();
        let moved: Vec<[f64; 3]> = c
            .points()
            .map(|p| [cs * p[0] - sn * p[1] + t[0], sn * p[0] + cs * p[1] + t[1], p[2] + t[2]])
            .collect();
        let e2 = riesz_energy(&PointConfiguration::from_points(&moved).unwrap(), s).unwrap();
        prop_assert!((e2 - e).abs() <= 1e-12 * e);
    }

    #[test]
    fn config_file_round_trip(c in config_strategy(3), s in 1.0f64..8.0, seed in any::<u64>()) {
        let c = c.with_meta(ConfigMeta { manifold: "cube:3".into(), s, generator: String::new(), seed });
        let back = parse_config(&format_config(&c)).unwrap();
        prop_assert_eq!(bits(back.coords()), bits(c.coords()));
        prop_assert_eq!(back.meta.s.to_bits(), s.to_bits());
        prop_assert_eq!(back.meta.seed, seed);
    }

    #[test]
    fn extreme_coordinates_round_trip(raw in prop::collection::vec(any::<u64>(), 2..40)) {
        let coords: Vec<f64> = raw.into_iter().map(f64::from_bits).filter(|x| x.is_finite()).collect();
        prop_assume!(!coords.is_empty());
        let c = PointConfiguration::new(1, coords).unwrap();
        prop_assert_eq!(bits(parse_config(&format_config(&c)).unwrap().coords()), bits(c.coords()));
    }

    #[test]
    fn scaling_csv_round_trip(vals in prop::collection::vec((2usize..5000, 1e-3f64..1e12, 1e-6f64..1.0, any::<u64>()), 1..8)) {
        let rows: Vec<ScalingRow> = vals
            .iter()
            .map(|&(n, e, d, seed)| ScalingRow {
                n,
                energy: e,
                tau: e / 3.0,
                normalized: 3.0,
                min_sep: d,
                scaled_sep: d * (n as f64).sqrt(),
                restarts: 2,
                seed,
                runtime_s: 0.0,
            })
            .collect();
        prop_assert_eq!(parse_scaling_csv(&format_scaling_csv(&rows)).unwrap(), rows);
    }

    #[test]
    fn run_config_round_trip(
        s in 1.0f64..10.0,
        ns in prop::collection::vec(2usize..100000, 1..6),
        tol in 1e-12f64..1e-2,
        shrink in 0.05f64..0.95,
        restarts in 1usize..10,
        seed in any::<u64>(),
        command in "(optimize|scaling|separation)",
    ) {
        let rc = RunConfig {
            command,
            manifold: "torus:2:0.5".into(),
            s,
            n: ns,
            init: "random".into(),
            optimizer: OptimizerOptions {
                gradient_tolerance: tol,
                shrink,
                restarts,
                seed,
                ..OptimizerOptions::default()
            },
            outputs: vec!["out.pts".into()],
        };
        prop_assert_eq!(RunConfig::from_json(&rc.to_json().unwrap()).unwrap(), rc);
    }
}

/// Central differences with one Richardson step (error O(h^4)).
fn fd_gradient(c: &PointConfiguration, s: f64, h: f64) -> Vec<f64> {
    let dim = c.dim();
    let base: Vec<f64> = c.coords().to_vec();
    let energy_at = |k: usize, dx: f64| {
        let mut x = base.clone();
        x[k] += dx;
        riesz_energy(&PointConfiguration::new(dim, x).unwrap(), s).unwrap()
    };
    (0..base.len())
        .map(|k| {
            let d = |h: f64| (energy_at(k, h) - energy_at(k, -h)) / (2.0 * h);
            (4.0 * d(0.5 * h) - d(h)) / 3.0
        })
        .collect()
}

#[test]
fn gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..20 {
        let dim = 1 + case % 3;
        let n = rng.gen_range(3..12);
        let s = rng.gen_range(1.0..6.0);
        let coords: Vec<f64> = (0..n * dim).map(|_| rng.gen_range(0.0..1.0)).collect();
        let c = PointConfiguration::new(dim, coords).unwrap();
        let g = riesz_gradient(&c, s).unwrap();
        let fd = fd_gradient(&c, s, 1e-4);
        let scale = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let err = g.iter().zip(&fd).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(err <= 1e-6 * scale, "case {case}: d={dim} N={n} s={s:.3}: {err:e} vs {scale:e}");
    }
}

#[test]
fn stereographic_chordal_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let d = rng.gen_range(1..5);
        let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-20.0..20.0)).collect();
        let y: Vec<f64> = (0..d).map(|_| rng.gen_range(-20.0..20.0)).collect();
        let (px, py) = (stereographic_project(&x), stereographic_project(&y));
        let lhs = px.iter().zip(&py).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        let n2 = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>();
        let dxy = x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        let rhs = 2.0 * dxy / ((1.0 + n2(&x)) * (1.0 + n2(&y))).sqrt();
        assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300), "{x:?} {y:?}: {lhs} vs {rhs}");
    }
}

#[test]
fn traces_decrease_and_iterates_stay_feasible() {
    let cases = [
        ("interval:2", 2.0, 15),
        ("cube:2", 3.0, 30),
        ("ball:3:1.5", 4.0, 25),
        ("sphere:2", 2.0, 40),
        ("sphere:1", 3.0, 12),
        ("torus:2:0.5", 3.0, 30),
    ];
    for (name, s, n) in cases {
        let m: ManifoldSpec = name.parse().unwrap();
        let p = RieszParams::new(s, m.intrinsic_dim()).unwrap();
        let r = optimize_config(&m, n, &p, &InitStrategy::Random, &OptimizerOptions { seed: 3, ..Default::default() })
            .unwrap();
        assert!(r.energy_trace.windows(2).all(|w| w[1] < w[0]), "{name}: trace not decreasing");
        assert!(r.config.points().all(|x| m.contains(x)), "{name}: point off the manifold");
        assert_eq!(r.report.energy, *r.energy_trace.last().unwrap());
    }
}

#[test]
fn optimized_cube_energies_respect_the_packing_lower_bound() {
    for (d, s, n) in [(1usize, 2.0, 30usize), (2, 3.0, 40), (2, 4.0, 60), (3, 4.0, 27)] {
        let m = ManifoldSpec::cube(d).unwrap();
        let p = RieszParams::new(s, d).unwrap();
        let r = best_of_restarts(&m, n, &p, &InitStrategy::Random, &OptimizerOptions::default()).unwrap();
        let c0 = riesz_lab::constants::cube_lower_bound_constant(s, d);
        assert!(r.report.energy >= c0 * (n as f64).powf(1.0 + s / d as f64), "d={d} s={s}");
        assert!(r.report.energy >= r.report.nearest_neighbor_lower_bound() * (1.0 - 1e-12));
    }
}

#[test]
fn restarts_never_lose_to_single_runs() {
    let circle: ManifoldSpec = "sphere:1".parse().unwrap();
    let p = RieszParams::new(2.0, 1).unwrap();
    let opts = OptimizerOptions { restarts: 5, seed: 11, ..Default::default() };
    let best = best_of_restarts(&circle, 5, &p, &InitStrategy::Random, &opts).unwrap();
    assert_eq!(best.restart_energies.len(), 5);
    assert!(best.restart_energies.iter().all(|&e| best.report.energy <= e));
    // N(N^2 - 1)/12 for equally spaced points
    assert!((best.report.energy - 10.0).abs() < 1e-8);

    let single = OptimizerOptions { restarts: 1, seed: 11, ..Default::default() };
    let a = best_of_restarts(&circle, 5, &p, &InitStrategy::Random, &single).unwrap();
    let b = optimize_config(&circle, 5, &p, &InitStrategy::Random, &single).unwrap();
    assert_eq!(bits(a.config.coords()), bits(b.config.coords()));
}

#[test]
fn twenty_points_on_the_interval_match_equal_spacing() {
    let n = 20usize;
    let s = 2.0;
    let equal: f64 = 2.0 * ((n - 1) as f64).powf(s)
        * (1..n).map(|k| (n - k) as f64 * (k as f64).powf(-s)).sum::<f64>();
    let m = ManifoldSpec::interval(1.0).unwrap();
    let p = RieszParams::new(s, 1).unwrap();
    let opts = OptimizerOptions { restarts: 3, seed: 5, ..Default::default() };
    let r = best_of_restarts(&m, n, &p, &InitStrategy::Random, &opts).unwrap();
    assert!((r.report.energy - equal).abs() <= 0.01 * equal, "{} vs {equal}", r.report.energy);
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let m: ManifoldSpec = "sphere:2".parse().unwrap();
    let p = RieszParams::new(3.0, 2).unwrap();
    let opts = OptimizerOptions { restarts: 3, seed: 9, ..Default::default() };
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| best_of_restarts(&m, 60, &p, &InitStrategy::Random, &opts).unwrap())
    };
    let (a, b) = (run(1), run(4));
    assert_eq!(bits(a.config.coords()), bits(b.config.coords()));
    assert_eq!(bits(&a.restart_energies), bits(&b.restart_energies));
    let c = sample_uniform(&m, 500, 1).unwrap();
    let e1 = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| riesz_energy(&c, 3.0).unwrap());
    let e4 = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(|| riesz_energy(&c, 3.0).unwrap());
    assert_eq!(e1.to_bits(), e4.to_bits());
}
