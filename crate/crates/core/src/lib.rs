//! Minimal Riesz s-energy point configurations on compact sets.
//!
//! The crate computes the energy E_s(ω) = Σ_{i≠j} |x_i − x_j|^{−s} of a
//! point configuration, minimizes it over intervals, cubes, balls, spheres,
//! tori and finite unions of parametric charts, and compares finite-N
//! results with the asymptotic constants and equidistribution laws.
//!
//! ```
//! use riesz_lab::{best_of_restarts, InitStrategy, ManifoldSpec, OptimizerOptions, RieszParams};
//!
//! let m: ManifoldSpec = "sphere:2".parse().unwrap();
//! let p = RieszParams::new(4.0, 2).unwrap();
//! let r = best_of_restarts(&m, 2, &p, &InitStrategy::Random, &OptimizerOptions::default()).unwrap();
//! assert!((r.report.energy - 0.125).abs() < 1e-9);
//! ```

pub mod analysis;
pub mod cli;
pub mod config;
pub mod constants;
pub mod energy;
pub mod error;
pub mod io;
pub mod manifold;
pub mod optimize;
pub mod sum;

pub use analysis::{
    equidist_test, scaling_study, separation_study, split_fraction_test, CellPartition, EquidistReport,
    ScalingRow, ScalingStudyResult, SeparationReport, SplitResult, StudyOptions,
};
pub use config::{ChartPoint, ConfigMeta, PointConfiguration};
pub use constants::{theoretical_limit, LimitKind, TheoreticalLimit};
pub use energy::{energy_report, riesz_energy, riesz_gradient, tau, EnergyReport, Regime, RieszParams};
pub use error::{Error, Result};
pub use manifold::{Chart, ManifoldKind, ManifoldSpec};
pub use optimize::{best_of_restarts, optimize_config, optimize_from, InitStrategy, OptimizeResult, OptimizerOptions};
