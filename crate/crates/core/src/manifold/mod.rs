//! Compact sets and rectifiable manifolds the energy is minimized over.
//!
//! Primitives (interval, cube, ball, sphere, torus) carry closed-form
//! Hausdorff measures and nearest-point projections. Atlas manifolds are
//! finite unions of parametric charts from a fixed registry and are
//! optimized in chart coordinates.

mod chart;
mod sample;
mod stereo;

use std::fmt;
use std::str::FromStr;

pub use chart::{Chart, ChartFamily, Jacobian};
pub use sample::{sample_uniform, torus_tube_angle};
pub use stereo::{inverse_stereographic, stereographic_project, stereographic_distance};

use crate::constants::{ball_volume, sphere_area};
use crate::error::{invalid, Error, Result};

/// Points closer than this to a manifold count as lying on it.
pub const ON_MANIFOLD_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum ManifoldKind {
    Interval { length: f64 },
    Cube { dim: usize },
    Ball { dim: usize, radius: f64 },
    /// Unit sphere S^d in R^{d+1}.
    Sphere { dim: usize },
    /// Ring torus in R^3 with major radius R and tube radius r.
    Torus { major: f64, minor: f64 },
    Atlas(Vec<Chart>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldSpec {
    kind: ManifoldKind,
    intrinsic_dim: usize,
    ambient_dim: usize,
    hausdorff_measure: f64,
}

impl ManifoldSpec {
    pub fn interval(length: f64) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return invalid(format!("interval length must be positive, got {length}"));
        }
        Ok(Self {
            kind: ManifoldKind::Interval { length },
            intrinsic_dim: 1,
            ambient_dim: 1,
            hausdorff_measure: length,
        })
    }

    pub fn cube(dim: usize) -> Result<Self> {
        if dim == 0 {
            return invalid("cube dimension must be positive");
        }
        Ok(Self {
            kind: ManifoldKind::Cube { dim },
            intrinsic_dim: dim,
            ambient_dim: dim,
            hausdorff_measure: 1.0,
        })
    }

    pub fn ball(dim: usize, radius: f64) -> Result<Self> {
        if dim == 0 {
            return invalid("ball dimension must be positive");
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return invalid(format!("ball radius must be positive, got {radius}"));
        }
        Ok(Self {
            kind: ManifoldKind::Ball { dim, radius },
            intrinsic_dim: dim,
            ambient_dim: dim,
            hausdorff_measure: radius.powi(dim as i32) * ball_volume(dim),
        })
    }

    pub fn sphere(dim: usize) -> Result<Self> {
        if dim == 0 {
            return invalid("sphere dimension must be positive");
        }
        Ok(Self {
            kind: ManifoldKind::Sphere { dim },
            intrinsic_dim: dim,
            ambient_dim: dim + 1,
            hausdorff_measure: sphere_area(dim),
        })
    }

    pub fn torus(major: f64, minor: f64) -> Result<Self> {
        if !(minor > 0.0 && major > minor && major.is_finite()) {
            return invalid(format!(
                "torus needs 0 < r < R, got R={major} r={minor}"
            ));
        }
        Ok(Self {
            kind: ManifoldKind::Torus { major, minor },
            intrinsic_dim: 2,
            ambient_dim: 3,
            hausdorff_measure: 4.0 * std::f64::consts::PI.powi(2) * major * minor,
        })
    }

    /// Union of charts; the charts are taken to be pairwise disjoint.
    pub fn atlas(charts: Vec<Chart>) -> Result<Self> {
        let first = match charts.first() {
            Some(c) => c,
            None => return invalid("atlas needs at least one chart"),
        };
        let (d, dd) = (first.intrinsic_dim(), first.ambient_dim());
        if charts
            .iter()
            .any(|c| c.intrinsic_dim() != d || c.ambient_dim() != dd)
        {
            return invalid("atlas charts must share intrinsic and ambient dimension");
        }
        let measure = charts.iter().map(Chart::measure).sum();
        Ok(Self {
            kind: ManifoldKind::Atlas(charts),
            intrinsic_dim: d,
            ambient_dim: dd,
            hausdorff_measure: measure,
        })
    }

    pub fn kind(&self) -> &ManifoldKind {
        &self.kind
    }

    pub fn intrinsic_dim(&self) -> usize {
        self.intrinsic_dim
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn hausdorff_measure(&self) -> f64 {
        self.hausdorff_measure
    }

    pub fn charts(&self) -> Option<&[Chart]> {
        match &self.kind {
            ManifoldKind::Atlas(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_atlas(&self) -> bool {
        matches!(self.kind, ManifoldKind::Atlas(_))
    }

    /// Typical spacing (H_d / N)^{1/d} of N well-spread points.
    pub fn spacing(&self, n: usize) -> f64 {
        (self.hausdorff_measure / n.max(1) as f64).powf(1.0 / self.intrinsic_dim as f64)
    }

    /// On-manifold predicate at tolerance [`ON_MANIFOLD_TOL`].
    pub fn contains(&self, x: &[f64]) -> bool {
        if x.len() != self.ambient_dim {
            return false;
        }
        let tol = ON_MANIFOLD_TOL;
        match &self.kind {
            ManifoldKind::Interval { length } => x[0] >= -tol && x[0] <= length + tol,
            ManifoldKind::Cube { .. } => x.iter().all(|&c| c >= -tol && c <= 1.0 + tol),
            ManifoldKind::Ball { radius, .. } => norm(x) <= radius + tol * radius.max(1.0),
            ManifoldKind::Sphere { .. } => (norm(x) - 1.0).abs() <= tol,
            ManifoldKind::Torus { major, minor } => {
                let rho = x[0].hypot(x[1]);
                ((rho - major).hypot(x[2]) - minor).abs() <= tol * major.max(1.0)
            }
            ManifoldKind::Atlas(charts) => charts.iter().any(|c| c.invert(x, tol).is_some()),
        }
    }

    /// Nearest point of a primitive manifold to `x`.
    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut y = x.to_vec();
        self.project_in_place(&mut y)?;
        Ok(y)
    }

    pub(crate) fn project_in_place(&self, x: &mut [f64]) -> Result<()> {
        if x.len() != self.ambient_dim {
            return invalid(format!(
                "point has {} coordinates, manifold ambient dimension is {}",
                x.len(),
                self.ambient_dim
            ));
        }
        match &self.kind {
            ManifoldKind::Interval { length } => x[0] = x[0].clamp(0.0, *length),
            ManifoldKind::Cube { .. } => x.iter_mut().for_each(|c| *c = c.clamp(0.0, 1.0)),
            ManifoldKind::Ball { radius, .. } => {
                let r = norm(x);
                if r > *radius {
                    let f = radius / r;
                    x.iter_mut().for_each(|c| *c *= f);
                }
            }
            ManifoldKind::Sphere { .. } => {
                let r = norm(x);
                if r == 0.0 {
                    return Err(Error::AmbiguousProjection("origin is equidistant from the sphere"));
                }
                x.iter_mut().for_each(|c| *c /= r);
            }
            ManifoldKind::Torus { major, minor } => {
                let rho = x[0].hypot(x[1]);
                if rho == 0.0 {
                    return Err(Error::AmbiguousProjection("point on the torus axis"));
                }
                let (cx, cy) = (major * x[0] / rho, major * x[1] / rho);
                let w = [x[0] - cx, x[1] - cy, x[2]];
                let wn = norm(&w);
                if wn == 0.0 {
                    return Err(Error::AmbiguousProjection("point on the torus core circle"));
                }
                let f = minor / wn;
                x[0] = cx + f * w[0];
                x[1] = cy + f * w[1];
                x[2] = f * w[2];
            }
            ManifoldKind::Atlas(_) => {
                return Err(Error::Unsupported(
                    "atlas manifolds are optimized in chart parameters, not projected".into(),
                ))
            }
        }
        Ok(())
    }

    /// Removes from the step direction `g` the components that leave the
    /// manifold at `x`: normal components on sphere and torus, outward
    /// components at active faces of cube, interval and ball.
    pub fn tangent_project(&self, g: &[f64], x: &[f64]) -> Vec<f64> {
        let mut v = g.to_vec();
        self.tangent_project_in_place(&mut v, x);
        v
    }

    pub(crate) fn tangent_project_in_place(&self, v: &mut [f64], x: &[f64]) {
        match &self.kind {
            ManifoldKind::Interval { length } => clamp_box_direction(v, x, 0.0, *length),
            ManifoldKind::Cube { .. } => clamp_box_direction(v, x, 0.0, 1.0),
            ManifoldKind::Ball { radius, .. } => {
                let r = norm(x);
                if r >= radius * (1.0 - ON_MANIFOLD_TOL) && r > 0.0 {
                    let out = dot(v, x) / r;
                    if out > 0.0 {
                        v.iter_mut().zip(x).for_each(|(vi, xi)| *vi -= out * xi / r);
                    }
                }
            }
            ManifoldKind::Sphere { .. } => {
                let r2 = dot(x, x);
                let c = dot(v, x) / r2;
                v.iter_mut().zip(x).for_each(|(vi, xi)| *vi -= c * xi);
            }
            ManifoldKind::Torus { major, .. } => {
                let rho = x[0].hypot(x[1]);
                if rho > 0.0 {
                    let n = [x[0] - major * x[0] / rho, x[1] - major * x[1] / rho, x[2]];
                    let nn = dot(&n, &n);
                    if nn > 0.0 {
                        let c = dot(v, &n) / nn;
                        v.iter_mut().zip(n).for_each(|(vi, ni)| *vi -= c * ni);
                    }
                }
            }
            // chart directions are handled in parameter space
            ManifoldKind::Atlas(_) => {}
        }
    }
}

fn clamp_box_direction(v: &mut [f64], x: &[f64], lo: f64, hi: f64) {
    for (vi, &xi) in v.iter_mut().zip(x) {
        if (xi <= lo && *vi < 0.0) || (xi >= hi && *vi > 0.0) {
            *vi = 0.0;
        }
    }
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl fmt::Display for ManifoldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ManifoldKind::Interval { length } => write!(f, "interval:{length}"),
            ManifoldKind::Cube { dim } => write!(f, "cube:{dim}"),
            ManifoldKind::Ball { dim, radius } => write!(f, "ball:{dim}:{radius}"),
            ManifoldKind::Sphere { dim } => write!(f, "sphere:{dim}"),
            ManifoldKind::Torus { major, minor } => write!(f, "torus:{major}:{minor}"),
            ManifoldKind::Atlas(charts) => {
                write!(f, "atlas:")?;
                for (i, c) in charts.iter().enumerate() {
                    if i > 0 {
                        write!(f, "+")?;
                    }
                    write!(f, "{c}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for ManifoldSpec {
    type Err = Error;

    /// Parses `sphere:2`, `cube:3`, `ball:2:1.0`, `interval:1.0`,
    /// `torus:2.0:0.5` or `atlas:<chart>[+<chart>...]`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, rest) = s.split_once(':').unwrap_or((s, ""));
        let parts: Vec<&str> = if rest.is_empty() {
            Vec::new()
        } else {
            rest.split(':').collect()
        };
        let bad = || Error::Parse(format!("malformed manifold '{s}'"));
        let num = |t: &str| t.parse::<f64>().map_err(|_| bad());
        let int = |t: &str| t.parse::<usize>().map_err(|_| bad());
        match (head, parts.as_slice()) {
            ("interval", [l]) => Self::interval(num(l)?),
            ("cube", [d]) => Self::cube(int(d)?),
            ("ball", [d]) => Self::ball(int(d)?, 1.0),
            ("ball", [d, r]) => Self::ball(int(d)?, num(r)?),
            ("sphere", [d]) => Self::sphere(int(d)?),
            ("torus", [big, small]) => Self::torus(num(big)?, num(small)?),
            ("atlas", _) if !rest.is_empty() => {
                let charts = rest
                    .split('+')
                    .map(str::parse)
                    .collect::<Result<Vec<Chart>>>()?;
                Self::atlas(charts)
            }
            _ => Err(bad()),
        }
    }
}
