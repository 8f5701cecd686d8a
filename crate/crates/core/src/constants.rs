//! Closed-form and series constants: ball volumes, ζ(s), the hexagonal
//! lattice zeta function, and the asymptotic limits of the normalized
//! minimal energy.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::energy::{Regime, RieszParams};
use crate::error::{invalid, Error, Result};
use crate::manifold::ManifoldSpec;

/// H_d(B^d) = 2 π^{d/2} / (d Γ(d/2)), via V_d = (2π/d) V_{d-2}.
pub fn ball_volume(d: usize) -> f64 {
    let mut v = if d % 2 == 0 { 1.0 } else { 2.0 };
    for k in (2 + d % 2..=d).step_by(2) {
        v *= 2.0 * PI / k as f64;
    }
    v
}

/// H_d(S^d) = 2π H_{d-1}(B^{d-1}).
pub fn sphere_area(d: usize) -> f64 {
    2.0 * PI * ball_volume(d.saturating_sub(1))
}

/// lim E_d(S^d, N) / (N² log N) = H_d(B^d) / H_d(S^d).
pub fn sphere_d_constant(d: usize) -> f64 {
    ball_volume(d) / sphere_area(d)
}

// B_{2k} / (2k)! for k = 1..=8
const BERNOULLI_OVER_FACTORIAL: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
];

/// Riemann ζ(s) for real s > 1 by Euler–Maclaurin summation.
pub fn riemann_zeta(s: f64) -> Result<f64> {
    if !(s > 1.0) {
        return invalid(format!("zeta series diverges for s = {s} <= 1"));
    }
    const N: usize = 24;
    let n = N as f64;
    let mut sum = (1..N).rev().map(|k| (k as f64).powf(-s)).sum::<f64>();
    sum += n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    // rising factorial s (s+1) ... (s+2k-2) times N^{-s-2k+1}
    let mut rising = s;
    let mut power = n.powf(-s - 1.0);
    for (k, b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        sum += b * rising * power;
        let j = 2.0 * k as f64;
        rising *= (s + j + 1.0) * (s + j + 2.0);
        power /= n * n;
    }
    Ok(sum)
}

/// A truncated lattice sum with a rigorous bound on the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSum {
    /// Sum over the truncation box.
    pub partial: f64,
    /// Upper bound on the (nonnegative) omitted tail.
    pub tail_bound: f64,
    pub radius: usize,
}

impl LatticeSum {
    /// Midpoint of the enclosing interval [partial, partial + tail_bound].
    pub fn value(&self) -> f64 {
        self.partial + 0.5 * self.tail_bound
    }

    pub fn error_bound(&self) -> f64 {
        0.5 * self.tail_bound
    }

    /// Rigorous upper bound on the full sum.
    pub fn upper(&self) -> f64 {
        self.partial + self.tail_bound
    }
}

const HEX_MAX_RADIUS: usize = 20_000;

/// ζ_L(s) = Σ_{v ≠ 0} |v|^{-s} over the hexagonal lattice with unit
/// minimal distance, summed directly over ‖(m, n)‖_∞ ≤ R.
///
/// R is the smallest radius whose tail bound meets `target_error`.
pub fn hexagonal_zeta(s: f64, target_error: f64) -> Result<LatticeSum> {
    if !(s > 2.0) {
        return invalid(format!("hexagonal lattice sum diverges for s = {s} <= 2"));
    }
    if !(target_error > 0.0) {
        return invalid("target error must be positive");
    }
    // half the tail bound is the reported error
    let rho = 0.5 + (4.0 / ((s - 2.0) * target_error)).powf(1.0 / (s - 2.0));
    let radius = (2.0 * rho / 3f64.sqrt()).ceil();
    if !(radius <= HEX_MAX_RADIUS as f64) {
        return Err(Error::Unsupported(format!(
            "hexagonal zeta at s = {s} needs truncation radius {radius}; loosen the target error"
        )));
    }
    Ok(hexagonal_zeta_truncated(s, radius as usize))
}

/// Direct sum over ‖(m, n)‖_∞ ≤ radius with its tail bound.
///
/// Omitted points satisfy |v| ≥ (√3/2)(R + 1) =: ρ. The disks of radius 1/2
/// around lattice points are disjoint and |w|^{-s} is subharmonic, so
/// Σ_{|v| ≥ ρ} |v|^{-s} ≤ (4/π) ∫_{|w| ≥ ρ - 1/2} |w|^{-s} dw
///                    = 8 (ρ - 1/2)^{2-s} / (s - 2).
pub fn hexagonal_zeta_truncated(s: f64, radius: usize) -> LatticeSum {
    let r = radius as i64;
    let half_s = 0.5 * s;
    let mut total = 0.0;
    // rows in reverse so the small terms are added first
    for m in (0..=r).rev() {
        let mut row = 0.0;
        for n in (-r..=r).rev() {
            if m == 0 && n <= 0 {
                continue;
            }
            let q = (m * m + m * n + n * n) as f64;
            row += q.powf(-half_s);
        }
        total += row;
    }
    // (m, n) and (-m, -n) give the same length
    let partial = 2.0 * total;
    let rho = 0.5 * 3f64.sqrt() * (radius as f64 + 1.0);
    let tail_bound = 8.0 * (rho - 0.5).powf(2.0 - s) / (s - 2.0);
    LatticeSum {
        partial,
        tail_bound,
        radius,
    }
}

/// K = Σ_{k ∈ Z^d \ 0} ‖k‖_∞^{-s}, needed by the cube tiling bound.
///
/// Shell r holds (2r+1)^d - (2r-1)^d ≤ 2d (3r)^{d-1} points, so the tail
/// past R is at most 2d 3^{d-1} R^{d-s} / (s - d).
pub fn cube_shell_sum(d: usize, s: f64) -> Result<LatticeSum> {
    let df = d as f64;
    if !(s > df) {
        return invalid(format!("shell sum diverges unless s > d (s = {s}, d = {d})"));
    }
    let shell = |r: f64| (2.0 * r + 1.0).powi(d as i32) - (2.0 * r - 1.0).powi(d as i32);
    let coef = 2.0 * df * 3f64.powi(d as i32 - 1) / (s - df);
    // stop once the tail bound is below 1e-12 (or at a hard cap)
    let mut radius = 1usize;
    while radius < 1_000_000 && coef * (radius as f64).powf(df - s) > 1e-12 {
        radius *= 2;
    }
    let partial: f64 = (1..=radius)
        .rev()
        .map(|r| {
            let r = r as f64;
            shell(r) * r.powf(-s)
        })
        .sum();
    Ok(LatticeSum {
        partial,
        tail_bound: coef * (radius as f64).powf(df - s),
        radius,
    })
}

/// C_0 = (2^{-d} H_d(B^d))^{s/d} 2^{-s}: every N-point configuration in the
/// unit cube has energy at least C_0 N^{1+s/d}.
pub fn cube_lower_bound_constant(s: f64, d: usize) -> f64 {
    let c = 0.5f64.powi(d as i32) * ball_volume(d);
    c.powf(s / d as f64) * 2f64.powf(-s)
}

/// Limiting fraction of optimal points on A when minimizing over A ∪ B.
pub fn predict_split(measure_a: f64, measure_b: f64) -> Result<f64> {
    if measure_a < 0.0 || measure_b < 0.0 || !(measure_a + measure_b > 0.0) {
        return invalid(format!(
            "split needs nonnegative measures, not both zero (got {measure_a}, {measure_b})"
        ));
    }
    Ok(measure_a / (measure_a + measure_b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitKind {
    /// s = d: value H_d(B^d) / H_d(A)
    ExactSd,
    /// d = 1, s > 1: value 2ζ(s) / H_1(A)^s
    ExactD1,
    /// d = 2, s > 2: upper bound (√3/2)^{s/2} ζ_L(s) / H_2(A)^{s/2}
    BoundHex,
    Unknown,
}

impl fmt::Display for LimitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LimitKind::ExactSd => "exact_sd",
            LimitKind::ExactD1 => "exact_d1",
            LimitKind::BoundHex => "bound_hex",
            LimitKind::Unknown => "unknown",
        })
    }
}

/// Asymptotic value (or bound) of E_s(A, N) / τ_{s,d}(N).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoreticalLimit {
    #[serde(serialize_with = "crate::io::ser_f64")]
    pub s: f64,
    pub d: usize,
    #[serde(serialize_with = "crate::io::ser_f64")]
    pub measure: f64,
    pub kind: LimitKind,
    /// Exact limit for the `exact_*` kinds.
    #[serde(serialize_with = "crate::io::ser_opt_f64")]
    pub value: Option<f64>,
    /// Rigorous upper bound for `bound_hex`.
    #[serde(serialize_with = "crate::io::ser_opt_f64")]
    pub upper_bound: Option<f64>,
    pub description: String,
}

impl TheoreticalLimit {
    /// The exact value, or the bound when only a bound is known.
    pub fn reference(&self) -> Option<f64> {
        self.value.or(self.upper_bound)
    }
}

pub fn theoretical_limit(params: &RieszParams, m: &ManifoldSpec) -> Result<TheoreticalLimit> {
    let (s, d) = (params.s(), params.d());
    if d != m.intrinsic_dim() {
        return invalid(format!(
            "params are for d = {d} but {m} has dimension {}",
            m.intrinsic_dim()
        ));
    }
    let h = m.hausdorff_measure();
    if !(h > 0.0) {
        return Err(Error::LimitInfinite(d));
    }
    let mut out = TheoreticalLimit {
        s,
        d,
        measure: h,
        kind: LimitKind::Unknown,
        value: None,
        upper_bound: None,
        description: String::new(),
    };
    match params.regime() {
        Regime::Critical => {
            out.kind = LimitKind::ExactSd;
            out.value = Some(ball_volume(d) / h);
            out.description = format!("H_{d}(B^{d}) / H_{d}(A)");
        }
        Regime::Hypersingular if d == 1 => {
            out.kind = LimitKind::ExactD1;
            out.value = Some(2.0 * riemann_zeta(s)? / h.powf(s));
            out.description = "2 zeta(s) / H_1(A)^s".into();
        }
        Regime::Hypersingular if d == 2 => {
            let zl = hexagonal_zeta(s, 1e-9).unwrap_or_else(|_| {
                hexagonal_zeta_truncated(s, 2048)
            });
            out.kind = LimitKind::BoundHex;
            out.upper_bound = Some((0.75f64).powf(0.25 * s) * zl.upper() / h.powf(0.5 * s));
            out.description = format!(
                "(sqrt(3)/2)^(s/2) zeta_L(s) / H_2(A)^(s/2), zeta_L(s) <= {:.12}",
                zl.upper()
            );
        }
        Regime::Hypersingular => {
            out.description = format!("C_(s,{d}) / H_{d}(A)^(s/{d}); constant unknown for d >= 2");
        }
    }
    Ok(out)
}
