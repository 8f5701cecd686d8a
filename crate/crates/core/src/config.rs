use crate::error::{invalid, Result};

/// Provenance carried alongside a configuration.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConfigMeta {
    /// Canonical manifold string, e.g. `sphere:2`.
    pub manifold: String,
    /// Riesz exponent the configuration was produced for; 0 when none.
    pub s: f64,
    pub generator: String,
    pub seed: u64,
}

/// Location of a point in an atlas: which chart and where in its domain.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartPoint {
    pub chart: usize,
    pub u: Vec<f64>,
}

/// An ordered list of N points in R^d' (row-major storage).
#[derive(Debug, Clone, PartialEq)]
pub struct PointConfiguration {
    dim: usize,
    coords: Vec<f64>,
    chart_points: Option<Vec<ChartPoint>>,
    pub meta: ConfigMeta,
}

impl PointConfiguration {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return invalid("ambient dimension must be positive");
        }
        if coords.len() % dim != 0 {
            return invalid(format!(
                "{} coordinates do not split into points of dimension {dim}",
                coords.len()
            ));
        }
        Ok(Self {
            dim,
            coords,
            chart_points: None,
            meta: ConfigMeta::default(),
        })
    }

    pub fn from_points<P: AsRef<[f64]>>(points: &[P]) -> Result<Self> {
        let dim = match points.first() {
            Some(p) => p.as_ref().len(),
            None => return invalid("cannot infer dimension from an empty point list"),
        };
        let mut coords = Vec::with_capacity(dim * points.len());
        for (i, p) in points.iter().enumerate() {
            let p = p.as_ref();
            if p.len() != dim {
                return invalid(format!("point {i} has {} coordinates, expected {dim}", p.len()));
            }
            coords.extend_from_slice(p);
        }
        Self::new(dim, coords)
    }

    pub fn with_meta(mut self, meta: ConfigMeta) -> Self {
        self.meta = meta;
        self
    }

    pub fn with_chart_points(mut self, cp: Vec<ChartPoint>) -> Result<Self> {
        if cp.len() != self.len() {
            return invalid(format!("{} chart points for {} points", cp.len(), self.len()));
        }
        self.chart_points = Some(cp);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> std::slice::ChunksExact<'_, f64> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn chart_points(&self) -> Option<&[ChartPoint]> {
        self.chart_points.as_deref()
    }

    pub(crate) fn into_parts(self) -> (usize, Vec<f64>, Option<Vec<ChartPoint>>, ConfigMeta) {
        (self.dim, self.coords, self.chart_points, self.meta)
    }

    /// Returns the configuration scaled by `lambda` about the origin.
    pub fn scaled(&self, lambda: f64) -> Self {
        let mut out = self.clone();
        out.coords.iter_mut().for_each(|c| *c *= lambda);
        out.chart_points = None;
        out
    }
}
