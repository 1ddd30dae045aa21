use super::{MetricSpace, PointId};
use crate::error::{domain, Result};

/// Evenly spaced points `k / q` for `k` in `lo ..= hi`, with `d(x, y) = |x - y|`.
///
/// Finite grids stand in for real intervals. Distances are multiples of
/// `1/q`, so functionals on a grid are evaluated exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpace {
    lo: i64,
    hi: i64,
    denominator: u64,
}

impl GridSpace {
    /// Grid `{lo/q, (lo+1)/q, ..., hi/q}`.
    pub fn new(lo: i64, hi: i64, denominator: u64) -> Result<Self> {
        if lo > hi {
            return Err(domain(format!("empty grid: lo {lo} > hi {hi}")));
        }
        if denominator == 0 {
            return Err(domain("grid denominator must be positive"));
        }
        if hi.checked_sub(lo).is_none_or(|w| w as u64 >= usize::MAX as u64) {
            return Err(domain("grid too large"));
        }
        Ok(Self {
            lo,
            hi,
            denominator,
        })
    }

    /// Grid with step `1/q` covering `[lo, hi]`; both ends must be grid
    /// points.
    pub fn from_interval(lo: f64, hi: f64, denominator: u64) -> Result<Self> {
        let to_units = |v: f64| -> Result<i64> {
            let scaled = v * denominator as f64;
            let rounded = scaled.round();
            if !scaled.is_finite() || (scaled - rounded).abs() > 1e-9 {
                return Err(domain(format!("{v} is not a multiple of 1/{denominator}")));
            }
            Ok(rounded as i64)
        };
        Self::new(to_units(lo)?, to_units(hi)?, denominator)
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    /// Position of `p` in units of `1/q`.
    pub fn units(&self, p: PointId) -> i64 {
        self.lo + p.0 as i64
    }

    pub fn value(&self, p: PointId) -> f64 {
        self.units(p) as f64 / self.denominator as f64
    }

    /// The grid point at `value`, if `value` is (within 1e-9 units) on the grid.
    pub fn point_at(&self, value: f64) -> Option<PointId> {
        let scaled = value * self.denominator as f64;
        let k = scaled.round();
        if (scaled - k).abs() > 1e-9 {
            return None;
        }
        self.point_at_units(k as i64)
    }

    pub fn point_at_units(&self, units: i64) -> Option<PointId> {
        (self.lo..=self.hi)
            .contains(&units)
            .then(|| PointId((units - self.lo) as usize))
    }
}

impl MetricSpace for GridSpace {
    fn len(&self) -> usize {
        (self.hi - self.lo) as usize + 1
    }

    fn distance(&self, a: PointId, b: PointId) -> f64 {
        self.units(a).abs_diff(self.units(b)) as f64 / self.denominator as f64
    }

    fn bound(&self) -> f64 {
        (self.hi - self.lo) as f64 / self.denominator as f64
    }

    fn lattice_denominator(&self) -> Option<u64> {
        Some(self.denominator)
    }

    fn lattice_distance(&self, a: PointId, b: PointId) -> Option<u64> {
        Some(self.units(a).abs_diff(self.units(b)))
    }

    fn label(&self, p: PointId) -> String {
        self.value(p).to_string()
    }
}

/// A space given by an explicit distance matrix.
///
/// Nothing is validated beyond the matrix shape, so the type can also hold
/// non-metrics for [`super::check_metric_axioms`] to diagnose.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixSpace {
    n: usize,
    distances: Vec<f64>,
    /// Integer distances and their denominator `q`.
    integer: Option<(Vec<u64>, u64)>,
    bound: f64,
    pseudo: bool,
    labels: Option<Vec<String>>,
}

impl MatrixSpace {
    /// Row-major integer matrix. The bound defaults to the largest entry.
    pub fn from_integer(n: usize, entries: Vec<u64>, pseudo: bool) -> Result<Self> {
        check_shape(n, entries.len())?;
        let distances = entries.iter().map(|&d| d as f64).collect();
        let bound = entries.iter().copied().max().unwrap_or(0) as f64;
        Ok(Self {
            n,
            distances,
            integer: Some((entries, 1)),
            bound,
            pseudo,
            labels: None,
        })
    }

    /// Row-major real matrix. The bound defaults to the largest entry.
    pub fn from_real(n: usize, entries: Vec<f64>, pseudo: bool) -> Result<Self> {
        check_shape(n, entries.len())?;
        let bound = entries.iter().copied().fold(0.0, f64::max);
        Ok(Self {
            n,
            distances: entries,
            integer: None,
            bound,
            pseudo,
            labels: None,
        })
    }

    /// Pairwise distances of an arbitrary space restricted to `subset`.
    pub fn restrict<S: MetricSpace + ?Sized>(space: &S, subset: &[PointId]) -> Self {
        let n = subset.len();
        let mut distances = Vec::with_capacity(n * n);
        let mut integer = space
            .lattice_denominator()
            .map(|q| (Vec::with_capacity(n * n), q));
        for &a in subset {
            for &b in subset {
                distances.push(space.distance(a, b));
                if let Some((v, _)) = integer.as_mut() {
                    match space.lattice_distance(a, b) {
                        Some(u) => v.push(u),
                        None => integer = None,
                    }
                }
            }
        }
        Self {
            n,
            distances,
            integer,
            bound: space.bound(),
            pseudo: space.is_pseudo(),
            labels: Some(subset.iter().map(|&p| space.label(p)).collect()),
        }
    }

    pub fn with_bound(mut self, bound: f64) -> Self {
        self.bound = bound;
        self
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(domain(format!("{} labels for {} points", labels.len(), self.n)));
        }
        self.labels = Some(labels);
        Ok(self)
    }
}

fn check_shape(n: usize, len: usize) -> Result<()> {
    if n == 0 {
        return Err(domain("a space needs at least one point"));
    }
    if n.checked_mul(n) != Some(len) {
        return Err(domain(format!("expected {n}x{n} entries, got {len}")));
    }
    Ok(())
}

impl MetricSpace for MatrixSpace {
    fn len(&self) -> usize {
        self.n
    }

    fn distance(&self, a: PointId, b: PointId) -> f64 {
        self.distances[a.0 * self.n + b.0]
    }

    fn bound(&self) -> f64 {
        self.bound
    }

    fn is_pseudo(&self) -> bool {
        self.pseudo
    }

    fn lattice_denominator(&self) -> Option<u64> {
        self.integer.as_ref().map(|(_, q)| *q)
    }

    fn lattice_distance(&self, a: PointId, b: PointId) -> Option<u64> {
        self.integer.as_ref().map(|(v, _)| v[a.0 * self.n + b.0])
    }

    fn label(&self, p: PointId) -> String {
        match &self.labels {
            Some(l) => l[p.0].clone(),
            None => p.0.to_string(),
        }
    }
}
