//! Bounded (pseudo-)metric spaces over finite point sets, probability
//! measures on them, and the Fréchet functionals
//!
//! ```text
//! F_n(x') = (1/n) Σ d(X_i, x')^r          (sample)
//! F(x')   = Σ_x d(x, x')^r μ(x)           (population)
//! ```
//!
//! Spaces whose distances are integer multiples of a fixed quantum `1/q`
//! (Hamming graphs, interval grids, integer matrices) expose that lattice
//! through [`MetricSpace::lattice_denominator`]. For those spaces, an integer
//! order `r` and a measure with integer multiplicities, every functional is
//! accumulated exactly as `Σ count · units^r` and only divided at the very end.

mod spaces;

pub use spaces::{GridSpace, MatrixSpace};

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Index of a point in the canonical order of its space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PointId(pub usize);

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A finite metric space with a certified bound on its distances.
///
/// Implementations do not validate the axioms at construction;
/// [`check_metric_axioms`] does that on demand.
pub trait MetricSpace: Sync {
    /// Number of points. Points are `PointId(0) .. PointId(len - 1)`.
    fn len(&self) -> usize;

    fn distance(&self, a: PointId, b: PointId) -> f64;

    /// Bound `M` with `d(x, y) <= M` for all points.
    fn bound(&self) -> f64;

    /// Pseudo-metrics may have `d(x, y) = 0` for distinct points.
    fn is_pseudo(&self) -> bool {
        false
    }

    /// If every distance is an integer multiple of `1/q`, returns `q`.
    fn lattice_denominator(&self) -> Option<u64> {
        None
    }

    /// `d(a, b) · q` as an integer, when the space is a lattice space.
    fn lattice_distance(&self, _a: PointId, _b: PointId) -> Option<u64> {
        None
    }

    fn label(&self, p: PointId) -> String {
        p.0.to_string()
    }

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn contains(&self, p: PointId) -> bool {
        p.0 < self.len()
    }
}

/// All points of a space in canonical order.
pub fn points<S: MetricSpace + ?Sized>(space: &S) -> impl Iterator<Item = PointId> {
    (0..space.len()).map(PointId)
}

pub(crate) fn ensure_point<S: MetricSpace + ?Sized>(space: &S, p: PointId) -> Result<()> {
    if space.contains(p) {
        Ok(())
    } else {
        Err(domain(format!(
            "point {p} is not in a space of {} points",
            space.len()
        )))
    }
}

/// Distance from a point to a finite set; `+∞` for the empty set.
pub fn distance_to_set<S: MetricSpace + ?Sized>(space: &S, x: PointId, set: &[PointId]) -> f64 {
    set.iter()
        .map(|&a| space.distance(x, a))
        .fold(f64::INFINITY, f64::min)
}

/// Order `r >= 1` of a Fréchet functional.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Order {
    Integer(u32),
    Real(f64),
}

impl Order {
    /// Builds an order from a real number. Integral values become
    /// [`Order::Integer`] so that the exact path can be used.
    pub fn new(r: f64) -> Result<Self> {
        if !r.is_finite() || r < 1.0 {
            return Err(domain(format!("order r must be finite and >= 1, got {r}")));
        }
        if r.fract() == 0.0 && r <= u32::MAX as f64 {
            Ok(Order::Integer(r as u32))
        } else {
            Ok(Order::Real(r))
        }
    }

    pub fn integer(r: u32) -> Result<Self> {
        if r == 0 {
            return Err(domain("order r must be >= 1"));
        }
        Ok(Order::Integer(r))
    }

    pub fn value(self) -> f64 {
        match self {
            Order::Integer(k) => k as f64,
            Order::Real(r) => r,
        }
    }

    pub fn as_integer(self) -> Option<u32> {
        match self {
            Order::Integer(k) => Some(k),
            Order::Real(_) => None,
        }
    }

    pub(crate) fn pow(self, d: f64) -> f64 {
        match self {
            Order::Integer(k) if k <= i32::MAX as u32 => d.powi(k as i32),
            _ => d.powf(self.value()),
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Integer(k) => write!(f, "{k}"),
            Order::Real(r) => write!(f, "{r}"),
        }
    }
}

/// Weights of a [`DiscreteMeasure`].
#[derive(Clone, Debug, PartialEq)]
pub enum Weights {
    /// Rational weights `counts[i] / total`.
    Counts { counts: Vec<u64>, total: u64 },
    /// Real weights summing to one.
    Real(Vec<f64>),
}

/// A probability measure with finite support.
///
/// The support is kept sorted in canonical point order, and every support
/// point carries a strictly positive weight.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure {
    support: Vec<PointId>,
    weights: Weights,
}

const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

impl DiscreteMeasure {
    /// Measure with weights proportional to integer multiplicities.
    /// Repeated points are merged.
    pub fn from_counts(pairs: impl IntoIterator<Item = (PointId, u64)>) -> Result<Self> {
        let mut pairs: Vec<(PointId, u64)> = pairs.into_iter().collect();
        if pairs.is_empty() {
            return Err(domain("a measure needs a non-empty support"));
        }
        pairs.sort_by_key(|&(p, _)| p);
        let mut support: Vec<PointId> = Vec::with_capacity(pairs.len());
        let mut counts: Vec<u64> = Vec::with_capacity(pairs.len());
        for (p, c) in pairs {
            if c == 0 {
                return Err(domain(format!("point {p} has zero weight")));
            }
            if support.last() == Some(&p) {
                let last = counts.last_mut().expect("parallel vectors");
                *last = last
                    .checked_add(c)
                    .ok_or_else(|| domain("multiplicity overflow"))?;
            } else {
                support.push(p);
                counts.push(c);
            }
        }
        let total = counts
            .iter()
            .try_fold(0u64, |acc, &c| acc.checked_add(c))
            .ok_or_else(|| domain("total multiplicity overflows u64"))?;
        Ok(Self {
            support,
            weights: Weights::Counts { counts, total },
        })
    }

    /// Measure with real weights; they must be positive and sum to one
    /// within `1e-12`.
    pub fn from_weights(pairs: impl IntoIterator<Item = (PointId, f64)>) -> Result<Self> {
        let mut pairs: Vec<(PointId, f64)> = pairs.into_iter().collect();
        if pairs.is_empty() {
            return Err(domain("a measure needs a non-empty support"));
        }
        pairs.sort_by_key(|&(p, _)| p);
        let mut support = Vec::with_capacity(pairs.len());
        let mut weights: Vec<f64> = Vec::with_capacity(pairs.len());
        for (p, w) in pairs {
            if !(w.is_finite() && w > 0.0) {
                return Err(domain(format!("point {p} has non-positive weight {w}")));
            }
            if support.last() == Some(&p) {
                *weights.last_mut().expect("parallel vectors") += w;
            } else {
                support.push(p);
                weights.push(w);
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(domain(format!("weights sum to {sum}, not 1")));
        }
        Ok(Self {
            support,
            weights: Weights::Real(weights),
        })
    }

    pub fn dirac(p: PointId) -> Self {
        Self {
            support: vec![p],
            weights: Weights::Counts {
                counts: vec![1],
                total: 1,
            },
        }
    }

    pub fn uniform(points: impl IntoIterator<Item = PointId>) -> Result<Self> {
        Self::from_counts(points.into_iter().map(|p| (p, 1)))
    }

    /// The empirical measure `(1/n) Σ δ_{X_i}` of a sample.
    pub fn empirical(sample: &Sample) -> Self {
        Self::from_counts(sample.items().iter().map(|&p| (p, 1)))
            .expect("samples are non-empty and cannot overflow u64")
    }

    pub fn support(&self) -> &[PointId] {
        &self.support
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    /// Weight of the `i`-th support point.
    pub fn weight(&self, i: usize) -> f64 {
        match &self.weights {
            Weights::Counts { counts, total } => counts[i] as f64 / *total as f64,
            Weights::Real(w) => w[i],
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self.weights, Weights::Counts { .. })
    }

    pub fn validate_in<S: MetricSpace + ?Sized>(&self, space: &S) -> Result<()> {
        self.support.iter().try_for_each(|&p| ensure_point(space, p))
    }

    /// `Σ_x d(x, candidate)^r μ(x)`.
    pub fn functional<S: MetricSpace + ?Sized>(
        &self,
        space: &S,
        candidate: PointId,
        r: Order,
    ) -> Result<FunctionalValue> {
        ensure_point(space, candidate)?;
        self.validate_in(space)?;
        Ok(Kernel::new(space, self, r).value(space, self, candidate))
    }
}

/// An i.i.d. sample, with multiset semantics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    items: Vec<PointId>,
}

impl Sample {
    pub fn new(items: Vec<PointId>) -> Result<Self> {
        if items.is_empty() {
            return Err(domain("a sample needs at least one item"));
        }
        Ok(Self { items })
    }

    pub fn items(&self) -> &[PointId] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Distinct points of the sample, in canonical order.
    pub fn distinct(&self) -> Vec<PointId> {
        let mut v = self.items.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn validate_in<S: MetricSpace + ?Sized>(&self, space: &S) -> Result<()> {
        self.items.iter().try_for_each(|&p| ensure_point(space, p))
    }
}

/// Value of a Fréchet functional. `exact` is present when the value was
/// accumulated in integer arithmetic.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionalValue {
    pub value: f64,
    pub exact: Option<BigRational>,
}

const COMPARISON_SLACK: f64 = 1e-9;

impl FunctionalValue {
    pub fn from_exact(r: BigRational) -> Self {
        Self {
            value: ratio_to_f64(&r),
            exact: Some(r),
        }
    }

    pub fn from_float(value: f64) -> Self {
        Self { value, exact: None }
    }

    fn combine(
        &self,
        other: &Self,
        exact: impl Fn(&BigRational, &BigRational) -> BigRational,
        float: impl Fn(f64, f64) -> f64,
    ) -> Self {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => Self::from_exact(exact(a, b)),
            _ => Self::from_float(float(self.value, other.value)),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a - b, |a, b| a - b)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a + b, |a, b| a + b)
    }

    pub fn abs(&self) -> Self {
        match &self.exact {
            Some(a) => Self::from_exact(num_traits::Signed::abs(a)),
            None => Self::from_float(self.value.abs()),
        }
    }

    /// `self <= other`: exact when both sides are exact, otherwise with a
    /// relative slack of `1e-9`.
    pub fn le(&self, other: &Self) -> bool {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => a <= b,
            _ => {
                let scale = self.value.abs().max(other.value.abs()).max(1.0);
                self.value <= other.value + COMPARISON_SLACK * scale
            }
        }
    }

    pub fn same(&self, other: &Self) -> bool {
        self.le(other) && other.le(self)
    }
}

/// Nearest `f64` to a rational.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => r.to_f64().unwrap_or(f64::NAN),
    }
}

/// `(1/n) Σ d(X_i, candidate)^r`.
pub fn sample_functional<S: MetricSpace + ?Sized>(
    space: &S,
    sample: &Sample,
    candidate: PointId,
    r: Order,
) -> Result<FunctionalValue> {
    sample.validate_in(space)?;
    DiscreteMeasure::empirical(sample).functional(space, candidate, r)
}

/// `Σ_x d(x, candidate)^r μ(x)`.
pub fn population_functional<S: MetricSpace + ?Sized>(
    space: &S,
    mu: &DiscreteMeasure,
    candidate: PointId,
    r: Order,
) -> Result<FunctionalValue> {
    mu.functional(space, candidate, r)
}

/// How a functional is evaluated for a given (space, measure, order).
#[derive(Clone, Copy, Debug)]
pub(crate) enum Kernel {
    /// Integer accumulation of `count · units^r`; the functional equals the
    /// sum divided by `total · q^r`.
    Exact { q: u64, r: u32, total: u64 },
    Float { r: Order },
}

impl Kernel {
    pub(crate) fn new<S: MetricSpace + ?Sized>(space: &S, mu: &DiscreteMeasure, r: Order) -> Self {
        match (space.lattice_denominator(), r, &mu.weights) {
            (Some(q), Order::Integer(k), Weights::Counts { total, .. }) => Kernel::Exact {
                q,
                r: k,
                total: *total,
            },
            _ => Kernel::Float { r },
        }
    }

    pub(crate) fn is_exact(self) -> bool {
        matches!(self, Kernel::Exact { .. })
    }

    /// `Σ count_i · units(x_i, candidate)^r`, or `None` on overflow or a
    /// missing lattice distance.
    pub(crate) fn exact_sum<S: MetricSpace + ?Sized>(
        self,
        space: &S,
        mu: &DiscreteMeasure,
        candidate: PointId,
    ) -> Option<u128> {
        let (Kernel::Exact { r, .. }, Weights::Counts { counts, .. }) = (self, &mu.weights) else {
            return None;
        };
        let mut acc: u128 = 0;
        for (&x, &c) in mu.support.iter().zip(counts) {
            let units = space.lattice_distance(x, candidate)? as u128;
            let term = units.checked_pow(r)?.checked_mul(c as u128)?;
            acc = acc.checked_add(term)?;
        }
        Some(acc)
    }

    /// Denominator turning an exact sum into the functional value.
    pub(crate) fn exact_denominator(self) -> Option<u128> {
        match self {
            Kernel::Exact { q, r, total } => (q as u128)
                .checked_pow(r)
                .and_then(|p| p.checked_mul(total as u128)),
            Kernel::Float { .. } => None,
        }
    }

    pub(crate) fn float_value<S: MetricSpace + ?Sized>(
        self,
        space: &S,
        mu: &DiscreteMeasure,
        candidate: PointId,
    ) -> f64 {
        let r = match self {
            Kernel::Exact { r, .. } => Order::Integer(r),
            Kernel::Float { r } => r,
        };
        match &mu.weights {
            Weights::Counts { counts, total } => {
                let s: f64 = mu
                    .support
                    .iter()
                    .zip(counts)
                    .map(|(&x, &c)| c as f64 * r.pow(space.distance(x, candidate)))
                    .sum();
                s / *total as f64
            }
            Weights::Real(w) => mu
                .support
                .iter()
                .zip(w)
                .map(|(&x, &wi)| wi * r.pow(space.distance(x, candidate)))
                .sum(),
        }
    }

    pub(crate) fn value<S: MetricSpace + ?Sized>(
        self,
        space: &S,
        mu: &DiscreteMeasure,
        candidate: PointId,
    ) -> FunctionalValue {
        if let (Some(sum), Some(den)) = (
            self.exact_sum(space, mu, candidate),
            self.exact_denominator(),
        ) {
            return FunctionalValue {
                value: sum as f64 / den as f64,
                exact: Some(BigRational::new(BigInt::from(sum), BigInt::from(den))),
            };
        }
        FunctionalValue {
            value: self.float_value(space, mu, candidate),
            exact: None,
        }
    }
}

/// A metric axiom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    /// `d(x, y) >= 0` and finite.
    NonNegativity,
    /// `d(x, x) = 0`.
    Identity,
    Symmetry,
    /// `d(x, z) <= d(x, y) + d(y, z)`; witness is `(x, y, z)`.
    Triangle,
    /// `d(x, y) <= M`.
    Bound,
    /// `d(x, y) = 0` implies `x = y`; skipped for pseudo-metrics.
    Coincidence,
}

/// One violated axiom, with the first witness found and the total number of
/// violating tuples.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub witness: Vec<PointId>,
    pub count: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct AxiomReport {
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violation(&self, axiom: Axiom) -> Option<&AxiomViolation> {
        self.violations.iter().find(|v| v.axiom == axiom)
    }

    fn record(&mut self, axiom: Axiom, witness: &[PointId]) {
        match self.violations.iter_mut().find(|v| v.axiom == axiom) {
            Some(v) => v.count += 1,
            None => self.violations.push(AxiomViolation {
                axiom,
                witness: witness.to_vec(),
                count: 1,
            }),
        }
    }
}

const AXIOM_TOLERANCE: f64 = 1e-12;

/// Checks every metric axiom by exhaustive enumeration of pairs and triples.
///
/// Lattice spaces are checked on integer distances; other spaces use a
/// tolerance of `1e-12 · max(1, M)`.
pub fn check_metric_axioms<S: MetricSpace + ?Sized>(space: &S) -> AxiomReport {
    let n = space.len();
    let mut report = AxiomReport::default();
    let tol = AXIOM_TOLERANCE * space.bound().abs().max(1.0);
    let exact = space.lattice_denominator().is_some();
    let dist = |a: usize, b: usize| space.distance(PointId(a), PointId(b));

    for x in 0..n {
        for y in 0..n {
            let w = [PointId(x), PointId(y)];
            let d = dist(x, y);
            if !(d >= 0.0 && d.is_finite()) {
                report.record(Axiom::NonNegativity, &w);
            }
            if x == y && d != 0.0 {
                report.record(Axiom::Identity, &w[..1]);
            }
            if x < y {
                let symmetric = match exact {
                    true => space.lattice_distance(w[0], w[1]) == space.lattice_distance(w[1], w[0]),
                    false => (d - dist(y, x)).abs() <= tol,
                };
                if !symmetric {
                    report.record(Axiom::Symmetry, &w);
                }
                if !space.is_pseudo() && d == 0.0 {
                    report.record(Axiom::Coincidence, &w);
                }
            }
            if d > space.bound() + if exact { 0.0 } else { tol } {
                report.record(Axiom::Bound, &w);
            }
        }
    }

    // Triangle inequality, parallel over the first point.
    let triangle: Vec<(u64, Option<[PointId; 3]>)> = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut count = 0u64;
            let mut first = None;
            for y in 0..n {
                for z in 0..n {
                    let (px, py, pz) = (PointId(x), PointId(y), PointId(z));
                    let violated = match (
                        space.lattice_distance(px, pz),
                        space.lattice_distance(px, py),
                        space.lattice_distance(py, pz),
                    ) {
                        (Some(xz), Some(xy), Some(yz)) if exact => xz > xy + yz,
                        _ => dist(x, z) > dist(x, y) + dist(y, z) + tol,
                    };
                    if violated {
                        count += 1;
                        first.get_or_insert([px, py, pz]);
                    }
                }
            }
            (count, first)
        })
        .collect();
    let total: u64 = triangle.iter().map(|t| t.0).sum();
    if let Some(w) = triangle.iter().find_map(|t| t.1) {
        report.violations.push(AxiomViolation {
            axiom: Axiom::Triangle,
            witness: w.to_vec(),
            count: total,
        });
    }
    report.violations.sort_by_key(|v| v.axiom);
    report
}

/// The constant `γ = 1 + Σ_{k=1}^{r-1} C(r, k) = 2^r - 1` of the
/// equicontinuity bound `|d(z,x)^r - d(z,y)^r| <= γ M^{r-1} d(x,y)`.
pub fn equicontinuity_constant(r: u32) -> u64 {
    assert!((1..64).contains(&r), "r must lie in 1..64");
    (1u64 << r) - 1
}

/// `γ · M^{r-1} · delta`.
pub fn equicontinuity_bound(bound: f64, r: u32, delta: f64) -> f64 {
    equicontinuity_constant(r) as f64 * bound.powi(r as i32 - 1) * delta
}

/// Modulus of continuity of the exponentiated point functions,
///
/// ```text
/// s(δ) = sup_{z ∈ W} sup_{x, y ∈ W, d(x, y) < δ} |d(z, x)^r - d(z, y)^r|
/// ```
///
/// computed exactly by enumerating all triples of `support`.
pub fn modulus_of_continuity<S: MetricSpace + ?Sized>(
    space: &S,
    support: &[PointId],
    delta: f64,
    r: Order,
) -> Result<f64> {
    if support.is_empty() {
        return Err(domain("modulus of continuity needs a non-empty support"));
    }
    if !(delta > 0.0) {
        return Err(domain(format!("delta must be positive, got {delta}")));
    }
    support.iter().try_for_each(|&p| ensure_point(space, p))?;

    let pairs: Vec<(PointId, PointId)> = support
        .iter()
        .flat_map(|&x| support.iter().map(move |&y| (x, y)))
        .filter(|&(x, y)| x < y && space.distance(x, y) < delta)
        .collect();
    if pairs.is_empty() {
        return Ok(0.0);
    }

    if let (Some(q), Some(k)) = (space.lattice_denominator(), r.as_integer()) {
        let exact: Option<Vec<u128>> = support
            .par_iter()
            .map(|&z| {
                pairs.iter().try_fold(0u128, |best, &(x, y)| {
                    let a = (space.lattice_distance(z, x)? as u128).checked_pow(k)?;
                    let b = (space.lattice_distance(z, y)? as u128).checked_pow(k)?;
                    Some(best.max(a.abs_diff(b)))
                })
            })
            .collect();
        if let (Some(values), Some(den)) = (exact, (q as u128).checked_pow(k)) {
            let best = values.into_iter().max().unwrap_or(0);
            return Ok(best as f64 / den as f64);
        }
    }

    let best = support
        .par_iter()
        .map(|&z| {
            pairs
                .iter()
                .map(|&(x, y)| (r.pow(space.distance(z, x)) - r.pow(space.distance(z, y))).abs())
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    Ok(best)
}
