//! Exhaustive minimization of Fréchet functionals over finite candidate
//! domains.
//!
//! Every solver returns the full argmin set in canonical point order. On
//! lattice spaces with integer order and rational weights all candidates
//! share the denominator `total · q^r`, so they are compared on their integer
//! numerators and ties are exact. Otherwise values are compared in double
//! precision and a candidate is tied with the optimum when it lies within a
//! relative [`FLOAT_TIE_TOLERANCE`] of it.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::metric::{DiscreteMeasure, Kernel, MetricSpace, Order, PointId, Sample};

/// Relative tolerance for ties on the floating-point path.
pub const FLOAT_TIE_TOLERANCE: f64 = 1e-9;

/// Where candidates for the minimum are taken from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateDomain {
    /// Every point of the space.
    FullSpace,
    /// The distinct points of the sample.
    SampleSupport,
    /// The support of the measure.
    MeasureSupport,
}

impl CandidateDomain {
    pub fn as_str(self) -> &'static str {
        match self {
            CandidateDomain::FullSpace => "full_space",
            CandidateDomain::SampleSupport => "sample_support",
            CandidateDomain::MeasureSupport => "measure_support",
        }
    }
}

/// A mean set together with the optimal value (the Fréchet variance).
#[derive(Clone, Debug, PartialEq)]
pub struct MeanSetResult {
    pub order: Order,
    pub optimum: f64,
    /// The optimum as an exact rational, when `exact` is set.
    pub exact_optimum: Option<BigRational>,
    pub argmin: Vec<PointId>,
    pub domain: CandidateDomain,
    /// Whether the integer path was used.
    pub exact: bool,
}

impl MeanSetResult {
    pub fn contains(&self, p: PointId) -> bool {
        self.argmin.binary_search(&p).is_ok()
    }
}

/// Minimizes `x' ↦ ∫ d(x, x')^r dμ(x)` over `domain`. For
/// [`CandidateDomain::SampleSupport`] and [`CandidateDomain::MeasureSupport`]
/// the candidates are `supp(μ)`.
pub fn frechet_mean_set<S: MetricSpace + ?Sized>(
    space: &S,
    mu: &DiscreteMeasure,
    r: Order,
    domain: CandidateDomain,
) -> Result<MeanSetResult> {
    if space.is_empty() {
        return Err(crate::error::domain("cannot minimize over an empty space"));
    }
    mu.validate_in(space)?;
    let candidates: Vec<PointId> = match domain {
        CandidateDomain::FullSpace => (0..space.len()).map(PointId).collect(),
        CandidateDomain::SampleSupport | CandidateDomain::MeasureSupport => mu.support().to_vec(),
    };
    let kernel = Kernel::new(space, mu, r);

    if let (true, Some(den)) = (kernel.is_exact(), kernel.exact_denominator()) {
        let sums: Option<Vec<u128>> = candidates
            .par_iter()
            .map(|&c| kernel.exact_sum(space, mu, c))
            .collect();
        if let Some(sums) = sums {
            let best = *sums.iter().min().expect("non-empty candidates");
            let argmin = candidates
                .iter()
                .zip(&sums)
                .filter(|(_, &s)| s == best)
                .map(|(&c, _)| c)
                .collect();
            return Ok(MeanSetResult {
                order: r,
                optimum: best as f64 / den as f64,
                exact_optimum: Some(BigRational::new(BigInt::from(best), BigInt::from(den))),
                argmin,
                domain,
                exact: true,
            });
        }
    }

    let values: Vec<f64> = candidates
        .par_iter()
        .map(|&c| kernel.float_value(space, mu, c))
        .collect();
    let best = values.iter().copied().fold(f64::INFINITY, f64::min);
    let cutoff = best + FLOAT_TIE_TOLERANCE * best.abs();
    let argmin = candidates
        .iter()
        .zip(&values)
        .filter(|(_, &v)| v <= cutoff)
        .map(|(&c, _)| c)
        .collect();
    Ok(MeanSetResult {
        order: r,
        optimum: best,
        exact_optimum: None,
        argmin,
        domain,
        exact: false,
    })
}

/// Fréchet sample mean set and variance over the whole space.
pub fn sample_mean_set<S: MetricSpace + ?Sized>(
    space: &S,
    sample: &Sample,
    r: Order,
) -> Result<MeanSetResult> {
    sample.validate_in(space)?;
    frechet_mean_set(space, &DiscreteMeasure::empirical(sample), r, CandidateDomain::FullSpace)
}

/// Fréchet population mean set and variance over the whole space.
pub fn population_mean_set<S: MetricSpace + ?Sized>(
    space: &S,
    mu: &DiscreteMeasure,
    r: Order,
) -> Result<MeanSetResult> {
    frechet_mean_set(space, mu, r, CandidateDomain::FullSpace)
}

/// Restricted sample mean: candidates are the distinct sample points, so
/// the result is never empty.
pub fn restricted_sample_mean_set<S: MetricSpace + ?Sized>(
    space: &S,
    sample: &Sample,
    r: Order,
) -> Result<MeanSetResult> {
    sample.validate_in(space)?;
    frechet_mean_set(
        space,
        &DiscreteMeasure::empirical(sample),
        r,
        CandidateDomain::SampleSupport,
    )
}

/// Restricted population mean: candidates are `supp(μ)`.
pub fn restricted_population_mean_set<S: MetricSpace + ?Sized>(
    space: &S,
    mu: &DiscreteMeasure,
    r: Order,
) -> Result<MeanSetResult> {
    frechet_mean_set(space, mu, r, CandidateDomain::MeasureSupport)
}
