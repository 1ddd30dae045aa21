//! Seeded Monte Carlo experiments on the consistency of Fréchet sample
//! means.
//!
//! For each replication a cumulative i.i.d. sample is drawn from `μ`. At
//! every checkpoint `n` the sample mean set `Θ̂_n` and variance `σ̂_n` are
//! computed (and their restricted versions when asked for), together with
//! the diagnostics
//!
//! ```text
//! T_n(z)   = F_n(z) - F(z)
//! T*_n(z)  = F_n(z) - σ
//! TR*_n(z) = F_n(z) - σ*
//! ```
//!
//! and the two sandwich inequalities
//!
//! ```text
//! T_n(θ̂)  <= T*_n(θ̂)   <= T_n(θ)
//! T_n(θ̂*) <= TR*_n(θ̂*) <= T_n(θ*) + min_{x' ∈ X̄} |TR*_n(x') - TR*_n(θ*)|
//! ```
//!
//! for every `θ̂ ∈ Θ̂_n`, `θ ∈ Θ`, `θ̂* ∈ Θ̂*_n`, `θ* ∈ Θ*`. On lattice
//! spaces they are checked in exact rational arithmetic. After the last
//! checkpoint the trajectory of mean sets is reduced to a Kuratowski
//! outer-limit estimate and compared with the population mean set.

mod config;
mod report;
mod rng;

pub use config::{ConfigFile, DEFAULT_CHECKPOINTS, DEFAULT_REPLICATIONS, SCHEMA_VERSION};
pub use report::{write_reports, ConfigEcho, CsvRow, PopulationEcho, Summary, REPORT_SCHEMA_VERSION};
pub use rng::{sample_iid, seeded_rng, splitmix64, stream_seed, Sampler};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::graph::HammingSpace;
use crate::limits::{default_burn_in, inclusion_check, InclusionReport, kuratowski_limsup, OuterLimitEstimate, SetTrajectory};
use crate::metric::{
    DiscreteMeasure, FunctionalValue, GridSpace, Kernel, MetricSpace, Order, PointId, Sample,
};
use crate::solver::{frechet_mean_set, CandidateDomain, MeanSetResult};

/// Spaces an experiment can run on.
#[derive(Clone, Debug, PartialEq)]
pub enum LabSpace {
    Graph(HammingSpace),
    Grid(GridSpace),
}

impl LabSpace {
    fn inner(&self) -> &dyn MetricSpace {
        match self {
            LabSpace::Graph(g) => g,
            LabSpace::Grid(g) => g,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            LabSpace::Graph(g) => format!("graphs on {} vertices (Hamming)", g.nv()),
            LabSpace::Grid(g) => format!(
                "grid [{}, {}] step 1/{}",
                g.value(PointId(0)),
                g.value(PointId(g.len() - 1)),
                g.denominator()
            ),
        }
    }
}

impl MetricSpace for LabSpace {
    fn len(&self) -> usize {
        self.inner().len()
    }
    fn distance(&self, a: PointId, b: PointId) -> f64 {
        self.inner().distance(a, b)
    }
    fn bound(&self) -> f64 {
        self.inner().bound()
    }
    fn is_pseudo(&self) -> bool {
        self.inner().is_pseudo()
    }
    fn lattice_denominator(&self) -> Option<u64> {
        self.inner().lattice_denominator()
    }
    fn lattice_distance(&self, a: PointId, b: PointId) -> Option<u64> {
        self.inner().lattice_distance(a, b)
    }
    fn label(&self, p: PointId) -> String {
        self.inner().label(p)
    }
}

/// Parameters of the outer-limit estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LimitParams {
    pub epsilon: f64,
    /// Sample size at which the tail starts; `None` is half the checkpoints.
    pub burn_in: Option<u64>,
    pub min_visits: usize,
}

impl Default for LimitParams {
    fn default() -> Self {
        Self {
            epsilon: 0.0,
            burn_in: None,
            min_visits: crate::limits::DEFAULT_MIN_VISITS,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub space: LabSpace,
    pub mu: DiscreteMeasure,
    pub r: Order,
    pub n_max: u64,
    /// Strictly ascending sample sizes, all `<= n_max`.
    pub checkpoints: Vec<u64>,
    pub replications: u32,
    pub seed: u64,
    pub restricted: bool,
    pub limits: LimitParams,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.checkpoints.is_empty() {
            return bad("no checkpoints".into());
        }
        if self.checkpoints[0] == 0 || self.checkpoints.windows(2).any(|w| w[0] >= w[1]) {
            return bad(format!(
                "checkpoints must be positive and strictly ascending: {:?}",
                self.checkpoints
            ));
        }
        if *self.checkpoints.last().unwrap() > self.n_max {
            return bad(format!("checkpoints exceed n_max = {}", self.n_max));
        }
        if self.replications == 0 {
            return bad("replications must be at least 1".into());
        }
        if self.mu.validate_in(&self.space).is_err() {
            return bad("measure support is not in the space".into());
        }
        let eps = self.limits.epsilon;
        if !(eps >= 0.0 && eps.is_finite()) {
            return bad(format!("epsilon must be finite and >= 0, got {eps}"));
        }
        if self.limits.min_visits == 0 {
            return bad("min_visits must be at least 1".into());
        }
        if let Some(b) = self.limits.burn_in {
            if !self.checkpoints.iter().any(|&n| n >= b) {
                return bad(format!("burn_in {b} is past the last checkpoint"));
            }
        }
        Ok(())
    }

    /// Index of the first checkpoint in the tail.
    pub fn burn_in_index(&self) -> usize {
        match self.limits.burn_in {
            Some(b) => self.checkpoints.partition_point(|&n| n < b),
            None => default_burn_in(self.checkpoints.len()),
        }
    }
}

/// Restricted quantities at one checkpoint.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RestrictedCheckpoint {
    pub sample_variance: f64,
    pub abs_variance_error: f64,
    pub mean_set: Vec<PointId>,
    /// `Θ̂*_n ⊆ {X_1, ..., X_n}`.
    pub within_sample: bool,
    /// `Θ̂*_n ⊆ Θ*`.
    pub in_population: bool,
    /// `TR*_n(θ̂*)`, common to every `θ̂* ∈ Θ̂*_n`.
    pub tr_star: f64,
    pub sandwich_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckpointRecord {
    pub n: u64,
    pub sample_variance: f64,
    /// `|σ̂_n - σ|`.
    pub abs_variance_error: f64,
    pub mean_set: Vec<PointId>,
    /// `Θ̂_n ⊆ Θ`.
    pub in_population: bool,
    /// `T*_n(θ̂)`, common to every `θ̂ ∈ Θ̂_n`.
    pub t_star: f64,
    /// `max_{θ ∈ Θ} |T_n(θ)|`.
    pub max_abs_t_population_means: f64,
    /// `sup_z |T_n(z)|` over the whole space.
    pub sup_abs_t: f64,
    pub sandwich_ok: bool,
    /// `|σ̂_n - σ| = |T*_n(θ̂)|`.
    pub variance_identity_ok: bool,
    pub restricted: Option<RestrictedCheckpoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReplicationRecord {
    pub replication: u32,
    pub stream_seed: u64,
    pub checkpoints: Vec<CheckpointRecord>,
    pub outer_limit: OuterLimitEstimate,
    pub outer_limit_included: bool,
    /// `max_{x ∈ estimate} d(x, Θ)`, zero when included.
    pub outer_limit_excess: f64,
    pub restricted_outer_limit: Option<OuterLimitEstimate>,
    pub restricted_outer_limit_included: Option<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub population: MeanSetResult,
    pub restricted_population: Option<MeanSetResult>,
    pub replications: Vec<ReplicationRecord>,
}

/// `T_n(z) = F_n(z) - F(z)`.
pub fn diagnostic_t<S: MetricSpace + ?Sized>(
    space: &S,
    mu: &DiscreteMeasure,
    sample: &Sample,
    z: PointId,
    r: Order,
) -> Result<FunctionalValue> {
    sample.validate_in(space)?;
    let empirical = DiscreteMeasure::empirical(sample).functional(space, z, r)?;
    let population = mu.functional(space, z, r)?;
    Ok(empirical.sub(&population))
}

fn optimum_value(res: &MeanSetResult) -> FunctionalValue {
    match &res.exact_optimum {
        Some(e) => FunctionalValue::from_exact(e.clone()),
        None => FunctionalValue::from_float(res.optimum),
    }
}

struct Population<'a> {
    space: &'a LabSpace,
    mu: &'a DiscreteMeasure,
    kernel: Kernel,
    mean: MeanSetResult,
    sigma: FunctionalValue,
    restricted: Option<(MeanSetResult, FunctionalValue)>,
}

impl Population<'_> {
    fn functional(&self, z: PointId) -> FunctionalValue {
        self.kernel.value(self.space, self.mu, z)
    }
}

/// Runs every replication of an experiment. Replications run in parallel;
/// each one draws from its own stream, so the report does not depend on
/// the thread count.
pub fn run_consistency_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let space = &cfg.space;
    let mean = frechet_mean_set(space, &cfg.mu, cfg.r, CandidateDomain::FullSpace)?;
    let restricted = if cfg.restricted {
        let res = frechet_mean_set(space, &cfg.mu, cfg.r, CandidateDomain::MeasureSupport)?;
        let value = optimum_value(&res);
        Some((res, value))
    } else {
        None
    };
    let population = Population {
        space,
        mu: &cfg.mu,
        kernel: Kernel::new(space, &cfg.mu, cfg.r),
        sigma: optimum_value(&mean),
        mean,
        restricted,
    };

    let replications = (0..cfg.replications)
        .into_par_iter()
        .map(|k| run_replication(cfg, &population, k))
        .collect::<Result<Vec<_>>>()?;

    Ok(ExperimentReport {
        config: cfg.clone(),
        population: population.mean.clone(),
        restricted_population: population.restricted.map(|(r, _)| r),
        replications,
    })
}

fn run_replication(cfg: &ExperimentConfig, pop: &Population<'_>, k: u32) -> Result<ReplicationRecord> {
    let seed = stream_seed(cfg.seed, k as u64);
    let mut rng = seeded_rng(seed);
    let sampler = Sampler::new(&cfg.mu);
    let mut counts = vec![0u64; sampler.support().len()];
    let mut drawn = 0u64;
    let mut checkpoints = Vec::with_capacity(cfg.checkpoints.len());

    for &n in &cfg.checkpoints {
        while drawn < n {
            counts[sampler.draw_index(&mut rng)] += 1;
            drawn += 1;
        }
        let empirical = DiscreteMeasure::from_counts(
            sampler
                .support()
                .iter()
                .zip(&counts)
                .filter(|(_, &c)| c > 0)
                .map(|(&p, &c)| (p, c)),
        )?;
        checkpoints.push(evaluate_checkpoint(cfg, pop, &empirical, n)?);
    }

    let burn_in = cfg.burn_in_index();
    let limits = cfg.limits;
    let outer = |sets: Vec<Vec<PointId>>, target: &[PointId]| -> Result<(OuterLimitEstimate, InclusionReport)> {
        let traj = SetTrajectory::new(&cfg.space, sets)?;
        let est = kuratowski_limsup(&traj, limits.epsilon, burn_in, limits.min_visits)?;
        let inclusion = inclusion_check(&cfg.space, &est.points, target);
        Ok((est, inclusion))
    };
    let (outer_limit, inclusion) = outer(
        checkpoints.iter().map(|c| c.mean_set.clone()).collect(),
        &pop.mean.argmin,
    )?;
    let (restricted_outer_limit, restricted_outer_limit_included) = match &pop.restricted {
        Some((res, _)) => {
            let sets = checkpoints
                .iter()
                .map(|c| c.restricted.as_ref().map(|r| r.mean_set.clone()).unwrap_or_default())
                .collect();
            let (est, inc) = outer(sets, &res.argmin)?;
            (Some(est), Some(inc.included))
        }
        None => (None, None),
    };

    Ok(ReplicationRecord {
        replication: k,
        stream_seed: seed,
        checkpoints,
        outer_limit,
        outer_limit_included: inclusion.included,
        outer_limit_excess: inclusion.violations.iter().map(|v| v.1).fold(0.0, f64::max),
        restricted_outer_limit,
        restricted_outer_limit_included,
    })
}

fn evaluate_checkpoint(
    cfg: &ExperimentConfig,
    pop: &Population<'_>,
    empirical: &DiscreteMeasure,
    n: u64,
) -> Result<CheckpointRecord> {
    let space = &cfg.space;
    let kernel = Kernel::new(space, empirical, cfg.r);
    let sample_fn = |z: PointId| kernel.value(space, empirical, z);
    let t = |z: PointId| sample_fn(z).sub(&pop.functional(z));

    let sample = frechet_mean_set(space, empirical, cfg.r, CandidateDomain::FullSpace)?;
    let sigma_hat = optimum_value(&sample);
    let error = sigma_hat.sub(&pop.sigma).abs();

    // T*_n(θ̂) from F_n(θ̂) itself, so the identity below is a real check.
    let t_star: Vec<FunctionalValue> = sample
        .argmin
        .iter()
        .map(|&z| sample_fn(z).sub(&pop.sigma))
        .collect();
    let t_at_sample_means: Vec<FunctionalValue> = sample.argmin.iter().map(|&z| t(z)).collect();
    let t_at_population_means: Vec<FunctionalValue> = pop.mean.argmin.iter().map(|&z| t(z)).collect();

    let sandwich_ok = t_at_sample_means
        .iter()
        .zip(&t_star)
        .all(|(lo, mid)| lo.le(mid) && t_at_population_means.iter().all(|hi| mid.le(hi)));
    let variance_identity_ok = t_star.iter().all(|ts| ts.abs().same(&error));

    let sup_abs_t = crate::metric::points(space)
        .map(|z| (kernel.float_value(space, empirical, z) - pop.kernel.float_value(space, pop.mu, z)).abs())
        .fold(0.0, f64::max);
    let max_abs_t_population_means = t_at_population_means
        .iter()
        .map(|v| v.value.abs())
        .fold(0.0, f64::max);

    let restricted = match &pop.restricted {
        Some((pop_res, sigma_star)) => {
            let res = frechet_mean_set(space, empirical, cfg.r, CandidateDomain::SampleSupport)?;
            let sigma_hat_star = optimum_value(&res);
            let tr = |z: PointId| sample_fn(z).sub(sigma_star);
            let observed = empirical.support();
            let lower: Vec<FunctionalValue> = res.argmin.iter().map(|&z| t(z)).collect();
            let middle: Vec<FunctionalValue> = res.argmin.iter().map(|&z| tr(z)).collect();
            let upper: Vec<FunctionalValue> = pop_res
                .argmin
                .iter()
                .map(|&theta| {
                    let at_theta = tr(theta);
                    let slack = observed
                        .iter()
                        .map(|&x| tr(x).sub(&at_theta).abs())
                        .reduce(|a, b| if a.le(&b) { a } else { b })
                        .expect("non-empty sample");
                    t(theta).add(&slack)
                })
                .collect();
            let sandwich_ok = lower
                .iter()
                .zip(&middle)
                .all(|(lo, mid)| lo.le(mid) && upper.iter().all(|hi| mid.le(hi)));
            let within_sample = res.argmin.iter().all(|p| observed.binary_search(p).is_ok());
            let in_population = inclusion_check(space, &res.argmin, &pop_res.argmin).included;
            Some(RestrictedCheckpoint {
                sample_variance: sigma_hat_star.value,
                abs_variance_error: sigma_hat_star.sub(sigma_star).abs().value,
                tr_star: middle.first().map(|v| v.value).unwrap_or(f64::NAN),
                mean_set: res.argmin,
                within_sample,
                in_population,
                sandwich_ok,
            })
        }
        None => None,
    };

    Ok(CheckpointRecord {
        n,
        sample_variance: sigma_hat.value,
        abs_variance_error: error.value,
        in_population: inclusion_check(space, &sample.argmin, &pop.mean.argmin).included,
        mean_set: sample.argmin,
        t_star: t_star.first().map(|v| v.value).unwrap_or(f64::NAN),
        max_abs_t_population_means,
        sup_abs_t,
        sandwich_ok,
        variance_identity_ok,
        restricted,
    })
}

/// Empirical frequency of an event at one checkpoint, across replications.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrequencyRow {
    pub n: u64,
    pub hits: u64,
    pub total: u64,
    pub frequency: f64,
    /// Binomial standard error `sqrt(p (1 - p) / total)`.
    pub std_error: f64,
}

/// Per-checkpoint frequency of `event` across replications.
pub fn oscillation_stats(
    records: &[ReplicationRecord],
    event: impl Fn(&CheckpointRecord) -> bool,
) -> Result<Vec<FrequencyRow>> {
    let Some(first) = records.first() else {
        return Err(domain("no replication records"));
    };
    let total = records.len() as u64;
    (0..first.checkpoints.len())
        .map(|i| {
            let mut hits = 0u64;
            for rec in records {
                let cp = rec
                    .checkpoints
                    .get(i)
                    .ok_or_else(|| domain("records have different checkpoint counts"))?;
                hits += event(cp) as u64;
            }
            let p = hits as f64 / total as f64;
            Ok(FrequencyRow {
                n: first.checkpoints[i].n,
                hits,
                total,
                frequency: p,
                std_error: (p * (1.0 - p) / total as f64).sqrt(),
            })
        })
        .collect()
}

/// Median of a non-empty slice (mean of the two middle values for even
/// lengths).
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.is_empty() {
        f64::NAN
    } else if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    }
}

/// Aggregates over replications at one checkpoint.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckpointSummary {
    pub n: u64,
    pub median_abs_variance_error: f64,
    pub mean_abs_variance_error: f64,
    pub median_sup_abs_t: f64,
    pub full_space_frequency: f64,
    pub multi_point_frequency: f64,
    pub in_population_rate: f64,
    pub sandwich_violations: u64,
    pub variance_identity_violations: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restricted_median_abs_variance_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restricted_within_sample_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restricted_sandwich_violations: Option<u64>,
}

/// A named pass/fail check over a whole experiment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AssertionBlock {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Outer-limit inclusion rate required by the summary assertions.
pub const INCLUSION_RATE_THRESHOLD: f64 = 0.99;

impl ExperimentReport {
    pub fn checkpoint_summaries(&self) -> Vec<CheckpointSummary> {
        let reps = &self.replications;
        let total = reps.len() as f64;
        let space_len = self.config.space.len();
        (0..self.config.checkpoints.len())
            .map(|i| {
                let cps: Vec<&CheckpointRecord> = reps.iter().map(|r| &r.checkpoints[i]).collect();
                let errors: Vec<f64> = cps.iter().map(|c| c.abs_variance_error).collect();
                let rate = |f: &dyn Fn(&CheckpointRecord) -> bool| {
                    cps.iter().filter(|c| f(c)).count() as f64 / total
                };
                let count = |f: &dyn Fn(&CheckpointRecord) -> bool| cps.iter().filter(|c| f(c)).count() as u64;
                let restricted: Vec<&RestrictedCheckpoint> =
                    cps.iter().filter_map(|c| c.restricted.as_ref()).collect();
                let has_restricted = !restricted.is_empty();
                CheckpointSummary {
                    n: self.config.checkpoints[i],
                    median_abs_variance_error: median(&errors),
                    mean_abs_variance_error: errors.iter().sum::<f64>() / total,
                    median_sup_abs_t: median(&cps.iter().map(|c| c.sup_abs_t).collect::<Vec<_>>()),
                    full_space_frequency: rate(&|c| c.mean_set.len() == space_len),
                    multi_point_frequency: rate(&|c| c.mean_set.len() > 1),
                    in_population_rate: rate(&|c| c.in_population),
                    sandwich_violations: count(&|c| !c.sandwich_ok),
                    variance_identity_violations: count(&|c| !c.variance_identity_ok),
                    restricted_median_abs_variance_error: has_restricted.then(|| {
                        median(&restricted.iter().map(|r| r.abs_variance_error).collect::<Vec<_>>())
                    }),
                    restricted_within_sample_rate: has_restricted.then(|| {
                        restricted.iter().filter(|r| r.within_sample).count() as f64 / total
                    }),
                    restricted_sandwich_violations: has_restricted
                        .then(|| restricted.iter().filter(|r| !r.sandwich_ok).count() as u64),
                }
            })
            .collect()
    }

    pub fn outer_limit_inclusion_rate(&self) -> f64 {
        let hits = self.replications.iter().filter(|r| r.outer_limit_included).count();
        hits as f64 / self.replications.len() as f64
    }

    /// Largest outer-limit excess over all replications.
    pub fn max_outer_limit_excess(&self) -> f64 {
        self.replications.iter().map(|r| r.outer_limit_excess).fold(0.0, f64::max)
    }

    pub fn restricted_outer_limit_inclusion_rate(&self) -> Option<f64> {
        self.restricted_population.as_ref()?;
        let hits = self
            .replications
            .iter()
            .filter(|r| r.restricted_outer_limit_included == Some(true))
            .count();
        Some(hits as f64 / self.replications.len() as f64)
    }

    /// The pass/fail checks reported by the CLI.
    pub fn assertions(&self) -> Vec<AssertionBlock> {
        let summaries = self.checkpoint_summaries();
        let mut out = Vec::new();
        let sum = |f: &dyn Fn(&CheckpointSummary) -> u64| summaries.iter().map(f).sum::<u64>();
        let checks = (self.replications.len() * summaries.len()) as u64;

        let v = sum(&|s| s.sandwich_violations);
        out.push(AssertionBlock {
            name: "sandwich".into(),
            passed: v == 0,
            detail: format!("{v} violations in {checks} checkpoints"),
        });
        let v = sum(&|s| s.variance_identity_violations);
        out.push(AssertionBlock {
            name: "variance identity".into(),
            passed: v == 0,
            detail: format!("{v} violations in {checks} checkpoints"),
        });
        let rate = self.outer_limit_inclusion_rate();
        out.push(AssertionBlock {
            name: "outer limit inclusion".into(),
            passed: rate >= INCLUSION_RATE_THRESHOLD,
            detail: format!("rate {rate:.4} (threshold {INCLUSION_RATE_THRESHOLD})"),
        });
        if let Some(rate) = self.restricted_outer_limit_inclusion_rate() {
            let v = sum(&|s| s.restricted_sandwich_violations.unwrap_or(0));
            out.push(AssertionBlock {
                name: "restricted sandwich".into(),
                passed: v == 0,
                detail: format!("{v} violations in {checks} checkpoints"),
            });
            let outside = self
                .replications
                .iter()
                .flat_map(|r| &r.checkpoints)
                .filter(|c| c.restricted.as_ref().is_some_and(|r| !r.within_sample))
                .count();
            out.push(AssertionBlock {
                name: "restricted mean within sample".into(),
                passed: outside == 0,
                detail: format!("{outside} checkpoints with a mean outside the sample"),
            });
            out.push(AssertionBlock {
                name: "restricted outer limit inclusion".into(),
                passed: rate >= INCLUSION_RATE_THRESHOLD,
                detail: format!("rate {rate:.4} (threshold {INCLUSION_RATE_THRESHOLD})"),
            });
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{enumerate_space, GraphSpaceConfig};

    fn interval(r: u32, checkpoints: Vec<u64>, reps: u32) -> ExperimentConfig {
        let grid = GridSpace::from_interval(-1.0, 1.0, 100).unwrap();
        let mu = DiscreteMeasure::uniform([PointId(0), PointId(200)]).unwrap();
        ExperimentConfig {
            name: "interval".into(),
            space: LabSpace::Grid(grid),
            mu,
            r: Order::Integer(r),
            n_max: *checkpoints.last().unwrap(),
            checkpoints,
            replications: reps,
            seed: 11,
            restricted: true,
            limits: LimitParams::default(),
        }
    }

    #[test]
    fn diagnostic_t_vanishes_on_exact_proportions() {
        let grid = GridSpace::from_interval(-1.0, 1.0, 100).unwrap();
        let mu = DiscreteMeasure::uniform([PointId(0), PointId(200)]).unwrap();
        let sample = Sample::new(vec![PointId(0), PointId(200), PointId(200), PointId(0)]).unwrap();
        for z in [0, 37, 100, 200] {
            for r in 1..=3 {
                let t = diagnostic_t(&grid, &mu, &sample, PointId(z), Order::Integer(r)).unwrap();
                assert_eq!(t.exact, Some(num_rational::BigRational::from_integer(0.into())));
            }
        }
        let t = diagnostic_t(&grid, &mu, &Sample::new(vec![PointId(0), PointId(200)]).unwrap(), PointId(100), Order::Integer(1)).unwrap();
        assert_eq!(t.value, 0.0);
    }

    #[test]
    fn experiment_is_deterministic_and_thread_independent() {
        let cfg = interval(2, vec![10, 50, 200], 16);
        let a = run_consistency_experiment(&cfg).unwrap();
        let b = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| run_consistency_experiment(&cfg).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn interval_invariants_hold() {
        for r in [1, 2] {
            let report = run_consistency_experiment(&interval(r, vec![9, 10, 101, 400], 40)).unwrap();
            for rep in &report.replications {
                for cp in &rep.checkpoints {
                    assert!(cp.sandwich_ok && cp.variance_identity_ok);
                    let rc = cp.restricted.as_ref().unwrap();
                    assert!(rc.sandwich_ok && rc.within_sample);
                    assert!(!cp.mean_set.is_empty());
                }
            }
            // odd sample sizes never tie on a two-point measure
            let multi = oscillation_stats(&report.replications, |c| c.mean_set.len() > 1).unwrap();
            if r == 1 {
                assert_eq!(multi[0].hits, 0);
            }
        }
    }

    #[test]
    fn graph_experiment_includes_outer_limit() {
        let g4 = enumerate_space(GraphSpaceConfig::new(4)).unwrap();
        let mu = DiscreteMeasure::uniform([PointId(0b100101), PointId(0b101001)]).unwrap();
        let cfg = ExperimentConfig {
            name: "g4".into(),
            space: LabSpace::Graph(g4),
            mu,
            r: Order::Integer(1),
            n_max: 1000,
            checkpoints: vec![10, 100, 1000],
            replications: 20,
            seed: 3,
            restricted: false,
            limits: LimitParams::default(),
        };
        let report = run_consistency_experiment(&cfg).unwrap();
        assert_eq!(report.population.argmin.len(), 4);
        assert_eq!(report.outer_limit_inclusion_rate(), 1.0);
        assert!(report.assertions().iter().all(|a| a.passed));
    }

    #[test]
    fn oscillation_stats_rejects_empty() {
        assert!(oscillation_stats(&[], |_| true).is_err());
    }

    #[test]
    fn median_values() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert!(median(&[]).is_nan());
    }
}
