//! CSV and JSON output of an experiment.
//!
//! The CSV has one row per (replication, checkpoint). The JSON summary
//! echoes the configuration and holds per-checkpoint aggregates, the
//! oscillation table, outer-limit inclusion rates and the assertion blocks.
//! Both are written to temporary files in the output directory and renamed
//! into place, so a failed run leaves no partial report behind.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{oscillation_stats, AssertionBlock, CheckpointSummary, ExperimentReport, FrequencyRow};
use crate::error::Result;
use crate::metric::{MetricSpace, PointId};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CsvRow {
    pub schema_version: u32,
    pub replication: u32,
    pub stream_seed: u64,
    pub n: u64,
    pub sample_variance: f64,
    pub abs_variance_error: f64,
    pub mean_set_size: usize,
    /// Labels joined by `;`.
    pub mean_set: String,
    pub in_population: bool,
    pub t_star: f64,
    pub max_abs_t_population_means: f64,
    pub sup_abs_t: f64,
    pub sandwich_ok: bool,
    pub variance_identity_ok: bool,
    pub restricted_variance: Option<f64>,
    pub restricted_abs_variance_error: Option<f64>,
    pub restricted_mean_set: Option<String>,
    pub restricted_within_sample: Option<bool>,
    pub restricted_sandwich_ok: Option<bool>,
}

fn labels<S: MetricSpace + ?Sized>(space: &S, set: &[PointId]) -> String {
    set.iter().map(|&p| space.label(p)).collect::<Vec<_>>().join(";")
}

impl ExperimentReport {
    pub fn csv_rows(&self) -> Vec<CsvRow> {
        let space = &self.config.space;
        let mut rows = Vec::new();
        for rep in &self.replications {
            for cp in &rep.checkpoints {
                let rc = cp.restricted.as_ref();
                rows.push(CsvRow {
                    schema_version: REPORT_SCHEMA_VERSION,
                    replication: rep.replication,
                    stream_seed: rep.stream_seed,
                    n: cp.n,
                    sample_variance: cp.sample_variance,
                    abs_variance_error: cp.abs_variance_error,
                    mean_set_size: cp.mean_set.len(),
                    mean_set: labels(space, &cp.mean_set),
                    in_population: cp.in_population,
                    t_star: cp.t_star,
                    max_abs_t_population_means: cp.max_abs_t_population_means,
                    sup_abs_t: cp.sup_abs_t,
                    sandwich_ok: cp.sandwich_ok,
                    variance_identity_ok: cp.variance_identity_ok,
                    restricted_variance: rc.map(|r| r.sample_variance),
                    restricted_abs_variance_error: rc.map(|r| r.abs_variance_error),
                    restricted_mean_set: rc.map(|r| labels(space, &r.mean_set)),
                    restricted_within_sample: rc.map(|r| r.within_sample),
                    restricted_sandwich_ok: rc.map(|r| r.sandwich_ok),
                });
            }
        }
        rows
    }

    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in self.csv_rows() {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn summary(&self) -> Result<Summary> {
        let cfg = &self.config;
        let space = &cfg.space;
        let pop = &self.population;
        Ok(Summary {
            schema_version: REPORT_SCHEMA_VERSION,
            config: ConfigEcho {
                name: cfg.name.clone(),
                space: space.describe(),
                support: cfg.mu.support().iter().map(|&p| space.label(p)).collect(),
                weights: (0..cfg.mu.support().len()).map(|i| cfg.mu.weight(i)).collect(),
                r: cfg.r.value(),
                n_max: cfg.n_max,
                checkpoints: cfg.checkpoints.clone(),
                replications: cfg.replications,
                seed: cfg.seed,
                restricted: cfg.restricted,
                epsilon: cfg.limits.epsilon,
                burn_in: cfg.checkpoints[cfg.burn_in_index()],
                min_visits: cfg.limits.min_visits,
            },
            population: PopulationEcho {
                variance: pop.optimum,
                exact_variance: pop.exact_optimum.as_ref().map(|e| e.to_string()),
                mean_set: pop.argmin.iter().map(|&p| space.label(p)).collect(),
                restricted_variance: self.restricted_population.as_ref().map(|r| r.optimum),
                restricted_mean_set: self
                    .restricted_population
                    .as_ref()
                    .map(|r| r.argmin.iter().map(|&p| space.label(p)).collect()),
            },
            checkpoints: self.checkpoint_summaries(),
            full_space_frequency: oscillation_stats(&self.replications, |c| {
                c.mean_set.len() == space.len()
            })?,
            multi_point_frequency: oscillation_stats(&self.replications, |c| c.mean_set.len() > 1)?,
            outer_limit_inclusion_rate: self.outer_limit_inclusion_rate(),
            max_outer_limit_excess: self.max_outer_limit_excess(),
            restricted_outer_limit_inclusion_rate: self.restricted_outer_limit_inclusion_rate(),
            assertions: self.assertions(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub name: String,
    pub space: String,
    pub support: Vec<String>,
    pub weights: Vec<f64>,
    pub r: f64,
    pub n_max: u64,
    pub checkpoints: Vec<u64>,
    pub replications: u32,
    pub seed: u64,
    pub restricted: bool,
    pub epsilon: f64,
    /// First checkpoint of the tail.
    pub burn_in: u64,
    pub min_visits: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PopulationEcho {
    pub variance: f64,
    pub exact_variance: Option<String>,
    pub mean_set: Vec<String>,
    pub restricted_variance: Option<f64>,
    pub restricted_mean_set: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub schema_version: u32,
    pub config: ConfigEcho,
    pub population: PopulationEcho,
    pub checkpoints: Vec<CheckpointSummary>,
    pub full_space_frequency: Vec<FrequencyRow>,
    pub multi_point_frequency: Vec<FrequencyRow>,
    pub outer_limit_inclusion_rate: f64,
    pub max_outer_limit_excess: f64,
    pub restricted_outer_limit_inclusion_rate: Option<f64>,
    pub assertions: Vec<AssertionBlock>,
}

struct Pending(Vec<PathBuf>);

impl Drop for Pending {
    fn drop(&mut self) {
        for p in &self.0 {
            let _ = fs::remove_file(p);
        }
    }
}

/// Writes `<name>.csv` and `<name>.summary.json` into `dir` and returns
/// their paths.
pub fn write_reports(report: &ExperimentReport, dir: &Path) -> Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(dir)?;
    let name = &report.config.name;
    let csv_path = dir.join(format!("{name}.csv"));
    let json_path = dir.join(format!("{name}.summary.json"));
    let csv_tmp = dir.join(format!(".{name}.csv.tmp"));
    let json_tmp = dir.join(format!(".{name}.summary.json.tmp"));
    let mut pending = Pending(vec![csv_tmp.clone(), json_tmp.clone()]);

    report.write_csv(std::io::BufWriter::new(fs::File::create(&csv_tmp)?))?;
    let mut json = serde_json::to_string_pretty(&report.summary()?)?;
    json.push('\n');
    fs::write(&json_tmp, json)?;

    fs::rename(&csv_tmp, &csv_path)?;
    pending.0 = vec![json_tmp.clone(), csv_path.clone()];
    fs::rename(&json_tmp, &json_path)?;
    pending.0.clear();
    Ok((csv_path, json_path))
}
