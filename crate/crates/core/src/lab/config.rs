//! Experiment configuration files.
//!
//! A configuration is a flat TOML table, schema version 1:
//!
//! ```toml
//! version = 1
//! name = "g4"                 # optional, names the report files
//! space = "graph"             # "graph" or "grid"
//! nv = 4                      # graph: vertex count
//! cap = 21                    # graph: optional enumeration cap
//! grid_lo = -1.0              # grid: interval ends and step 1/denominator
//! grid_hi = 1.0
//! grid_denominator = 100
//! support = ["4:100101", "4:101001"]   # graph lines or grid values
//! weights = [1, 1]            # optional integer multiplicities (default 1)
//! r = 1
//! n_max = 10000               # optional, defaults to the last checkpoint
//! checkpoints = [10, 100, 1000, 10000]
//! replications = 200
//! seed = 42
//! restricted = false
//! epsilon = 0.0               # outer-limit radius; 0 means membership
//! burn_in = 1000              # sample size where the tail starts
//! min_visits = 2
//! ```

use serde::{Deserialize, Serialize};

use super::{ExperimentConfig, LabSpace, LimitParams};
use crate::error::{Error, Result};
use crate::graph::{enumerate_space, parse_graph, GraphSpaceConfig, DEFAULT_ENUMERATION_CAP};
use crate::limits::DEFAULT_MIN_VISITS;
use crate::metric::{DiscreteMeasure, GridSpace, Order, PointId};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_CHECKPOINTS: [u64; 4] = [10, 100, 1_000, 10_000];
pub const DEFAULT_REPLICATIONS: u32 = 200;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub space: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nv: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_lo: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_hi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_denominator: Option<u64>,
    pub support: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<u64>>,
    pub r: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checkpoints: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replications: Option<u32>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restricted: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_visits: Option<usize>,
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl ConfigFile {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| config_err(e.to_string()))
    }

    /// Resolves names and defaults into a validated [`ExperimentConfig`].
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        if self.version != SCHEMA_VERSION {
            return Err(config_err(format!(
                "unsupported schema version {} (expected {SCHEMA_VERSION})",
                self.version
            )));
        }
        let space = match self.space.as_str() {
            "graph" => {
                let nv = self.nv.ok_or_else(|| config_err("graph space needs `nv`"))?;
                let cfg = GraphSpaceConfig::new(nv).with_cap(self.cap.unwrap_or(DEFAULT_ENUMERATION_CAP));
                LabSpace::Graph(enumerate_space(cfg).map_err(|e| config_err(e.to_string()))?)
            }
            "grid" => {
                let (Some(lo), Some(hi), Some(den)) = (self.grid_lo, self.grid_hi, self.grid_denominator)
                else {
                    return Err(config_err(
                        "grid space needs `grid_lo`, `grid_hi` and `grid_denominator`",
                    ));
                };
                LabSpace::Grid(GridSpace::from_interval(lo, hi, den).map_err(|e| config_err(e.to_string()))?)
            }
            other => return Err(config_err(format!("unknown space kind {other:?}"))),
        };

        let points = self
            .support
            .iter()
            .map(|label| resolve_point(&space, label))
            .collect::<Result<Vec<PointId>>>()?;
        let weights = match &self.weights {
            Some(w) if w.len() != points.len() => {
                return Err(config_err(format!(
                    "{} weights for {} support points",
                    w.len(),
                    points.len()
                )))
            }
            Some(w) => w.clone(),
            None => vec![1; points.len()],
        };
        let mu = DiscreteMeasure::from_counts(points.into_iter().zip(weights))
            .map_err(|e| config_err(e.to_string()))?;
        let r = Order::new(self.r).map_err(|e| config_err(e.to_string()))?;

        let checkpoints = match (&self.checkpoints, self.n_max) {
            (Some(c), _) => c.clone(),
            (None, Some(n_max)) => {
                let mut c: Vec<u64> = DEFAULT_CHECKPOINTS.iter().copied().filter(|&n| n < n_max).collect();
                c.push(n_max);
                c
            }
            (None, None) => DEFAULT_CHECKPOINTS.to_vec(),
        };
        let n_max = self.n_max.or(checkpoints.last().copied()).unwrap_or(0);

        let cfg = ExperimentConfig {
            name: self.name.clone().unwrap_or_else(|| "experiment".into()),
            space,
            mu,
            r,
            n_max,
            checkpoints,
            replications: self.replications.unwrap_or(DEFAULT_REPLICATIONS),
            seed: self.seed,
            restricted: self.restricted.unwrap_or(false),
            limits: LimitParams {
                epsilon: self.epsilon.unwrap_or(0.0),
                burn_in: self.burn_in,
                min_visits: self.min_visits.unwrap_or(DEFAULT_MIN_VISITS),
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn resolve_point(space: &LabSpace, label: &str) -> Result<PointId> {
    match space {
        LabSpace::Graph(g) => {
            let graph = parse_graph(label).map_err(|e| config_err(format!("support {label:?}: {e}")))?;
            g.point_of(&graph).map_err(|e| config_err(format!("support {label:?}: {e}")))
        }
        LabSpace::Grid(g) => label
            .trim()
            .parse::<f64>()
            .ok()
            .and_then(|v| g.point_at(v))
            .ok_or_else(|| config_err(format!("support {label:?} is not a grid point"))),
    }
}
