//! Fréchet means of arbitrary order on finite bounded metric spaces.
//!
//! For a probability measure `μ` on a bounded (pseudo-)metric space `X` and
//! an order `r >= 1`, the Fréchet functional and its sample version are
//!
//! ```text
//! F(x')   = ∫ d(x, x')^r dμ(x)
//! F_n(x') = (1/n) Σ d(X_i, x')^r
//! ```
//!
//! The mean set is the set of all minimizers and the variance the minimum.
//! Everything here works on finite spaces, where the minimization is
//! exhaustive and ties are kept: a mean set is a set, reported in canonical
//! order. On lattice spaces (graphs under the Hamming metric, rational grids)
//! with integer `r` and rational weights the comparison is exact.
//!
//! - [`metric`]: the [`MetricSpace`](metric::MetricSpace) trait, measures,
//!   samples, functionals and axiom checks.
//! - [`graph`]: labeled simple graphs, the `nv:bits` text format and the
//!   enumerated space `G_nv`.
//! - [`solver`]: sample, population and restricted mean sets.
//! - [`limits`]: finite-horizon estimates of set-sequence limits.
//! - [`lab`]: seeded Monte Carlo experiments and their reports.
//! - [`cli`]: the `frechet` command line.
//!
//! ```
//! use frechet::graph::{enumerate_space, parse_graph, GraphSpaceConfig};
//! use frechet::metric::{DiscreteMeasure, MetricSpace, Order, Sample};
//! use frechet::solver::sample_mean_set;
//!
//! let g4 = enumerate_space(GraphSpaceConfig::new(4)).unwrap();
//! let sample: Vec<_> = ["4:100101", "4:101001"]
//!     .iter()
//!     .map(|s| g4.point_of(&parse_graph(s).unwrap()).unwrap())
//!     .collect();
//! let mean = sample_mean_set(&g4, &Sample::new(sample).unwrap(), Order::integer(1).unwrap()).unwrap();
//! assert_eq!(mean.optimum, 1.0);
//! assert_eq!(mean.argmin.len(), 4);
//! assert_eq!(g4.label(mean.argmin[0]), "4:100001");
//! ```

pub mod cli;
pub mod error;
pub mod graph;
pub mod lab;
pub mod limits;
pub mod metric;
pub mod solver;

pub use error::{Error, Result};
pub use graph::{Graph, GraphSet, HammingSpace};
pub use metric::{DiscreteMeasure, GridSpace, MatrixSpace, MetricSpace, Order, PointId, Sample};
pub use solver::{frechet_mean_set, CandidateDomain, MeanSetResult};
