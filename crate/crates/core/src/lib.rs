//! Edge-probability estimation for undirected networks.
//!
//! The crate takes a single observed adjacency matrix and estimates the
//! underlying edge-probability matrix P. The main estimator is neighborhood
//! smoothing ([`nbs`]); classical matrix-denoising baselines live in
//! [`baselines`]; synthetic data generation, replicated benchmarks, and
//! link-prediction evaluation live in [`model`], [`graphons`],
//! [`evaluation`], and [`linkpred`].
//!
//! All randomness flows through explicit 64-bit seeds and a fixed generator,
//! so every result in this crate is bit-reproducible across runs and
//! platforms.
//!
//! ```
//! use netsmooth::{GraphonSpec, RngSeed};
//!
//! let spec = GraphonSpec::Builtin2;
//! let xi = netsmooth::model::sample_latent(200, RngSeed(1)).unwrap();
//! let p = netsmooth::model::build_probability_matrix(&spec, &xi).unwrap();
//! let a = netsmooth::model::sample_adjacency(&p, RngSeed(1));
//! let phat = netsmooth::nbs::estimate_nbs(&a, 1.0).unwrap();
//! let m = netsmooth::evaluation::compute_metrics(&phat, &p).unwrap();
//! assert!(m.rmse < 0.2);
//! ```

pub mod baselines;
pub mod error;
pub mod evaluation;
pub mod graphons;
mod kmeans;
mod linalg;
pub mod linkpred;
pub mod model;
pub mod nbs;

pub use error::{Error, Result};
pub use evaluation::{Method, MetricReport, Metrics};
pub use graphons::GraphonSpec;
pub use model::{AdjacencyMatrix, LatentPositions, ProbabilityMatrix, RngSeed};
