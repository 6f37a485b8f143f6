//! Error metrics, replicated experiments with standard errors, and the
//! bandwidth sweep.

use crate::baselines;
use crate::error::{Error, Result};
use crate::graphons::GraphonSpec;
use crate::model::{
    build_probability_matrix, sample_adjacency, sample_latent, AdjacencyMatrix, LatentPositions,
    ProbabilityMatrix, RngSeed,
};
use crate::nbs;

/// One replication's error metrics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub rmse: f64,
    pub mae: f64,
    /// Normalized max row error max_i ||Phat_i - P_i||_2 / sqrt(n).
    pub twoinf: f64,
}

/// Aggregated metrics over replications.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub method: String,
    pub graphon: String,
    pub n: usize,
    pub reps: usize,
    pub rmse_mean: f64,
    pub rmse_se: f64,
    pub mae_mean: f64,
    pub mae_se: f64,
    pub twoinf_mean: f64,
    pub twoinf_se: f64,
}

/// RMSE, MAE, and the normalized 2,inf error between two probability
/// matrices. Averages run over all n^2 entries, diagonal included.
pub fn compute_metrics(phat: &ProbabilityMatrix, p: &ProbabilityMatrix) -> Result<Metrics> {
    let n = p.n();
    if phat.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "metric inputs disagree: {} vs {n}",
            phat.n()
        )));
    }
    let mut total_sq = 0.0f64;
    let mut total_abs = 0.0f64;
    let mut max_row_sq = 0.0f64;
    for i in 0..n {
        let mut row_sq = 0.0f64;
        for j in 0..n {
            let d = phat.values()[[i, j]] - p.values()[[i, j]];
            row_sq += d * d;
            total_abs += d.abs();
        }
        total_sq += row_sq;
        if row_sq > max_row_sq {
            max_row_sq = row_sq;
        }
    }
    let nn = (n * n) as f64;
    let metrics = Metrics {
        rmse: (total_sq / nn).sqrt(),
        mae: total_abs / nn,
        twoinf: (max_row_sq / n as f64).sqrt(),
    };
    // The max row error dominates the mean row error; tiny slack covers
    // floating-point accumulation.
    debug_assert!(
        metrics.twoinf * metrics.twoinf + 1e-12 >= metrics.rmse * metrics.rmse,
        "2,inf/rmse ordering violated: {metrics:?}"
    );
    Ok(metrics)
}

/// An estimator identifier with its tunable parameters. `None` fields fall
/// back to the size-dependent defaults at estimation time.
#[derive(Debug, Clone, PartialEq)]
pub enum Method {
    Nbs { c: f64 },
    Usvt { eta: f64 },
    SvtK { k: Option<usize> },
    Sas { bins: Option<usize> },
    SasSvd { k: Option<usize>, bins: Option<usize> },
    SbmSpectral { blocks: Option<usize> },
    SbmOracle { blocks: Option<usize> },
}

impl Method {
    /// The identifiers accepted by `from_id`, in documentation order.
    pub const IDENTIFIERS: [&'static str; 7] = [
        "nbs",
        "usvt",
        "svtk",
        "sas",
        "sas-svd",
        "sbm-spectral",
        "sbm-oracle",
    ];

    /// Parses an identifier into a method with default parameters.
    pub fn from_id(id: &str) -> Result<Self> {
        match id {
            "nbs" => Ok(Method::Nbs { c: 1.0 }),
            "usvt" => Ok(Method::Usvt {
                eta: baselines::DEFAULT_USVT_ETA,
            }),
            "svtk" => Ok(Method::SvtK { k: None }),
            "sas" => Ok(Method::Sas { bins: None }),
            "sas-svd" => Ok(Method::SasSvd { k: None, bins: None }),
            "sbm-spectral" => Ok(Method::SbmSpectral { blocks: None }),
            "sbm-oracle" => Ok(Method::SbmOracle { blocks: None }),
            other => Err(Error::UnknownIdentifier(format!(
                "method '{}' (valid: {})",
                other,
                Self::IDENTIFIERS.join(", ")
            ))),
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            Method::Nbs { .. } => "nbs",
            Method::Usvt { .. } => "usvt",
            Method::SvtK { .. } => "svtk",
            Method::Sas { .. } => "sas",
            Method::SasSvd { .. } => "sas-svd",
            Method::SbmSpectral { .. } => "sbm-spectral",
            Method::SbmOracle { .. } => "sbm-oracle",
        }
    }

    /// Whether estimation needs the true latent positions (oracle methods).
    pub fn requires_latent(&self) -> bool {
        matches!(self, Method::SbmOracle { .. })
    }

    /// Runs the estimator on an observed adjacency matrix. `xi` is consulted
    /// only by oracle methods and is available in simulations.
    pub fn estimate(
        &self,
        a: &AdjacencyMatrix,
        xi: Option<&LatentPositions>,
    ) -> Result<ProbabilityMatrix> {
        let n = a.n();
        match self {
            Method::Nbs { c } => nbs::estimate_nbs(a, *c),
            Method::Usvt { eta } => baselines::usvt(a, *eta),
            Method::SvtK { k } => baselines::svt_topk(a, k.unwrap_or_else(|| baselines::default_rank(n))),
            Method::Sas { bins } => {
                baselines::sort_and_smooth(a, bins.unwrap_or_else(|| baselines::default_bins(n)))
            }
            Method::SasSvd { k, bins } => baselines::sas_svd(
                a,
                k.unwrap_or_else(|| baselines::default_rank(n)),
                bins.unwrap_or_else(|| baselines::default_bins(n)),
            ),
            Method::SbmSpectral { blocks } => {
                let k = blocks.unwrap_or_else(|| baselines::default_blocks(n));
                let z = baselines::fit_spectral_blocks(a, k)?;
                baselines::block_histogram(a, &z)
            }
            Method::SbmOracle { blocks } => {
                let xi = xi.ok_or_else(|| {
                    Error::InvalidParameter(
                        "sbm-oracle needs the true latent positions (simulation only)".into(),
                    )
                })?;
                let k = blocks.unwrap_or_else(|| baselines::default_blocks(n));
                let z = baselines::oracle_blocks(xi, k)?;
                baselines::block_histogram(a, &z)
            }
        }
    }
}

fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let reps = values.len();
    let mean = values.iter().sum::<f64>() / reps as f64;
    if reps < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (reps - 1) as f64;
    (mean, (var / reps as f64).sqrt())
}

/// Samples `reps` networks from the graphon (replication r uses seed
/// base_seed + r), runs the estimator, and reports means with standard
/// errors (sample SD / sqrt(reps)).
pub fn run_replications(
    spec: &GraphonSpec,
    n: usize,
    method: &Method,
    reps: usize,
    base_seed: RngSeed,
) -> Result<MetricReport> {
    if reps == 0 {
        return Err(Error::InvalidParameter("reps must be >= 1".into()));
    }
    let mut rmse = Vec::with_capacity(reps);
    let mut mae = Vec::with_capacity(reps);
    let mut twoinf = Vec::with_capacity(reps);
    for r in 0..reps {
        let seed = base_seed.offset(r as u64);
        let xi = sample_latent(n, seed)?;
        let p = build_probability_matrix(spec, &xi)?;
        let a = sample_adjacency(&p, seed);
        let phat = method.estimate(&a, Some(&xi))?;
        let m = compute_metrics(&phat, &p)?;
        rmse.push(m.rmse);
        mae.push(m.mae);
        twoinf.push(m.twoinf);
    }
    let (rmse_mean, rmse_se) = mean_and_se(&rmse);
    let (mae_mean, mae_se) = mean_and_se(&mae);
    let (twoinf_mean, twoinf_se) = mean_and_se(&twoinf);
    Ok(MetricReport {
        method: method.id().to_string(),
        graphon: spec.id(),
        n,
        reps,
        rmse_mean,
        rmse_se,
        mae_mean,
        mae_se,
        twoinf_mean,
        twoinf_se,
    })
}

/// MSE of the neighborhood smoother across a grid of bandwidth constants.
///
/// Replication seeds are shared across the grid (paired comparison): each
/// replication samples one network, computes the dissimilarity once, and
/// re-runs only selection and smoothing per C. Returns (C, mse_mean) rows in
/// grid order with mse = rmse^2.
pub fn bandwidth_sweep(
    spec: &GraphonSpec,
    n: usize,
    c_grid: &[f64],
    reps: usize,
    base_seed: RngSeed,
) -> Result<Vec<(f64, f64)>> {
    if c_grid.is_empty() {
        return Err(Error::InvalidParameter("bandwidth grid must be nonempty".into()));
    }
    for &c in c_grid {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "bandwidth constant C = {c} must be positive and finite"
            )));
        }
    }
    if reps == 0 {
        return Err(Error::InvalidParameter("reps must be >= 1".into()));
    }
    let mut acc = vec![0.0f64; c_grid.len()];
    for r in 0..reps {
        let seed = base_seed.offset(r as u64);
        let xi = sample_latent(n, seed)?;
        let p = build_probability_matrix(spec, &xi)?;
        let a = sample_adjacency(&p, seed);
        let s = nbs::slice_products(&a);
        let d = nbs::dissimilarity_matrix(&s)?;
        for (ci, &c) in c_grid.iter().enumerate() {
            let nbrs = nbs::select_neighborhoods(&d, nbs::bandwidth(n, c))?;
            let phat = nbs::symmetrize(&nbs::smooth(&a, &nbrs))?;
            let m = compute_metrics(&phat, &p)?;
            acc[ci] += m.rmse * m.rmse;
        }
    }
    Ok(c_grid
        .iter()
        .zip(acc)
        .map(|(&c, total)| (c, total / reps as f64))
        .collect())
}
