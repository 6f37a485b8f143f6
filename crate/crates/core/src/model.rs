//! Core network types and the generative sampling pipeline xi -> P -> A.
//!
//! Sampling is driven by one documented deterministic generator family
//! (ChaCha8). Each operation draws from its own stream of the caller's seed,
//! so latent positions, adjacency coins, and mask coins never overlap even
//! when they share a seed. Identical seed and parameters give bit-identical
//! output on every platform.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graphons::{eval_graphon, GraphonSpec};

/// Stream ids separating the independent uses of one seed.
const STREAM_LATENT: u64 = 0;
const STREAM_ADJACENCY: u64 = 1;
pub(crate) const STREAM_MASK: u64 = 2;

/// Seed for the deterministic generator family.
///
/// Replication r of an experiment uses `seed.offset(r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngSeed(pub u64);

impl RngSeed {
    /// Seed for replication `r` of an experiment based at this seed.
    pub fn offset(self, r: u64) -> RngSeed {
        RngSeed(self.0.wrapping_add(r))
    }
}

impl From<u64> for RngSeed {
    fn from(seed: u64) -> Self {
        RngSeed(seed)
    }
}

pub(crate) fn rng_for(seed: RngSeed, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    rng.set_stream(stream);
    rng
}

/// Latent node positions xi in [0,1]^n.
#[derive(Debug, Clone, PartialEq)]
pub struct LatentPositions {
    xi: Vec<f64>,
}

impl LatentPositions {
    /// Wraps a vector of positions, validating that every entry lies in [0,1].
    pub fn new(xi: Vec<f64>) -> Result<Self> {
        if xi.is_empty() {
            return Err(Error::InvalidSize("latent vector must be nonempty".into()));
        }
        for (i, &x) in xi.iter().enumerate() {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::ModelViolation(format!(
                    "latent position xi[{i}] = {x} outside [0,1]"
                )));
            }
        }
        Ok(Self { xi })
    }

    pub fn len(&self) -> usize {
        self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.xi
    }
}

/// Symmetric matrix of edge probabilities in [0,1]^{n x n}.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityMatrix {
    values: Array2<f64>,
}

impl ProbabilityMatrix {
    /// Wraps a matrix, validating squareness, exact symmetry, and range.
    pub fn new(values: Array2<f64>) -> Result<Self> {
        let n = values.nrows();
        if n == 0 {
            return Err(Error::InvalidSize("probability matrix must be nonempty".into()));
        }
        if values.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "probability matrix must be square, got {}x{}",
                n,
                values.ncols()
            )));
        }
        for i in 0..n {
            for j in 0..n {
                let v = values[[i, j]];
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::ModelViolation(format!(
                        "probability entry ({i},{j}) = {v} outside [0,1]"
                    )));
                }
                if j > i && values[[j, i]] != v {
                    return Err(Error::ModelViolation(format!(
                        "probability matrix asymmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(Self { values })
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn into_values(self) -> Array2<f64> {
        self.values
    }
}

/// Symmetric 0/1 adjacency matrix with zero diagonal.
///
/// Entries are stored as f64 so the matrix can feed numeric kernels directly.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyMatrix {
    values: Array2<f64>,
}

impl AdjacencyMatrix {
    /// Wraps a matrix, validating squareness, binarity, symmetry, and the
    /// zero diagonal (self-loops are excluded by convention).
    pub fn new(values: Array2<f64>) -> Result<Self> {
        let n = values.nrows();
        if n == 0 {
            return Err(Error::InvalidSize("adjacency matrix must be nonempty".into()));
        }
        if values.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "adjacency matrix must be square, got {}x{}",
                n,
                values.ncols()
            )));
        }
        for i in 0..n {
            if values[[i, i]] != 0.0 {
                return Err(Error::ModelViolation(format!(
                    "adjacency diagonal entry ({i},{i}) must be 0"
                )));
            }
            for j in (i + 1)..n {
                let v = values[[i, j]];
                if v != 0.0 && v != 1.0 {
                    return Err(Error::ModelViolation(format!(
                        "adjacency entry ({i},{j}) = {v} is not 0/1"
                    )));
                }
                if values[[j, i]] != v {
                    return Err(Error::ModelViolation(format!(
                        "adjacency matrix asymmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(Self { values })
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn into_values(self) -> Array2<f64> {
        self.values
    }

    /// Row sums (node degrees) as exact integers carried in f64.
    pub fn degrees(&self) -> Vec<f64> {
        self.values
            .rows()
            .into_iter()
            .map(|row| row.iter().sum())
            .collect()
    }
}

/// Draws n i.i.d. Uniform[0,1] latent positions.
pub fn sample_latent(n: usize, seed: RngSeed) -> Result<LatentPositions> {
    if n == 0 {
        return Err(Error::InvalidSize("sample_latent requires n >= 1".into()));
    }
    let mut rng = rng_for(seed, STREAM_LATENT);
    let xi: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    LatentPositions::new(xi)
}

/// P[i][j] = f(xi[i], xi[j]) for all i, j, diagonal included.
///
/// Each unordered pair is evaluated once and mirrored, so the result is
/// exactly symmetric even for custom graphons.
pub fn build_probability_matrix(
    spec: &GraphonSpec,
    xi: &LatentPositions,
) -> Result<ProbabilityMatrix> {
    let n = xi.len();
    let x = xi.as_slice();
    let mut values = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for j in i..n {
            let p = eval_graphon(spec, x[i], x[j])?;
            values[[i, j]] = p;
            values[[j, i]] = p;
        }
    }
    ProbabilityMatrix::new(values)
}

/// Samples A_{ij} ~ Bernoulli(P_{ij}) independently for i < j, mirrored, with
/// a zero diagonal.
///
/// Exactly one uniform draw is consumed per unordered pair in row-major
/// order, so the draw sequence depends only on n and the seed.
pub fn sample_adjacency(p: &ProbabilityMatrix, seed: RngSeed) -> AdjacencyMatrix {
    let n = p.n();
    let mut rng = rng_for(seed, STREAM_ADJACENCY);
    let mut values = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for j in (i + 1)..n {
            let edge = if rng.random::<f64>() < p.values()[[i, j]] {
                1.0
            } else {
                0.0
            };
            values[[i, j]] = edge;
            values[[j, i]] = edge;
        }
    }
    AdjacencyMatrix { values }
}
