//! Link prediction: random edge masking, score matrices, and ROC/AUC.
//!
//! Pairs i < j are hidden independently with probability p (the mask is
//! mirrored and the diagonal never masked). Estimators run on the masked
//! adjacency matrix as-is; their P^ doubles as a score matrix over the
//! hidden pairs.

use ndarray::Array2;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg;
use crate::model::{rng_for, AdjacencyMatrix, ProbabilityMatrix, RngSeed, STREAM_MASK};

/// Symmetric 0/1 mask; 1 = observed, 0 = hidden. Diagonal entries are
/// always 1.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskMatrix {
    values: Array2<f64>,
}

impl MaskMatrix {
    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn is_observed(&self, i: usize, j: usize) -> bool {
        self.values[[i, j]] == 1.0
    }
}

/// Symmetric nonnegative score matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix {
    values: Array2<f64>,
}

impl ScoreMatrix {
    /// Wraps a matrix, validating squareness, exact symmetry, and
    /// nonnegativity.
    pub fn new(values: Array2<f64>) -> Result<Self> {
        let n = values.nrows();
        if n == 0 {
            return Err(Error::InvalidSize("score matrix must be nonempty".into()));
        }
        if values.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "score matrix must be square, got {}x{}",
                n,
                values.ncols()
            )));
        }
        for i in 0..n {
            for j in i..n {
                let v = values[[i, j]];
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "score ({i},{j}) = {v} must be finite and >= 0"
                    )));
                }
                if values[[j, i]] != v {
                    return Err(Error::InvalidParameter(format!(
                        "score matrix asymmetric at ({i},{j})"
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
}

impl From<ProbabilityMatrix> for ScoreMatrix {
    /// Probabilities are valid scores.
    fn from(p: ProbabilityMatrix) -> Self {
        ScoreMatrix {
            values: p.into_values(),
        }
    }
}

/// One ROC point: rates at score threshold `t` (strict >).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RocPoint {
    pub t: f64,
    pub fpr: f64,
    pub tpr: f64,
}

/// ROC curve over the hidden pairs, ordered by decreasing threshold, plus
/// the trapezoid AUC.
#[derive(Debug, Clone, PartialEq)]
pub struct RocCurve {
    pub points: Vec<RocPoint>,
    pub auc: f64,
}

/// Hides each unordered pair i < j independently with probability p and
/// mirrors the mask; A_obs = M .* A_true.
pub fn apply_mask(
    a_true: &AdjacencyMatrix,
    p: f64,
    seed: RngSeed,
) -> Result<(AdjacencyMatrix, MaskMatrix)> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "masking probability p = {p} outside [0,1]"
        )));
    }
    let n = a_true.n();
    let mut rng = rng_for(seed, STREAM_MASK);
    let mut mask = Array2::<f64>::ones((n, n));
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.random::<f64>() < p {
                mask[[i, j]] = 0.0;
                mask[[j, i]] = 0.0;
            }
        }
    }
    let observed = a_true.values() * &mask;
    let a_obs = AdjacencyMatrix::new(observed)?;
    Ok((a_obs, MaskMatrix { values: mask }))
}

/// Jaccard-style common-neighbor scores on the observed graph:
/// score[i][j] = |common neighbors| / (deg_i * deg_j), zero when either
/// degree is zero. The diagonal is set to 0.
pub fn jaccard_scores(a_obs: &AdjacencyMatrix) -> ScoreMatrix {
    let n = a_obs.n();
    let common = linalg::gram_aat(a_obs.values());
    let deg = a_obs.degrees();
    let mut values = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let denom = deg[i] * deg[j];
            if denom > 0.0 {
                values[[i, j]] = common[[i, j]] / denom;
            }
        }
    }
    ScoreMatrix { values }
}

/// ROC over the hidden pairs: positives are true edges, negatives true
/// non-edges; thresholds sweep the distinct hidden-pair scores (strict >)
/// with a final sentinel row at t = -1 closing the curve at (1,1).
pub fn roc_curve(
    scores: &ScoreMatrix,
    a_true: &AdjacencyMatrix,
    mask: &MaskMatrix,
) -> Result<RocCurve> {
    let n = a_true.n();
    if scores.n() != n || mask.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "roc inputs disagree: scores {}, adjacency {n}, mask {}",
            scores.n(),
            mask.n()
        )));
    }
    let mut hidden: Vec<(f64, bool)> = Vec::new();
    let mut npos = 0usize;
    let mut nneg = 0usize;
    for i in 0..n {
        for j in (i + 1)..n {
            if mask.is_observed(i, j) {
                continue;
            }
            let edge = a_true.values()[[i, j]] == 1.0;
            if edge {
                npos += 1;
            } else {
                nneg += 1;
            }
            hidden.push((scores.values()[[i, j]], edge));
        }
    }
    if npos == 0 || nneg == 0 {
        return Err(Error::UndefinedCurve(format!(
            "need at least one hidden edge and one hidden non-edge (found {npos} / {nneg})"
        )));
    }
    hidden.sort_unstable_by(|a, b| b.0.total_cmp(&a.0));

    let mut points = Vec::new();
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut idx = 0usize;
    while idx < hidden.len() {
        let t = hidden[idx].0;
        // Rates use strict >, so the point at threshold t counts only the
        // strictly larger scores already passed.
        points.push(RocPoint {
            t,
            fpr: fp as f64 / nneg as f64,
            tpr: tp as f64 / npos as f64,
        });
        while idx < hidden.len() && hidden[idx].0 == t {
            if hidden[idx].1 {
                tp += 1;
            } else {
                fp += 1;
            }
            idx += 1;
        }
    }
    // Scores are nonnegative, so any negative threshold admits every pair.
    points.push(RocPoint {
        t: -1.0,
        fpr: 1.0,
        tpr: 1.0,
    });

    let mut auc = 0.0f64;
    for w in points.windows(2) {
        auc += (w[1].fpr - w[0].fpr) * (w[0].tpr + w[1].tpr) / 2.0;
    }
    Ok(RocCurve { points, auc })
}
