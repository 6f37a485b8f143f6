//! The neighborhood smoothing estimator.
//!
//! Pipeline: S = A^2/n -> pairwise dissimilarity d~^2(i,i') =
//! max_{k != i,i'} |S_ik - S_i'k| -> quantile neighborhood selection at
//! bandwidth h -> row smoothing -> symmetrization.
//!
//! Determinism notes. All reductions have a fixed order: the max over k is
//! order-insensitive, neighborhoods are ascending index lists, and row sums
//! over a neighborhood add exact 0/1 integers before one final division, so
//! results do not depend on the parallel schedule (rows are processed in
//! parallel) and the estimator is exactly permutation equivariant.

use ndarray::Array2;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg;
use crate::model::{AdjacencyMatrix, ProbabilityMatrix};

/// Symmetric matrix of squared dissimilarities d~^2, diagonal 0.
#[derive(Debug, Clone, PartialEq)]
pub struct DissimilarityMatrix {
    values: Array2<f64>,
}

impl DissimilarityMatrix {
    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }
}

/// Per-node neighborhood N_i with its realized threshold q_i(h).
///
/// Invariants: i is never in N_i, every N_i is nonempty, and i' is a member
/// exactly when d~^2(i,i') <= q_i(h) (ties included).
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborhoodSet {
    neighbors: Vec<Vec<usize>>,
    thresholds: Vec<f64>,
}

impl NeighborhoodSet {
    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }

    /// Members of N_i in ascending index order.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    /// Realized quantile threshold q_i(h).
    pub fn threshold(&self, i: usize) -> f64 {
        self.thresholds[i]
    }
}

/// Default bandwidth h = min(1, C * sqrt(ln n / n)).
pub fn bandwidth(n: usize, c: f64) -> f64 {
    (c * ((n as f64).ln() / n as f64).sqrt()).min(1.0)
}

/// S = A^2/n in double precision.
///
/// The Gram matrix is accumulated in exact integers and scaled afterwards,
/// so S is a deterministic function of the entry multiset per position.
pub fn slice_products(a: &AdjacencyMatrix) -> Array2<f64> {
    let n = a.n();
    let mut s = linalg::gram_aat(a.values());
    let nf = n as f64;
    s.mapv_inplace(|v| v / nf);
    s
}

/// Max of |si[k] - sj[k]| over two aligned slices.
///
/// Four independent lanes keep the reduction out of a serial dependency
/// chain; max is insensitive to the accumulation split.
fn seg_max_abs_diff(si: &[f64], sj: &[f64]) -> f64 {
    debug_assert_eq!(si.len(), sj.len());
    let mut m = [0.0f64; 4];
    let ca = si.chunks_exact(4);
    let cb = sj.chunks_exact(4);
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (a4, b4) in ca.zip(cb) {
        for l in 0..4 {
            let d = (a4[l] - b4[l]).abs();
            if d > m[l] {
                m[l] = d;
            }
        }
    }
    let mut best = m[0].max(m[1]).max(m[2]).max(m[3]);
    for (a, b) in ra.iter().zip(rb) {
        let d = (a - b).abs();
        if d > best {
            best = d;
        }
    }
    best
}

/// values[i][i'] = max over k not in {i, i'} of |S[i][k] - S[i'][k]|.
pub fn dissimilarity_matrix(s: &Array2<f64>) -> Result<DissimilarityMatrix> {
    let n = s.nrows();
    if s.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "dissimilarity input must be square, got {}x{}",
            n,
            s.ncols()
        )));
    }
    if n < 3 {
        return Err(Error::InstanceTooSmall(format!(
            "dissimilarity needs n >= 3 so that {{k : k != i, i'}} is nonempty; got n = {n}"
        )));
    }
    let s_slice = s.as_slice().expect("standard layout");
    let mut values = Array2::<f64>::zeros((n, n));
    values
        .as_slice_mut()
        .expect("standard layout")
        .par_chunks_mut(n)
        .enumerate()
        .for_each(|(i, row)| {
            let si = &s_slice[i * n..(i + 1) * n];
            for j in (i + 1)..n {
                let sj = &s_slice[j * n..(j + 1) * n];
                // Exclude k = i and k = j by scanning the three remaining
                // contiguous segments.
                let m = seg_max_abs_diff(&si[..i], &sj[..i])
                    .max(seg_max_abs_diff(&si[i + 1..j], &sj[i + 1..j]))
                    .max(seg_max_abs_diff(&si[j + 1..], &sj[j + 1..]));
                row[j] = m;
            }
        });
    for i in 0..n {
        for j in (i + 1)..n {
            values[[j, i]] = values[[i, j]];
        }
    }
    Ok(DissimilarityMatrix { values })
}

/// Selects N_i = { i' != i : d~^2(i,i') <= q_i(h) } with q_i(h) the
/// nearest-rank h-quantile of row i.
///
/// The rank is k = max(1, ceil(h * (n-1))); ties at the threshold are all
/// included, which guarantees |N_i| >= k and makes selection permutation
/// equivariant.
pub fn select_neighborhoods(d: &DissimilarityMatrix, h: f64) -> Result<NeighborhoodSet> {
    let n = d.n();
    if n < 2 {
        return Err(Error::InstanceTooSmall(format!(
            "neighborhood selection needs n >= 2, got n = {n}"
        )));
    }
    if !(h > 0.0) || h > 1.0 {
        return Err(Error::InvalidBandwidth(h));
    }
    let rank = ((h * (n - 1) as f64).ceil() as usize).clamp(1, n - 1);
    let dv = d.values();
    let rows: Vec<(Vec<usize>, f64)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut scratch: Vec<f64> = (0..n).filter(|&j| j != i).map(|j| dv[[i, j]]).collect();
            let (_, q, _) = scratch.select_nth_unstable_by(rank - 1, f64::total_cmp);
            let q = *q;
            let members: Vec<usize> = (0..n).filter(|&j| j != i && dv[[i, j]] <= q).collect();
            (members, q)
        })
        .collect();
    let mut neighbors = Vec::with_capacity(n);
    let mut thresholds = Vec::with_capacity(n);
    for (members, q) in rows {
        neighbors.push(members);
        thresholds.push(q);
    }
    Ok(NeighborhoodSet {
        neighbors,
        thresholds,
    })
}

/// P~[i][j] = sum_{i' in N_i} A[i'][j] / |N_i|, accumulated in ascending
/// index order.
///
/// Panics if a neighborhood is empty; `select_neighborhoods` never produces
/// one, so that is an internal invariant violation.
pub fn smooth(a: &AdjacencyMatrix, nbrs: &NeighborhoodSet) -> Array2<f64> {
    let n = a.n();
    assert_eq!(
        nbrs.len(),
        n,
        "neighborhood set size {} does not match n = {n}",
        nbrs.len()
    );
    let a_slice = a.values().as_slice().expect("standard layout");
    let mut out = Array2::<f64>::zeros((n, n));
    out.as_slice_mut()
        .expect("standard layout")
        .par_chunks_mut(n)
        .enumerate()
        .for_each(|(i, row)| {
            let members = nbrs.neighbors(i);
            assert!(
                !members.is_empty(),
                "internal invariant violation: empty neighborhood for node {i}"
            );
            for &ip in members {
                let arow = &a_slice[ip * n..(ip + 1) * n];
                for (acc, &v) in row.iter_mut().zip(arow) {
                    *acc += v;
                }
            }
            let count = members.len() as f64;
            for acc in row.iter_mut() {
                *acc /= count;
            }
        });
    out
}

/// P^ = (P~ + P~ᵀ)/2.
pub fn symmetrize(p_tilde: &Array2<f64>) -> Result<ProbabilityMatrix> {
    let n = p_tilde.nrows();
    if p_tilde.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "symmetrize input must be square, got {}x{}",
            n,
            p_tilde.ncols()
        )));
    }
    for &v in p_tilde.iter() {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::InvalidParameter(format!(
                "symmetrize input entry {v} outside [0,1]"
            )));
        }
    }
    let mut out = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for j in i..n {
            let avg = 0.5 * (p_tilde[[i, j]] + p_tilde[[j, i]]);
            out[[i, j]] = avg;
            out[[j, i]] = avg;
        }
    }
    ProbabilityMatrix::new(out)
}

/// Full neighborhood smoothing estimate with bandwidth h = min(1, C *
/// sqrt(ln n / n)).
pub fn estimate_nbs(a: &AdjacencyMatrix, c: f64) -> Result<ProbabilityMatrix> {
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "bandwidth constant C = {c} must be positive and finite"
        )));
    }
    let s = slice_products(a);
    let d = dissimilarity_matrix(&s)?;
    let nbrs = select_neighborhoods(&d, bandwidth(a.n(), c))?;
    let p_tilde = smooth(a, &nbrs);
    symmetrize(&p_tilde)
}
