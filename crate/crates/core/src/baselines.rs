//! Benchmark estimators: USVT, top-k singular value thresholding,
//! sort-and-smooth, spectral block histograms, and the oracle block
//! histogram.
//!
//! The adjacency matrix is symmetric, so singular values are the absolute
//! eigenvalues and every reconstruction here goes through one symmetric
//! eigendecomposition instead of a general SVD.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::kmeans::kmeans;
use crate::linalg;
use crate::model::{AdjacencyMatrix, LatentPositions, ProbabilityMatrix};

/// Default USVT threshold margin in (2+eta) * sqrt(n).
pub const DEFAULT_USVT_ETA: f64 = 0.02;

const SPECTRAL_KMEANS_SEED: u64 = 1;
const SPECTRAL_KMEANS_RESTARTS: usize = 20;

/// Node-to-block labels for a histogram estimator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockAssignment {
    labels: Vec<usize>,
    k: usize,
}

impl BlockAssignment {
    /// Wraps labels, validating that each lies in 0..k.
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("block count must be >= 1".into()));
        }
        if labels.is_empty() {
            return Err(Error::InvalidSize("label vector must be nonempty".into()));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= k) {
            return Err(Error::InvalidParameter(format!(
                "label {bad} outside 0..{k}"
            )));
        }
        Ok(Self { labels, k })
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Default rank ceil(n^{1/3}) for `svt_topk`.
pub fn default_rank(n: usize) -> usize {
    let c = (n as f64).powf(1.0 / 3.0);
    let r = c.round();
    // Guard cube-root rounding so exact cubes are not bumped up.
    if (r * r * r - n as f64).abs() < 1e-6 {
        r as usize
    } else {
        c.ceil() as usize
    }
}

/// Default bin count ceil(sqrt(n)) for `sort_and_smooth`.
pub fn default_bins(n: usize) -> usize {
    (n as f64).sqrt().ceil() as usize
}

/// Default block count floor(sqrt(n)) for the histogram methods.
pub fn default_blocks(n: usize) -> usize {
    ((n as f64).sqrt().floor() as usize).max(1)
}

fn clip_unit(m: &mut Array2<f64>) {
    m.mapv_inplace(|v| v.clamp(0.0, 1.0));
}

/// Indices of the k eigenvalues of largest magnitude, for an ascending
/// eigenvalue list. Ties prefer the algebraically larger eigenvalue.
fn top_k_by_abs(w: &[f64], k: usize) -> Vec<usize> {
    let n = w.len();
    let mut lo = 0usize;
    let mut hi = n - 1;
    let mut sel = Vec::with_capacity(k);
    while sel.len() < k {
        if lo <= hi && w[lo].abs() > w[hi].abs() {
            sel.push(lo);
            lo += 1;
        } else {
            sel.push(hi);
            if hi == 0 {
                break;
            }
            hi -= 1;
        }
    }
    sel
}

/// Universal singular value thresholding: keep singular values at least
/// (2+eta) * sqrt(n), reconstruct, clip to [0,1], symmetrize.
pub fn usvt(a: &AdjacencyMatrix, eta: f64) -> Result<ProbabilityMatrix> {
    let n = a.n();
    if n < 2 {
        return Err(Error::InstanceTooSmall(format!(
            "usvt needs n >= 2, got n = {n}"
        )));
    }
    if !eta.is_finite() || eta < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "usvt eta = {eta} must be finite and >= 0"
        )));
    }
    let (w, v) = linalg::sym_eigh(a.values())?;
    let tau = (2.0 + eta) * (n as f64).sqrt();
    let selected: Vec<usize> = (0..n).filter(|&j| w[j].abs() >= tau).collect();
    let mut m = linalg::low_rank_reconstruct(n, &w, &v, &selected);
    clip_unit(&mut m);
    // Reconstruction and clipping already preserve exact symmetry; the
    // constructor enforces it.
    ProbabilityMatrix::new(m)
}

/// Best rank-k reconstruction of A, clipped to [0,1] and symmetrized.
pub fn svt_topk(a: &AdjacencyMatrix, k: usize) -> Result<ProbabilityMatrix> {
    let n = a.n();
    if k == 0 || k > n {
        return Err(Error::InvalidRank { k, n });
    }
    if k == n {
        // Full-rank truncation is the identity and A is already a valid
        // probability matrix.
        return ProbabilityMatrix::new(a.values().clone());
    }
    let (w, v) = linalg::sym_eigh(a.values())?;
    let selected = top_k_by_abs(&w, k);
    let mut m = linalg::low_rank_reconstruct(n, &w, &v, &selected);
    clip_unit(&mut m);
    ProbabilityMatrix::new(m)
}

/// Block-cell averages of `m` under `labels`, excluding diagonal pairs
/// u == v; empty within-block cells (singleton blocks) fall back to the
/// global off-diagonal mean.
///
/// Cells are accumulated per unordered label pair, so the output is exactly
/// symmetric whenever `m` is.
fn grouped_average(m: &Array2<f64>, labels: &[usize], k: usize) -> Array2<f64> {
    let n = m.nrows();
    let mut sums = vec![0.0f64; k * k];
    let mut counts = vec![0u64; k * k];
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let (p, q) = if labels[u] <= labels[v] {
                (labels[u], labels[v])
            } else {
                (labels[v], labels[u])
            };
            sums[p * k + q] += m[[u, v]];
            counts[p * k + q] += 1;
        }
    }
    let density = if n > 1 {
        let total: f64 = (0..n)
            .map(|u| {
                (0..n)
                    .filter(|&v| v != u)
                    .map(|v| m[[u, v]])
                    .sum::<f64>()
            })
            .sum();
        total / (n * (n - 1)) as f64
    } else {
        0.0
    };
    let mut cells = vec![density; k * k];
    for p in 0..k {
        for q in p..k {
            if counts[p * k + q] > 0 {
                cells[p * k + q] = sums[p * k + q] / counts[p * k + q] as f64;
            }
        }
    }
    let mut out = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            let (p, q) = if labels[i] <= labels[j] {
                (labels[i], labels[j])
            } else {
                (labels[j], labels[i])
            };
            out[[i, j]] = cells[p * k + q];
        }
    }
    out
}

/// Contiguous near-equal groups over positions 0..n: the first n % bins
/// groups get one extra member.
fn contiguous_groups(n: usize, bins: usize) -> Vec<usize> {
    let base = n / bins;
    let rem = n % bins;
    let mut labels = Vec::with_capacity(n);
    for b in 0..bins {
        let size = base + usize::from(b < rem);
        labels.extend(std::iter::repeat(b).take(size));
    }
    labels
}

fn degree_sorted_bin_labels(m: &Array2<f64>, bins: usize) -> Vec<usize> {
    let n = m.nrows();
    let degrees: Vec<f64> = m.rows().into_iter().map(|r| r.iter().sum()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| degrees[a].total_cmp(&degrees[b]).then(a.cmp(&b)));
    let position_labels = contiguous_groups(n, bins);
    let mut labels = vec![0usize; n];
    for (pos, &node) in order.iter().enumerate() {
        labels[node] = position_labels[pos];
    }
    labels
}

/// Sort nodes by degree (ties by node index), split into `bins` contiguous
/// near-equal groups, and average A over group pairs.
pub fn sort_and_smooth(a: &AdjacencyMatrix, bins: usize) -> Result<ProbabilityMatrix> {
    let n = a.n();
    if bins == 0 || bins > n {
        return Err(Error::InvalidParameter(format!(
            "bins = {bins} outside 1..={n}"
        )));
    }
    let labels = degree_sorted_bin_labels(a.values(), bins);
    ProbabilityMatrix::new(grouped_average(a.values(), &labels, bins))
}

/// Pre-denoised sort-and-smooth: rank-k truncation of A, then degree-sorted
/// block averaging of the denoised matrix.
pub fn sas_svd(a: &AdjacencyMatrix, k: usize, bins: usize) -> Result<ProbabilityMatrix> {
    let n = a.n();
    if bins == 0 || bins > n {
        return Err(Error::InvalidParameter(format!(
            "bins = {bins} outside 1..={n}"
        )));
    }
    let denoised = svt_topk(a, k)?;
    let labels = degree_sorted_bin_labels(denoised.values(), bins);
    ProbabilityMatrix::new(grouped_average(denoised.values(), &labels, bins))
}

/// Regularized spectral clustering into K blocks.
///
/// L = (D + tau I)^{-1/2} A (D + tau I)^{-1/2} with tau the mean degree; the
/// K eigenvectors of largest |eigenvalue| are row-normalized and clustered
/// with seeded k-means (20 restarts, best inertia).
pub fn fit_spectral_blocks(a: &AdjacencyMatrix, k: usize) -> Result<BlockAssignment> {
    let n = a.n();
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "block count K = {k} outside 1..={n}"
        )));
    }
    if k == 1 {
        return BlockAssignment::new(vec![0; n], 1);
    }
    let degrees = a.degrees();
    let tau = degrees.iter().sum::<f64>() / n as f64;
    if tau == 0.0 {
        // Empty graph: the Laplacian is zero and carries no block signal.
        return BlockAssignment::new(vec![0; n], k);
    }
    let scale: Vec<f64> = degrees.iter().map(|d| 1.0 / (d + tau).sqrt()).collect();
    let mut lap = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            lap[[i, j]] = a.values()[[i, j]] * scale[i] * scale[j];
        }
    }
    let (w, v) = linalg::sym_eigh(&lap)?;
    let sel = top_k_by_abs(&w, k);
    // Embed node i as (v_sel[0][i], ..., v_sel[k-1][i]) and normalize rows.
    let mut emb = vec![0.0f64; n * k];
    for (c, &j) in sel.iter().enumerate() {
        let vec_j = &v[j * n..(j + 1) * n];
        for i in 0..n {
            emb[i * k + c] = vec_j[i];
        }
    }
    for i in 0..n {
        let row = &mut emb[i * k..(i + 1) * k];
        let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            for x in row.iter_mut() {
                *x /= norm;
            }
        }
    }
    let (labels, _inertia) = kmeans(
        &emb,
        n,
        k,
        k,
        SPECTRAL_KMEANS_RESTARTS,
        SPECTRAL_KMEANS_SEED,
    );
    BlockAssignment::new(labels, k)
}

/// Histogram estimator: average A over the cells of the given partition.
pub fn block_histogram(a: &AdjacencyMatrix, z: &BlockAssignment) -> Result<ProbabilityMatrix> {
    let n = a.n();
    if z.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "label vector length {} does not match n = {n}",
            z.len()
        )));
    }
    ProbabilityMatrix::new(grouped_average(a.values(), z.labels(), z.k()))
}

/// Oracle partition from the true latent positions: equal-width intervals,
/// label(i) = min(K-1, floor(xi_i * K)).
pub fn oracle_blocks(xi: &LatentPositions, k: usize) -> Result<BlockAssignment> {
    if k == 0 {
        return Err(Error::InvalidParameter("block count must be >= 1".into()));
    }
    let labels: Vec<usize> = xi
        .as_slice()
        .iter()
        .map(|&x| ((x * k as f64).floor() as usize).min(k - 1))
        .collect();
    BlockAssignment::new(labels, k)
}
