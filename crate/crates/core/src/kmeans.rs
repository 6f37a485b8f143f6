//! Seeded Lloyd k-means with k-means++ initialization and restarts.
//!
//! Everything is deterministic: a fixed generator drives initialization, ties
//! in assignment break toward the lower center index, and the best restart is
//! chosen by strict inertia improvement (first winner kept on exact ties).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MAX_ITERS: usize = 100;

/// Clusters `n` points of dimension `dim` (row-major `points`) into `k`
/// groups. Returns labels and the final inertia.
pub(crate) fn kmeans(
    points: &[f64],
    n: usize,
    dim: usize,
    k: usize,
    restarts: usize,
    seed: u64,
) -> (Vec<usize>, f64) {
    assert!(k >= 1 && k <= n, "k = {k} outside 1..={n}");
    assert_eq!(points.len(), n * dim);
    if k == 1 {
        let centroid = mean_point(points, dim, &vec![0usize; n], 0);
        let inertia: f64 = (0..n).map(|i| dist2(point(points, i, dim), &centroid)).sum();
        return (vec![0; n], inertia);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(Vec<usize>, f64)> = None;
    for _ in 0..restarts.max(1) {
        let (labels, inertia) = run_once(points, n, dim, k, &mut rng);
        let better = match &best {
            None => true,
            Some((_, b)) => inertia < *b,
        };
        if better {
            best = Some((labels, inertia));
        }
    }
    best.expect("at least one restart")
}

fn point(points: &[f64], i: usize, dim: usize) -> &[f64] {
    &points[i * dim..(i + 1) * dim]
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn mean_point(points: &[f64], dim: usize, labels: &[usize], cluster: usize) -> Vec<f64> {
    let mut acc = vec![0.0f64; dim];
    let mut count = 0usize;
    for (i, &lab) in labels.iter().enumerate() {
        if lab == cluster {
            for (a, &v) in acc.iter_mut().zip(point(points, i, dim)) {
                *a += v;
            }
            count += 1;
        }
    }
    if count > 0 {
        let inv = 1.0 / count as f64;
        for a in &mut acc {
            *a *= inv;
        }
    }
    acc
}

fn run_once(
    points: &[f64],
    n: usize,
    dim: usize,
    k: usize,
    rng: &mut ChaCha8Rng,
) -> (Vec<usize>, f64) {
    // k-means++ seeding.
    let mut centers: Vec<f64> = Vec::with_capacity(k * dim);
    let first = rng.random_range(0..n);
    centers.extend_from_slice(point(points, first, dim));
    let mut d2: Vec<f64> = (0..n)
        .map(|i| dist2(point(points, i, dim), point(points, first, dim)))
        .collect();
    for _ in 1..k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut cum = 0.0;
            let mut chosen = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                cum += w;
                if cum >= target {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            // All points coincide with existing centers; any index works.
            rng.random_range(0..n)
        };
        let c = point(points, next, dim).to_vec();
        for i in 0..n {
            let d = dist2(point(points, i, dim), &c);
            if d < d2[i] {
                d2[i] = d;
            }
        }
        centers.extend_from_slice(&c);
    }

    let mut labels = vec![0usize; n];
    for _ in 0..MAX_ITERS {
        // Assignment; ties go to the lowest center index.
        let mut changed = false;
        for i in 0..n {
            let p = point(points, i, dim);
            let mut best_c = 0usize;
            let mut best_d = f64::INFINITY;
            for c in 0..k {
                let d = dist2(p, &centers[c * dim..(c + 1) * dim]);
                if d < best_d {
                    best_d = d;
                    best_c = c;
                }
            }
            if labels[i] != best_c {
                labels[i] = best_c;
                changed = true;
            }
        }

        // Refill any empty cluster with the point farthest from its center.
        loop {
            let mut counts = vec![0usize; k];
            for &lab in &labels {
                counts[lab] += 1;
            }
            let Some(empty) = counts.iter().position(|&c| c == 0) else {
                break;
            };
            let mut far_i = 0usize;
            let mut far_d = -1.0f64;
            for i in 0..n {
                if counts[labels[i]] <= 1 {
                    continue;
                }
                let d = dist2(
                    point(points, i, dim),
                    &centers[labels[i] * dim..(labels[i] + 1) * dim],
                );
                if d > far_d {
                    far_d = d;
                    far_i = i;
                }
            }
            labels[far_i] = empty;
            centers[empty * dim..(empty + 1) * dim].copy_from_slice(point(points, far_i, dim));
            changed = true;
        }

        // Update step.
        for c in 0..k {
            let m = mean_point(points, dim, &labels, c);
            centers[c * dim..(c + 1) * dim].copy_from_slice(&m);
        }

        if !changed {
            break;
        }
    }

    let inertia: f64 = (0..n)
        .map(|i| {
            dist2(
                point(points, i, dim),
                &centers[labels[i] * dim..(labels[i] + 1) * dim],
            )
        })
        .sum();
    (labels, inertia)
}
