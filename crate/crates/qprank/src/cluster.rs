//! Unsupervised labeling of sweep cells: k-means over the per-cell ranking
//! distributions, with k-means++ seeding and seeded restarts so identical
//! inputs always produce identical labelings.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sweep::{fmt_float, SweepResult};

const RESTARTS: u64 = 10;
const MAX_ITERS: usize = 500;

/// A k-means labeling of the sweep grid, row-major like the cells.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterLabeling {
    k: usize,
    labels: Vec<usize>,
    centroids: Vec<Vec<f64>>,
    inertia: f64,
    seed: u64,
}

impl ClusterLabeling {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn centroids(&self) -> &[Vec<f64>] {
        &self.centroids
    }

    pub fn inertia(&self) -> f64 {
        self.inertia
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.k];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Cluster the per-cell rank vectors into `k` groups. Runs Lloyd's
/// algorithm from k-means++ starts for seeds `seed .. seed + 10` and keeps
/// the restart with the lowest inertia (ties: lowest restart index).
pub fn cluster_distributions(
    result: &SweepResult,
    k: usize,
    seed: u64,
) -> Result<ClusterLabeling> {
    let points: Vec<&[f64]> = result.cells.iter().map(|c| c.rank.probs()).collect();
    if k < 1 || k > points.len() {
        return Err(Error::Parameter(format!(
            "cluster count must lie in [1, {}], got {k}",
            points.len()
        )));
    }
    let mut best: Option<(f64, Vec<usize>, Vec<Vec<f64>>)> = None;
    for restart in 0..RESTARTS {
        let (inertia, labels, centroids) = lloyd(&points, k, seed.wrapping_add(restart));
        let better = match &best {
            None => true,
            Some((best_inertia, _, _)) => inertia < *best_inertia,
        };
        if better {
            best = Some((inertia, labels, centroids));
        }
    }
    let (inertia, labels, centroids) = best.unwrap();
    Ok(ClusterLabeling { k, labels, centroids, inertia, seed })
}

fn lloyd(points: &[&[f64]], k: usize, seed: u64) -> (f64, Vec<usize>, Vec<Vec<f64>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = plus_plus_init(points, k, &mut rng);
    let mut labels = assign(points, &centroids);
    for _ in 0..MAX_ITERS {
        update_centroids(points, &labels, &mut centroids);
        repair_empty_clusters(points, &mut labels, &mut centroids);
        let next = assign(points, &centroids);
        let converged = next == labels;
        labels = next;
        if converged {
            break;
        }
    }
    // Pin centroids to the means of the final assignment.
    update_centroids(points, &labels, &mut centroids);
    let inertia = points
        .iter()
        .zip(&labels)
        .map(|(p, &l)| dist2(p, &centroids[l]))
        .sum();
    (inertia, labels, centroids)
}

fn plus_plus_init(points: &[&[f64]], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut centroids: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut picked: Vec<usize> = Vec::with_capacity(k);
    let first = rng.gen_range(0..points.len());
    picked.push(first);
    centroids.push(points[first].to_vec());
    let mut d2: Vec<f64> = points.iter().map(|p| dist2(p, &centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let idx = if total > 0.0 {
            let mut x = rng.gen::<f64>() * total;
            let mut pick = points.len() - 1;
            for (i, &w) in d2.iter().enumerate() {
                if x < w {
                    pick = i;
                    break;
                }
                x -= w;
            }
            pick
        } else {
            // Every point coincides with a centroid; take the lowest unused.
            (0..points.len()).find(|i| !picked.contains(i)).unwrap_or(0)
        };
        picked.push(idx);
        centroids.push(points[idx].to_vec());
        let last = centroids.last().unwrap();
        for (slot, p) in d2.iter_mut().zip(points) {
            *slot = slot.min(dist2(p, last));
        }
    }
    centroids
}

fn assign(points: &[&[f64]], centroids: &[Vec<f64>]) -> Vec<usize> {
    points
        .iter()
        .map(|p| {
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for (c, centroid) in centroids.iter().enumerate() {
                let d = dist2(p, centroid);
                if d < best_d {
                    best_d = d;
                    best = c;
                }
            }
            best
        })
        .collect()
}

fn update_centroids(points: &[&[f64]], labels: &[usize], centroids: &mut [Vec<f64>]) {
    let dim = points[0].len();
    let mut counts = vec![0usize; centroids.len()];
    let mut sums = vec![vec![0.0; dim]; centroids.len()];
    for (p, &l) in points.iter().zip(labels) {
        counts[l] += 1;
        for (s, &x) in sums[l].iter_mut().zip(*p) {
            *s += x;
        }
    }
    for (c, centroid) in centroids.iter_mut().enumerate() {
        if counts[c] > 0 {
            for (slot, s) in centroid.iter_mut().zip(&sums[c]) {
                *slot = s / counts[c] as f64;
            }
        }
        // Empty clusters keep their previous centroid; the repair pass
        // relocates them.
    }
}

fn repair_empty_clusters(points: &[&[f64]], labels: &mut [usize], centroids: &mut [Vec<f64>]) {
    let mut counts = vec![0usize; centroids.len()];
    for &l in labels.iter() {
        counts[l] += 1;
    }
    for c in 0..centroids.len() {
        if counts[c] > 0 {
            continue;
        }
        // Re-seed at the point farthest from its current centroid.
        let mut far_idx = 0;
        let mut far_d = -1.0;
        for (i, p) in points.iter().enumerate() {
            let d = dist2(p, &centroids[labels[i]]);
            if d > far_d && counts[labels[i]] > 1 {
                far_d = d;
                far_idx = i;
            }
        }
        counts[labels[far_idx]] -= 1;
        labels[far_idx] = c;
        counts[c] = 1;
        centroids[c] = points[far_idx].to_vec();
    }
}

/// Per cluster, the member cell nearest its centroid; ties break toward the
/// lowest row-major index. A cluster that somehow has no members falls back
/// to the globally nearest cell.
pub fn representative_cells(result: &SweepResult, labeling: &ClusterLabeling) -> Vec<usize> {
    let points: Vec<&[f64]> = result.cells.iter().map(|c| c.rank.probs()).collect();
    (0..labeling.k())
        .map(|c| {
            let centroid = &labeling.centroids()[c];
            let mut best: Option<(f64, usize)> = None;
            for (i, p) in points.iter().enumerate() {
                if labeling.labels()[i] != c {
                    continue;
                }
                let d = dist2(p, centroid);
                if best.map_or(true, |(bd, _)| d < bd) {
                    best = Some((d, i));
                }
            }
            match best {
                Some((_, i)) => i,
                None => {
                    let mut fallback = 0;
                    let mut fd = f64::INFINITY;
                    for (i, p) in points.iter().enumerate() {
                        let d = dist2(p, centroid);
                        if d < fd {
                            fd = d;
                            fallback = i;
                        }
                    }
                    fallback
                }
            }
        })
        .collect()
}

/// Write the label map as `theta1,theta2,label`, row-major.
pub fn write_labels(
    result: &SweepResult,
    labeling: &ClusterLabeling,
    path: &Path,
) -> Result<()> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    writeln!(out, "theta1,theta2,label")?;
    for (cell, &label) in result.cells.iter().zip(labeling.labels()) {
        writeln!(out, "{},{},{label}", fmt_float(cell.theta1), fmt_float(cell.theta2))?;
    }
    out.flush()?;
    Ok(())
}

/// Write the centroids as k rows of n probabilities.
pub fn write_centroids(labeling: &ClusterLabeling, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    for centroid in labeling.centroids() {
        let row: Vec<String> = centroid.iter().map(|&x| fmt_float(x)).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    out.flush()?;
    Ok(())
}
