//! Google matrix construction and the classical PageRank eigenvector.
//!
//! The transition matrix spreads a node's probability uniformly over its
//! out-links (or over the whole graph for dangling nodes); the Google matrix
//! damps it with a uniform teleport term so every column stays stochastic.

use crate::error::{Error, Result};
use crate::graph::DirectedGraph;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 100_000;

/// Dense transition matrix as nested rows: `entry[i][j]` is the probability
/// of moving from node `j` to node `i`. Every column sums to 1.
pub fn transition_matrix(g: &DirectedGraph) -> Vec<Vec<f64>> {
    let n = g.n();
    let mut rows = vec![vec![0.0; n]; n];
    for j in 0..n {
        let deg = g.out_degree(j);
        if deg == 0 {
            for row in rows.iter_mut() {
                row[j] = 1.0 / n as f64;
            }
        } else {
            for i in g.targets(j) {
                rows[i][j] = 1.0 / deg as f64;
            }
        }
    }
    rows
}

/// Column-stochastic damped transition matrix.
///
/// Entry `(i, j)` is `alpha * E[i][j] + (1 - alpha) / n`, stored column-major
/// so walk-operator construction can read whole columns.
#[derive(Debug, Clone, PartialEq)]
pub struct GoogleMatrix {
    n: usize,
    alpha: f64,
    cols: Vec<f64>,
}

impl GoogleMatrix {
    pub fn new(g: &DirectedGraph, alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::Parameter(format!(
                "damping factor must lie in [0, 1], got {alpha}"
            )));
        }
        let n = g.n();
        let transition = transition_matrix(g);
        let teleport = (1.0 - alpha) / n as f64;
        let mut cols = vec![0.0; n * n];
        for j in 0..n {
            for i in 0..n {
                cols[j * n + i] = alpha * transition[i][j] + teleport;
            }
        }
        Ok(Self { n, alpha, cols })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Entry at row `i`, column `j`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.cols[j * self.n + i]
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.cols[j * self.n..(j + 1) * self.n]
    }

    /// Matrix-vector product `y = G x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![0.0; self.n];
        for (j, &xj) in x.iter().enumerate() {
            for (yi, &gij) in y.iter_mut().zip(self.column(j)) {
                *yi += gij * xj;
            }
        }
        y
    }
}

/// A probability distribution over nodes: non-negative, sums to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct RankVector {
    probs: Vec<f64>,
}

impl RankVector {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Parameter("rank vector must be non-empty".into()));
        }
        if probs.iter().any(|&p| p.is_nan() || p < 0.0) {
            return Err(Error::Parameter("rank entries must be non-negative".into()));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Parameter(format!(
                "rank entries must sum to 1 (got {sum})"
            )));
        }
        Ok(Self { probs })
    }

    pub fn uniform(n: usize) -> Self {
        Self { probs: vec![1.0 / n as f64; n] }
    }

    pub(crate) fn from_probs_unchecked(probs: Vec<f64>) -> Self {
        debug_assert!((probs.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        Self { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// Power iteration from the uniform distribution until the L1 change drops
/// below `tol`. The result then satisfies `||G r - r||_1 <= tol`.
pub fn classical_pagerank(g: &GoogleMatrix, tol: f64, max_iter: usize) -> Result<RankVector> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Parameter(format!("tolerance must be positive, got {tol}")));
    }
    let n = g.n();
    let mut rank = vec![1.0 / n as f64; n];
    let mut residual = f64::INFINITY;
    for _ in 0..max_iter {
        let next = g.apply(&rank);
        residual = next
            .iter()
            .zip(&rank)
            .map(|(a, b)| (a - b).abs())
            .sum();
        rank = next;
        if residual < tol {
            let sum: f64 = rank.iter().sum();
            for r in rank.iter_mut() {
                *r /= sum;
            }
            return Ok(RankVector::from_probs_unchecked(rank));
        }
    }
    Err(Error::Convergence { iterations: max_iter, residual })
}
