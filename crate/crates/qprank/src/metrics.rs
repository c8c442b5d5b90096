//! Scalar metrics over rankings and reduced density matrices: fidelity,
//! variance, l1 coherence, entanglement entropy, power-law exponent.

use crate::eigen;
use crate::error::{Error, Result};
use crate::google::RankVector;
use crate::walk::ReducedDensity;

/// Probabilities at or below this floor are dropped from power-law fits and
/// contribute zero entropy.
const PROB_FLOOR: f64 = 1e-12;

/// Bhattacharyya coefficient `sum_i sqrt(a_i b_i)`: 1 exactly when the
/// distributions coincide, 0 when their supports are disjoint.
pub fn fidelity(a: &RankVector, b: &RankVector) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Dimension { expected: a.len(), got: b.len() });
    }
    let f: f64 = a
        .probs()
        .iter()
        .zip(b.probs())
        .map(|(&x, &y)| (x * y).sqrt())
        .sum();
    Ok(f.min(1.0))
}

/// Population variance of the probability values around their mean `1/n`.
pub fn variance(a: &RankVector) -> f64 {
    let n = a.len() as f64;
    let mean = 1.0 / n;
    a.probs().iter().map(|&p| (p - mean) * (p - mean)).sum::<f64>() / n
}

/// Sum of the absolute off-diagonal entries; zero exactly for diagonal
/// (classical) states.
pub fn l1_coherence(rho: &ReducedDensity) -> f64 {
    let n = rho.n();
    let entries = rho.entries();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += entries[i * n + j].norm();
            }
        }
    }
    sum
}

/// Eigenvalue entropy `-sum_i lambda_i log2 lambda_i` of the reduced
/// density matrix, in bits; ranges over `[0, log2 n]`. Eigenvalues below
/// 1e-12 (including round-off negatives) contribute zero.
pub fn entanglement_entropy(rho: &ReducedDensity) -> Result<f64> {
    let eigs = eigen::hermitian_eigenvalues(rho.n(), rho.entries())?;
    Ok(eigs
        .iter()
        .map(|&l| if l < PROB_FLOOR { 0.0 } else { -l * l.log2() })
        .sum())
}

/// Least-squares power-law fit of a ranking distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaFit {
    /// Decay exponent: probabilities fall off as `index^-beta` once sorted.
    pub beta: f64,
    /// Intercept of the log-log line (natural logs).
    pub intercept: f64,
    /// Goodness of fit in `[0, 1]`; defined as 1 for a zero-variance
    /// response.
    pub r2: f64,
    /// Number of probabilities above the floor that entered the fit.
    pub points_used: usize,
}

/// Sort probabilities descending, drop entries at or below 1e-12, and fit
/// `log p ~ intercept - beta * log i` over the 1-based sorted index `i`.
pub fn beta_fit(a: &RankVector) -> Result<BetaFit> {
    beta_fit_values(a.probs())
}

pub(crate) fn beta_fit_values(values: &[f64]) -> Result<BetaFit> {
    let mut sorted: Vec<f64> = values.iter().copied().filter(|&v| v > PROB_FLOOR).collect();
    sorted.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let m = sorted.len();
    if m < 2 {
        return Err(Error::Fit(format!(
            "need at least 2 probabilities above {PROB_FLOOR:e}, found {m}"
        )));
    }

    let xs: Vec<f64> = (1..=m).map(|i| (i as f64).ln()).collect();
    let ys: Vec<f64> = sorted.iter().map(|&v| v.ln()).collect();
    let mean_x = xs.iter().sum::<f64>() / m as f64;
    let mean_y = ys.iter().sum::<f64>() / m as f64;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in xs.iter().zip(&ys) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
        syy += (y - mean_y) * (y - mean_y);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let r2 = if syy == 0.0 {
        1.0
    } else {
        let ss_res: f64 = xs
            .iter()
            .zip(&ys)
            .map(|(&x, &y)| {
                let e = y - (intercept + slope * x);
                e * e
            })
            .sum();
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok(BetaFit { beta: -slope, intercept, r2, points_used: m })
}
