//! Eigenvalues of small dense Hermitian matrices via cyclic Jacobi
//! rotations. Good to ~1e-12 off-diagonal norm at the sizes this crate
//! works with (up to a few hundred).

use num_complex::Complex64;

use crate::error::{Error, Result};

const OFF_NORM_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 64;

/// Eigenvalues of a Hermitian `n x n` matrix (row-major entries), sorted
/// ascending. The input is copied; only the Hermitian part is assumed.
pub fn hermitian_eigenvalues(n: usize, entries: &[Complex64]) -> Result<Vec<f64>> {
    assert_eq!(entries.len(), n * n, "matrix shape mismatch");
    if n <= 1 {
        return Ok(entries.iter().map(|e| e.re).collect());
    }
    let mut a = entries.to_vec();
    // Rotations below this never move the off-norm past tolerance.
    let skip = OFF_NORM_TOL / n as f64;

    for _ in 0..MAX_SWEEPS {
        if off_norm(&a, n) <= OFF_NORM_TOL {
            let mut eigs: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
            eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
            return Ok(eigs);
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let alpha = a[p * n + q];
                let abs = alpha.norm();
                if abs <= skip {
                    continue;
                }
                let phase = alpha / abs;
                let tau = (a[q * n + q].re - a[p * n + p].re) / (2.0 * abs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (tau - (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let sp = s * phase;
                let spc = s * phase.conj();

                // Column update: A <- A V.
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - spc * akq;
                    a[k * n + q] = sp * akp + c * akq;
                }
                // Row update: A <- V^dagger A.
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - sp * aqk;
                    a[q * n + k] = spc * apk + c * aqk;
                }
                a[p * n + q] = Complex64::new(0.0, 0.0);
                a[q * n + p] = Complex64::new(0.0, 0.0);
                a[p * n + p].im = 0.0;
                a[q * n + q].im = 0.0;
            }
        }
    }
    Err(Error::Numeric(format!(
        "Jacobi eigensolver did not reach off-norm {OFF_NORM_TOL:.0e} in {MAX_SWEEPS} sweeps \
         (n={n}, off-norm {:.3e})",
        off_norm(&a, n)
    )))
}

fn off_norm(a: &[Complex64], n: usize) -> f64 {
    let mut sum = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            sum += 2.0 * a[i * n + j].norm_sqr();
        }
    }
    sum.sqrt()
}
