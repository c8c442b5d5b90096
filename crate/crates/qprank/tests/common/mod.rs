//! Shared oracles for the integration suites. Everything here recomputes
//! results from explicit dense matrices or direct linear algebra, staying
//! off the library's fast paths.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qprank::{DirectedGraph, GoogleMatrix, Scheme, WalkState};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Dense complex matrix, row-major.
#[derive(Clone)]
pub struct CMat {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![c(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = c(1.0, 0.0);
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn mul(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.dim, rhs.dim);
        let d = self.dim;
        let mut out = CMat::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let aik = self.get(i, k);
                if aik == c(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    out.data[i * d + j] += aik * rhs.get(k, j);
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let d = self.dim;
        assert_eq!(x.len(), d);
        let mut y = vec![c(0.0, 0.0); d];
        for i in 0..d {
            for j in 0..d {
                y[i] += self.get(i, j) * x[j];
            }
        }
        y
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.get(i, j)).collect()
    }
}

/// The column state `psi_k` as a dense vector on the doubled space.
pub fn psi_vector(g: &GoogleMatrix, k: usize) -> Vec<Complex64> {
    let n = g.n();
    let mut v = vec![c(0.0, 0.0); n * n];
    for j in 0..n {
        v[k * n + j] = c(g.get(j, k).sqrt(), 0.0);
    }
    v
}

/// Projector onto the span of the column states, built as an explicit sum
/// of outer products.
pub fn projector(g: &GoogleMatrix) -> CMat {
    let n = g.n();
    let dim = n * n;
    let mut p = CMat::zeros(dim);
    for k in 0..n {
        let psi = psi_vector(g, k);
        for i in 0..dim {
            if psi[i] == c(0.0, 0.0) {
                continue;
            }
            for j in 0..dim {
                p.data[i * dim + j] += psi[i] * psi[j].conj();
            }
        }
    }
    p
}

/// Register swap as an explicit permutation matrix.
pub fn swap_op(n: usize) -> CMat {
    let dim = n * n;
    let mut s = CMat::zeros(dim);
    for i in 0..n {
        for j in 0..n {
            s.set(i * n + j, j * n + i, c(1.0, 0.0));
        }
    }
    s
}

/// Dense `U(theta) = S ((1 - e^{i theta}) P - 1)`.
pub fn u_op(g: &GoogleMatrix, theta: f64) -> CMat {
    let n = g.n();
    let dim = n * n;
    let p = projector(g);
    let s = swap_op(n);
    let factor = c(1.0, 0.0) - c(theta.cos(), theta.sin());
    let mut inner = CMat::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            let mut v = factor * p.get(i, j);
            if i == j {
                v -= c(1.0, 0.0);
            }
            inner.set(i, j, v);
        }
    }
    s.mul(&inner)
}

/// Dense `W(a, b) = U(b) U(a)`.
pub fn w_op(g: &GoogleMatrix, a: f64, b: f64) -> CMat {
    u_op(g, b).mul(&u_op(g, a))
}

/// Dense operator for one full schedule step of the given scheme:
/// `W(theta1, theta2)` for the standard walk and
/// `W(theta1, theta1') W(theta2, theta2')` for the four-phase schemes, with
/// the primed phases tied per scheme.
pub fn scheme_op(
    g: &GoogleMatrix,
    scheme: Scheme,
    theta1: f64,
    theta2: f64,
    theta1p: f64,
    theta2p: f64,
) -> CMat {
    use std::f64::consts::PI;
    match scheme {
        Scheme::Standard => w_op(g, theta1, theta2),
        Scheme::AlternateEqual => w_op(g, theta1, theta1).mul(&w_op(g, theta2, theta2)),
        Scheme::AlternateOpposite => w_op(g, theta1, -theta1).mul(&w_op(g, theta2, -theta2)),
        Scheme::AlternateFixed => w_op(g, theta1, PI).mul(&w_op(g, theta2, PI)),
        Scheme::GeneralFour => w_op(g, theta1, theta1p).mul(&w_op(g, theta2, theta2p)),
    }
}

/// Classical PageRank by direct linear solve: `(G - 1) r = 0` with the last
/// equation replaced by the normalization `sum r = 1`.
pub fn pagerank_solve(g: &GoogleMatrix) -> Vec<f64> {
    let n = g.n();
    let mut a = vec![vec![0.0f64; n + 1]; n];
    for i in 0..n {
        for j in 0..n {
            a[i][j] = g.get(i, j) - if i == j { 1.0 } else { 0.0 };
        }
    }
    for j in 0..n {
        a[n - 1][j] = 1.0;
    }
    a[n - 1][n] = 1.0;

    // Gaussian elimination with partial pivoting.
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).unwrap())
            .unwrap();
        a.swap(col, pivot);
        assert!(a[col][col].abs() > 1e-12, "singular system");
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..=n {
                a[row][k] -= f * a[col][k];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut v = a[row][n];
        for k in row + 1..n {
            v -= a[row][k] * x[k];
        }
        x[row] = v / a[row][row];
    }
    let sum: f64 = x.iter().sum();
    for v in x.iter_mut() {
        *v /= sum;
    }
    x
}

/// Reduced density on the first register from the full pure-state density:
/// build `|psi><psi|` on the doubled space, then sum the second-register
/// diagonal blocks.
pub fn reduced_density_bruteforce(state: &WalkState) -> Vec<Complex64> {
    let n = state.n();
    let amps = state.amplitudes();
    let dim = n * n;
    let mut full = vec![c(0.0, 0.0); dim * dim];
    for r in 0..dim {
        for s in 0..dim {
            full[r * dim + s] = amps[r] * amps[s].conj();
        }
    }
    let mut rho = vec![c(0.0, 0.0); n * n];
    for a in 0..n {
        for b in 0..n {
            let mut v = c(0.0, 0.0);
            for j in 0..n {
                v += full[(a * n + j) * dim + (b * n + j)];
            }
            rho[a * n + b] = v;
        }
    }
    rho
}

/// Reduced density on the *second* register; for a pure state its spectrum
/// matches the first-register one.
pub fn second_register_density(state: &WalkState) -> Vec<Complex64> {
    let n = state.n();
    let amps = state.amplitudes();
    let mut rho = vec![c(0.0, 0.0); n * n];
    for a in 0..n {
        for b in 0..n {
            let mut v = c(0.0, 0.0);
            for i in 0..n {
                v += amps[i * n + a] * amps[i * n + b].conj();
            }
            rho[a * n + b] = v;
        }
    }
    rho
}

/// Random digraph with edge probability ~0.35 and occasional self-loops.
pub fn random_graph(n: usize, rng: &mut ChaCha8Rng) -> DirectedGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            let p = if u == v { 0.05 } else { 0.35 };
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    DirectedGraph::new(n, edges).unwrap()
}

pub fn random_unit_state(n: usize, rng: &mut ChaCha8Rng) -> WalkState {
    let mut amps: Vec<Complex64> = (0..n * n)
        .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in amps.iter_mut() {
        *a /= norm;
    }
    WalkState::from_amplitudes(n, amps).unwrap()
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn max_entry_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn l1_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}
