//! Szegedy walk with arbitrary phase rotations.
//!
//! States live on the doubled node space: a complex amplitude for every
//! ordered pair `|i1, i2>`, flat index `i1 * n + i2`. One walk operator is
//!
//! ```text
//! U(theta) = S ((1 - e^{i theta}) P - 1)
//! ```
//!
//! where `P` projects onto the span of the column states
//! `psi_k = |k>_1 (x) sum_j sqrt(G_jk) |j>_2` and `S` swaps the two
//! registers. A schedule step applies `U` twice (standard scheme,
//! `W(theta1, theta2)`) or four times (the alternate schemes, which fix the
//! two extra phases of the four-parameter operator in different ways).
//!
//! Rankings are read off the second register; the reduced density matrix
//! used for coherence and entanglement traces the second register out.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::google::{GoogleMatrix, RankVector};
use crate::metrics;

/// Evolution scheme selecting how many phases a step uses and how they are
/// tied together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Standard,
    AlternateEqual,
    AlternateOpposite,
    AlternateFixed,
    GeneralFour,
}

impl Scheme {
    pub const ALL: [Scheme; 5] = [
        Scheme::Standard,
        Scheme::AlternateEqual,
        Scheme::AlternateOpposite,
        Scheme::AlternateFixed,
        Scheme::GeneralFour,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Standard => "standard",
            Scheme::AlternateEqual => "alternate-equal",
            Scheme::AlternateOpposite => "alternate-opposite",
            Scheme::AlternateFixed => "alternate-fixed",
            Scheme::GeneralFour => "general-four",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Scheme::Standard),
            "alternate-equal" => Ok(Scheme::AlternateEqual),
            "alternate-opposite" => Ok(Scheme::AlternateOpposite),
            "alternate-fixed" => Ok(Scheme::AlternateFixed),
            "general-four" => Ok(Scheme::GeneralFour),
            other => Err(Error::Parameter(format!(
                "unknown scheme `{other}` (expected standard, alternate-equal, \
                 alternate-opposite, alternate-fixed or general-four)"
            ))),
        }
    }
}

/// Phases for one schedule step, reduced to `[0, 2pi)`.
///
/// `theta1p` / `theta2p` are the primed phases of the four-parameter
/// operator; the alternate schemes derive them from `theta1` / `theta2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSchedule {
    scheme: Scheme,
    theta1: f64,
    theta2: f64,
    theta1p: f64,
    theta2p: f64,
}

fn reduce_phase(theta: f64) -> Result<f64> {
    if !theta.is_finite() {
        return Err(Error::Parameter(format!("phase must be finite, got {theta}")));
    }
    let mut r = theta.rem_euclid(TAU);
    if r >= TAU {
        r = 0.0;
    }
    Ok(r)
}

impl PhaseSchedule {
    pub fn standard(theta1: f64, theta2: f64) -> Result<Self> {
        Self::build(Scheme::Standard, theta1, theta2, 0.0, 0.0)
    }

    pub fn alternate_equal(theta1: f64, theta2: f64) -> Result<Self> {
        let (t1, t2) = (reduce_phase(theta1)?, reduce_phase(theta2)?);
        Self::build(Scheme::AlternateEqual, t1, t2, t1, t2)
    }

    pub fn alternate_opposite(theta1: f64, theta2: f64) -> Result<Self> {
        let (t1, t2) = (reduce_phase(theta1)?, reduce_phase(theta2)?);
        Self::build(Scheme::AlternateOpposite, t1, t2, -t1, -t2)
    }

    pub fn alternate_fixed(theta1: f64, theta2: f64) -> Result<Self> {
        Self::build(Scheme::AlternateFixed, theta1, theta2, PI, PI)
    }

    pub fn general_four(theta1: f64, theta2: f64, theta1p: f64, theta2p: f64) -> Result<Self> {
        Self::build(Scheme::GeneralFour, theta1, theta2, theta1p, theta2p)
    }

    /// Schedule for a two-parameter scheme; the sweep grid assigns
    /// `(theta1, theta2)`. The four-parameter scheme is rejected here.
    pub fn for_scheme(scheme: Scheme, theta1: f64, theta2: f64) -> Result<Self> {
        match scheme {
            Scheme::Standard => Self::standard(theta1, theta2),
            Scheme::AlternateEqual => Self::alternate_equal(theta1, theta2),
            Scheme::AlternateOpposite => Self::alternate_opposite(theta1, theta2),
            Scheme::AlternateFixed => Self::alternate_fixed(theta1, theta2),
            Scheme::GeneralFour => Err(Error::Parameter(
                "general-four needs explicit primed phases; \
                 use PhaseSchedule::general_four"
                    .into(),
            )),
        }
    }

    fn build(scheme: Scheme, t1: f64, t2: f64, t1p: f64, t2p: f64) -> Result<Self> {
        Ok(Self {
            scheme,
            theta1: reduce_phase(t1)?,
            theta2: reduce_phase(t2)?,
            theta1p: reduce_phase(t1p)?,
            theta2p: reduce_phase(t2p)?,
        })
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn theta1(&self) -> f64 {
        self.theta1
    }

    pub fn theta2(&self) -> f64 {
        self.theta2
    }

    pub fn theta1p(&self) -> f64 {
        self.theta1p
    }

    pub fn theta2p(&self) -> f64 {
        self.theta2p
    }

    /// Rotation phases of one schedule step, in application order.
    ///
    /// Standard applies `U(theta1)` then `U(theta2)`; the four-phase
    /// schemes apply `U(theta2), U(theta2'), U(theta1), U(theta1')`.
    fn u_phases(&self) -> Vec<f64> {
        match self.scheme {
            Scheme::Standard => vec![self.theta1, self.theta2],
            _ => vec![self.theta2, self.theta2p, self.theta1, self.theta1p],
        }
    }
}

/// Amplitudes over the doubled node space, flat index `i1 * n + i2`.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    n: usize,
    amps: Vec<Complex64>,
}

impl WalkState {
    /// Build a state from raw amplitudes; must be unit norm within 1e-9.
    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != n * n {
            return Err(Error::Dimension { expected: n * n, got: amps.len() });
        }
        let norm = norm(&amps);
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::Parameter(format!(
                "state must be unit norm (got {norm})"
            )));
        }
        Ok(Self { n, amps })
    }

    pub fn basis(n: usize, i1: usize, i2: usize) -> Result<Self> {
        if i1 >= n || i2 >= n {
            return Err(Error::Parameter(format!(
                "basis indices ({i1}, {i2}) out of range for n={n}"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); n * n];
        amps[i1 * n + i2] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, i1: usize, i2: usize) -> Complex64 {
        self.amps[i1 * self.n + i2]
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amps)
    }
}

fn norm(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Result of a time-averaged evolution: mean ranking and mean coherence /
/// entanglement over the sampling window, plus the optional full series of
/// instantaneous rankings.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub rank: RankVector,
    pub coherence: f64,
    pub entanglement: f64,
    pub trace: Option<Vec<RankVector>>,
}

/// Reduced density matrix on the first register (second register traced
/// out): Hermitian, trace 1, positive semidefinite. Row-major entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedDensity {
    n: usize,
    entries: Vec<Complex64>,
}

impl ReducedDensity {
    /// Build from raw entries; checks shape, Hermiticity and unit trace.
    pub fn from_entries(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Dimension { expected: n * n, got: entries.len() });
        }
        for i in 0..n {
            for j in i..n {
                let diff = (entries[i * n + j] - entries[j * n + i].conj()).norm();
                if diff > 1e-10 {
                    return Err(Error::Parameter(format!(
                        "matrix is not Hermitian at ({i}, {j})"
                    )));
                }
            }
        }
        let trace: f64 = (0..n).map(|i| entries[i * n + i].re).sum();
        if (trace - 1.0).abs() > 1e-9 {
            return Err(Error::Parameter(format!("trace must be 1 (got {trace})")));
        }
        Ok(Self { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.n + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.entries[i * self.n + i].re).sum()
    }
}

/// Equal-weight superposition of the column states: amplitude
/// `sqrt(G[k][i]) / sqrt(n)` on `|i, k>`.
pub fn initial_state(g: &GoogleMatrix) -> WalkState {
    let n = g.n();
    let root_n = (n as f64).sqrt();
    let mut amps = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        let col = g.column(i);
        for k in 0..n {
            amps[i * n + k] = Complex64::new(col[k].sqrt() / root_n, 0.0);
        }
    }
    WalkState { n, amps }
}

/// Orthogonal projection onto the span of the column states. The output is
/// generally not normalized.
pub fn apply_pi(s: &WalkState, g: &GoogleMatrix) -> Result<WalkState> {
    if s.n != g.n() {
        return Err(Error::Dimension { expected: g.n(), got: s.n });
    }
    let engine = Engine::new(g);
    let n = s.n;
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for k in 0..n {
        let block = &s.amps[k * n..(k + 1) * n];
        let sq = &engine.sqrt_cols[k * n..(k + 1) * n];
        let coeff: Complex64 = block.iter().zip(sq).map(|(a, &w)| a * w).sum();
        for j in 0..n {
            out[k * n + j] = coeff * sq[j];
        }
    }
    Ok(WalkState { n, amps: out })
}

/// Swap the two registers: `|i, j> -> |j, i>`.
pub fn apply_swap(s: &WalkState) -> WalkState {
    let n = s.n;
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = s.amps[j * n + i];
        }
    }
    WalkState { n, amps: out }
}

/// One phase rotation `U(theta) = S ((1 - e^{i theta}) P - 1)`.
pub fn apply_u(s: &WalkState, g: &GoogleMatrix, theta: f64) -> Result<WalkState> {
    if s.n != g.n() {
        return Err(Error::Dimension { expected: g.n(), got: s.n });
    }
    let mut engine = Engine::new(g);
    let mut amps = s.amps.clone();
    engine.apply_u(&mut amps, rotation_factor(theta));
    Ok(WalkState { n: s.n, amps })
}

/// One schedule step (two or four rotations, see [`PhaseSchedule`]).
pub fn step(s: &WalkState, g: &GoogleMatrix, sched: &PhaseSchedule) -> Result<WalkState> {
    if s.n != g.n() {
        return Err(Error::Dimension { expected: g.n(), got: s.n });
    }
    let mut engine = Engine::new(g);
    let factors: Vec<Complex64> = sched.u_phases().iter().map(|&t| rotation_factor(t)).collect();
    let mut amps = s.amps.clone();
    for &f in &factors {
        engine.apply_u(&mut amps, f);
    }
    Ok(WalkState { n: s.n, amps })
}

/// Measurement distribution of the second register. Expects a unit-norm
/// state.
pub fn instantaneous_rank(s: &WalkState) -> RankVector {
    let n = s.n;
    let mut probs = vec![0.0; n];
    for i1 in 0..n {
        let block = &s.amps[i1 * n..(i1 + 1) * n];
        for (p, a) in probs.iter_mut().zip(block) {
            *p += a.norm_sqr();
        }
    }
    RankVector::from_probs_unchecked(probs)
}

/// Partial trace over the second register. Expects a unit-norm state.
pub fn reduced_density(s: &WalkState) -> ReducedDensity {
    let n = s.n;
    let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
    reduced_density_into(&s.amps, n, &mut entries);
    ReducedDensity { n, entries }
}

fn reduced_density_into(amps: &[Complex64], n: usize, entries: &mut [Complex64]) {
    for a in 0..n {
        let row_a = &amps[a * n..(a + 1) * n];
        entries[a * n + a] = Complex64::new(row_a.iter().map(|x| x.norm_sqr()).sum(), 0.0);
        for b in (a + 1)..n {
            let row_b = &amps[b * n..(b + 1) * n];
            let v: Complex64 = row_a.iter().zip(row_b).map(|(x, y)| x * y.conj()).sum();
            entries[a * n + b] = v;
            entries[b * n + a] = v.conj();
        }
    }
}

/// Run `steps` schedule steps from the initial state and average the
/// instantaneous rank, l1 coherence and entanglement entropy over the final
/// `window` post-step states.
pub fn evolve(
    g: &GoogleMatrix,
    sched: &PhaseSchedule,
    steps: usize,
    window: usize,
) -> Result<RunResult> {
    evolve_inner(g, sched, steps, window, false)
}

/// Same as [`evolve`], additionally recording the instantaneous rank after
/// every step in `RunResult::trace`.
pub fn evolve_traced(
    g: &GoogleMatrix,
    sched: &PhaseSchedule,
    steps: usize,
    window: usize,
) -> Result<RunResult> {
    evolve_inner(g, sched, steps, window, true)
}

fn evolve_inner(
    g: &GoogleMatrix,
    sched: &PhaseSchedule,
    steps: usize,
    window: usize,
    record_trace: bool,
) -> Result<RunResult> {
    if window == 0 || steps < window {
        return Err(Error::Parameter(format!(
            "need steps >= window >= 1 (got steps={steps}, window={window})"
        )));
    }
    let n = g.n();
    let mut engine = Engine::new(g);
    let factors: Vec<Complex64> = sched.u_phases().iter().map(|&t| rotation_factor(t)).collect();

    let mut amps = initial_state(g).amps;
    let mut rank_acc = vec![0.0; n];
    let mut coherence_acc = 0.0;
    let mut entanglement_acc = 0.0;
    let mut rho = vec![Complex64::new(0.0, 0.0); n * n];
    let mut trace = record_trace.then(|| Vec::with_capacity(steps));

    for t in 0..steps {
        for &f in &factors {
            engine.apply_u(&mut amps, f);
        }
        let in_window = t >= steps - window;
        if in_window || trace.is_some() {
            let state = WalkState { n, amps: amps.clone() };
            let probs = instantaneous_rank(&state);
            if in_window {
                for (acc, &p) in rank_acc.iter_mut().zip(probs.probs()) {
                    *acc += p;
                }
            }
            if let Some(tr) = trace.as_mut() {
                tr.push(probs);
            }
        }
        if in_window {
            reduced_density_into(&amps, n, &mut rho);
            let density = ReducedDensity { n, entries: rho };
            coherence_acc += metrics::l1_coherence(&density);
            entanglement_acc += metrics::entanglement_entropy(&density)?;
            rho = density.entries;
        }
    }

    let w = window as f64;
    for acc in rank_acc.iter_mut() {
        *acc /= w;
    }
    Ok(RunResult {
        rank: RankVector::new(rank_acc)?,
        coherence: coherence_acc / w,
        entanglement: entanglement_acc / w,
        trace,
    })
}

fn rotation_factor(theta: f64) -> Complex64 {
    Complex64::new(1.0 - theta.cos(), -theta.sin())
}

/// Applies rotations in place, reading whole columns of `sqrt(G)`; `O(n^2)`
/// per rotation instead of materializing the `n^2 x n^2` operator.
struct Engine {
    n: usize,
    sqrt_cols: Vec<f64>,
    coeff: Vec<Complex64>,
    buf: Vec<Complex64>,
}

impl Engine {
    fn new(g: &GoogleMatrix) -> Self {
        let n = g.n();
        let mut sqrt_cols = vec![0.0; n * n];
        for k in 0..n {
            let col = g.column(k);
            for j in 0..n {
                sqrt_cols[k * n + j] = col[j].sqrt();
            }
        }
        Self {
            n,
            sqrt_cols,
            coeff: vec![Complex64::new(0.0, 0.0); n],
            buf: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    /// `amps <- S ((factor) P - 1) amps` with `factor = 1 - e^{i theta}`.
    fn apply_u(&mut self, amps: &mut Vec<Complex64>, factor: Complex64) {
        let n = self.n;
        for (k, (block, sq)) in amps
            .chunks_exact(n)
            .zip(self.sqrt_cols.chunks_exact(n))
            .enumerate()
        {
            let c: Complex64 = block.iter().zip(sq).map(|(a, &w)| a * w).sum();
            self.coeff[k] = factor * c;
        }
        // Projection, phase and swap fused: out[j, k] = c_k sqrt(G[j][k]) - in[k, j].
        for k in 0..n {
            let ck = self.coeff[k];
            let sq = &self.sqrt_cols[k * n..(k + 1) * n];
            let block = &amps[k * n..(k + 1) * n];
            for j in 0..n {
                self.buf[j * n + k] = ck * sq[j] - block[j];
            }
        }
        std::mem::swap(amps, &mut self.buf);
    }
}
