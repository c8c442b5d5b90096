//! Quantum PageRank on directed graphs via Szegedy walks with arbitrary
//! phase rotations.
//!
//! The pipeline: build a [`graph::DirectedGraph`] (loaded, generated, or
//! reversed for trackback analysis), damp it into a
//! [`google::GoogleMatrix`], evolve the two-register walk state under a
//! [`walk::PhaseSchedule`], and read off time-averaged rankings plus their
//! metric bundle (fidelity against classical PageRank, variance, l1
//! coherence, entanglement entropy, power-law exponent). [`sweep`] runs
//! whole `(theta1, theta2)` grids and persists them; [`cluster`] labels the
//! resulting distributions into phase regions.

pub mod cluster;
pub mod eigen;
pub mod error;
pub mod google;
pub mod graph;
pub mod metrics;
pub mod sweep;
pub mod walk;

pub use cluster::{cluster_distributions, representative_cells, ClusterLabeling};
pub use error::{Error, Result};
pub use google::{classical_pagerank, transition_matrix, GoogleMatrix, RankVector};
pub use graph::DirectedGraph;
pub use metrics::{beta_fit, entanglement_entropy, fidelity, l1_coherence, variance, BetaFit};
pub use sweep::{read_sweep, run_sweep, write_sweep, CellRecord, GridSpec, SweepResult};
pub use walk::{
    evolve, evolve_traced, initial_state, instantaneous_rank, reduced_density, step,
    PhaseSchedule, ReducedDensity, RunResult, Scheme, WalkState,
};
