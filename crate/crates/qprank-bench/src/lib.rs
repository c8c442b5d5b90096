//! Shared fixtures for the benchmark targets.

use qprank::{DirectedGraph, GoogleMatrix};

/// The canonical desk-scale instance: 32-node seeded scale-free graph.
pub fn desk_graph() -> DirectedGraph {
    DirectedGraph::generate_scale_free(32, 2, 7).unwrap()
}

pub fn desk_matrix() -> GoogleMatrix {
    GoogleMatrix::new(&desk_graph(), 0.85).unwrap()
}
