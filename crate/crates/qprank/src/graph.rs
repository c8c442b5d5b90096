//! Directed graphs: edge-list text I/O, seeded scale-free generation, and
//! edge reversal (the "trackback" graph).

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// A directed graph over nodes `0..n`. Immutable after construction.
///
/// Duplicate directed edges are rejected. Self-loops are accepted on load
/// but never produced by [`DirectedGraph::generate_scale_free`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    out_deg: Vec<usize>,
}

impl DirectedGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("node count must be positive".into()));
        }
        let mut set = BTreeSet::new();
        let mut out_deg = vec![0usize; n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Parameter(format!(
                    "edge ({u}, {v}) out of range for n={n}"
                )));
            }
            if !set.insert((u, v)) {
                return Err(Error::Parameter(format!("duplicate edge ({u}, {v})")));
            }
            out_deg[u] += 1;
        }
        Ok(Self { n, edges: set, out_deg })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u, v))
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.out_deg[u]
    }

    /// Successors of `u` in ascending order.
    pub fn targets(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges
            .range((u, 0)..=(u, self.n.max(1) - 1))
            .map(|&(_, v)| v)
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n];
        for &(_, v) in &self.edges {
            deg[v] += 1;
        }
        deg
    }

    /// The graph with every edge direction flipped.
    pub fn reverse(&self) -> Self {
        let edges: BTreeSet<_> = self.edges.iter().map(|&(u, v)| (v, u)).collect();
        let mut out_deg = vec![0usize; self.n];
        for &(u, _) in &edges {
            out_deg[u] += 1;
        }
        Self { n: self.n, edges, out_deg }
    }

    /// Preferential-attachment generation: a seed clique of `m + 1` nodes
    /// (edges from higher to lower index), then each new node adds `m`
    /// directed edges to distinct existing targets, chosen with probability
    /// proportional to in-degree + 1. Deterministic in `(n, m, seed)`.
    pub fn generate_scale_free(n: usize, m: usize, seed: u64) -> Result<Self> {
        if m < 1 {
            return Err(Error::Parameter("edges per node (m) must be at least 1".into()));
        }
        if n < m + 1 {
            return Err(Error::Parameter(format!(
                "node count must exceed edges per node (n={n}, m={m})"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        let mut in_deg = vec![0u64; n];
        for u in 0..=m {
            for v in 0..u {
                edges.push((u, v));
                in_deg[v] += 1;
            }
        }
        let mut chosen: Vec<usize> = Vec::with_capacity(m);
        for u in (m + 1)..n {
            chosen.clear();
            for _ in 0..m {
                // Integer weights make the draw exact.
                let total: u64 = (0..u)
                    .filter(|t| !chosen.contains(t))
                    .map(|t| in_deg[t] + 1)
                    .sum();
                let mut x = rng.gen_range(0..total);
                let mut pick = u;
                for t in 0..u {
                    if chosen.contains(&t) {
                        continue;
                    }
                    let w = in_deg[t] + 1;
                    if x < w {
                        pick = t;
                        break;
                    }
                    x -= w;
                }
                debug_assert!(pick < u);
                chosen.push(pick);
                in_deg[pick] += 1;
                edges.push((u, pick));
            }
        }
        Self::new(n, edges)
    }

    /// Parse the line-oriented edge-list format.
    ///
    /// Blank lines and `#` comments are ignored. An optional first content
    /// line `n <count>` fixes the node count; otherwise it is inferred as
    /// 1 + the largest index seen. Every other content line is `u v`.
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut declared: Option<usize> = None;
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut seen = BTreeSet::new();
        let mut first_content = true;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let lineno = idx + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if first_content && tokens[0] == "n" {
                first_content = false;
                if tokens.len() != 2 {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: "header must be `n <count>`".into(),
                    });
                }
                let count: usize = tokens[1].parse().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("invalid node count `{}`", tokens[1]),
                })?;
                if count == 0 {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: "node count must be positive".into(),
                    });
                }
                declared = Some(count);
                continue;
            }
            first_content = false;
            if tokens.len() != 2 {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected `u v`, got `{line}`"),
                });
            }
            let parse = |tok: &str| -> Result<usize> {
                tok.parse().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("invalid node index `{tok}`"),
                })
            };
            let (u, v) = (parse(tokens[0])?, parse(tokens[1])?);
            if let Some(n) = declared {
                if u >= n || v >= n {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("node index out of range for n={n}"),
                    });
                }
            }
            if !seen.insert((u, v)) {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("duplicate edge ({u}, {v})"),
                });
            }
            edges.push((u, v));
        }
        let n = match declared {
            Some(n) => n,
            None => {
                if edges.is_empty() {
                    return Err(Error::Parse {
                        line: 0,
                        msg: "empty edge list without an `n <count>` header".into(),
                    });
                }
                1 + edges.iter().map(|&(u, v)| u.max(v)).max().unwrap()
            }
        };
        Self::new(n, edges)
    }

    /// Canonical edge-list text: header line, then edges in sorted order.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        writeln!(out, "n {}", self.n).unwrap();
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }

    /// Stable fingerprint of the node count and edge set.
    pub fn edge_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.to_edge_list().as_bytes());
        let digest = hasher.finalize();
        let mut hex = String::with_capacity(64);
        for byte in digest {
            write!(hex, "{byte:02x}").unwrap();
        }
        hex
    }
}
