//! Exact graph representation and the offline oracles that every streaming
//! estimator is checked against.

mod characterize;
mod matching;

pub use characterize::{
    alpha_for_mu, characterize, degeneracy, degeneracy_order, offline_alpha_good_set,
    CharacterizationReport,
};
pub use matching::{
    brute_force_matching_size, greedy_maximal_matching, maximum_matching, maximum_matching_size,
    BRUTE_FORCE_EDGE_CAP,
};

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Undirected edge stored with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
}

impl Edge {
    /// Normalizes the endpoint order. Does not reject self-loops; callers that
    /// need a simple graph validate through [`Graph::new`].
    pub fn new(a: usize, b: usize) -> Self {
        if a <= b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }

    pub fn touches(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }

    pub fn shares_endpoint(&self, other: &Edge) -> bool {
        self.touches(other.u) || self.touches(other.v)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge ({0}, {1}) has an endpoint outside [0, {2})")]
    VertexOutOfRange(usize, usize, usize),
    #[error("brute-force matching needs at most {cap} edges, graph has {m}")]
    TooLarge { m: usize, cap: usize },
    #[error("stream contains deletions")]
    HasDeletions,
}

/// Simple undirected graph on dense vertex ids `0..n`.
///
/// Edge order is preserved from construction; generators rely on it to
/// describe "as generated" stream orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
    c_declared: Option<usize>,
}

impl Graph {
    pub fn new(n: usize, edge_list: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut seen = HashSet::with_capacity(edge_list.len());
        let mut edges = Vec::with_capacity(edge_list.len());
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edge_list {
            if a >= n || b >= n {
                return Err(GraphError::VertexOutOfRange(a, b, n));
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            let e = Edge::new(a, b);
            if !seen.insert(e) {
                return Err(GraphError::DuplicateEdge(a, b));
            }
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
            edges.push(e);
        }
        Ok(Graph {
            n,
            edges,
            adj,
            c_declared: None,
        })
    }

    pub fn from_edges(n: usize, edges: &[Edge]) -> Result<Self, GraphError> {
        let pairs: Vec<_> = edges.iter().map(|e| (e.u, e.v)).collect();
        Self::new(n, &pairs)
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
            c_declared: None,
        }
    }

    pub fn with_declared_arboricity(mut self, c: usize) -> Self {
        self.c_declared = Some(c);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn c_declared(&self) -> Option<usize> {
        self.c_declared
    }

    /// True when the graph has no cycle.
    pub fn is_forest(&self) -> bool {
        degeneracy(self) <= 1
    }

    /// Induced subgraph on the vertices selected by `keep`; vertex ids are preserved.
    pub fn induced(&self, keep: impl Fn(usize) -> bool) -> Graph {
        let kept: Vec<Edge> = self
            .edges
            .iter()
            .copied()
            .filter(|e| keep(e.u) && keep(e.v))
            .collect();
        let mut adj = vec![Vec::new(); self.n];
        for e in &kept {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        Graph {
            n: self.n,
            edges: kept,
            adj,
            c_declared: self.c_declared,
        }
    }

    /// Checks the declared arboricity against the degeneracy bound.
    pub fn respects_declared_arboricity(&self) -> bool {
        match self.c_declared {
            Some(c) => degeneracy(self) <= 2 * c,
            None => true,
        }
    }
}
