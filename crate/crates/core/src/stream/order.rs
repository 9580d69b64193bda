use std::fmt;

use super::generate::shuffle_edges;
use super::EdgeStream;
use crate::graph::{Edge, Graph};

/// How the edges of a graph are laid out in an insert-only stream.
///
/// The deterministic policies sort stably, so ties keep generator order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderingPolicy {
    AsGenerated,
    UniformRandom(u64),
    /// Edges grouped by their higher-degree endpoint ("center", ties to the
    /// smaller id), groups in center-id order.
    StarByStar,
    /// Edges touching low-degree vertices go last: descending by the smaller
    /// endpoint degree.
    LeavesLast,
    /// Edges touching high-degree vertices go first: descending by the larger
    /// endpoint degree.
    CentersFirst,
}

impl OrderingPolicy {
    pub const NAMES: [&'static str; 5] = [
        "as-generated",
        "uniform-random",
        "star-by-star",
        "leaves-last",
        "centers-first",
    ];

    /// Parses a policy name; `seed` is used only by `uniform-random`.
    pub fn from_name(name: &str, seed: u64) -> Option<Self> {
        Some(match name {
            "as-generated" => OrderingPolicy::AsGenerated,
            "uniform-random" => OrderingPolicy::UniformRandom(seed),
            "star-by-star" => OrderingPolicy::StarByStar,
            "leaves-last" => OrderingPolicy::LeavesLast,
            "centers-first" => OrderingPolicy::CentersFirst,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            OrderingPolicy::AsGenerated => "as-generated",
            OrderingPolicy::UniformRandom(_) => "uniform-random",
            OrderingPolicy::StarByStar => "star-by-star",
            OrderingPolicy::LeavesLast => "leaves-last",
            OrderingPolicy::CentersFirst => "centers-first",
        }
    }
}

impl fmt::Display for OrderingPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderingPolicy::UniformRandom(seed) => write!(f, "uniform-random({seed})"),
            other => f.write_str(other.name()),
        }
    }
}

pub fn order_stream(g: &Graph, policy: OrderingPolicy) -> EdgeStream {
    let deg = g.degrees();
    let mut edges: Vec<Edge> = g.edges().to_vec();
    match policy {
        OrderingPolicy::AsGenerated => {}
        OrderingPolicy::UniformRandom(seed) => shuffle_edges(&mut edges, seed),
        OrderingPolicy::StarByStar => {
            let center = |e: &Edge| {
                if deg[e.v] > deg[e.u] {
                    e.v
                } else {
                    e.u
                }
            };
            edges.sort_by_key(center);
        }
        OrderingPolicy::LeavesLast => {
            edges.sort_by_key(|e| std::cmp::Reverse(deg[e.u].min(deg[e.v])));
        }
        OrderingPolicy::CentersFirst => {
            edges.sort_by_key(|e| std::cmp::Reverse(deg[e.u].max(deg[e.v])));
        }
    }
    let ordered = Graph::from_edges(g.n(), &edges).expect("permutation of a simple graph");
    let ordered = match g.c_declared() {
        Some(c) => ordered.with_declared_arboricity(c),
        None => ordered,
    };
    EdgeStream::from_graph(&ordered)
}
