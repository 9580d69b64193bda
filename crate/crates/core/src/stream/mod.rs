//! Edge streams: events, generators for bounded-arboricity graphs, stream
//! orderings and the text formats.

mod format;
mod generate;
mod order;

pub use format::{parse_graph, parse_stream, serialize_graph, serialize_stream};
pub use generate::{
    decode_prufer, dynamic_length_budget, generate_dynamic_stream, generate_random_tree,
    generate_star_forest, generate_union_of_forests,
};
pub use order::{order_stream, OrderingPolicy};

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EventKind {
    Insert,
    Delete,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StreamEvent {
    pub kind: EventKind,
    pub edge: Edge,
}

impl StreamEvent {
    pub fn insert(a: usize, b: usize) -> Self {
        StreamEvent {
            kind: EventKind::Insert,
            edge: Edge::new(a, b),
        }
    }

    pub fn delete(a: usize, b: usize) -> Self {
        StreamEvent {
            kind: EventKind::Delete,
            edge: Edge::new(a, b),
        }
    }

    pub fn is_insert(&self) -> bool {
        self.kind == EventKind::Insert
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StreamError {
    #[error("event {index}: self-loop at vertex {vertex}")]
    SelfLoop { index: usize, vertex: usize },
    #[error("event {index}: edge {edge} has an endpoint outside [0, {n})")]
    VertexOutOfRange { index: usize, edge: Edge, n: usize },
    #[error("event {index}: delete of edge {edge} which is not live")]
    DeleteOfAbsentEdge { index: usize, edge: Edge },
    #[error("event {index}: insert of edge {edge} which is already live")]
    InsertOfLiveEdge { index: usize, edge: Edge },
    #[error("stream length {len} exceeds the budget of {budget} events")]
    BudgetExceeded { len: usize, budget: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Ordered insert/delete events over vertices `0..n`.
///
/// Construction checks that every delete targets a live edge and every
/// insert targets a non-live one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeStream {
    n: usize,
    events: Vec<StreamEvent>,
    c_declared: Option<usize>,
}

impl EdgeStream {
    pub fn new(n: usize, events: Vec<StreamEvent>) -> Result<Self, StreamError> {
        let mut live = HashSet::new();
        for (index, ev) in events.iter().enumerate() {
            let e = ev.edge;
            if e.u == e.v {
                return Err(StreamError::SelfLoop { index, vertex: e.u });
            }
            if e.v >= n {
                return Err(StreamError::VertexOutOfRange { index, edge: e, n });
            }
            match ev.kind {
                EventKind::Insert => {
                    if !live.insert(e) {
                        return Err(StreamError::InsertOfLiveEdge { index, edge: e });
                    }
                }
                EventKind::Delete => {
                    if !live.remove(&e) {
                        return Err(StreamError::DeleteOfAbsentEdge { index, edge: e });
                    }
                }
            }
        }
        Ok(EdgeStream {
            n,
            events,
            c_declared: None,
        })
    }

    /// Insert-only stream of `g` in its stored edge order.
    pub fn from_graph(g: &Graph) -> Self {
        EdgeStream {
            n: g.n(),
            events: g
                .edges()
                .iter()
                .map(|e| StreamEvent {
                    kind: EventKind::Insert,
                    edge: *e,
                })
                .collect(),
            c_declared: g.c_declared(),
        }
    }

    pub fn with_declared_arboricity(mut self, c: Option<usize>) -> Self {
        self.c_declared = c;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn events(&self) -> &[StreamEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn c_declared(&self) -> Option<usize> {
        self.c_declared
    }

    pub fn is_insert_only(&self) -> bool {
        self.events.iter().all(StreamEvent::is_insert)
    }

    /// The graph left after replaying every event, edges in first-insert order
    /// of their final incarnation.
    pub fn live_graph(&self) -> Graph {
        let mut live: Vec<Option<Edge>> = Vec::new();
        let mut slot = std::collections::HashMap::new();
        for ev in &self.events {
            match ev.kind {
                EventKind::Insert => {
                    slot.insert(ev.edge, live.len());
                    live.push(Some(ev.edge));
                }
                EventKind::Delete => {
                    if let Some(i) = slot.remove(&ev.edge) {
                        live[i] = None;
                    }
                }
            }
        }
        let edges: Vec<Edge> = live.into_iter().flatten().collect();
        let g = Graph::from_edges(self.n, &edges).expect("validated stream yields a simple graph");
        match self.c_declared {
            Some(c) => g.with_declared_arboricity(c),
            None => g,
        }
    }

    /// Live graphs after every event, for invariant checks on small inputs.
    pub fn prefix_graphs(&self) -> impl Iterator<Item = Graph> + '_ {
        (1..=self.events.len()).map(move |k| {
            EdgeStream {
                n: self.n,
                events: self.events[..k].to_vec(),
                c_declared: self.c_declared,
            }
            .live_graph()
        })
    }
}
