use std::collections::{HashMap, HashSet};

use rand::Rng;
use serde::Serialize;

use super::{
    beta, check_epsilon, check_mu, Diagnostics, Estimate, EstimatorError, EstimatorParams, Outcome,
    SpaceMeter,
};
use crate::graph::Edge;
use crate::rng::{split_rng, streams};
use crate::stream::{EdgeStream, EventKind, StreamEvent};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Alg1Params {
    pub mu: usize,
    pub p: f64,
    pub c: usize,
    pub epsilon: f64,
}

impl Alg1Params {
    pub fn new(mu: usize, p: f64, c: usize, epsilon: f64) -> Result<Self, EstimatorError> {
        check_mu(mu, c)?;
        check_epsilon(epsilon)?;
        if !(p > 0.0 && p <= 1.0) {
            return Err(EstimatorError::InvalidParams(format!(
                "p must be in (0, 1], got {p}"
            )));
        }
        Ok(Alg1Params { mu, p, c, epsilon })
    }

    pub fn beta(&self) -> f64 {
        beta(self.mu, self.c)
    }

    pub fn lambda(&self) -> f64 {
        self.epsilon / self.beta()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Alg1Summary {
    /// Sampled vertices of degree at most `mu` that have a neighbor whose
    /// observed counter is at most `mu`.
    pub low: usize,
    /// Sampled vertices of degree above `mu`.
    pub high: usize,
}

/// Vertex-sampling sketch estimating `M_mu + h_mu`.
///
/// Sampled vertices carry an exact degree counter `d`; their neighbors carry
/// a lower-bound counter `l` that counts stored edges touching them. Deletes
/// undo both, and a neighbor whose last stored edge disappears is dropped.
#[derive(Clone, Debug)]
pub struct Alg1Sketch {
    mu: usize,
    p: f64,
    d: HashMap<usize, u64>,
    l: HashMap<usize, u64>,
    stored: HashSet<Edge>,
    space: SpaceMeter,
}

impl Alg1Sketch {
    pub fn new(n: usize, mu: usize, p: f64, seed: u64) -> Self {
        let mut rng = split_rng(seed, streams::VERTEX_SAMPLE);
        let d = (0..n)
            .filter(|_| rng.gen::<f64>() < p)
            .map(|v| (v, 0))
            .collect();
        let mut sketch = Alg1Sketch {
            mu,
            p,
            d,
            l: HashMap::new(),
            stored: HashSet::new(),
            space: SpaceMeter::default(),
        };
        sketch.space.observe(sketch.items());
        sketch
    }

    pub fn in_sample(&self, v: usize) -> bool {
        self.d.contains_key(&v)
    }

    pub fn sample_size(&self) -> usize {
        self.d.len()
    }

    /// Observed counter of `v`: `d(v)` if sampled, else `l(v)` if tracked.
    pub fn counter(&self, v: usize) -> Option<u64> {
        self.d.get(&v).or_else(|| self.l.get(&v)).copied()
    }

    pub fn stored_edges(&self) -> &HashSet<Edge> {
        &self.stored
    }

    /// Stored edges plus one counter per sampled vertex and per tracked neighbor.
    pub fn items(&self) -> u64 {
        (self.stored.len() + self.d.len() + self.l.len()) as u64
    }

    pub fn space_peak(&self) -> u64 {
        self.space.peak()
    }

    pub fn feed(&mut self, ev: &StreamEvent) {
        let e = ev.edge;
        if !self.in_sample(e.u) && !self.in_sample(e.v) {
            return;
        }
        match ev.kind {
            EventKind::Insert => {
                self.stored.insert(e);
                for x in [e.u, e.v] {
                    match self.d.get_mut(&x) {
                        Some(d) => *d += 1,
                        None => *self.l.entry(x).or_insert(0) += 1,
                    }
                }
            }
            EventKind::Delete => {
                if !self.stored.remove(&e) {
                    return;
                }
                for x in [e.u, e.v] {
                    if let Some(d) = self.d.get_mut(&x) {
                        *d -= 1;
                    } else if let Some(l) = self.l.get_mut(&x) {
                        *l -= 1;
                        if *l == 0 {
                            self.l.remove(&x);
                        }
                    }
                }
            }
        }
        self.space.observe(self.items());
    }

    pub fn summary(&self) -> Alg1Summary {
        let mu = self.mu as u64;
        let mut has_low_neighbor: HashSet<usize> = HashSet::new();
        for e in &self.stored {
            for (v, w) in [(e.u, e.v), (e.v, e.u)] {
                if self.in_sample(v) && self.counter(w).is_some_and(|c| c <= mu) {
                    has_low_neighbor.insert(v);
                }
            }
        }
        let low = self
            .d
            .iter()
            .filter(|&(v, &d)| d <= mu && has_low_neighbor.contains(v))
            .count();
        let high = self.d.values().filter(|&&d| d > mu).count();
        Alg1Summary { low, high }
    }

    /// `(|S_1| + |S_2|) / p`.
    pub fn estimate(&self) -> f64 {
        let s = self.summary();
        (s.low + s.high) as f64 / self.p
    }
}

pub fn alg1_estimate(
    stream: &EdgeStream,
    params: Alg1Params,
    seed: u64,
) -> Result<Estimate, EstimatorError> {
    if !stream.is_insert_only() {
        return Err(EstimatorError::HasDeletions);
    }
    let mut sketch = Alg1Sketch::new(stream.n(), params.mu, params.p, seed);
    for ev in stream.events() {
        sketch.feed(ev);
    }
    Ok(Estimate {
        outcome: Outcome::Value(sketch.estimate()),
        space_peak: sketch.space_peak(),
        seed,
        params: EstimatorParams::Alg1(params),
        diagnostics: Diagnostics::None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn stream(n: usize, pairs: &[(usize, usize)]) -> EdgeStream {
        EdgeStream::from_graph(&Graph::new(n, pairs).unwrap())
    }

    fn star7() -> EdgeStream {
        let e: Vec<_> = (1..=7).map(|i| (0, i)).collect();
        stream(8, &e)
    }

    #[test]
    fn params_validation() {
        assert!(Alg1Params::new(2, 0.5, 1, 0.5).is_err());
        assert!(Alg1Params::new(3, 0.0, 1, 0.5).is_err());
        assert!(Alg1Params::new(3, 1.5, 1, 0.5).is_err());
        assert!(Alg1Params::new(3, 1.0, 1, 1.0).is_err());
        let p = Alg1Params::new(3, 1.0, 1, 0.5).unwrap();
        assert_eq!(p.beta(), 12.0);
        assert!((p.lambda() - 0.5 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn star_with_full_sample() {
        let params = Alg1Params::new(3, 1.0, 1, 0.5).unwrap();
        let est = alg1_estimate(&star7(), params, 0).unwrap();
        assert_eq!(est.value(), Some(1.0));
    }

    #[test]
    fn path_with_full_sample() {
        let params = Alg1Params::new(3, 1.0, 1, 0.5).unwrap();
        let est = alg1_estimate(&stream(4, &[(0, 1), (1, 2), (2, 3)]), params, 0).unwrap();
        assert_eq!(est.value(), Some(4.0));
    }

    #[test]
    fn low_degree_star_counts_every_vertex() {
        // K_{1,3} with mu = 3 lies entirely in the low-degree part:
        // n_L = 4 exceeds mu * M_mu = 3.
        let params = Alg1Params::new(3, 1.0, 1, 0.5).unwrap();
        let est = alg1_estimate(&stream(4, &[(0, 1), (0, 2), (0, 3)]), params, 0).unwrap();
        assert_eq!(est.value(), Some(4.0));
    }

    #[test]
    fn empty_stream() {
        for p in [0.1, 1.0] {
            let params = Alg1Params::new(3, p, 1, 0.5).unwrap();
            let est = alg1_estimate(&stream(5, &[]), params, 3).unwrap();
            assert_eq!(est.value(), Some(0.0));
        }
    }

    #[test]
    fn counters_and_stored_edges() {
        // S = everything; every edge is stored with d counters equal to degrees.
        let s = star7();
        let mut sk = Alg1Sketch::new(8, 3, 1.0, 0);
        for ev in s.events() {
            sk.feed(ev);
        }
        assert_eq!(sk.counter(0), Some(7));
        assert_eq!(sk.stored_edges().len(), 7);
        assert_eq!(sk.items(), 7 + 8);
    }

    #[test]
    fn neighbor_counter_is_a_lower_bound() {
        for seed in 0..50 {
            let g = crate::stream::generate_union_of_forests(60, 2, seed);
            let s = EdgeStream::from_graph(&g);
            let mut sk = Alg1Sketch::new(60, 5, 0.3, seed);
            let mut deg = vec![0u64; 60];
            for ev in s.events() {
                sk.feed(ev);
                deg[ev.edge.u] += 1;
                deg[ev.edge.v] += 1;
                for (v, &dv) in deg.iter().enumerate() {
                    if let Some(c) = sk.counter(v) {
                        assert!(c <= dv);
                        if sk.in_sample(v) {
                            assert_eq!(c, dv);
                        }
                    }
                }
            }
            assert!(sk
                .stored_edges()
                .iter()
                .all(|e| sk.in_sample(e.u) || sk.in_sample(e.v)));
        }
    }

    #[test]
    fn dynamic_star_with_decoys() {
        // K_{1,7} on 0..=7 plus seven decoys at the center, each deleted again.
        let mut events: Vec<StreamEvent> = (1..=7).map(|i| StreamEvent::insert(0, i)).collect();
        for i in 8..15 {
            events.push(StreamEvent::insert(0, i));
        }
        for i in 8..15 {
            events.push(StreamEvent::delete(0, i));
        }
        let s = EdgeStream::new(15, events).unwrap();
        let mut sk = Alg1Sketch::new(15, 3, 1.0, 0);
        for ev in s.events() {
            sk.feed(ev);
        }
        assert_eq!(sk.counter(0), Some(7));
        assert_eq!(sk.estimate(), 1.0);
    }

    #[test]
    fn neighbor_dropped_when_isolated() {
        let seed = (0..)
            .find(|&s| {
                let sk = Alg1Sketch::new(3, 3, 0.5, s);
                sk.in_sample(0) && !sk.in_sample(1) && !sk.in_sample(2)
            })
            .unwrap();
        let mut sk = Alg1Sketch::new(3, 3, 0.5, seed);
        sk.feed(&StreamEvent::insert(0, 1));
        sk.feed(&StreamEvent::insert(1, 2));
        assert_eq!(sk.counter(1), Some(1));
        assert_eq!(sk.stored_edges().len(), 1);
        sk.feed(&StreamEvent::delete(0, 1));
        assert_eq!(sk.counter(1), None);
        assert_eq!(sk.counter(0), Some(0));
        assert_eq!(sk.items(), 1);
        // a later re-insertion starts a fresh counter
        sk.feed(&StreamEvent::insert(0, 1));
        assert_eq!(sk.counter(1), Some(1));
    }

    #[test]
    fn rejects_deletions() {
        let s = EdgeStream::new(
            2,
            vec![StreamEvent::insert(0, 1), StreamEvent::delete(0, 1)],
        )
        .unwrap();
        let params = Alg1Params::new(3, 1.0, 1, 0.5).unwrap();
        assert_eq!(
            alg1_estimate(&s, params, 0),
            Err(EstimatorError::HasDeletions)
        );
    }
}
