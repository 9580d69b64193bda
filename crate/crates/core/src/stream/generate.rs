use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;

use super::{EdgeStream, StreamError, StreamEvent};
use crate::graph::{degeneracy_order, Edge, Graph};
use crate::rng::{split_rng, streams};

struct DisjointSets {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

/// Union of `c` random spanning forests on `n` vertices.
///
/// Each forest is random-edge Kruskal: uniformly drawn vertex pairs are
/// accepted when they join two components, until `n - 1` edges are in.
/// Drawing pairs with replacement is equivalent to scanning a shuffled
/// complete-graph edge list, since a repeated pair is always rejected.
/// Edges already present from an earlier forest are skipped.
pub fn generate_union_of_forests(n: usize, c: usize, seed: u64) -> Graph {
    assert!(n >= 2, "union of forests needs n >= 2");
    assert!(c >= 1, "union of forests needs c >= 1");
    let mut rng = split_rng(seed, streams::GENERATOR);
    let mut seen = HashSet::new();
    let mut edges = Vec::with_capacity(c * (n - 1));
    for _ in 0..c {
        let mut dsu = DisjointSets::new(n);
        let mut accepted = 0;
        while accepted < n - 1 {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if a == b || !dsu.union(a, b) {
                continue;
            }
            accepted += 1;
            let e = Edge::new(a, b);
            if seen.insert(e) {
                edges.push(e);
            }
        }
    }
    Graph::from_edges(n, &edges)
        .expect("forest union is simple")
        .with_declared_arboricity(c)
}

/// `k` disjoint stars with `s` leaves each; star `j` has center `j*(s+1)`.
pub fn generate_star_forest(k: usize, s: usize) -> Graph {
    assert!(k >= 1 && s >= 1, "star forest needs k, s >= 1");
    let mut edges = Vec::with_capacity(k * s);
    for j in 0..k {
        let center = j * (s + 1);
        for leaf in 1..=s {
            edges.push((center, center + leaf));
        }
    }
    Graph::new(k * (s + 1), &edges)
        .expect("stars are simple")
        .with_declared_arboricity(1)
}

/// Standard Prüfer decoding over labels `0..n`, where `seq.len() == n - 2`.
pub fn decode_prufer(seq: &[usize], n: usize) -> Vec<Edge> {
    assert_eq!(seq.len() + 2, n, "Prüfer sequence must have length n - 2");
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&v| degree[v] == 1).map(Reverse).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &x in seq {
        let Reverse(leaf) = leaves.pop().expect("a leaf always exists");
        edges.push(Edge::new(leaf, x));
        degree[x] -= 1;
        if degree[x] == 1 {
            leaves.push(Reverse(x));
        }
    }
    let Reverse(a) = leaves.pop().unwrap();
    let Reverse(b) = leaves.pop().unwrap();
    edges.push(Edge::new(a, b));
    edges
}

/// Uniform random labeled tree from a random Prüfer sequence.
pub fn generate_random_tree(n: usize, seed: u64) -> Graph {
    assert!(n >= 2, "random tree needs n >= 2");
    let mut rng = split_rng(seed, streams::GENERATOR);
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    Graph::from_edges(n, &decode_prufer(&seq, n))
        .expect("Prüfer decoding yields a tree")
        .with_declared_arboricity(1)
}

/// Event budget for dynamic streams: `4 * c * n`.
pub fn dynamic_length_budget(c: usize, n: usize) -> usize {
    4 * c * n
}

const DECOY_ATTEMPTS: usize = 64;
const MAX_DECOY_SPAN: usize = 4;

/// Insert/delete stream whose final live graph is `g`.
///
/// `g`'s edges are inserted in stored order. Around them, `round(f * m)`
/// decoy edges (pairs outside `g`) are inserted and later deleted within a
/// few slots. Decoys are accepted only while a fixed peeling order of `g`
/// still gives every vertex at most `2c` later neighbors, so every prefix has
/// degeneracy at most `2c`; a decoy with no acceptable pair after a few
/// draws is skipped.
pub fn generate_dynamic_stream(
    g: &Graph,
    delete_fraction: f64,
    seed: u64,
) -> Result<EdgeStream, StreamError> {
    assert!(
        (0.0..=1.0).contains(&delete_fraction),
        "delete fraction must be in [0, 1]"
    );
    let n = g.n();
    let m = g.m();
    let (base_degeneracy, order) = degeneracy_order(g);
    let c = g.c_declared().unwrap_or(base_degeneracy.max(1));
    let decoys = (delete_fraction * m as f64).round() as usize;
    let budget = dynamic_length_budget(c, n);
    if m + 2 * decoys > budget {
        return Err(StreamError::BudgetExceeded {
            len: m + 2 * decoys,
            budget,
        });
    }

    let mut rng = split_rng(seed, streams::DYNAMIC);
    let mut lifetimes: Vec<(usize, usize)> = (0..decoys)
        .map(|_| {
            let a = rng.gen_range(0..=m);
            (a, (a + rng.gen_range(0..=MAX_DECOY_SPAN)).min(m))
        })
        .collect();
    lifetimes.sort_unstable();

    let mut witness = OrderWitness::new(g, &order, 2 * c);
    let mut live_decoys: Vec<(Edge, usize)> = Vec::new();
    let mut events = Vec::with_capacity(m + 2 * decoys);
    let mut next = 0;
    for slot in 0..=m {
        while next < lifetimes.len() && lifetimes[next].0 == slot {
            let end = lifetimes[next].1;
            next += 1;
            if let Some(e) = witness.draw(&mut rng) {
                events.push(StreamEvent::insert(e.u, e.v));
                live_decoys.push((e, end));
            }
        }
        let mut i = 0;
        while i < live_decoys.len() {
            if live_decoys[i].1 == slot {
                let (e, _) = live_decoys.swap_remove(i);
                witness.release(e);
                events.push(StreamEvent::delete(e.u, e.v));
            } else {
                i += 1;
            }
        }
        if slot < m {
            let e = g.edges()[slot];
            events.push(StreamEvent::insert(e.u, e.v));
        }
    }
    debug_assert!(live_decoys.is_empty());
    Ok(EdgeStream::new(n, events)?.with_declared_arboricity(Some(c)))
}

/// Later-neighbor counts along a peeling order of `g`, plus the live decoys.
struct OrderWitness<'a> {
    g: &'a Graph,
    pos: Vec<usize>,
    later: Vec<usize>,
    cap: usize,
    live: HashSet<Edge>,
}

impl<'a> OrderWitness<'a> {
    fn new(g: &'a Graph, order: &[usize], cap: usize) -> Self {
        let mut pos = vec![0; g.n()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let mut later = vec![0; g.n()];
        for e in g.edges() {
            later[Self::earlier(&pos, *e)] += 1;
        }
        OrderWitness {
            g,
            pos,
            later,
            cap,
            live: HashSet::new(),
        }
    }

    fn earlier(pos: &[usize], e: Edge) -> usize {
        if pos[e.u] < pos[e.v] {
            e.u
        } else {
            e.v
        }
    }

    fn draw(&mut self, rng: &mut impl Rng) -> Option<Edge> {
        let n = self.g.n();
        if n < 2 {
            return None;
        }
        for _ in 0..DECOY_ATTEMPTS {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if a == b {
                continue;
            }
            let e = Edge::new(a, b);
            let x = Self::earlier(&self.pos, e);
            if self.later[x] >= self.cap
                || self.live.contains(&e)
                || self.g.neighbors(a).contains(&b)
            {
                continue;
            }
            self.later[x] += 1;
            self.live.insert(e);
            return Some(e);
        }
        None
    }

    fn release(&mut self, e: Edge) {
        self.live.remove(&e);
        self.later[Self::earlier(&self.pos, e)] -= 1;
    }
}

/// Shuffles in place with the ordering sub-stream of `seed`.
pub(super) fn shuffle_edges(edges: &mut [Edge], seed: u64) {
    let mut rng = split_rng(seed, streams::ORDERING);
    edges.shuffle(&mut rng);
}
