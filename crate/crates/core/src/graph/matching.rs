use std::collections::VecDeque;

use super::{Graph, GraphError};
use crate::stream::EdgeStream;

const NONE: usize = usize::MAX;

/// Largest edge count accepted by [`brute_force_matching_size`].
pub const BRUTE_FORCE_EDGE_CAP: usize = 24;

/// Edmonds' augmenting-path search with blossom contraction.
///
/// Per-root state is reset only on the vertices the previous search touched,
/// so failing searches cost time proportional to the explored region.
struct BlossomSearch<'a> {
    g: &'a Graph,
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    lca_mark: Vec<bool>,
    touched: Vec<usize>,
    queue: VecDeque<usize>,
}

impl<'a> BlossomSearch<'a> {
    fn new(g: &'a Graph) -> Self {
        let n = g.n();
        BlossomSearch {
            g,
            mate: vec![NONE; n],
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
            lca_mark: vec![false; n],
            touched: Vec::new(),
            queue: VecDeque::new(),
        }
    }

    fn seed_greedy(&mut self) {
        for e in self.g.edges() {
            if self.mate[e.u] == NONE && self.mate[e.v] == NONE {
                self.mate[e.u] = e.v;
                self.mate[e.v] = e.u;
            }
        }
    }

    fn reset(&mut self) {
        for &x in &self.touched {
            self.parent[x] = NONE;
            self.base[x] = x;
            self.used[x] = false;
            self.in_blossom[x] = false;
        }
        self.touched.clear();
        self.queue.clear();
    }

    fn lca(&mut self, mut a: usize, mut b: usize) -> usize {
        let mut marked = Vec::new();
        loop {
            a = self.base[a];
            self.lca_mark[a] = true;
            marked.push(a);
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if self.lca_mark[b] {
                break;
            }
            b = self.parent[self.mate[b]];
        }
        for x in marked {
            self.lca_mark[x] = false;
        }
        b
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            let mv = self.mate[v];
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[mv]] = true;
            self.parent[v] = child;
            child = mv;
            v = self.parent[mv];
        }
    }

    /// Returns the free endpoint of an augmenting path from `root`, if any.
    fn find_path(&mut self, root: usize) -> Option<usize> {
        self.reset();
        self.used[root] = true;
        self.touched.push(root);
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for i in 0..self.g.neighbors(v).len() {
                let to = self.g.neighbors(v)[i];
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    for &x in &self.touched {
                        self.in_blossom[x] = false;
                    }
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for j in 0..self.touched.len() {
                        let x = self.touched[j];
                        if self.in_blossom[self.base[x]] {
                            self.base[x] = cur;
                            if !self.used[x] {
                                self.used[x] = true;
                                self.queue.push_back(x);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    self.touched.push(to);
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let w = self.mate[to];
                    self.used[w] = true;
                    self.touched.push(w);
                    self.queue.push_back(w);
                }
            }
        }
        None
    }

    fn augment(&mut self, mut v: usize) {
        while v != NONE {
            let pv = self.parent[v];
            let next = self.mate[pv];
            self.mate[v] = pv;
            self.mate[pv] = v;
            v = next;
        }
    }

    fn run(mut self) -> Vec<usize> {
        self.seed_greedy();
        for root in 0..self.g.n() {
            if self.mate[root] == NONE && self.g.degree(root) > 0 {
                if let Some(end) = self.find_path(root) {
                    self.augment(end);
                }
            }
        }
        self.mate
    }
}

/// Maximum matching as a mate array: `mate[v]` is the partner of `v`, if any.
pub fn maximum_matching(g: &Graph) -> Vec<Option<usize>> {
    BlossomSearch::new(g)
        .run()
        .into_iter()
        .map(|m| (m != NONE).then_some(m))
        .collect()
}

/// Exact maximum matching size M*.
pub fn maximum_matching_size(g: &Graph) -> usize {
    BlossomSearch::new(g)
        .run()
        .iter()
        .filter(|&&m| m != NONE)
        .count()
        / 2
}

/// Exhaustive search over all sets of pairwise-disjoint edges.
///
/// Independent of the blossom code; used only to validate it on small inputs.
pub fn brute_force_matching_size(g: &Graph) -> Result<usize, GraphError> {
    if g.m() > BRUTE_FORCE_EDGE_CAP {
        return Err(GraphError::TooLarge {
            m: g.m(),
            cap: BRUTE_FORCE_EDGE_CAP,
        });
    }
    fn search(edges: &[super::Edge], i: usize, covered: &mut [bool], size: usize) -> usize {
        if i == edges.len() {
            return size;
        }
        let skip = search(edges, i + 1, covered, size);
        let e = edges[i];
        if covered[e.u] || covered[e.v] {
            return skip;
        }
        covered[e.u] = true;
        covered[e.v] = true;
        let take = search(edges, i + 1, covered, size + 1);
        covered[e.u] = false;
        covered[e.v] = false;
        skip.max(take)
    }
    let mut covered = vec![false; g.n()];
    Ok(search(g.edges(), 0, &mut covered, 0))
}

/// Size of the greedy maximal matching built in stream order.
pub fn greedy_maximal_matching(stream: &EdgeStream) -> Result<usize, GraphError> {
    if !stream.is_insert_only() {
        return Err(GraphError::HasDeletions);
    }
    let mut matched = vec![false; stream.n()];
    let mut size = 0;
    for ev in stream.events() {
        let e = ev.edge;
        if !matched[e.u] && !matched[e.v] {
            matched[e.u] = true;
            matched[e.v] = true;
            size += 1;
        }
    }
    Ok(size)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::{EdgeStream, StreamEvent};

    fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        Graph::new(10, &edges).unwrap()
    }

    fn stream_of(n: usize, pairs: &[(usize, usize)]) -> EdgeStream {
        EdgeStream::new(
            n,
            pairs
                .iter()
                .map(|&(a, b)| StreamEvent::insert(a, b))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn small_graphs() {
        let tri = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(maximum_matching_size(&tri), 1);
        let path = Graph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(maximum_matching_size(&path), 2);
        assert_eq!(maximum_matching_size(&Graph::empty(5)), 0);
    }

    #[test]
    fn petersen_has_perfect_matching() {
        let g = petersen();
        assert_eq!(g.m(), 15);
        assert_eq!(brute_force_matching_size(&g).unwrap(), 5);
        assert_eq!(maximum_matching_size(&g), 5);
    }

    #[test]
    fn greedy_seed_needs_augmentation() {
        // Greedy takes (1,2) first and blocks both ends of the path.
        let g = Graph::new(4, &[(1, 2), (0, 1), (2, 3)]).unwrap();
        assert_eq!(maximum_matching_size(&g), 2);
    }

    #[test]
    fn odd_cycle_with_tail_needs_blossom() {
        // 5-cycle 0..4 with pendant edges 0-5 and 2-6; greedy seed (0,1),(2,3)
        // leaves 4,5,6 free, and the augmenting path 5-0-4-... runs through
        // the blossom.
        let g = Graph::new(
            8,
            &[
                (0, 1),
                (2, 3),
                (1, 2),
                (3, 4),
                (4, 0),
                (0, 5),
                (2, 6),
                (6, 7),
            ],
        )
        .unwrap();
        assert_eq!(
            maximum_matching_size(&g),
            brute_force_matching_size(&g).unwrap()
        );
    }

    #[test]
    fn mate_array_is_a_matching() {
        let g = petersen();
        let mate = maximum_matching(&g);
        for (v, m) in mate.iter().enumerate() {
            if let Some(w) = *m {
                assert_eq!(mate[w], Some(v));
                assert!(g.neighbors(v).contains(&w));
            }
        }
    }

    #[test]
    fn brute_force_cases() {
        let single = Graph::new(2, &[(0, 1)]).unwrap();
        assert_eq!(brute_force_matching_size(&single).unwrap(), 1);
        let star: Vec<_> = (1..=5).map(|i| (0, i)).collect();
        assert_eq!(
            brute_force_matching_size(&Graph::new(6, &star).unwrap()).unwrap(),
            1
        );
        let two_tri = Graph::new(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_eq!(brute_force_matching_size(&two_tri).unwrap(), 2);
    }

    #[test]
    fn brute_force_cap() {
        let edges: Vec<_> = (1..=25).map(|i| (0, i)).collect();
        let g = Graph::new(26, &edges).unwrap();
        assert_eq!(
            brute_force_matching_size(&g),
            Err(GraphError::TooLarge { m: 25, cap: 24 })
        );
    }

    #[test]
    fn greedy_depends_on_order() {
        assert_eq!(
            greedy_maximal_matching(&stream_of(4, &[(0, 1), (1, 2), (2, 3)])).unwrap(),
            2
        );
        assert_eq!(
            greedy_maximal_matching(&stream_of(4, &[(1, 2), (0, 1), (2, 3)])).unwrap(),
            1
        );
        assert_eq!(
            greedy_maximal_matching(&stream_of(2, &[(0, 1)])).unwrap(),
            1
        );
    }

    #[test]
    fn greedy_rejects_deletions() {
        let s = EdgeStream::new(
            2,
            vec![StreamEvent::insert(0, 1), StreamEvent::delete(0, 1)],
        )
        .unwrap();
        assert_eq!(greedy_maximal_matching(&s), Err(GraphError::HasDeletions));
    }
}
