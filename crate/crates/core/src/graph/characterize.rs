use serde::{Deserialize, Serialize};

use super::{maximum_matching_size, Graph, GraphError};
use crate::stream::EdgeStream;

/// Exact offline quantities for one graph (and optionally one stream order).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacterizationReport {
    pub mu: usize,
    /// Maximum matching size of the whole graph.
    pub m_star: usize,
    /// Vertices with degree above `mu`.
    pub h_mu: usize,
    /// Edges whose endpoints both have degree at most `mu`.
    pub s_mu: usize,
    /// Maximum matching size of the low-degree induced subgraph.
    pub m_mu: usize,
    /// Non-isolated vertices of the low-degree induced subgraph.
    pub n_l: usize,
    pub alpha: Option<usize>,
    pub e_alpha: Option<usize>,
}

impl CharacterizationReport {
    /// Fills in `|E_alpha|` for a particular insert-only order of the same graph.
    pub fn with_alpha_good(
        mut self,
        stream: &EdgeStream,
        alpha: usize,
    ) -> Result<Self, GraphError> {
        self.alpha = Some(alpha);
        self.e_alpha = Some(offline_alpha_good_set(stream, alpha)?.len());
        Ok(self)
    }
}

/// Smallest `k` such that repeatedly deleting a vertex of degree at most `k`
/// empties the graph. Bucket-queue peeling, O(n + m).
pub fn degeneracy(g: &Graph) -> usize {
    degeneracy_order(g).0
}

/// Degeneracy together with a peeling order: every vertex has at most
/// `degeneracy` neighbors later in the order.
pub fn degeneracy_order(g: &Graph) -> (usize, Vec<usize>) {
    let n = g.n();
    let mut order = Vec::with_capacity(n);
    if n == 0 {
        return (0, order);
    }
    let mut deg = g.degrees();
    let max_deg = deg.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); max_deg + 1];
    for (v, &d) in deg.iter().enumerate() {
        buckets[d].push(v);
    }
    let mut removed = vec![false; n];
    let mut best = 0;
    let mut cursor = 0;
    let mut left = n;
    while left > 0 {
        // Entries can be stale after a decrement; skip them lazily.
        let v = loop {
            while buckets[cursor].is_empty() {
                cursor += 1;
            }
            let v = buckets[cursor].pop().unwrap();
            if !removed[v] && deg[v] == cursor {
                break v;
            }
        };
        removed[v] = true;
        order.push(v);
        left -= 1;
        best = best.max(cursor);
        for &w in g.neighbors(v) {
            if !removed[w] {
                deg[w] -= 1;
                buckets[deg[w]].push(w);
                if deg[w] < cursor {
                    cursor = deg[w];
                }
            }
        }
    }
    (best, order)
}

pub fn characterize(g: &Graph, mu: usize) -> CharacterizationReport {
    let deg = g.degrees();
    let low = |v: usize| deg[v] <= mu;
    let h_mu = deg.iter().filter(|&&d| d > mu).count();
    let g_low = g.induced(low);
    let s_mu = g_low.m();
    let n_l = (0..g.n()).filter(|&v| g_low.degree(v) > 0).count();
    CharacterizationReport {
        mu,
        m_star: maximum_matching_size(g),
        h_mu,
        s_mu,
        m_mu: maximum_matching_size(&g_low),
        n_l,
        alpha: None,
        e_alpha: None,
    }
}

/// Positions (1-indexed) of the edges whose endpoints each see at most
/// `alpha` incident edges strictly later in the stream.
pub fn offline_alpha_good_set(stream: &EdgeStream, alpha: usize) -> Result<Vec<usize>, GraphError> {
    if !stream.is_insert_only() {
        return Err(GraphError::HasDeletions);
    }
    let mut later = vec![0usize; stream.n()];
    let mut good = Vec::new();
    for (i, ev) in stream.events().iter().enumerate().rev() {
        let e = ev.edge;
        if later[e.u].max(later[e.v]) <= alpha {
            good.push(i + 1);
        }
        later[e.u] += 1;
        later[e.v] += 1;
    }
    good.reverse();
    Ok(good)
}

/// Goodness threshold paired with a degree threshold `mu` for arboricity `c`:
/// `max{mu - 1, 4c(mu+1)/(mu+1-2c)}`. Requires `mu > 2c`.
pub fn alpha_for_mu(mu: usize, c: usize) -> f64 {
    let mu = mu as f64;
    let c = c as f64;
    (mu - 1.0).max(4.0 * c * (mu + 1.0) / (mu + 1.0 - 2.0 * c))
}
