use std::collections::{HashMap, HashSet};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{
    alg1::Alg1Sketch, alg2::alg2_sampling_probability, beta, check_epsilon, check_mu, Diagnostics,
    Estimate, EstimatorError, EstimatorParams, Outcome, SpaceMeter,
};
use crate::graph::Edge;
use crate::rng::{split_rng, streams};
use crate::stream::{dynamic_length_budget, EdgeStream, EventKind, StreamEvent};

/// `t = ceil((8 beta n c / epsilon^2)^(1/3))`.
pub fn dynamic_cutoff(n: usize, c: usize, mu: usize, epsilon: f64) -> usize {
    (8.0 * beta(mu, c) * n as f64 * c as f64 / (epsilon * epsilon))
        .cbrt()
        .ceil() as usize
}

/// Bounded maximal matching under deletions, kept over a uniform sample of
/// the live edges.
///
/// Each inserted edge enters the sample with probability
/// `min(1, capacity / live)`; overflow evicts a random sampled edge. The
/// greedy matching over the sample is maintained incrementally and rebuilt
/// when a matched edge leaves the sample. While the live edge count stays at
/// or below the capacity, the sample is the whole live graph and the
/// matching is maximal in it.
#[derive(Clone, Debug)]
pub struct DynamicMatching {
    cutoff: usize,
    capacity: usize,
    live: usize,
    sample: Vec<Edge>,
    slot: HashMap<Edge, usize>,
    matching: HashSet<Edge>,
    mate: HashMap<usize, Edge>,
    rng: ChaCha8Rng,
}

impl DynamicMatching {
    pub fn new(cutoff: usize, capacity: usize, seed: u64) -> Self {
        DynamicMatching {
            cutoff,
            capacity: capacity.max(1),
            live: 0,
            sample: Vec::new(),
            slot: HashMap::new(),
            matching: HashSet::new(),
            mate: HashMap::new(),
            rng: split_rng(seed, streams::EDGE_SAMPLE),
        }
    }

    pub fn size(&self) -> usize {
        self.matching.len()
    }

    pub fn sample_len(&self) -> usize {
        self.sample.len()
    }

    /// Sampled edges, matched edges and the live-edge counter.
    pub fn items(&self) -> u64 {
        (self.sample.len() + self.matching.len() + 1) as u64
    }

    fn try_match(&mut self, e: Edge) {
        if self.matching.len() < self.cutoff
            && !self.mate.contains_key(&e.u)
            && !self.mate.contains_key(&e.v)
        {
            self.matching.insert(e);
            self.mate.insert(e.u, e);
            self.mate.insert(e.v, e);
        }
    }

    fn rebuild(&mut self) {
        self.matching.clear();
        self.mate.clear();
        for i in 0..self.sample.len() {
            self.try_match(self.sample[i]);
        }
    }

    fn remove_from_sample(&mut self, e: Edge) -> bool {
        let Some(i) = self.slot.remove(&e) else {
            return false;
        };
        self.sample.swap_remove(i);
        if i < self.sample.len() {
            self.slot.insert(self.sample[i], i);
        }
        self.matching.contains(&e)
    }

    pub fn feed(&mut self, ev: &StreamEvent) {
        let e = ev.edge;
        let dirty = match ev.kind {
            EventKind::Insert => {
                self.live += 1;
                let keep = (self.capacity as f64 / self.live as f64).min(1.0);
                if self.rng.gen::<f64>() >= keep {
                    return;
                }
                self.slot.insert(e, self.sample.len());
                self.sample.push(e);
                let mut dirty = false;
                if self.sample.len() > self.capacity {
                    let victim = self.sample[self.rng.gen_range(0..self.sample.len())];
                    dirty = self.remove_from_sample(victim);
                }
                if !dirty && self.slot.contains_key(&e) {
                    self.try_match(e);
                }
                dirty
            }
            EventKind::Delete => {
                self.live = self.live.saturating_sub(1);
                self.remove_from_sample(e)
            }
        };
        if dirty {
            self.rebuild();
        }
    }
}

/// Two-task estimator for insert/delete streams of bounded length.
pub fn dynamic_estimate(
    stream: &EdgeStream,
    c: usize,
    mu: usize,
    epsilon: f64,
    seed: u64,
) -> Result<Estimate, EstimatorError> {
    check_mu(mu, c)?;
    check_epsilon(epsilon)?;
    let budget = dynamic_length_budget(c, stream.n());
    if stream.len() > budget {
        return Err(EstimatorError::BudgetExceeded {
            len: stream.len(),
            budget,
        });
    }
    let t = dynamic_cutoff(stream.n(), c, mu, epsilon);
    let p = alg2_sampling_probability(t, c, mu, epsilon);

    let mut matching = DynamicMatching::new(t, 4 * t * t, seed);
    let mut sketch = Alg1Sketch::new(stream.n(), mu, p, seed);
    let mut space = SpaceMeter::default();
    space.observe(sketch.items());
    for ev in stream.events() {
        matching.feed(ev);
        sketch.feed(ev);
        space.observe(matching.items() + sketch.items());
    }

    let r = matching.size();
    let sampled_value = sketch.estimate();
    let used_greedy = r < t;
    Ok(Estimate {
        outcome: Outcome::Value(if used_greedy {
            2.0 * r as f64
        } else {
            sampled_value
        }),
        space_peak: space.peak(),
        seed,
        params: EstimatorParams::Dynamic {
            mu,
            c,
            epsilon,
            t,
            p,
        },
        diagnostics: Diagnostics::TwoTask {
            greedy_size: r,
            used_greedy,
            sampled_value,
        },
    })
}
