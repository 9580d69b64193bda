use std::collections::HashSet;

use super::{
    alg1::Alg1Sketch, beta, check_epsilon, check_mu, Diagnostics, Estimate, EstimatorError,
    EstimatorParams, Outcome, SpaceMeter,
};
use crate::stream::{EdgeStream, StreamEvent};

/// `t = ceil(beta * sqrt(8nc) / epsilon)`.
pub fn alg2_cutoff(n: usize, c: usize, mu: usize, epsilon: f64) -> usize {
    (beta(mu, c) * (8.0 * n as f64 * c as f64).sqrt() / epsilon).ceil() as usize
}

/// `p = min(1, 8 / (lambda^2 t))` with `lambda = epsilon / beta`.
pub fn alg2_sampling_probability(t: usize, c: usize, mu: usize, epsilon: f64) -> f64 {
    let lambda = epsilon / beta(mu, c);
    (8.0 / (lambda * lambda * t.max(1) as f64)).min(1.0)
}

/// Greedy maximal matching that gives up once it would exceed `cutoff` edges.
#[derive(Clone, Debug)]
pub struct GreedyTask {
    cutoff: usize,
    matched: HashSet<usize>,
    size: usize,
    terminated: bool,
}

impl GreedyTask {
    pub fn new(cutoff: usize) -> Self {
        GreedyTask {
            cutoff,
            matched: HashSet::new(),
            size: 0,
            terminated: false,
        }
    }

    pub fn feed(&mut self, ev: &StreamEvent) {
        if self.terminated {
            return;
        }
        let e = ev.edge;
        if self.matched.contains(&e.u) || self.matched.contains(&e.v) {
            return;
        }
        if self.size == self.cutoff {
            self.terminated = true;
            self.matched = HashSet::new();
            return;
        }
        self.matched.insert(e.u);
        self.matched.insert(e.v);
        self.size += 1;
    }

    /// Matching size, or `None` once the cutoff was exceeded.
    pub fn size(&self) -> Option<usize> {
        (!self.terminated).then_some(self.size)
    }

    pub fn items(&self) -> u64 {
        if self.terminated {
            0
        } else {
            self.size as u64
        }
    }
}

/// Greedy matching bounded by `t` alongside the vertex-sampling sketch;
/// returns `2r` when the greedy matching stays below `t`, the sketch's
/// value otherwise.
pub fn alg2_estimate(
    stream: &EdgeStream,
    c: usize,
    mu: usize,
    epsilon: f64,
    seed: u64,
) -> Result<Estimate, EstimatorError> {
    check_mu(mu, c)?;
    check_epsilon(epsilon)?;
    if !stream.is_insert_only() {
        return Err(EstimatorError::HasDeletions);
    }
    let t = alg2_cutoff(stream.n(), c, mu, epsilon);
    let p = alg2_sampling_probability(t, c, mu, epsilon);

    let mut greedy = GreedyTask::new(t);
    let mut sketch = Alg1Sketch::new(stream.n(), mu, p, seed);
    let mut space = SpaceMeter::default();
    space.observe(sketch.items());
    for ev in stream.events() {
        greedy.feed(ev);
        sketch.feed(ev);
        space.observe(greedy.items() + sketch.items());
    }

    let sampled_value = sketch.estimate();
    let (value, greedy_size, used_greedy) = match greedy.size() {
        Some(r) if r < t => (2.0 * r as f64, r, true),
        Some(r) => (sampled_value, r, false),
        None => (sampled_value, t + 1, false),
    };
    Ok(Estimate {
        outcome: Outcome::Value(value),
        space_peak: space.peak(),
        seed,
        params: EstimatorParams::Alg2 {
            mu,
            c,
            epsilon,
            t,
            p,
        },
        diagnostics: Diagnostics::TwoTask {
            greedy_size,
            used_greedy,
            sampled_value,
        },
    })
}
