use std::collections::HashMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{
    check_epsilon, Diagnostics, Estimate, EstimatorError, EstimatorParams, Outcome, SpaceMeter,
};
use crate::graph::Edge;
use crate::rng::{derive_seed, split_rng, streams};
use crate::stream::{EdgeStream, StreamEvent};

/// Fresh seeds tried by [`estimate_matching_logspace`] after a failed run.
pub const LOGSPACE_RETRIES: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TestStatus {
    Active,
    Failed,
}

/// Tracks how many later edges touch each endpoint of one stream edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlphaGoodTest {
    pub edge: Edge,
    pub r_u: usize,
    pub r_v: usize,
    pub alpha: usize,
    pub status: TestStatus,
}

impl AlphaGoodTest {
    pub fn new(edge: Edge, alpha: usize) -> Self {
        AlphaGoodTest {
            edge,
            r_u: 0,
            r_v: 0,
            alpha,
            status: TestStatus::Active,
        }
    }

    pub fn is_active(&self) -> bool {
        self.status == TestStatus::Active
    }

    pub fn feed(&mut self, ev: &StreamEvent) {
        if !self.is_active() {
            return;
        }
        if ev.edge.touches(self.edge.u) {
            self.r_u += 1;
        }
        if ev.edge.touches(self.edge.v) {
            self.r_v += 1;
        }
        if self.r_u.max(self.r_v) > self.alpha {
            self.status = TestStatus::Failed;
        }
    }
}

pub fn alpha_good_test_feed(mut test: AlphaGoodTest, event: &StreamEvent) -> AlphaGoodTest {
    test.feed(event);
    test
}

/// `tau = 64 alpha^2 ln(n) / (c epsilon^2)`.
pub fn tau(alpha: usize, n: usize, c: usize, epsilon: f64) -> f64 {
    let alpha = alpha as f64;
    64.0 * alpha * alpha * (n.max(1) as f64).ln() / (c as f64 * epsilon * epsilon)
}

/// `tau' = 8 ln(n) / epsilon^2`.
pub fn tau_prime(n: usize, epsilon: f64) -> f64 {
    8.0 * (n.max(1) as f64).ln() / (epsilon * epsilon)
}

/// Levels `0..=ceil(log_{1+eps}(c n))`, i.e. the returned count is that plus one.
pub fn level_count(n: usize, c: usize, epsilon: f64) -> usize {
    let cn = (c * n) as f64;
    if cn <= 1.0 {
        return 1;
    }
    (cn.ln() / (1.0 + epsilon).ln()).ceil() as usize + 1
}

#[derive(Clone, Debug)]
pub struct Alg4Config {
    pub alpha: usize,
    pub c: usize,
    pub epsilon: f64,
    /// Replaces the computed `tau`; `f64::INFINITY` disables termination.
    pub tau_override: Option<f64>,
    pub tau_prime_override: Option<f64>,
    /// Keep the stream positions where each level started a test.
    pub record_starts: bool,
}

impl Alg4Config {
    pub fn new(alpha: usize, c: usize, epsilon: f64) -> Self {
        Alg4Config {
            alpha,
            c,
            epsilon,
            tau_override: None,
            tau_prime_override: None,
            record_starts: false,
        }
    }

    fn validate(&self) -> Result<(), EstimatorError> {
        check_epsilon(self.epsilon)?;
        if self.alpha == 0 {
            return Err(EstimatorError::InvalidParams(
                "alpha must be at least 1".into(),
            ));
        }
        if self.c == 0 {
            return Err(EstimatorError::InvalidParams("c must be at least 1".into()));
        }
        Ok(())
    }
}

/// One sampling level: live goodness tests started with probability `p`.
#[derive(Clone, Debug)]
pub struct LevelState {
    index: usize,
    p: f64,
    rng: ChaCha8Rng,
    alpha: usize,
    tests: HashMap<u64, AlphaGoodTest>,
    /// Test ids are the stream positions of their edges.
    by_vertex: HashMap<usize, Vec<u64>>,
    terminated: bool,
    started: Option<Vec<usize>>,
}

impl LevelState {
    fn new(index: usize, epsilon: f64, alpha: usize, seed: u64, record: bool) -> Self {
        LevelState {
            index,
            p: (1.0 + epsilon).powi(-(index as i32)),
            rng: split_rng(seed, streams::LEVEL_BASE + index as u64),
            alpha,
            tests: HashMap::new(),
            by_vertex: HashMap::new(),
            terminated: false,
            started: record.then(Vec::new),
        }
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `|X_i|`, the number of live tests.
    pub fn live(&self) -> usize {
        self.tests.len()
    }

    pub fn terminated(&self) -> bool {
        self.terminated
    }

    /// Stream positions (1-indexed) of the surviving tests, ascending.
    pub fn survivors(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = self.tests.keys().map(|&id| id as usize).collect();
        ids.sort_unstable();
        ids
    }

    /// Positions where this level started a test; only kept in recording mode.
    pub fn started(&self) -> Option<&[usize]> {
        self.started.as_deref()
    }

    fn feed_vertex(&mut self, x: usize, ev: &StreamEvent, skip_if_touches: Option<usize>) {
        let Some(ids) = self.by_vertex.get_mut(&x) else {
            return;
        };
        let tests = &mut self.tests;
        ids.retain(|id| {
            let Some(test) = tests.get_mut(id) else {
                return false;
            };
            if let Some(y) = skip_if_touches {
                if test.edge.touches(y) {
                    return true;
                }
            }
            test.feed(ev);
            if test.is_active() {
                true
            } else {
                tests.remove(id);
                false
            }
        });
        if ids.is_empty() {
            self.by_vertex.remove(&x);
        }
    }

    fn feed(&mut self, ev: &StreamEvent, position: usize, tau: f64) {
        if self.terminated {
            return;
        }
        let e = ev.edge;
        self.feed_vertex(e.u, ev, None);
        self.feed_vertex(e.v, ev, Some(e.u));

        if self.rng.gen::<f64>() < self.p {
            let id = position as u64;
            self.tests.insert(id, AlphaGoodTest::new(e, self.alpha));
            self.by_vertex.entry(e.u).or_default().push(id);
            self.by_vertex.entry(e.v).or_default().push(id);
            if let Some(started) = &mut self.started {
                started.push(position);
            }
        }

        if self.live() as f64 > tau {
            self.terminated = true;
            self.tests = HashMap::new();
            self.by_vertex = HashMap::new();
        }
    }
}

/// Parallel sampling levels of goodness tests, fed one event at a time.
#[derive(Clone, Debug)]
pub struct Alg4Sketch {
    tau: f64,
    tau_prime: f64,
    epsilon: f64,
    levels: Vec<LevelState>,
    position: usize,
    space: SpaceMeter,
}

impl Alg4Sketch {
    pub fn new(n: usize, config: &Alg4Config, seed: u64) -> Result<Self, EstimatorError> {
        config.validate()?;
        let count = level_count(n, config.c, config.epsilon);
        Ok(Alg4Sketch {
            tau: config
                .tau_override
                .unwrap_or_else(|| tau(config.alpha, n, config.c, config.epsilon)),
            tau_prime: config
                .tau_prime_override
                .unwrap_or_else(|| tau_prime(n, config.epsilon)),
            epsilon: config.epsilon,
            levels: (0..count)
                .map(|i| {
                    LevelState::new(i, config.epsilon, config.alpha, seed, config.record_starts)
                })
                .collect(),
            position: 0,
            space: SpaceMeter::default(),
        })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn tau_prime(&self) -> f64 {
        self.tau_prime
    }

    pub fn levels(&self) -> &[LevelState] {
        &self.levels
    }

    pub fn items(&self) -> u64 {
        3 * self.levels.iter().map(|l| l.live() as u64).sum::<u64>()
    }

    pub fn space_peak(&self) -> u64 {
        self.space.peak()
    }

    /// Insert events only; the caller checks the stream kind.
    pub fn feed(&mut self, ev: &StreamEvent) {
        self.position += 1;
        for level in &mut self.levels {
            level.feed(ev, self.position, self.tau);
        }
        self.space.observe(self.items());
    }

    /// The estimate and the level it was read from; level 0 is the exact path.
    pub fn finish(&self) -> (Outcome, Option<usize>) {
        let level0 = &self.levels[0];
        if !level0.terminated && level0.live() as f64 <= self.tau {
            return (Outcome::Value(level0.live() as f64), Some(0));
        }
        let threshold = self.tau_prime * (1.0 + self.epsilon);
        self.levels
            .iter()
            .find(|l| !l.terminated && l.live() as f64 <= threshold)
            .map_or((Outcome::Fail, None), |l| {
                (Outcome::Value(l.live() as f64 / l.p), Some(l.index))
            })
    }
}

pub fn alg4_run(
    stream: &EdgeStream,
    config: &Alg4Config,
    seed: u64,
) -> Result<(Estimate, Alg4Sketch), EstimatorError> {
    if !stream.is_insert_only() {
        return Err(EstimatorError::HasDeletions);
    }
    let mut sketch = Alg4Sketch::new(stream.n(), config, seed)?;
    for ev in stream.events() {
        sketch.feed(ev);
    }
    let (outcome, chosen_level) = sketch.finish();
    let estimate = Estimate {
        outcome,
        space_peak: sketch.space_peak(),
        seed,
        params: EstimatorParams::Alg4 {
            alpha: config.alpha,
            c: config.c,
            epsilon: config.epsilon,
            tau: sketch.tau,
            tau_prime: sketch.tau_prime,
            levels: sketch.levels.len(),
        },
        diagnostics: Diagnostics::Levels {
            chosen_level,
            terminated_levels: sketch.levels.iter().filter(|l| l.terminated).count(),
        },
    };
    Ok((estimate, sketch))
}

/// Estimates `|E_alpha|`; a failed run is an `Outcome::Fail`, not an error.
pub fn alg4_estimate_e_alpha(
    stream: &EdgeStream,
    alpha: usize,
    c: usize,
    epsilon: f64,
    seed: u64,
) -> Result<Estimate, EstimatorError> {
    alg4_run(stream, &Alg4Config::new(alpha, c, epsilon), seed).map(|(est, _)| est)
}

/// Three times the `|E_{6c}|` estimate, retrying failed runs with fresh seeds.
pub fn estimate_matching_logspace(
    stream: &EdgeStream,
    c: usize,
    epsilon: f64,
    seed: u64,
) -> Result<Estimate, EstimatorError> {
    let alpha = 6 * c;
    let mut attempt_seed = seed;
    let mut attempts = 0;
    let mut peak = 0;
    loop {
        attempts += 1;
        let mut est = alg4_estimate_e_alpha(stream, alpha, c, epsilon, attempt_seed)?;
        peak = peak.max(est.space_peak);
        if !est.is_fail() || attempts > LOGSPACE_RETRIES {
            if let Outcome::Value(v) = est.outcome {
                est.outcome = Outcome::Value(3.0 * v);
            }
            est.space_peak = peak;
            est.params = EstimatorParams::Logspace {
                c,
                epsilon,
                attempts,
            };
            return Ok(est);
        }
        attempt_seed = derive_seed(seed, attempts as u64);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{offline_alpha_good_set, Graph};
    use crate::stream::{
        generate_star_forest, generate_union_of_forests, order_stream, OrderingPolicy,
    };

    fn path_stream() -> EdgeStream {
        EdgeStream::from_graph(&Graph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap())
    }

    #[test]
    fn test_fails_on_second_shared_edge() {
        let t = AlphaGoodTest::new(Edge::new(1, 2), 1);
        let t = alpha_good_test_feed(t, &StreamEvent::insert(2, 3));
        assert!(t.is_active());
        let t = alpha_good_test_feed(t, &StreamEvent::insert(2, 4));
        assert_eq!(t.status, TestStatus::Failed);
        assert_eq!(t.r_v, 2);
    }

    #[test]
    fn test_ignores_disjoint_edges() {
        let t = AlphaGoodTest::new(Edge::new(1, 2), 0);
        let t = alpha_good_test_feed(t, &StreamEvent::insert(3, 4));
        assert!(t.is_active());
        assert!(AlphaGoodTest::new(Edge::new(1, 2), 5).is_active());
    }

    #[test]
    fn parameters() {
        // 64 * 1 * ln 4 / 0.25
        assert!((tau(1, 4, 1, 0.5) - 256.0 * 4f64.ln()).abs() < 1e-9);
        assert!((tau_prime(4, 0.5) - 32.0 * 4f64.ln()).abs() < 1e-9);
        // log_{1.5}(4) = 3.419 -> 4, plus level 0
        assert_eq!(level_count(4, 1, 0.5), 5);
        assert_eq!(level_count(1, 1, 0.5), 1);
    }

    #[test]
    fn path_exact() {
        let est = alg4_estimate_e_alpha(&path_stream(), 1, 1, 0.5, 0).unwrap();
        assert_eq!(est.value(), Some(3.0));
        assert!(matches!(
            est.diagnostics,
            Diagnostics::Levels {
                chosen_level: Some(0),
                ..
            }
        ));
    }

    #[test]
    fn level_zero_is_exact_below_tau() {
        for seed in 0..20 {
            let g = generate_union_of_forests(80, 2, seed);
            let s = order_stream(&g, OrderingPolicy::UniformRandom(seed));
            for alpha in [1, 3, 12] {
                let exact = offline_alpha_good_set(&s, alpha).unwrap().len();
                let est = alg4_estimate_e_alpha(&s, alpha, 2, 0.3, seed).unwrap();
                assert_eq!(est.value(), Some(exact as f64));
            }
        }
    }

    #[test]
    fn survivors_are_sampled_good_edges() {
        let g = generate_union_of_forests(60, 2, 5);
        let s = order_stream(&g, OrderingPolicy::UniformRandom(1));
        let good = offline_alpha_good_set(&s, 2).unwrap();
        let mut config = Alg4Config::new(2, 2, 0.5);
        config.tau_override = Some(f64::INFINITY);
        config.record_starts = true;
        let (_, sketch) = alg4_run(&s, &config, 3).unwrap();
        for level in sketch.levels() {
            let started = level.started().unwrap();
            let want: Vec<usize> = started
                .iter()
                .copied()
                .filter(|p| good.contains(p))
                .collect();
            assert_eq!(level.survivors(), want, "level {}", level.index());
        }
    }

    #[test]
    fn small_tau_selects_a_deeper_level() {
        let g = generate_star_forest(1000, 5);
        let s = EdgeStream::from_graph(&g);
        let mut config = Alg4Config::new(6, 1, 0.1);
        config.tau_override = Some(400.0);
        config.tau_prime_override = Some(200.0);
        let mut close = 0;
        for seed in 0..40 {
            let (est, sketch) = alg4_run(&s, &config, seed).unwrap();
            for level in sketch.levels() {
                assert!(level.terminated() || level.live() <= 400);
            }
            assert!(est.space_peak <= sketch.levels().len() as u64 * 3 * 400);
            if let Some(v) = est.value() {
                assert!(
                    matches!(est.diagnostics, Diagnostics::Levels { chosen_level: Some(j), .. } if j > 0)
                );
                if (v - 5000.0).abs() <= 0.3 * 5000.0 {
                    close += 1;
                }
            }
        }
        assert!(close >= 36, "only {close}/40 within 30%");
    }

    #[test]
    fn fails_when_no_level_qualifies() {
        let s = path_stream();
        let mut config = Alg4Config::new(1, 1, 0.5);
        config.tau_override = Some(0.0);
        config.tau_prime_override = Some(-1.0);
        let (est, sketch) = alg4_run(&s, &config, 0).unwrap();
        assert!(est.is_fail());
        assert!(sketch.levels()[0].terminated());
        assert_eq!(
            est.diagnostics,
            Diagnostics::Levels {
                chosen_level: None,
                terminated_levels: sketch.levels().iter().filter(|l| l.terminated()).count(),
            }
        );
    }

    #[test]
    fn logspace_small_cases() {
        let single = EdgeStream::from_graph(&Graph::new(2, &[(0, 1)]).unwrap());
        assert_eq!(
            estimate_matching_logspace(&single, 1, 0.5, 0)
                .unwrap()
                .value(),
            Some(3.0)
        );
        let empty = EdgeStream::from_graph(&Graph::empty(4));
        assert_eq!(
            estimate_matching_logspace(&empty, 1, 0.5, 0)
                .unwrap()
                .value(),
            Some(0.0)
        );
    }

    #[test]
    fn invalid_config() {
        let s = path_stream();
        assert!(alg4_estimate_e_alpha(&s, 0, 1, 0.5, 0).is_err());
        assert!(alg4_estimate_e_alpha(&s, 1, 1, 1.5, 0).is_err());
        let dyn_s = EdgeStream::new(
            2,
            vec![StreamEvent::insert(0, 1), StreamEvent::delete(0, 1)],
        )
        .unwrap();
        assert_eq!(
            alg4_estimate_e_alpha(&dyn_s, 1, 1, 0.5, 0),
            Err(EstimatorError::HasDeletions)
        );
    }
}
