//! One-pass streaming estimators for the maximum matching size.
//!
//! Every estimator is a deterministic function of (stream, parameters, seed)
//! and reports the peak number of stored items: one per stored edge, one per
//! counter, three per goodness test.

mod alg1;
mod alg2;
mod alg4;
mod dynamic;

pub use alg1::{alg1_estimate, Alg1Params, Alg1Sketch, Alg1Summary};
pub use alg2::{alg2_cutoff, alg2_estimate, alg2_sampling_probability, GreedyTask};
pub use alg4::{
    alg4_estimate_e_alpha, alg4_run, alpha_good_test_feed, estimate_matching_logspace, level_count,
    tau, tau_prime, Alg4Config, Alg4Sketch, AlphaGoodTest, LevelState, TestStatus,
    LOGSPACE_RETRIES,
};
pub use dynamic::{dynamic_cutoff, dynamic_estimate, DynamicMatching};

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EstimatorError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("estimator needs an insert-only stream")]
    HasDeletions,
    #[error("stream length {len} exceeds the budget of {budget} events")]
    BudgetExceeded { len: usize, budget: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Outcome {
    Value(f64),
    Fail,
}

/// Parameters echoed back with each estimate.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "algorithm", rename_all = "lowercase")]
pub enum EstimatorParams {
    Alg1(Alg1Params),
    Alg2 {
        mu: usize,
        c: usize,
        epsilon: f64,
        t: usize,
        p: f64,
    },
    Alg4 {
        alpha: usize,
        c: usize,
        epsilon: f64,
        tau: f64,
        tau_prime: f64,
        levels: usize,
    },
    Logspace {
        c: usize,
        epsilon: f64,
        attempts: usize,
    },
    Dynamic {
        mu: usize,
        c: usize,
        epsilon: f64,
        t: usize,
        p: f64,
    },
}

/// Which branch produced a two-task estimate, and what each task saw.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Diagnostics {
    None,
    TwoTask {
        greedy_size: usize,
        used_greedy: bool,
        sampled_value: f64,
    },
    Levels {
        /// `Some(0)` for the exact path; `None` on failure.
        chosen_level: Option<usize>,
        terminated_levels: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub outcome: Outcome,
    pub space_peak: u64,
    pub seed: u64,
    pub params: EstimatorParams,
    pub diagnostics: Diagnostics,
}

impl Estimate {
    pub fn value(&self) -> Option<f64> {
        match self.outcome {
            Outcome::Value(v) => Some(v),
            Outcome::Fail => None,
        }
    }

    pub fn is_fail(&self) -> bool {
        self.outcome == Outcome::Fail
    }
}

/// Running item count with its high-water mark.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct SpaceMeter {
    peak: u64,
}

impl SpaceMeter {
    pub fn observe(&mut self, items: u64) {
        self.peak = self.peak.max(items);
    }

    pub fn peak(&self) -> u64 {
        self.peak
    }
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<(), EstimatorError> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(EstimatorError::InvalidParams(format!(
            "epsilon must be in (0, 1), got {epsilon}"
        )))
    }
}

pub(crate) fn check_mu(mu: usize, c: usize) -> Result<(), EstimatorError> {
    if c == 0 {
        return Err(EstimatorError::InvalidParams("c must be at least 1".into()));
    }
    if mu <= 2 * c {
        return Err(EstimatorError::InvalidParams(format!(
            "mu must exceed 2c (mu = {mu}, c = {c})"
        )));
    }
    Ok(())
}

/// `beta = mu * (2mu / (mu - 2c + 1) + 1)`.
pub fn beta(mu: usize, c: usize) -> f64 {
    let mu = mu as f64;
    let c = c as f64;
    mu * (2.0 * mu / (mu - 2.0 * c + 1.0) + 1.0)
}
