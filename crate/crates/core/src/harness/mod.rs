//! Experiment plumbing: config parsing, seeded trial batches, lemma checks
//! and CSV reports.

mod config;
mod experiment;
mod lemmas;

pub use config::{AlgorithmSpec, ExperimentConfig, GeneratorSpec};
pub use experiment::{
    emit_csv, read_csv, run_experiment, run_experiment_to, run_trial, summarize, trial_stream,
    RatioSummary, TrialRecord, CSV_HEADER,
};
pub use lemmas::{
    check_lemmas, CheckTally, LemmaReport, Violation, ALPHA_GOOD_SANDWICH,
    ALPHA_GOOD_SHALLOW_BOUND, GREEDY_HALF, HIGH_DEGREE_BOUND, LOW_DEGREE_SANDWICH,
    THREE_E6C_SANDWICH, TREE_E1_SANDWICH,
};

use thiserror::Error;

use crate::estimators::EstimatorError;
use crate::graph::GraphError;
use crate::stream::StreamError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Stream(#[from] StreamError),
    #[error(transparent)]
    Estimator(#[from] EstimatorError),
}
