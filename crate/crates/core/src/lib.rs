//! Streaming estimators for the maximum matching size of bounded-arboricity
//! graphs, with exact offline oracles and an experiment harness.
//!
//! - [`graph`]: graph type, exact and brute-force matching, degeneracy, and
//!   the offline quantities the estimators are compared against.
//! - [`stream`]: insert/delete edge streams, generators, orderings, text formats.
//! - [`estimators`]: the one-pass estimators with space instrumentation.
//! - [`harness`]: experiment configs, lemma checks and CSV reports.

pub mod estimators;
pub mod graph;
pub mod harness;
pub mod rng;
pub mod stream;
