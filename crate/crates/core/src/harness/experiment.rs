use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{AlgorithmSpec, ExperimentConfig};
use super::HarnessError;
use crate::estimators::{
    alg1_estimate, alg2_estimate, alg4_estimate_e_alpha, dynamic_estimate,
    estimate_matching_logspace, Alg1Params, Estimate,
};
use crate::graph::{greedy_maximal_matching, maximum_matching_size};
use crate::stream::{generate_dynamic_stream, order_stream, EdgeStream};

pub const CSV_HEADER: [&str; 7] = [
    "seed",
    "value",
    "m_star",
    "ratio",
    "space_peak",
    "fail",
    "ms",
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub seed: u64,
    /// `None` when the estimator failed.
    pub value: Option<f64>,
    pub m_star: usize,
    /// Present iff `m_star > 0` and the run did not fail.
    pub ratio: Option<f64>,
    pub space_peak: u64,
    pub fail: bool,
    pub ms: f64,
}

impl TrialRecord {
    pub fn new(seed: u64, value: Option<f64>, m_star: usize, space_peak: u64, ms: f64) -> Self {
        let ratio = match value {
            Some(v) if m_star > 0 => Some(v / m_star as f64),
            _ => None,
        };
        TrialRecord {
            seed,
            value,
            m_star,
            ratio,
            space_peak,
            fail: value.is_none(),
            ms,
        }
    }
}

/// The stream a trial with this seed runs on.
pub fn trial_stream(config: &ExperimentConfig, seed: u64) -> Result<EdgeStream, HarnessError> {
    let g = config.generator.generate(seed);
    let ordered = order_stream(&g, config.ordering_policy(seed));
    Ok(match config.algorithm {
        AlgorithmSpec::Dynamic {
            delete_fraction, ..
        } => generate_dynamic_stream(&ordered.live_graph(), delete_fraction, seed)?,
        _ => ordered,
    })
}

fn run_estimator(
    config: &ExperimentConfig,
    stream: &EdgeStream,
    seed: u64,
) -> Result<(Option<f64>, u64), HarnessError> {
    let (c, eps) = (config.c, config.epsilon);
    let est: Estimate = match config.algorithm {
        AlgorithmSpec::Greedy => {
            let size = greedy_maximal_matching(stream)?;
            return Ok((Some(size as f64), size as u64));
        }
        AlgorithmSpec::Alg1 { mu, p } => {
            alg1_estimate(stream, Alg1Params::new(mu, p, c, eps)?, seed)?
        }
        AlgorithmSpec::Alg2 { mu } => alg2_estimate(stream, c, mu, eps, seed)?,
        AlgorithmSpec::Alg4 { alpha } => alg4_estimate_e_alpha(stream, alpha, c, eps, seed)?,
        AlgorithmSpec::Logspace => estimate_matching_logspace(stream, c, eps, seed)?,
        AlgorithmSpec::Dynamic { mu, .. } => dynamic_estimate(stream, c, mu, eps, seed)?,
    };
    Ok((est.value(), est.space_peak))
}

pub fn run_trial(config: &ExperimentConfig, seed: u64) -> Result<TrialRecord, HarnessError> {
    let stream = trial_stream(config, seed)?;
    let m_star = maximum_matching_size(&stream.live_graph());
    let start = Instant::now();
    let (value, space_peak) = run_estimator(config, &stream, seed)?;
    let ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(TrialRecord::new(seed, value, m_star, space_peak, ms))
}

/// Runs every trial, in parallel chunks, writing rows in seed order as each
/// chunk completes when `sink` is given.
pub fn run_experiment_to(
    config: &ExperimentConfig,
    mut sink: Option<&mut dyn Write>,
) -> Result<Vec<TrialRecord>, HarnessError> {
    config.validate()?;
    let chunk = rayon::current_num_threads().max(1) * 4;
    let seeds: Vec<u64> = (0..config.trials as u64)
        .map(|i| config.seed_start + i)
        .collect();
    let mut writer = sink.as_mut().map(csv::Writer::from_writer);
    if let Some(w) = writer.as_mut() {
        w.write_record(CSV_HEADER)?;
    }
    let mut records = Vec::with_capacity(seeds.len());
    for block in seeds.chunks(chunk) {
        let done: Vec<TrialRecord> = block
            .par_iter()
            .map(|&seed| run_trial(config, seed))
            .collect::<Result<_, _>>()?;
        if let Some(w) = writer.as_mut() {
            for r in &done {
                w.write_record(csv_row(r))?;
            }
            w.flush()?;
        }
        records.extend(done);
    }
    Ok(records)
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<TrialRecord>, HarnessError> {
    match &config.output {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            let records = run_experiment_to(config, Some(&mut file))?;
            file.flush()?;
            Ok(records)
        }
        None => run_experiment_to(config, None),
    }
}

fn csv_row(r: &TrialRecord) -> [String; 7] {
    [
        r.seed.to_string(),
        r.value.map_or_else(String::new, |v| v.to_string()),
        r.m_star.to_string(),
        r.ratio.map_or_else(String::new, |v| format!("{v:?}")),
        r.space_peak.to_string(),
        r.fail.to_string(),
        format!("{:.3}", r.ms),
    ]
}

pub fn emit_csv(records: &[TrialRecord], path: &Path) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record(csv_row(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<TrialRecord>, HarnessError> {
    let mut rd = csv::Reader::from_path(path)?;
    let bad = |what: &str, row: usize| HarnessError::Config(format!("row {row}: bad {what}"));
    let mut out = Vec::new();
    for (i, row) in rd.records().enumerate() {
        let row = row?;
        let opt = |s: &str| -> Result<Option<f64>, HarnessError> {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse().map(Some).map_err(|_| bad("number", i + 1))
            }
        };
        out.push(TrialRecord {
            seed: row[0].parse().map_err(|_| bad("seed", i + 1))?,
            value: opt(&row[1])?,
            m_star: row[2].parse().map_err(|_| bad("m_star", i + 1))?,
            ratio: opt(&row[3])?,
            space_peak: row[4].parse().map_err(|_| bad("space_peak", i + 1))?,
            fail: row[5].parse().map_err(|_| bad("fail", i + 1))?,
            ms: row[6].parse().map_err(|_| bad("ms", i + 1))?,
        });
    }
    Ok(out)
}

/// Ratio statistics over the records that have a ratio.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioSummary {
    pub trials: usize,
    pub failures: usize,
    pub with_ratio: usize,
    pub min: Option<f64>,
    pub median: Option<f64>,
    pub max: Option<f64>,
    /// Fraction of all trials whose ratio lies inside the bound window.
    pub within_bounds: Option<f64>,
}

pub fn summarize(records: &[TrialRecord], bounds: Option<(f64, f64)>) -> RatioSummary {
    let mut ratios: Vec<f64> = records.iter().filter_map(|r| r.ratio).collect();
    ratios.sort_by(f64::total_cmp);
    let median = match ratios.len() {
        0 => None,
        k if k % 2 == 1 => Some(ratios[k / 2]),
        k => Some((ratios[k / 2 - 1] + ratios[k / 2]) / 2.0),
    };
    let within_bounds = bounds.filter(|_| !records.is_empty()).map(|(lo, hi)| {
        let ok = records
            .iter()
            .filter(|r| r.ratio.is_some_and(|x| x >= lo && x <= hi))
            .count();
        ok as f64 / records.len() as f64
    });
    RatioSummary {
        trials: records.len(),
        failures: records.iter().filter(|r| r.fail).count(),
        with_ratio: ratios.len(),
        min: ratios.first().copied(),
        median,
        max: ratios.last().copied(),
        within_bounds,
    }
}
