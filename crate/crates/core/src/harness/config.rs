use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use super::HarnessError;
use crate::estimators::beta;
use crate::graph::Graph;
use crate::stream::{
    generate_random_tree, generate_star_forest, generate_union_of_forests, OrderingPolicy,
};

#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorSpec {
    UnionOfForests { n: usize, c: usize },
    StarForest { k: usize, s: usize },
    RandomTree { n: usize },
}

impl GeneratorSpec {
    pub fn generate(&self, seed: u64) -> Graph {
        match *self {
            GeneratorSpec::UnionOfForests { n, c } => generate_union_of_forests(n, c, seed),
            GeneratorSpec::StarForest { k, s } => generate_star_forest(k, s),
            GeneratorSpec::RandomTree { n } => generate_random_tree(n, seed),
        }
    }

    pub fn declared_arboricity(&self) -> usize {
        match *self {
            GeneratorSpec::UnionOfForests { c, .. } => c,
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AlgorithmSpec {
    Greedy,
    Alg1 { mu: usize, p: f64 },
    Alg2 { mu: usize },
    Alg4 { alpha: usize },
    Logspace,
    Dynamic { mu: usize, delete_fraction: f64 },
}

impl AlgorithmSpec {
    pub fn name(&self) -> &'static str {
        match self {
            AlgorithmSpec::Greedy => "greedy",
            AlgorithmSpec::Alg1 { .. } => "alg1",
            AlgorithmSpec::Alg2 { .. } => "alg2",
            AlgorithmSpec::Alg4 { .. } => "alg4",
            AlgorithmSpec::Logspace => "logspace",
            AlgorithmSpec::Dynamic { .. } => "dynamic",
        }
    }

    /// Approximation window for `value / M*` guaranteed by the analysis, if
    /// the estimator targets `M*` at all.
    pub fn ratio_bounds(&self, c: usize, epsilon: f64) -> Option<(f64, f64)> {
        match *self {
            AlgorithmSpec::Greedy => Some((0.5, 1.0)),
            AlgorithmSpec::Alg1 { mu, .. }
            | AlgorithmSpec::Alg2 { mu }
            | AlgorithmSpec::Dynamic { mu, .. } => {
                Some((1.0 - epsilon, (1.0 + epsilon) * beta(mu, c)))
            }
            AlgorithmSpec::Alg4 { .. } => None,
            AlgorithmSpec::Logspace => Some((
                1.0 - 3.0 * epsilon,
                (22.5 * c as f64 + 6.0) * (1.0 + 3.0 * epsilon),
            )),
        }
    }
}

/// Parsed from flat `key = value` text; `#` starts a comment.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub generator: GeneratorSpec,
    pub ordering: String,
    pub algorithm: AlgorithmSpec,
    /// Arboricity bound handed to the estimator.
    pub c: usize,
    pub epsilon: f64,
    pub seed_start: u64,
    pub trials: usize,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn ordering_policy(&self, seed: u64) -> OrderingPolicy {
        OrderingPolicy::from_name(&self.ordering, seed).expect("validated ordering name")
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: String| Err(HarnessError::Config(msg));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.c == 0 {
            return bad("c must be at least 1".into());
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return bad(format!("epsilon must be in (0, 1), got {}", self.epsilon));
        }
        if OrderingPolicy::from_name(&self.ordering, 0).is_none() {
            return bad(format!(
                "unknown ordering {:?}; expected one of {}",
                self.ordering,
                OrderingPolicy::NAMES.join(", ")
            ));
        }
        match self.generator {
            GeneratorSpec::UnionOfForests { n, c } if n < 2 || c == 0 => {
                return bad("union-forests needs n >= 2 and c >= 1".into())
            }
            GeneratorSpec::StarForest { k, s } if k == 0 || s == 0 => {
                return bad("star-forest needs k >= 1 and s >= 1".into())
            }
            GeneratorSpec::RandomTree { n } if n < 2 => {
                return bad("random-tree needs n >= 2".into())
            }
            _ => {}
        }
        match self.algorithm {
            AlgorithmSpec::Alg1 { mu, p } => {
                if !(p > 0.0 && p <= 1.0) {
                    return bad(format!("p must be in (0, 1], got {p}"));
                }
                check_mu(mu, self.c)?;
            }
            AlgorithmSpec::Alg2 { mu } => check_mu(mu, self.c)?,
            AlgorithmSpec::Dynamic {
                mu,
                delete_fraction,
            } => {
                check_mu(mu, self.c)?;
                if !(0.0..=1.0).contains(&delete_fraction) {
                    return bad(format!(
                        "delete_fraction must be in [0, 1], got {delete_fraction}"
                    ));
                }
            }
            AlgorithmSpec::Alg4 { alpha: 0 } => return bad("alpha must be at least 1".into()),
            _ => {}
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let mut kv = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                HarnessError::Config(format!("line {}: expected `key = value`", i + 1))
            })?;
            kv.insert(k.trim().to_string(), v.trim().to_string());
        }
        let mut fields = Fields(kv);

        let generator = match fields.take_str("generator")?.as_str() {
            "union-forests" => GeneratorSpec::UnionOfForests {
                n: fields.take("n")?,
                c: fields.take_or("c", 1)?,
            },
            "star-forest" => GeneratorSpec::StarForest {
                k: fields.take("k")?,
                s: fields.take("s")?,
            },
            "random-tree" => GeneratorSpec::RandomTree {
                n: fields.take("n")?,
            },
            other => return Err(HarnessError::Config(format!(
                "unknown generator {other:?}; expected union-forests, star-forest or random-tree"
            ))),
        };
        let c = match generator {
            GeneratorSpec::UnionOfForests { c, .. } => c,
            _ => fields.take_or("c", generator.declared_arboricity())?,
        };
        let algorithm = match fields.take_str("algorithm")?.as_str() {
            "greedy" => AlgorithmSpec::Greedy,
            "alg1" => AlgorithmSpec::Alg1 {
                mu: fields.take("mu")?,
                p: fields.take("p")?,
            },
            "alg2" => AlgorithmSpec::Alg2 {
                mu: fields.take("mu")?,
            },
            "alg4" => AlgorithmSpec::Alg4 {
                alpha: fields.take("alpha")?,
            },
            "logspace" => AlgorithmSpec::Logspace,
            "dynamic" => AlgorithmSpec::Dynamic {
                mu: fields.take("mu")?,
                delete_fraction: fields.take_or("delete_fraction", 0.0)?,
            },
            other => {
                return Err(HarnessError::Config(format!(
                    "unknown algorithm {other:?}; expected greedy, alg1, alg2, alg4, logspace or dynamic"
                )))
            }
        };
        let config = ExperimentConfig {
            generator,
            ordering: fields.take_or("ordering", "as-generated".to_string())?,
            algorithm,
            c,
            epsilon: fields.take_or("epsilon", 0.1)?,
            seed_start: fields.take_or("seed", 0)?,
            trials: fields.take_or("trials", 1)?,
            output: fields.0.remove("output").map(PathBuf::from),
        };
        if let Some(key) = fields.0.keys().next() {
            return Err(HarnessError::Config(format!(
                "unknown or unused key {key:?}"
            )));
        }
        config.validate()?;
        Ok(config)
    }
}

fn check_mu(mu: usize, c: usize) -> Result<(), HarnessError> {
    if mu <= 2 * c {
        return Err(HarnessError::Config(format!(
            "mu must exceed 2c (mu = {mu}, c = {c})"
        )));
    }
    Ok(())
}

struct Fields(BTreeMap<String, String>);

impl Fields {
    fn take_str(&mut self, key: &str) -> Result<String, HarnessError> {
        self.0
            .remove(key)
            .ok_or_else(|| HarnessError::Config(format!("missing key {key:?}")))
    }

    fn take<T: FromStr>(&mut self, key: &str) -> Result<T, HarnessError> {
        let raw = self.take_str(key)?;
        raw.parse()
            .map_err(|_| HarnessError::Config(format!("bad value {raw:?} for {key:?}")))
    }

    fn take_or<T: FromStr>(&mut self, key: &str, default: T) -> Result<T, HarnessError> {
        if self.0.contains_key(key) {
            self.take(key)
        } else {
            Ok(default)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_config() {
        let cfg = ExperimentConfig::parse(
            "# star forest run\n\
             generator = star-forest\nk = 1000\ns = 5\n\
             algorithm = logspace\nepsilon = 0.1\ntrials = 100\nseed = 7\n\
             ordering = uniform-random\noutput = out.csv\n",
        )
        .unwrap();
        assert_eq!(cfg.generator, GeneratorSpec::StarForest { k: 1000, s: 5 });
        assert_eq!(cfg.algorithm, AlgorithmSpec::Logspace);
        assert_eq!((cfg.c, cfg.trials, cfg.seed_start), (1, 100, 7));
        assert_eq!(cfg.output, Some(PathBuf::from("out.csv")));
    }

    #[test]
    fn mu_must_exceed_2c() {
        let err = ExperimentConfig::parse(
            "generator = union-forests\nn = 50\nc = 2\nalgorithm = alg2\nmu = 4\n",
        )
        .unwrap_err();
        assert!(matches!(err, HarnessError::Config(m) if m.contains("mu must exceed 2c")));
    }

    #[test]
    fn rejects_unknown_keys_and_values() {
        assert!(ExperimentConfig::parse(
            "generator = random-tree\nn = 5\nalgorithm = greedy\nfoo = 1\n"
        )
        .is_err());
        assert!(
            ExperimentConfig::parse("generator = random-tree\nn = x\nalgorithm = greedy\n")
                .is_err()
        );
        assert!(ExperimentConfig::parse(
            "generator = random-tree\nn = 5\nalgorithm = greedy\ntrials = 0\n"
        )
        .is_err());
        assert!(ExperimentConfig::parse(
            "generator = random-tree\nn = 5\nalgorithm = greedy\nordering = zigzag\n"
        )
        .is_err());
    }
}
