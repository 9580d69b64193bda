use serde::Serialize;

use super::HarnessError;
use crate::graph::{
    alpha_for_mu, characterize, greedy_maximal_matching, offline_alpha_good_set,
    CharacterizationReport, Graph,
};
use crate::rng::derive_seed;
use crate::stream::{order_stream, EdgeStream, OrderingPolicy};

pub const HIGH_DEGREE_BOUND: &str = "high-degree-bound";
pub const LOW_DEGREE_SANDWICH: &str = "low-degree-sandwich";
pub const ALPHA_GOOD_SANDWICH: &str = "alpha-good-sandwich";
pub const ALPHA_GOOD_SHALLOW_BOUND: &str = "alpha-good-shallow-bound";
pub const THREE_E6C_SANDWICH: &str = "three-e6c-sandwich";
pub const TREE_E1_SANDWICH: &str = "tree-e1-sandwich";
pub const GREEDY_HALF: &str = "greedy-half";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckTally {
    pub name: &'static str,
    pub evaluated: usize,
    pub violations: usize,
}

/// First failing inequality, with enough context to replay it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub check: &'static str,
    /// Index of the random ordering, `None` for order-free checks.
    pub ordering: Option<usize>,
    pub detail: String,
    /// The offending edge order, as `(u, v)` pairs.
    pub stream: Option<Vec<(usize, usize)>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaReport {
    pub c: usize,
    pub mu: usize,
    pub alpha: f64,
    pub orderings: usize,
    pub report: CharacterizationReport,
    pub checks: Vec<CheckTally>,
    pub first_violation: Option<Violation>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.first_violation.is_none()
    }

    pub fn tally(&self, name: &str) -> Option<&CheckTally> {
        self.checks.iter().find(|t| t.name == name)
    }
}

struct Recorder {
    checks: Vec<CheckTally>,
    first: Option<Violation>,
}

impl Recorder {
    fn record(
        &mut self,
        name: &'static str,
        ok: bool,
        ordering: Option<(usize, &EdgeStream)>,
        detail: impl FnOnce() -> String,
    ) {
        let idx = match self.checks.iter().position(|t| t.name == name) {
            Some(i) => i,
            None => {
                self.checks.push(CheckTally {
                    name,
                    evaluated: 0,
                    violations: 0,
                });
                self.checks.len() - 1
            }
        };
        let tally = &mut self.checks[idx];
        tally.evaluated += 1;
        if ok {
            return;
        }
        tally.violations += 1;
        if self.first.is_none() {
            self.first = Some(Violation {
                check: name,
                ordering: ordering.map(|(i, _)| i),
                detail: detail(),
                stream: ordering
                    .map(|(_, s)| s.events().iter().map(|e| (e.edge.u, e.edge.v)).collect()),
            });
        }
    }
}

/// Evaluates every offline inequality relating `M*`, `h_mu`, `M_mu`, `s_mu`
/// and the alpha-good edge counts, over `orderings` uniformly random edge
/// orders. The tree sandwich is checked only when `g` is a forest.
///
/// Comparisons are done in integers after clearing denominators, except the
/// upper alpha-good bound where `alpha` can be fractional.
pub fn check_lemmas(
    g: &Graph,
    orderings: usize,
    mu: usize,
    seed: u64,
) -> Result<LemmaReport, HarnessError> {
    let c = g
        .c_declared()
        .ok_or_else(|| HarnessError::Config("graph needs a declared arboricity bound".into()))?;
    if c == 0 || mu <= 2 * c {
        return Err(HarnessError::Config(format!(
            "mu must exceed 2c (mu = {mu}, c = {c})"
        )));
    }
    let report = characterize(g, mu);
    let (m_star, h, m_mu, s) = (report.m_star, report.h_mu, report.m_mu, report.s_mu);
    let alpha = alpha_for_mu(mu, c);
    let alpha_int = (alpha + 1e-9).floor() as usize;
    let mut rec = Recorder {
        checks: Vec::new(),
        first: None,
    };

    // h (mu - 2c + 1) <= 2 mu M*
    let slack = mu + 1 - 2 * c;
    rec.record(
        HIGH_DEGREE_BOUND,
        h * slack <= 2 * mu * m_star,
        None,
        || format!("h_mu = {h}, M* = {m_star}, mu = {mu}, c = {c}"),
    );
    // M* <= h + M_mu <= (3mu - 2c + 1) / (mu - 2c + 1) * M*
    let hm = h + m_mu;
    rec.record(
        LOW_DEGREE_SANDWICH,
        m_star <= hm && hm * slack <= (3 * mu + 1 - 2 * c) * m_star,
        None,
        || format!("h_mu + M_mu = {h} + {m_mu}, M* = {m_star}, mu = {mu}, c = {c}"),
    );

    let forest = g.is_forest();
    for i in 0..orderings {
        let stream = order_stream(
            g,
            OrderingPolicy::UniformRandom(derive_seed(seed, i as u64)),
        );
        let at = Some((i, &stream));
        let e_alpha = offline_alpha_good_set(&stream, alpha_int)?.len();

        // (1/2 - c/(mu+1)) M* <= |E_alpha| <= (5 alpha / 4 + 2) M*
        let lower = slack * m_star <= 2 * (mu + 1) * e_alpha;
        let upper = e_alpha as f64 <= (1.25 * alpha + 2.0) * m_star as f64 + 1e-9;
        rec.record(ALPHA_GOOD_SANDWICH, lower && upper, at, || {
            format!("|E_alpha| = {e_alpha}, alpha = {alpha}, M* = {m_star}, mu = {mu}, c = {c}")
        });
        // (1/2 - c/(mu+1)) h + s <= |E_alpha|
        rec.record(
            ALPHA_GOOD_SHALLOW_BOUND,
            slack * h + 2 * (mu + 1) * s <= 2 * (mu + 1) * e_alpha,
            at,
            || format!("|E_alpha| = {e_alpha}, h_mu = {h}, s_mu = {s}, mu = {mu}, c = {c}"),
        );
        // M* <= 3 |E_6c| <= (22.5c + 6) M*
        let e6c = offline_alpha_good_set(&stream, 6 * c)?.len();
        rec.record(
            THREE_E6C_SANDWICH,
            m_star <= 3 * e6c && 6 * e6c <= (45 * c + 12) * m_star,
            at,
            || format!("|E_6c| = {e6c}, M* = {m_star}, c = {c}"),
        );
        if forest {
            let e1 = offline_alpha_good_set(&stream, 1)?.len();
            rec.record(
                TREE_E1_SANDWICH,
                m_star <= e1 && e1 <= 2 * m_star,
                at,
                || format!("|E_1| = {e1}, M* = {m_star}"),
            );
        }
        let greedy = greedy_maximal_matching(&stream)?;
        rec.record(GREEDY_HALF, m_star <= 2 * greedy, at, || {
            format!("greedy = {greedy}, M* = {m_star}")
        });
    }

    Ok(LemmaReport {
        c,
        mu,
        alpha,
        orderings,
        report,
        checks: rec.checks,
        first_violation: rec.first,
    })
}
