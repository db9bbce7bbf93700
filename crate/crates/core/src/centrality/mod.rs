// SPDX-License-Identifier: Apache-2.0

//! Per-vertex centrality measures.

mod betweenness;
mod closeness;
mod electrical;
mod katz;
mod pagerank;
mod sampled;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Node};

pub use betweenness::{
    approx_sample_size, betweenness_approx, betweenness_exact, maximize_betweenness, Improvement,
};
pub use closeness::{closeness, harmonic, top_k_closeness, TopKCloseness};
pub use electrical::{electrical_closeness, electrical_sample_size, ElectricalCloseness};
pub use katz::{katz, katz_bounds, KatzBounds, KatzParams, KatzSolver};
pub use pagerank::{pagerank, PageRankParams};
pub use sampled::{closeness_approx, harmonic_approx, harmonic_sample_size};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Degree,
    Closeness,
    Harmonic,
    Betweenness,
    BetweennessApprox,
    Katz,
    PageRank,
    Electrical,
}

impl Measure {
    pub fn name(self) -> &'static str {
        match self {
            Measure::Degree => "degree",
            Measure::Closeness => "closeness",
            Measure::Harmonic => "harmonic",
            Measure::Betweenness => "betweenness",
            Measure::BetweennessApprox => "betweenness_approx",
            Measure::Katz => "katz",
            Measure::PageRank => "pagerank",
            Measure::Electrical => "electrical",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralityResult {
    pub measure: Measure,
    pub normalized: bool,
    pub scores: Vec<f64>,
    /// Number of samples drawn by sampling-based estimators.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Iterations used by iterative solvers.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
}

impl CentralityResult {
    pub fn new(measure: Measure, normalized: bool, scores: Vec<f64>) -> Self {
        CentralityResult {
            measure,
            normalized,
            scores,
            samples: None,
            iterations: None,
        }
    }

    /// Vertices by descending score, ties by ascending id.
    pub fn ranking(&self) -> Vec<Node> {
        rank_desc(&self.scores)
    }

    pub fn top(&self, k: usize) -> Vec<(Node, f64)> {
        self.ranking()
            .into_iter()
            .take(k)
            .map(|v| (v, self.scores[v]))
            .collect()
    }
}

pub(crate) fn rank_desc(scores: &[f64]) -> Vec<Node> {
    let mut order: Vec<Node> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    order
}

/// Parameters of the sampling-based estimators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproxParams {
    /// Absolute error bound.
    pub epsilon: f64,
    /// Failure probability.
    pub delta: f64,
    pub seed: u64,
}

impl ApproxParams {
    pub fn new(epsilon: f64, delta: f64, seed: u64) -> Self {
        ApproxParams {
            epsilon,
            delta,
            seed,
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::param(format!("epsilon must be > 0, got {}", self.epsilon)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::param(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        Ok(())
    }
}

/// Degree (out-degree on directed graphs).
pub fn degree_centrality(g: &Graph) -> CentralityResult {
    let scores = g.nodes().map(|u| g.degree(u) as f64).collect();
    CentralityResult::new(Measure::Degree, false, scores)
}
