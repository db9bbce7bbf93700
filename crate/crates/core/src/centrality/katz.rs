// SPDX-License-Identifier: Apache-2.0

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{rank_desc, CentralityResult, Measure};
use crate::error::{Error, Result};
use crate::graph::{Graph, Node};
use crate::traversal::Csr;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KatzParams {
    /// Decay per walk step; must satisfy `alpha * max_degree < 1`.
    pub alpha: f64,
    /// Two vertices whose combined bound interval is at most this wide are
    /// treated as tied.
    pub tolerance: f64,
    pub max_iter: usize,
}

impl KatzParams {
    pub fn new(alpha: f64) -> Self {
        KatzParams {
            alpha,
            tolerance: 1e-9,
            max_iter: 10_000,
        }
    }

    /// `1 / (max_degree + 1)`, safely inside the convergence range.
    pub fn default_for(g: &Graph) -> Self {
        Self::new(1.0 / (g.max_degree() as f64 + 1.0))
    }
}

/// Katz centrality `Σ_{i≥1} α^i · walks_i(v)` refined one walk length at a
/// time. After `i` steps every vertex carries
///
/// * lower bound: the partial sum up to length `i`,
/// * upper bound: lower + `α^i walks_i(v) · αΔ / (1 - αΔ)`,
///
/// where Δ is the maximum (out-)degree: appending a step to a walk multiplies
/// the count by at most Δ. Edge weights are ignored.
pub struct KatzSolver {
    csr: Csr,
    alpha: f64,
    tolerance: f64,
    max_iter: usize,
    tail: f64,
    /// `α^i walks_i(v)` for the current `i`.
    term: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    iterations: usize,
}

impl KatzSolver {
    pub fn new(g: &Graph, params: &KatzParams) -> Result<Self> {
        let KatzParams {
            alpha,
            tolerance,
            max_iter,
        } = *params;
        let max_degree = g.max_degree() as f64;
        if !(alpha > 0.0 && alpha.is_finite()) || alpha * max_degree >= 1.0 {
            return Err(Error::param(format!(
                "katz alpha must lie in (0, 1/max_degree) = (0, {}), got {alpha}",
                1.0 / max_degree
            )));
        }
        if !(tolerance >= 0.0) {
            return Err(Error::param(format!("katz tolerance must be >= 0, got {tolerance}")));
        }
        let n = g.node_count();
        let tail = alpha * max_degree / (1.0 - alpha * max_degree);
        Ok(KatzSolver {
            csr: Csr::forward(g),
            alpha,
            tolerance,
            max_iter,
            tail,
            term: vec![1.0; n],
            lower: vec![0.0; n],
            upper: vec![tail; n],
            iterations: 0,
        })
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Adds walks one step longer and tightens the bounds.
    pub fn step(&mut self) {
        let (csr, alpha, term) = (&self.csr, self.alpha, &self.term);
        let next: Vec<f64> = (0..csr.node_count())
            .into_par_iter()
            .map(|v| alpha * csr.neighbors(v).iter().map(|&u| term[u as usize]).sum::<f64>())
            .collect();
        for v in 0..next.len() {
            self.lower[v] += next[v];
            self.upper[v] = self.lower[v] + next[v] * self.tail;
        }
        self.term = next;
        self.iterations += 1;
    }

    fn midpoints(&self) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| l + (u - l) / 2.0)
            .collect()
    }

    /// True once every pair of ranking neighbors is either separated by its
    /// bounds or indistinguishable within the tolerance.
    pub fn is_resolved(&self) -> bool {
        let order = rank_desc(&self.midpoints());
        order.windows(2).all(|w| {
            let (a, b) = (w[0], w[1]);
            self.lower[a] > self.upper[b]
                || self.upper[a].max(self.upper[b]) - self.lower[a].min(self.lower[b])
                    <= self.tolerance
        })
    }

    /// Steps until the ranking is resolved or the iteration cap is hit.
    pub fn run(mut self) -> KatzBounds {
        while !self.is_resolved() && self.iterations < self.max_iter {
            self.step();
        }
        let resolved = self.is_resolved();
        KatzBounds {
            lower: self.lower,
            upper: self.upper,
            iterations: self.iterations,
            resolved,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KatzBounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub iterations: usize,
    /// False if the iteration cap was reached first.
    pub resolved: bool,
}

impl KatzBounds {
    /// True if the bounds prove `a` scores strictly above `b`.
    pub fn certified(&self, a: Node, b: Node) -> bool {
        self.lower[a] > self.upper[b]
    }

    pub fn midpoints(&self) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| l + (u - l) / 2.0)
            .collect()
    }
}

pub fn katz_bounds(g: &Graph, params: &KatzParams) -> Result<KatzBounds> {
    Ok(KatzSolver::new(g, params)?.run())
}

/// Katz scores as bound midpoints; the ranking is certified wherever
/// [`KatzBounds::certified`] holds.
pub fn katz(g: &Graph, params: &KatzParams) -> Result<CentralityResult> {
    let bounds = katz_bounds(g, params)?;
    let mut result = CentralityResult::new(Measure::Katz, false, bounds.midpoints());
    result.iterations = Some(bounds.iterations);
    Ok(result)
}
