// SPDX-License-Identifier: Apache-2.0

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_budget, check_group, GroupMeasure, VertexGroup};
use crate::error::{Error, Result};
use crate::graph::{Graph, Node};
use crate::traversal::Csr;

/// Truncation tail must fall below this.
const TAIL_TOLERANCE: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GedParams {
    /// Decay per walk step; must satisfy `alpha * max_degree < 1`.
    pub alpha: f64,
    /// Longest walk counted; `None` picks the shortest length whose tail
    /// bound is below 1e-7.
    pub walk_length: Option<usize>,
}

impl GedParams {
    pub fn new(alpha: f64) -> Self {
        GedParams {
            alpha,
            walk_length: None,
        }
    }

    pub fn with_walk_length(alpha: f64, walk_length: usize) -> Self {
        GedParams {
            alpha,
            walk_length: Some(walk_length),
        }
    }

    /// Validates alpha and resolves the walk length for `g`.
    fn resolve(&self, g: &Graph) -> Result<usize> {
        let max_degree = g.max_degree() as f64;
        if !(self.alpha > 0.0 && self.alpha.is_finite()) || self.alpha * max_degree >= 1.0 {
            return Err(Error::param(format!(
                "GED-Walk alpha must lie in (0, 1/max_degree), got {}",
                self.alpha
            )));
        }
        if let Some(k) = self.walk_length {
            return if k == 0 {
                Err(Error::param("walk length must be at least 1"))
            } else {
                Ok(k)
            };
        }
        // Smallest K with α^{K+1} n Δ^{K+1} / (1 - αΔ) below the tolerance.
        let ratio = self.alpha * max_degree;
        let n = g.node_count() as f64;
        let mut k = 1;
        let mut tail = ratio * ratio * n / (1.0 - ratio);
        while tail >= TAIL_TOLERANCE && k < 100_000 {
            k += 1;
            tail *= ratio;
        }
        Ok(k)
    }
}

/// `Σ_{k=1..K} α^k · (walks of length k)` over all walks avoiding `blocked`.
fn decayed_walks(csr: &Csr, alpha: f64, length: usize, blocked: &[bool]) -> f64 {
    let n = csr.node_count();
    // x[v] = α^k · (walks of length k from v); the decay is folded in at
    // every step so long walks neither overflow nor underflow separately.
    let mut x: Vec<f64> = (0..n).map(|v| if blocked[v] { 0.0 } else { 1.0 }).collect();
    let mut total = 0.0;
    for _ in 0..length {
        x = (0..n)
            .map(|v| {
                if blocked[v] {
                    0.0
                } else {
                    alpha * csr.neighbors(v).iter().map(|&u| x[u as usize]).sum::<f64>()
                }
            })
            .collect();
        total += x.iter().sum::<f64>();
    }
    total
}

/// GED-Walk: `Σ_{k=1..K} α^k (W_k(G) - W_k(G - S))`, the decayed number of
/// (ordered) walks that visit at least one group member.
pub fn ged_walk_eval(g: &Graph, s: &[Node], params: &GedParams) -> Result<f64> {
    check_group(g, s, true)?;
    let length = params.resolve(g)?;
    let csr = Csr::forward(g);
    let mut blocked = vec![false; g.node_count()];
    let all = decayed_walks(&csr, params.alpha, length, &blocked);
    for &v in s {
        blocked[v] = true;
    }
    Ok(all - decayed_walks(&csr, params.alpha, length, &blocked))
}

/// Gain of adding `v` when the walks avoiding the group total `avoiding`.
fn marginal(csr: &Csr, alpha: f64, length: usize, blocked: &[bool], avoiding: f64, v: Node) -> f64 {
    let mut b = blocked.to_vec();
    b[v] = true;
    avoiding - decayed_walks(csr, alpha, length, &b)
}

/// Upper bounds on each vertex's gain for the empty group: the decayed
/// number of walks through `v`, counted once per visit, is at most
/// `(Σ_i α^i in_i(v)) (Σ_j α^j out_j(v)) - 1` where `in_i`/`out_j` count
/// walks ending/starting at `v`.
fn initial_bounds(g: &Graph, alpha: f64, length: usize) -> Vec<f64> {
    let n = g.node_count();
    let series = |csr: &Csr| {
        let mut x = vec![1.0; n];
        let mut acc = vec![1.0; n];
        for _ in 0..length {
            x = (0..n)
                .map(|v| alpha * csr.neighbors(v).iter().map(|&u| x[u as usize]).sum::<f64>())
                .collect();
            acc.iter_mut().zip(&x).for_each(|(a, w)| *a += w);
        }
        acc
    };
    let out = series(&Csr::forward(g));
    let inn = if g.is_directed() { series(&Csr::backward(g)) } else { out.clone() };
    out.iter().zip(&inn).map(|(o, i)| o * i - 1.0).collect()
}

#[derive(Debug, Clone, Copy)]
struct Entry {
    bound: f64,
    vertex: Node,
    round: usize,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound
            .total_cmp(&other.bound)
            .then(other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Inflates a stale gain so rounding can never make it a non-bound.
fn slack(x: f64) -> f64 {
    x + 1e-12 * x.abs().max(1e-300)
}

/// Lazy greedy GED-Walk maximization. Each vertex keeps an upper bound on
/// its marginal gain (walk-visit counts at first, then its last evaluated
/// gain, which can only shrink as the group grows); only the top of the
/// queue is re-evaluated. Returns the same group as
/// [`ged_walk_greedy_eager`]: maximum gain, ties by smallest id.
pub fn ged_walk_greedy(g: &Graph, k: usize, params: &GedParams) -> Result<VertexGroup> {
    check_budget(g, k, false)?;
    let length = params.resolve(g)?;
    let alpha = params.alpha;
    let csr = Csr::forward(g);
    let n = g.node_count();
    let mut blocked = vec![false; n];
    let mut avoiding = decayed_walks(&csr, alpha, length, &blocked);
    let mut heap: BinaryHeap<Entry> = initial_bounds(g, alpha, length)
        .into_iter()
        .enumerate()
        .map(|(vertex, b)| Entry {
            bound: slack(b),
            vertex,
            round: usize::MAX,
        })
        .collect();
    let mut members = Vec::with_capacity(k);
    let mut gains = Vec::with_capacity(k);
    for round in 0..k {
        loop {
            let top = heap.pop().expect("k <= n leaves a candidate");
            if top.round == round {
                blocked[top.vertex] = true;
                members.push(top.vertex);
                gains.push(top.bound);
                break;
            }
            let gain = marginal(&csr, alpha, length, &blocked, avoiding, top.vertex);
            heap.push(Entry {
                bound: gain,
                vertex: top.vertex,
                round,
            });
        }
        // Fresh values from this round become bounds for the next one.
        heap = heap
            .into_iter()
            .map(|e| if e.round == round { Entry { bound: slack(e.bound), ..e } } else { e })
            .collect();
        avoiding = decayed_walks(&csr, alpha, length, &blocked);
    }
    Ok(VertexGroup {
        score: ged_walk_eval(g, &members, params)?,
        members,
        measure: GroupMeasure::GedWalk,
        walk_length: Some(length),
        gains,
    })
}

/// Plain greedy: evaluates every candidate's marginal gain each round.
pub fn ged_walk_greedy_eager(g: &Graph, k: usize, params: &GedParams) -> Result<VertexGroup> {
    check_budget(g, k, false)?;
    let length = params.resolve(g)?;
    let alpha = params.alpha;
    let csr = Csr::forward(g);
    let n = g.node_count();
    let mut blocked = vec![false; n];
    let mut members = Vec::with_capacity(k);
    let mut gains = Vec::with_capacity(k);
    for _ in 0..k {
        let avoiding = decayed_walks(&csr, alpha, length, &blocked);
        let values: Vec<(Node, f64)> = (0..n)
            .into_par_iter()
            .filter(|&v| !blocked[v])
            .map(|v| (v, marginal(&csr, alpha, length, &blocked, avoiding, v)))
            .collect();
        let (v, gain) = values
            .into_iter()
            .reduce(|a, b| if b.1 > a.1 { b } else { a })
            .expect("k <= n leaves a candidate");
        blocked[v] = true;
        members.push(v);
        gains.push(gain);
    }
    Ok(VertexGroup {
        score: ged_walk_eval(g, &members, params)?,
        members,
        measure: GroupMeasure::GedWalk,
        walk_length: Some(length),
        gains,
    })
}
