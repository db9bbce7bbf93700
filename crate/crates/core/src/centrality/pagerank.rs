// SPDX-License-Identifier: Apache-2.0

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{CentralityResult, Measure};
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PageRankParams {
    pub damping: f64,
    /// Stop once the L1 change between iterates is at most this.
    pub tolerance: f64,
    pub max_iter: usize,
}

impl Default for PageRankParams {
    fn default() -> Self {
        PageRankParams {
            damping: 0.85,
            tolerance: 1e-10,
            max_iter: 1000,
        }
    }
}

/// PageRank by power iteration with uniform teleport. Dangling vertices
/// spread their mass uniformly; transitions are proportional to edge weight.
pub fn pagerank(g: &Graph, params: &PageRankParams) -> Result<CentralityResult> {
    let PageRankParams {
        damping,
        tolerance,
        max_iter,
    } = *params;
    if !(damping > 0.0 && damping < 1.0) {
        return Err(Error::param(format!("damping must lie in (0, 1), got {damping}")));
    }
    if !(tolerance > 0.0) {
        return Err(Error::param(format!("tolerance must be > 0, got {tolerance}")));
    }
    let n = g.node_count();
    let mut result = CentralityResult::new(Measure::PageRank, true, Vec::new());
    if n == 0 {
        result.iterations = Some(0);
        return Ok(result);
    }
    let out_weight: Vec<f64> = g.nodes().map(|u| g.weighted_degree(u)).collect();
    let nf = n as f64;
    let mut x = vec![1.0 / nf; n];
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        let dangling: f64 = (0..n).filter(|&u| out_weight[u] == 0.0).map(|u| x[u]).sum();
        let base = (1.0 - damping) / nf + damping * dangling / nf;
        let next: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|v| {
                let pulled: f64 = g
                    .in_adjacency(v)
                    .iter()
                    .map(|a| x[a.node] * a.weight / out_weight[a.node])
                    .sum();
                base + damping * pulled
            })
            .collect();
        let change: f64 = x.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        x = next;
        if change <= tolerance {
            break;
        }
    }
    result.scores = x;
    result.iterations = Some(iterations);
    Ok(result)
}
