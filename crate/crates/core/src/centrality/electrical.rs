// SPDX-License-Identifier: Apache-2.0

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ApproxParams, CentralityResult, Measure};
use crate::error::{Error, Result};
use crate::graph::{Graph, Node};
use crate::random::{stream, NkRng};
use crate::traversal::{is_connected, Csr};

const TREE_CHUNK: usize = 64;
const CHUNK_BATCH: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElectricalCloseness {
    pub result: CentralityResult,
    /// Highest-degree vertex; resistances are estimated against it.
    pub pivot: Node,
    /// Estimated effective resistance between the pivot and each vertex.
    pub resistance: Vec<f64>,
    /// Estimated diagonal of the Laplacian pseudoinverse.
    pub diagonal: Vec<f64>,
    pub samples: usize,
}

/// Spanning trees needed so that every pivot resistance is within `epsilon`
/// with probability `1 - delta`. `path_resistance` bounds the per-tree
/// estimator's magnitude (the resistance of the longest BFS-tree path).
pub fn electrical_sample_size(n: usize, path_resistance: f64, epsilon: f64, delta: f64) -> usize {
    if n < 2 {
        return 0;
    }
    let range = path_resistance;
    (2.0 * range * range * (2.0 * n as f64 / delta).ln() / (epsilon * epsilon)).ceil() as usize
}

/// Electrical closeness `(n - 1) / Σ_w r(v, w)` where `r` is effective
/// resistance (edge weights act as conductances).
///
/// One column of the Laplacian pseudoinverse, for the highest-degree pivot
/// `u`, is solved by conjugate gradients. Resistances `r(u, v)` are estimated
/// from uniform spanning trees sampled with Wilson's algorithm: the current of
/// a unit `v → u` flow through an edge equals the probability that the tree
/// path uses it forwards minus backwards, and summing signed tree usage along
/// a fixed BFS path gives an unbiased estimate of `r(u, v)`. From these,
/// `L†_vv = r(u, v) - L†_uu + 2 L†_uv` and `Σ_w r(v, w) = n L†_vv + tr L†`.
pub fn electrical_closeness(g: &Graph, params: &ApproxParams) -> Result<ElectricalCloseness> {
    params.validate()?;
    if g.is_directed() {
        return Err(Error::Directed("electrical closeness"));
    }
    if !is_connected(g) {
        return Err(Error::Disconnected("electrical closeness"));
    }
    let n = g.node_count();
    let pivot = (0..n).max_by_key(|&u| (g.degree(u), std::cmp::Reverse(u))).unwrap_or(0);
    if n < 2 {
        let result = CentralityResult::new(Measure::Electrical, true, vec![0.0; n]);
        return Ok(ElectricalCloseness {
            result,
            pivot,
            resistance: vec![0.0; n],
            diagonal: vec![0.0; n],
            samples: 0,
        });
    }

    let column = pinv_column(g, pivot);
    let bfs = BfsTree::new(g, pivot);
    let samples = electrical_sample_size(n, bfs.max_resistance, params.epsilon, params.delta);
    let sampler = TreeSampler::new(g, pivot);

    let chunks = samples.div_ceil(TREE_CHUNK);
    let mut total = vec![0.0; n];
    for batch in (0..chunks).step_by(CHUNK_BATCH) {
        let parts: Vec<Vec<f64>> = (batch..chunks.min(batch + CHUNK_BATCH))
            .into_par_iter()
            .map_init(
                || TreeScratch::new(n),
                |scratch, c| {
                    let mut rng = stream(params.seed, crate::random::ELECTRICAL, c as u64);
                    let mut acc = vec![0.0; n];
                    for _ in c * TREE_CHUNK..samples.min((c + 1) * TREE_CHUNK) {
                        sampler.sample(scratch, &mut rng);
                        bfs.accumulate(scratch, &mut acc);
                    }
                    acc
                },
            )
            .collect();
        for part in parts {
            total.iter_mut().zip(part).for_each(|(t, p)| *t += p);
        }
    }

    let resistance: Vec<f64> = total.iter().map(|&t| t / samples as f64).collect();
    let diagonal: Vec<f64> = (0..n)
        .map(|v| resistance[v] - column[pivot] + 2.0 * column[v])
        .collect();
    let trace: f64 = diagonal.iter().sum();
    let scores = diagonal
        .iter()
        .map(|&d| (n - 1) as f64 / (n as f64 * d + trace))
        .collect();
    let mut result = CentralityResult::new(Measure::Electrical, true, scores);
    result.samples = Some(samples);
    Ok(ElectricalCloseness {
        result,
        pivot,
        resistance,
        diagonal,
        samples,
    })
}

/// `L† e_u` for a connected graph, by Jacobi-preconditioned conjugate
/// gradients on `L x = e_u - 1/n`, projected onto mean-zero vectors.
fn pinv_column(g: &Graph, u: Node) -> Vec<f64> {
    let n = g.node_count();
    let diag: Vec<f64> = g.nodes().map(|v| g.weighted_degree(v)).collect();
    let apply = |x: &[f64]| -> Vec<f64> {
        (0..n)
            .into_par_iter()
            .map(|v| diag[v] * x[v] - g.adjacency(v).iter().map(|a| a.weight * x[a.node]).sum::<f64>())
            .collect()
    };
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut b = vec![-1.0 / n as f64; n];
    b[u] += 1.0;
    let mut x = vec![0.0; n];
    let mut r = b.clone();
    let mut z: Vec<f64> = r.iter().zip(&diag).map(|(r, d)| r / d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let stop = 1e-13 * dot(&b, &b).sqrt();
    for _ in 0..(10 * n + 100) {
        if dot(&r, &r).sqrt() <= stop {
            break;
        }
        let ap = apply(&p);
        let step = rz / dot(&p, &ap);
        for i in 0..n {
            x[i] += step * p[i];
            r[i] -= step * ap[i];
        }
        z = r.iter().zip(&diag).map(|(r, d)| r / d).collect();
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    let mean = x.iter().sum::<f64>() / n as f64;
    x.iter_mut().for_each(|v| *v -= mean);
    x
}

/// BFS tree rooted at the pivot; fixes one reference path per vertex.
struct BfsTree {
    root: Node,
    parent: Vec<Node>,
    /// Resistance `1 / w` of the edge to the parent.
    edge_resistance: Vec<f64>,
    max_resistance: f64,
}

impl BfsTree {
    fn new(g: &Graph, root: Node) -> Self {
        let n = g.node_count();
        let mut parent = vec![usize::MAX; n];
        let mut edge_resistance = vec![0.0; n];
        let mut path = vec![0.0; n];
        parent[root] = root;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for a in g.adjacency(x) {
                if parent[a.node] == usize::MAX {
                    parent[a.node] = x;
                    edge_resistance[a.node] = 1.0 / a.weight;
                    path[a.node] = path[x] + 1.0 / a.weight;
                    queue.push_back(a.node);
                }
            }
        }
        let max_resistance = path.iter().copied().fold(0.0, f64::max);
        BfsTree {
            root,
            parent,
            edge_resistance,
            max_resistance,
        }
    }

    /// Adds this tree's signed usage of every reference path to `acc`.
    fn accumulate(&self, t: &TreeScratch, acc: &mut [f64]) {
        let is_ancestor = |a: usize, v: usize| t.tin[a] <= t.tin[v] && t.tout[v] <= t.tout[a];
        for (v, slot) in acc.iter_mut().enumerate() {
            let mut sum = 0.0;
            let mut x = v;
            while x != self.root {
                let p = self.parent[x];
                if t.parent[x] == p && is_ancestor(x, v) {
                    sum += self.edge_resistance[x];
                } else if p != self.root && t.parent[p] == x && is_ancestor(p, v) {
                    sum -= self.edge_resistance[x];
                }
                x = p;
            }
            *slot += sum;
        }
    }
}

/// Per-worker state for one sampled spanning tree.
struct TreeScratch {
    in_tree: Vec<bool>,
    next: Vec<usize>,
    parent: Vec<usize>,
    tin: Vec<usize>,
    tout: Vec<usize>,
    child_start: Vec<usize>,
    children: Vec<usize>,
    stack: Vec<(usize, usize)>,
}

impl TreeScratch {
    fn new(n: usize) -> Self {
        TreeScratch {
            in_tree: vec![false; n],
            next: vec![0; n],
            parent: vec![0; n],
            tin: vec![0; n],
            tout: vec![0; n],
            child_start: vec![0; n + 1],
            children: vec![0; n],
            stack: Vec::new(),
        }
    }
}

/// Wilson's algorithm for uniform (weight-proportional) spanning trees.
struct TreeSampler {
    csr: Csr,
    /// Cumulative neighbor weights per vertex; empty when unweighted.
    cumulative: Vec<f64>,
    offsets: Vec<usize>,
    root: Node,
}

impl TreeSampler {
    fn new(g: &Graph, root: Node) -> Self {
        let csr = Csr::forward(g);
        let mut offsets = vec![0];
        let mut cumulative = Vec::new();
        for u in g.nodes() {
            if g.is_weighted() {
                let mut run = 0.0;
                for &w in csr.weights(u) {
                    run += w;
                    cumulative.push(run);
                }
            }
            offsets.push(offsets[u] + csr.degree(u));
        }
        TreeSampler {
            csr,
            cumulative,
            offsets,
            root,
        }
    }

    fn random_neighbor(&self, u: usize, rng: &mut NkRng) -> usize {
        let nbrs = self.csr.neighbors(u);
        if self.cumulative.is_empty() {
            return nbrs[rng.gen_range(0..nbrs.len())] as usize;
        }
        let cum = &self.cumulative[self.offsets[u]..self.offsets[u + 1]];
        let r = rng.gen::<f64>() * cum[cum.len() - 1];
        let i = cum.partition_point(|&c| c <= r).min(nbrs.len() - 1);
        nbrs[i] as usize
    }

    /// Fills `t.parent` with a random spanning tree and `t.tin`/`t.tout` with
    /// its DFS entry/exit times.
    fn sample(&self, t: &mut TreeScratch, rng: &mut NkRng) {
        let n = t.in_tree.len();
        t.in_tree.iter_mut().for_each(|b| *b = false);
        t.in_tree[self.root] = true;
        t.parent[self.root] = self.root;
        for start in 0..n {
            let mut u = start;
            while !t.in_tree[u] {
                t.next[u] = self.random_neighbor(u, rng);
                u = t.next[u];
            }
            let mut u = start;
            while !t.in_tree[u] {
                t.in_tree[u] = true;
                t.parent[u] = t.next[u];
                u = t.next[u];
            }
        }

        t.child_start.iter_mut().for_each(|c| *c = 0);
        for v in 0..n {
            if v != self.root {
                t.child_start[t.parent[v] + 1] += 1;
            }
        }
        for i in 0..n {
            t.child_start[i + 1] += t.child_start[i];
        }
        let mut fill = t.child_start[..n].to_vec();
        for v in 0..n {
            if v != self.root {
                let p = t.parent[v];
                t.children[fill[p]] = v;
                fill[p] += 1;
            }
        }
        let mut clock = 0;
        t.stack.clear();
        t.stack.push((self.root, t.child_start[self.root]));
        t.tin[self.root] = clock;
        while let Some(&mut (v, ref mut i)) = t.stack.last_mut() {
            if *i < t.child_start[v + 1] {
                let c = t.children[*i];
                *i += 1;
                clock += 1;
                t.tin[c] = clock;
                t.stack.push((c, t.child_start[c]));
            } else {
                t.tout[v] = clock;
                t.stack.pop();
            }
        }
    }
}
