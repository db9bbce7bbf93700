// SPDX-License-Identifier: Apache-2.0

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{CentralityResult, Measure};
use crate::error::{Error, Result};
use crate::graph::{Graph, Node};
use crate::traversal::{distances, is_connected, Bfs, Csr, HeapItem, UNSEEN};

fn check_connected_undirected(g: &Graph, what: &'static str) -> Result<()> {
    if g.is_directed() {
        return Err(Error::Directed(what));
    }
    if !is_connected(g) {
        return Err(Error::Disconnected(what));
    }
    Ok(())
}

/// Applies `f` to the distance vector of every source, in parallel.
fn per_source<F>(g: &Graph, f: F) -> Vec<f64>
where
    F: Fn(&mut dyn Iterator<Item = f64>) -> f64 + Sync,
{
    let n = g.node_count();
    if g.is_weighted() {
        (0..n)
            .into_par_iter()
            .map(|s| {
                let d = distances(g, s).expect("source in range");
                f(&mut d.into_iter())
            })
            .collect()
    } else {
        let csr = Csr::forward(g);
        (0..n)
            .into_par_iter()
            .map_init(
                || Bfs::new(n),
                |bfs, s| {
                    bfs.run(&csr, s);
                    let dist = &bfs.dist;
                    f(&mut bfs.queue.iter().map(|&v| dist[v as usize] as f64))
                },
            )
            .collect()
    }
}

/// Closeness `(n - 1) / Σ_w d(v, w)`. Requires a connected undirected graph;
/// a single vertex scores 0.
pub fn closeness(g: &Graph) -> Result<CentralityResult> {
    check_connected_undirected(g, "closeness")?;
    let n = g.node_count();
    let scores = per_source(g, |d| {
        let sum: f64 = d.filter(|x| x.is_finite()).sum();
        if sum > 0.0 {
            (n - 1) as f64 / sum
        } else {
            0.0
        }
    });
    Ok(CentralityResult::new(Measure::Closeness, true, scores))
}

/// Harmonic closeness `Σ_{w≠v} 1 / d(v, w)`; unreachable vertices contribute
/// nothing. With `normalized`, scores are divided by `n - 1`.
pub fn harmonic(g: &Graph, normalized: bool) -> CentralityResult {
    let n = g.node_count();
    let scale = if normalized && n > 1 { 1.0 / (n - 1) as f64 } else { 1.0 };
    let scores = per_source(g, |d| {
        d.filter(|&x| x > 0.0 && x.is_finite()).map(|x| 1.0 / x).sum::<f64>() * scale
    });
    CentralityResult::new(Measure::Harmonic, normalized, scores)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopKCloseness {
    /// `(vertex, closeness)` by descending closeness, ties by ascending id.
    pub top: Vec<(Node, f64)>,
    /// Searches that ran to completion.
    pub completed: usize,
    /// Searches cut off (or skipped) because their bound ruled them out.
    pub pruned: usize,
}

/// Candidate key: smaller distance sum is better, ties by smaller id.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Key(f64, Node);

impl Eq for Key {}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then(self.1.cmp(&other.1))
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The `k` vertices of highest closeness with exact scores.
///
/// Vertices are processed by decreasing degree. Each search maintains a lower
/// bound on the distance sum (visited distances plus the next level for every
/// unvisited vertex) and stops as soon as the bound shows the vertex cannot
/// displace the current k-th best.
pub fn top_k_closeness(g: &Graph, k: usize) -> Result<TopKCloseness> {
    check_connected_undirected(g, "top-k closeness")?;
    let n = g.node_count();
    if k == 0 || k > n {
        return Err(Error::param(format!("k must lie in 1..={n}, got {k}")));
    }
    let mut order: Vec<Node> = (0..n).collect();
    order.sort_by_key(|&u| (std::cmp::Reverse(g.degree(u)), u));

    let mut best: BinaryHeap<Key> = BinaryHeap::with_capacity(k + 1);
    let mut completed = 0;
    let mut pruned = 0;
    let csr = Csr::forward(g);
    let mut bfs = Bfs::new(n);

    for (idx, &v) in order.iter().enumerate() {
        let worst = if best.len() == k { best.peek().copied() } else { None };
        let admits = |bound: f64| worst.map_or(true, |w| Key(bound, v) < w);
        let d = g.degree(v) as f64;
        if !g.is_weighted() && !admits(d + 2.0 * (n as f64 - 1.0 - d)) {
            // Later vertices have no larger degree and a larger id on ties.
            pruned += n - idx;
            break;
        }
        let sum = if g.is_weighted() {
            dijkstra_sum(g, v, &admits)
        } else {
            bfs_sum(&csr, &mut bfs, v, &admits)
        };
        match sum {
            Some(s) => {
                completed += 1;
                if admits(s) {
                    best.push(Key(s, v));
                    if best.len() > k {
                        best.pop();
                    }
                }
            }
            None => pruned += 1,
        }
    }

    let mut top: Vec<Key> = best.into_vec();
    top.sort();
    let top = top
        .into_iter()
        .map(|Key(s, v)| (v, if s > 0.0 { (n - 1) as f64 / s } else { 0.0 }))
        .collect();
    Ok(TopKCloseness {
        top,
        completed,
        pruned,
    })
}

fn bfs_sum(csr: &Csr, bfs: &mut Bfs, s: Node, admits: &dyn Fn(f64) -> bool) -> Option<f64> {
    let n = csr.node_count();
    bfs.reset();
    bfs.dist[s] = 0;
    bfs.queue.push(s as u32);
    let (mut head, mut level_end, mut level) = (0, 1, 0u32);
    let mut sum = 0u64;
    while head < bfs.queue.len() {
        while head < level_end {
            let u = bfs.queue[head] as usize;
            head += 1;
            for &w in csr.neighbors(u) {
                if bfs.dist[w as usize] == UNSEEN {
                    bfs.dist[w as usize] = level + 1;
                    bfs.queue.push(w);
                }
            }
        }
        let next = bfs.queue.len() - level_end;
        sum += (level as u64 + 1) * next as u64;
        let rest = n - bfs.queue.len();
        if rest > 0 && !admits(sum as f64 + (level as f64 + 2.0) * rest as f64) {
            return None;
        }
        level += 1;
        level_end = bfs.queue.len();
    }
    Some(sum as f64)
}

fn dijkstra_sum(g: &Graph, s: Node, admits: &dyn Fn(f64) -> bool) -> Option<f64> {
    let n = g.node_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::from([HeapItem { dist: 0.0, node: s }]);
    dist[s] = 0.0;
    let (mut sum, mut count) = (0.0, 0usize);
    while let Some(HeapItem { dist: d, node: u }) = heap.pop() {
        if settled[u] {
            continue;
        }
        settled[u] = true;
        sum += d;
        count += 1;
        if count < n && !admits(sum + d * (n - count) as f64) {
            return None;
        }
        for a in g.adjacency(u) {
            let alt = d + a.weight;
            if alt < dist[a.node] {
                dist[a.node] = alt;
                heap.push(HeapItem {
                    dist: alt,
                    node: a.node,
                });
            }
        }
    }
    // Same summation order as the full closeness pass.
    Some(dist.iter().sum())
}
