// SPDX-License-Identifier: Apache-2.0

//! Centrality of vertex groups: group closeness, group harmonic closeness,
//! group degree and GED-Walk, with greedy and local-search maximizers.

mod gedwalk;

use std::collections::{BinaryHeap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Node};
use crate::traversal::{check_vertex, is_connected, multi_source_distances, HeapItem};

pub use gedwalk::{ged_walk_eval, ged_walk_greedy, ged_walk_greedy_eager, GedParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupMeasure {
    Closeness,
    Harmonic,
    Degree,
    GedWalk,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VertexGroup {
    /// Members in the order they were chosen.
    pub members: Vec<Node>,
    pub score: f64,
    pub measure: GroupMeasure,
    /// Walk truncation length (GED-Walk only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub walk_length: Option<usize>,
    /// Marginal gain of each pick, for the greedy maximizers.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gains: Vec<f64>,
}

impl VertexGroup {
    pub fn sorted_members(&self) -> Vec<Node> {
        let mut m = self.members.clone();
        m.sort_unstable();
        m
    }
}

pub(crate) fn check_group(g: &Graph, s: &[Node], allow_empty: bool) -> Result<()> {
    if s.is_empty() && !allow_empty {
        return Err(Error::param("group must not be empty"));
    }
    let mut seen = vec![false; g.node_count()];
    for &v in s {
        check_vertex(g, v)?;
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::param(format!("vertex {v} listed twice in group")));
        }
    }
    Ok(())
}

pub(crate) fn check_budget(g: &Graph, k: usize, strict: bool) -> Result<()> {
    let n = g.node_count();
    let ok = k >= 1 && if strict { k < n } else { k <= n };
    if ok {
        Ok(())
    } else {
        let bound = if strict { format!("< {n}") } else { format!("<= {n}") };
        Err(Error::param(format!("group size k must be >= 1 and {bound}, got {k}")))
    }
}

/// `d(S, v) = min_{u ∈ S} d(u, v)`.
pub fn group_distance(g: &Graph, s: &[Node], v: Node) -> Result<f64> {
    check_vertex(g, v)?;
    Ok(group_distances(g, s)?[v])
}

/// `d(S, ·)` for every vertex, by one multi-source search.
pub fn group_distances(g: &Graph, s: &[Node]) -> Result<Vec<f64>> {
    check_group(g, s, false)?;
    multi_source_distances(g, s)
}

fn check_connected(g: &Graph, what: &'static str) -> Result<()> {
    if g.is_directed() {
        return Err(Error::Directed(what));
    }
    if !is_connected(g) {
        return Err(Error::Disconnected(what));
    }
    Ok(())
}

/// `(n - |S|) / Σ_{v ∉ S} d(S, v)`; defined as 0 when `S = V`.
pub fn group_closeness_eval(g: &Graph, s: &[Node]) -> Result<f64> {
    check_connected(g, "group closeness")?;
    let d = group_distances(g, s)?;
    Ok(closeness_from_sum(g.node_count() - s.len(), d.iter().sum()))
}

fn closeness_from_sum(outside: usize, sum: f64) -> f64 {
    if outside == 0 || sum == 0.0 {
        0.0
    } else {
        outside as f64 / sum
    }
}

/// `Σ_{u ∉ S} 1 / d(S, u)`; unreachable vertices contribute 0.
pub fn group_harmonic_eval(g: &Graph, s: &[Node]) -> Result<f64> {
    let d = group_distances(g, s)?;
    Ok(d.iter().filter(|&&x| x > 0.0).map(|x| 1.0 / x).sum())
}

/// `|N(S) \ S|` (out-neighbors on directed graphs).
pub fn group_degree_eval(g: &Graph, s: &[Node]) -> Result<usize> {
    check_group(g, s, true)?;
    let mut covered = vec![false; g.node_count()];
    for &u in s {
        covered[u] = true;
    }
    let mut count = 0;
    for &u in s {
        for v in g.neighbors(u) {
            if !std::mem::replace(&mut covered[v], true) {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// True if `a` beats `b` by more than floating-point noise.
pub(crate) fn clearly_greater(a: f64, b: f64) -> bool {
    a > b + 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// Index of the best value; near-ties go to the earliest entry.
fn best_of(values: &[(Node, f64)]) -> Option<(Node, f64)> {
    let mut best: Option<(Node, f64)> = None;
    for &(v, x) in values {
        if best.map_or(true, |(_, b)| clearly_greater(x, b)) {
            best = Some((v, x));
        }
    }
    best
}

/// Search from a candidate vertex restricted to vertices it would move
/// closer to the current group. If `d(v, x) < d(S, x)` then every vertex on a
/// shortest `v`–`x` path is improved as well, so the pruned search reaches
/// exactly the improved set.
struct Improver<'a> {
    g: &'a Graph,
    dist: Vec<f64>,
    touched: Vec<Node>,
    queue: VecDeque<Node>,
    heap: BinaryHeap<HeapItem>,
}

impl<'a> Improver<'a> {
    fn new(g: &'a Graph) -> Self {
        Improver {
            g,
            dist: vec![f64::INFINITY; g.node_count()],
            touched: Vec::new(),
            queue: VecDeque::new(),
            heap: BinaryHeap::new(),
        }
    }

    /// Calls `visit(x, d(v, x), d(S, x))` for every vertex `x` with
    /// `d(v, x) < d(S, x)`, including `v` itself.
    fn run(&mut self, v: Node, group_dist: &[f64], mut visit: impl FnMut(Node, f64, f64)) {
        for &x in &self.touched {
            self.dist[x] = f64::INFINITY;
        }
        self.touched.clear();
        if group_dist[v] <= 0.0 {
            return;
        }
        self.dist[v] = 0.0;
        self.touched.push(v);
        if !self.g.is_weighted() {
            self.queue.push_back(v);
            while let Some(u) = self.queue.pop_front() {
                let du = self.dist[u];
                visit(u, du, group_dist[u]);
                for x in self.g.neighbors(u) {
                    let nd = du + 1.0;
                    if nd < group_dist[x] && nd < self.dist[x] {
                        self.dist[x] = nd;
                        self.touched.push(x);
                        self.queue.push_back(x);
                    }
                }
            }
        } else {
            self.heap.push(HeapItem { dist: 0.0, node: v });
            while let Some(HeapItem { dist: du, node: u }) = self.heap.pop() {
                if du > self.dist[u] {
                    continue;
                }
                visit(u, du, group_dist[u]);
                for a in self.g.adjacency(u) {
                    let nd = du + a.weight;
                    if nd < group_dist[a.node] && nd < self.dist[a.node] {
                        if self.dist[a.node].is_infinite() {
                            self.touched.push(a.node);
                        }
                        self.dist[a.node] = nd;
                        self.heap.push(HeapItem {
                            dist: nd,
                            node: a.node,
                        });
                    }
                }
            }
        }
    }
}

/// Evaluates `value(v)` for every candidate in parallel.
fn score_candidates<F>(g: &Graph, candidates: &[Node], value: F) -> Vec<(Node, f64)>
where
    F: Fn(&mut Improver<'_>, Node) -> f64 + Sync,
{
    candidates
        .par_iter()
        .map_init(|| Improver::new(g), |imp, &v| (v, value(imp, v)))
        .collect()
}

/// Distance sum after adding `v` to a group with distances `d`
/// (`d` all infinite for the empty group).
fn sum_with(imp: &mut Improver<'_>, v: Node, d: &[f64], current: f64) -> f64 {
    let mut total = 0.0;
    let mut reduction = 0.0;
    imp.run(v, d, |_, new, old| {
        total += new;
        if old.is_finite() {
            reduction += old - new;
        }
    });
    if current.is_finite() {
        current - reduction
    } else {
        total
    }
}

fn merge_distances(d: &mut [f64], imp: &mut Improver<'_>, v: Node) {
    let mut updates = Vec::new();
    imp.run(v, d, |x, new, _| updates.push((x, new)));
    for (x, new) in updates {
        d[x] = new;
    }
}

/// Greedy group closeness: each round adds the vertex that minimizes the
/// group's distance sum, evaluated with pruned searches against the current
/// `d(S, ·)`. Ties go to the smallest id.
pub fn group_closeness_greedy(g: &Graph, k: usize) -> Result<VertexGroup> {
    check_connected(g, "group closeness")?;
    check_budget(g, k, true)?;
    let n = g.node_count();
    let mut d = vec![f64::INFINITY; n];
    let mut current = f64::INFINITY;
    let mut members = Vec::with_capacity(k);
    let mut gains = Vec::with_capacity(k);
    let mut score = 0.0;
    let mut imp = Improver::new(g);
    for _ in 0..k {
        let candidates: Vec<Node> = (0..n).filter(|&v| d[v] > 0.0).collect();
        let sums = score_candidates(g, &candidates, |imp, v| -sum_with(imp, v, &d, current));
        let (v, neg_sum) = best_of(&sums).expect("k < n leaves a candidate");
        merge_distances(&mut d, &mut imp, v);
        current = -neg_sum;
        members.push(v);
        let next = closeness_from_sum(n - members.len(), current);
        gains.push(next - score);
        score = next;
    }
    Ok(VertexGroup {
        score: group_closeness_eval(g, &members)?,
        members,
        measure: GroupMeasure::Closeness,
        walk_length: None,
        gains,
    })
}

/// Local search for group closeness. Starts from `initial` (default: the
/// `k` highest-degree vertices, ties by id) and applies the best improving
/// single swap until none strictly lowers the distance sum.
pub fn group_closeness_local_search(
    g: &Graph,
    k: usize,
    initial: Option<&[Node]>,
) -> Result<VertexGroup> {
    check_connected(g, "group closeness")?;
    check_budget(g, k, true)?;
    let n = g.node_count();
    let mut members: Vec<Node> = match initial {
        Some(s) => {
            check_group(g, s, false)?;
            if s.len() != k {
                return Err(Error::param(format!(
                    "initial group has {} vertices, expected {k}",
                    s.len()
                )));
            }
            s.to_vec()
        }
        None => {
            let mut order: Vec<Node> = (0..n).collect();
            order.sort_by_key(|&u| (std::cmp::Reverse(g.degree(u)), u));
            order.truncate(k);
            order
        }
    };
    let mut current: f64 = multi_source_distances(g, &members)?.iter().sum();
    loop {
        let mut best: Option<(f64, usize, Node)> = None;
        for i in 0..members.len() {
            let rest: Vec<Node> = members.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &u)| u).collect();
            let d = if rest.is_empty() {
                vec![f64::INFINITY; n]
            } else {
                multi_source_distances(g, &rest)?
            };
            let base = if rest.is_empty() { f64::INFINITY } else { d.iter().sum() };
            let candidates: Vec<Node> = (0..n).filter(|v| d[*v] > 0.0 && *v != members[i]).collect();
            let sums = score_candidates(g, &candidates, |imp, v| -sum_with(imp, v, &d, base));
            if let Some((v, neg)) = best_of(&sums) {
                let sum = -neg;
                if clearly_greater(current, sum) && best.map_or(true, |(b, _, _)| clearly_greater(b, sum)) {
                    best = Some((sum, i, v));
                }
            }
        }
        match best {
            Some((sum, i, v)) => {
                members[i] = v;
                current = sum;
            }
            None => break,
        }
    }
    Ok(VertexGroup {
        score: group_closeness_eval(g, &members)?,
        members,
        measure: GroupMeasure::Closeness,
        walk_length: None,
        gains: Vec::new(),
    })
}

/// Greedy group harmonic closeness; disconnected graphs are fine.
pub fn group_harmonic_greedy(g: &Graph, k: usize) -> Result<VertexGroup> {
    check_budget(g, k, false)?;
    let n = g.node_count();
    let mut d = vec![f64::INFINITY; n];
    let mut members = Vec::with_capacity(k);
    let mut gains = Vec::with_capacity(k);
    let mut imp = Improver::new(g);
    for _ in 0..k {
        let candidates: Vec<Node> = (0..n).filter(|&v| d[v] > 0.0).collect();
        let values = score_candidates(g, &candidates, |imp, v| {
            let mut gain = 0.0;
            imp.run(v, &d, |x, new, old| {
                gain += if x == v { -1.0 / old } else { 1.0 / new - 1.0 / old };
            });
            gain
        });
        let (v, gain) = best_of(&values).expect("k <= n leaves a candidate");
        merge_distances(&mut d, &mut imp, v);
        members.push(v);
        gains.push(gain);
    }
    Ok(VertexGroup {
        score: group_harmonic_eval(g, &members)?,
        members,
        measure: GroupMeasure::Harmonic,
        walk_length: None,
        gains,
    })
}

/// Greedy maximum coverage of `|N(S) \ S|`. Equivalent to covering closed
/// neighborhoods `N[S]` and subtracting `|S|`, so marginal gains never
/// increase along the sequence.
pub fn group_degree_greedy(g: &Graph, k: usize) -> Result<VertexGroup> {
    check_budget(g, k, false)?;
    let n = g.node_count();
    let mut covered = vec![false; n];
    let mut in_group = vec![false; n];
    let mut members = Vec::with_capacity(k);
    let mut gains = Vec::with_capacity(k);
    for _ in 0..k {
        let mut best: Option<(i64, Node)> = None;
        for v in (0..n).filter(|&v| !in_group[v]) {
            let fresh = g.neighbors(v).filter(|&u| !covered[u]).count() as i64
                + i64::from(!covered[v]);
            let gain = fresh - 1;
            if best.map_or(true, |(b, _)| gain > b) {
                best = Some((gain, v));
            }
        }
        let (gain, v) = best.expect("k <= n leaves a candidate");
        in_group[v] = true;
        covered[v] = true;
        for u in g.neighbors(v) {
            covered[u] = true;
        }
        members.push(v);
        gains.push(gain as f64);
    }
    Ok(VertexGroup {
        score: group_degree_eval(g, &members)? as f64,
        members,
        measure: GroupMeasure::Degree,
        walk_length: None,
        gains,
    })
}
