// SPDX-License-Identifier: Apache-2.0

use std::collections::BinaryHeap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ApproxParams, CentralityResult, Measure};
use crate::error::{Error, Result};
use crate::graph::{Graph, Node};
use crate::random::{stream, NkRng};
use crate::traversal::{check_vertex, is_connected, Csr, HeapItem, UNSEEN};

/// Sources per work unit. Partial sums are formed per unit and added in unit
/// order, so the result does not depend on the number of workers.
const SOURCE_CHUNK: usize = 64;
/// Units reduced together; bounds the memory held by partial sums.
const CHUNK_BATCH: usize = 16;
const SAMPLE_CHUNK: usize = 1024;

/// Single-source dependency accumulation (Brandes).
struct Brandes<'a> {
    fwd: &'a Csr,
    bwd: &'a Csr,
    weighted: bool,
    dist: Vec<f64>,
    sigma: Vec<f64>,
    delta: Vec<f64>,
    settled: Vec<bool>,
    order: Vec<u32>,
    heap: BinaryHeap<HeapItem>,
}

impl<'a> Brandes<'a> {
    fn new(fwd: &'a Csr, bwd: &'a Csr, weighted: bool) -> Self {
        let n = fwd.node_count();
        Brandes {
            fwd,
            bwd,
            weighted,
            dist: vec![f64::INFINITY; n],
            sigma: vec![0.0; n],
            delta: vec![0.0; n],
            settled: vec![false; n],
            order: Vec::with_capacity(n),
            heap: BinaryHeap::new(),
        }
    }

    /// Adds the dependencies of source `s` on every other vertex to `acc`.
    fn run(&mut self, s: usize, acc: &mut [f64]) {
        for &v in &self.order {
            let v = v as usize;
            self.dist[v] = f64::INFINITY;
            self.sigma[v] = 0.0;
            self.delta[v] = 0.0;
            self.settled[v] = false;
        }
        self.order.clear();
        self.dist[s] = 0.0;
        self.sigma[s] = 1.0;
        if self.weighted {
            self.dijkstra(s);
        } else {
            self.bfs(s);
        }
        for i in (0..self.order.len()).rev() {
            let w = self.order[i] as usize;
            let coeff = (1.0 + self.delta[w]) / self.sigma[w];
            let preds = self.bwd.neighbors(w);
            for (j, &v) in preds.iter().enumerate() {
                let v = v as usize;
                let step = if self.weighted { self.bwd.weights(w)[j] } else { 1.0 };
                if self.dist[v] + step == self.dist[w] {
                    self.delta[v] += self.sigma[v] * coeff;
                }
            }
            if w != s {
                acc[w] += self.delta[w];
            }
        }
    }

    fn bfs(&mut self, s: usize) {
        self.order.push(s as u32);
        let mut head = 0;
        while head < self.order.len() {
            let u = self.order[head] as usize;
            head += 1;
            let next = self.dist[u] + 1.0;
            for &v in self.fwd.neighbors(u) {
                let v = v as usize;
                if self.dist[v].is_infinite() {
                    self.dist[v] = next;
                    self.order.push(v as u32);
                }
                if self.dist[v] == next {
                    self.sigma[v] += self.sigma[u];
                }
            }
        }
    }

    fn dijkstra(&mut self, s: usize) {
        self.heap.push(HeapItem { dist: 0.0, node: s });
        while let Some(HeapItem { dist: d, node: u }) = self.heap.pop() {
            if self.settled[u] {
                continue;
            }
            self.settled[u] = true;
            self.order.push(u as u32);
            let (nbrs, ws) = (self.fwd.neighbors(u), self.fwd.weights(u));
            for (&v, &w) in nbrs.iter().zip(ws) {
                let v = v as usize;
                let alt = d + w;
                if alt < self.dist[v] {
                    self.dist[v] = alt;
                    self.sigma[v] = self.sigma[u];
                    self.heap.push(HeapItem { dist: alt, node: v });
                } else if alt == self.dist[v] && !self.settled[v] {
                    self.sigma[v] += self.sigma[u];
                }
            }
        }
    }
}

/// Raw pair dependencies summed over ordered source/target pairs.
fn raw_betweenness(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let fwd = Csr::forward(g);
    let bwd = Csr::backward(g);
    let chunks = n.div_ceil(SOURCE_CHUNK);
    let mut total = vec![0.0; n];
    for batch in (0..chunks).step_by(CHUNK_BATCH) {
        let parts: Vec<Vec<f64>> = (batch..chunks.min(batch + CHUNK_BATCH))
            .into_par_iter()
            .map_init(
                || Brandes::new(&fwd, &bwd, g.is_weighted()),
                |b, c| {
                    let mut acc = vec![0.0; n];
                    for s in c * SOURCE_CHUNK..n.min((c + 1) * SOURCE_CHUNK) {
                        b.run(s, &mut acc);
                    }
                    acc
                },
            )
            .collect();
        for part in parts {
            for (t, p) in total.iter_mut().zip(part) {
                *t += p;
            }
        }
    }
    total
}

/// Normalization constant: the number of pairs a vertex can lie between.
fn pair_count(n: usize, directed: bool) -> f64 {
    let pairs = (n.saturating_sub(1) * n.saturating_sub(2)) as f64;
    if directed {
        pairs
    } else {
        pairs / 2.0
    }
}

/// Exact betweenness by Brandes' dependency accumulation. Undirected scores
/// count unordered pairs; `normalized` divides by the number of pairs not
/// involving the vertex.
pub fn betweenness_exact(g: &Graph, normalized: bool) -> CentralityResult {
    let n = g.node_count();
    let mut scores = raw_betweenness(g);
    let mut scale = if g.is_directed() { 1.0 } else { 0.5 };
    if normalized {
        let pairs = pair_count(n, g.is_directed());
        scale = if pairs > 0.0 { scale / pairs } else { 0.0 };
    }
    scores.iter_mut().for_each(|x| *x *= scale);
    CentralityResult::new(Measure::Betweenness, normalized, scores)
}

/// Samples needed for absolute error `epsilon` on normalized betweenness with
/// probability `1 - delta` (Hoeffding plus a union bound over vertices).
///
/// Each sample is an ordered pair of distinct vertices, so the per-sample
/// indicator estimates `b(v)·(n-2)/n`; the error target is scaled to match.
pub fn approx_sample_size(n: usize, epsilon: f64, delta: f64) -> usize {
    if n < 3 {
        return 0;
    }
    let eps = epsilon * (n - 2) as f64 / n as f64;
    ((2.0 * n as f64 / delta).ln() / (2.0 * eps * eps)).ceil() as usize
}

/// Normalized betweenness estimated from uniformly sampled vertex pairs, one
/// uniformly random shortest path per pair. Unweighted graphs use a balanced
/// bidirectional BFS; weighted graphs a Dijkstra search stopped at the target.
pub fn betweenness_approx(g: &Graph, params: &ApproxParams) -> Result<CentralityResult> {
    params.validate()?;
    let n = g.node_count();
    let samples = approx_sample_size(n, params.epsilon, params.delta);
    let mut result = CentralityResult::new(Measure::BetweennessApprox, true, vec![0.0; n]);
    result.samples = Some(samples);
    if samples == 0 {
        return Ok(result);
    }
    let fwd = Csr::forward(g);
    let bwd = Csr::backward(g);
    let chunks = samples.div_ceil(SAMPLE_CHUNK);
    let counts = (0..chunks)
        .into_par_iter()
        .map_init(
            || PathSampler::new(&fwd, &bwd, g.is_weighted()),
            |sampler, c| {
                let mut rng = stream(params.seed, crate::random::BETWEENNESS, c as u64);
                let mut counts = vec![0u32; n];
                for _ in c * SAMPLE_CHUNK..samples.min((c + 1) * SAMPLE_CHUNK) {
                    let s = rng.gen_range(0..n);
                    let mut t = rng.gen_range(0..n - 1);
                    if t >= s {
                        t += 1;
                    }
                    sampler.sample(s, t, &mut rng);
                    for &v in &sampler.path {
                        counts[v as usize] += 1;
                    }
                }
                counts
            },
        )
        .reduce(
            || vec![0u32; n],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let scale = n as f64 / ((n - 2) as f64 * samples as f64);
    result.scores = counts.into_iter().map(|c| c as f64 * scale).collect();
    Ok(result)
}

/// Draws one uniformly random shortest path between two vertices.
struct PathSampler<'a> {
    fwd: &'a Csr,
    bwd: &'a Csr,
    weighted: bool,
    // Bidirectional BFS state: levels and path counts from each side.
    df: Vec<u32>,
    db: Vec<u32>,
    sf: Vec<f64>,
    sb: Vec<f64>,
    seen_f: Vec<u32>,
    seen_b: Vec<u32>,
    // Dijkstra state for weighted graphs.
    dist: Vec<f64>,
    sigma: Vec<f64>,
    settled: Vec<bool>,
    touched: Vec<u32>,
    heap: BinaryHeap<HeapItem>,
    /// Interior vertices of the last sampled path.
    path: Vec<u32>,
}

impl<'a> PathSampler<'a> {
    fn new(fwd: &'a Csr, bwd: &'a Csr, weighted: bool) -> Self {
        let n = fwd.node_count();
        let (bn, wn) = if weighted { (0, n) } else { (n, 0) };
        PathSampler {
            fwd,
            bwd,
            weighted,
            df: vec![UNSEEN; bn],
            db: vec![UNSEEN; bn],
            sf: vec![0.0; bn],
            sb: vec![0.0; bn],
            seen_f: Vec::new(),
            seen_b: Vec::new(),
            dist: vec![f64::INFINITY; wn],
            sigma: vec![0.0; wn],
            settled: vec![false; wn],
            touched: Vec::new(),
            heap: BinaryHeap::new(),
            path: Vec::new(),
        }
    }

    fn sample(&mut self, s: usize, t: usize, rng: &mut NkRng) {
        self.path.clear();
        if self.weighted {
            self.sample_weighted(s, t, rng);
        } else {
            self.sample_unweighted(s, t, rng);
        }
    }

    fn sample_unweighted(&mut self, s: usize, t: usize, rng: &mut NkRng) {
        for &v in &self.seen_f {
            self.df[v as usize] = UNSEEN;
            self.sf[v as usize] = 0.0;
        }
        for &v in &self.seen_b {
            self.db[v as usize] = UNSEEN;
            self.sb[v as usize] = 0.0;
        }
        self.seen_f.clear();
        self.seen_b.clear();
        self.df[s] = 0;
        self.sf[s] = 1.0;
        self.seen_f.push(s as u32);
        self.db[t] = 0;
        self.sb[t] = 1.0;
        self.seen_b.push(t as u32);

        let (mut start_f, mut start_b) = (0, 0);
        let (mut level_f, mut level_b) = (0u32, 0u32);
        let (meet_start, forward) = loop {
            let front_f = &self.seen_f[start_f..];
            let front_b = &self.seen_b[start_b..];
            if front_f.is_empty() || front_b.is_empty() {
                return;
            }
            let cost_f: usize = front_f.iter().map(|&u| self.fwd.degree(u as usize)).sum();
            let cost_b: usize = front_b.iter().map(|&u| self.bwd.degree(u as usize)).sum();
            let forward = cost_f <= cost_b;
            let (csr, lvl, cnt, other, seen, start, level) = if forward {
                (self.fwd, &mut self.df, &mut self.sf, &self.db, &mut self.seen_f, &mut start_f, &mut level_f)
            } else {
                (self.bwd, &mut self.db, &mut self.sb, &self.df, &mut self.seen_b, &mut start_b, &mut level_b)
            };
            let end = seen.len();
            let next = *level + 1;
            let mut met = false;
            for i in *start..end {
                let u = seen[i] as usize;
                for &v in csr.neighbors(u) {
                    let v = v as usize;
                    if lvl[v] == UNSEEN {
                        lvl[v] = next;
                        seen.push(v as u32);
                        met |= other[v] != UNSEEN;
                    }
                    if lvl[v] == next {
                        cnt[v] += cnt[u];
                    }
                }
            }
            *start = end;
            *level = next;
            if met {
                break (end, forward);
            }
        };

        // Vertices of the level just reached that lie on a shortest path.
        let layer = if forward { &self.seen_f[meet_start..] } else { &self.seen_b[meet_start..] };
        let length = layer
            .iter()
            .filter(|&&v| self.df[v as usize] != UNSEEN && self.db[v as usize] != UNSEEN)
            .map(|&v| self.df[v as usize] + self.db[v as usize])
            .min()
            .expect("meeting vertex exists");
        let weight = |v: u32| -> f64 {
            let v = v as usize;
            if self.df[v] != UNSEEN && self.db[v] != UNSEEN && self.df[v] + self.db[v] == length {
                self.sf[v] * self.sb[v]
            } else {
                0.0
            }
        };
        let total: f64 = layer.iter().map(|&v| weight(v)).sum();
        let mut r = rng.gen::<f64>() * total;
        let mut mid = None;
        for &v in layer {
            let w = weight(v);
            if w > 0.0 {
                mid = Some(v as usize);
                if r < w {
                    break;
                }
                r -= w;
            }
        }
        let mid = mid.expect("meeting vertex exists");
        if mid != s && mid != t {
            self.path.push(mid as u32);
        }
        let mut cur = mid;
        while cur != s {
            cur = pick(self.bwd.neighbors(cur), |u| self.df[u] != UNSEEN && self.df[u] + 1 == self.df[cur], &self.sf, self.sf[cur], rng);
            if cur != s {
                self.path.push(cur as u32);
            }
        }
        let mut cur = mid;
        while cur != t {
            cur = pick(self.fwd.neighbors(cur), |u| self.db[u] != UNSEEN && self.db[u] + 1 == self.db[cur], &self.sb, self.sb[cur], rng);
            if cur != t {
                self.path.push(cur as u32);
            }
        }
    }

    fn sample_weighted(&mut self, s: usize, t: usize, rng: &mut NkRng) {
        for &v in &self.touched {
            let v = v as usize;
            self.dist[v] = f64::INFINITY;
            self.sigma[v] = 0.0;
            self.settled[v] = false;
        }
        self.touched.clear();
        self.heap.clear();
        self.dist[s] = 0.0;
        self.sigma[s] = 1.0;
        self.touched.push(s as u32);
        self.heap.push(HeapItem { dist: 0.0, node: s });
        while let Some(HeapItem { dist: d, node: u }) = self.heap.pop() {
            if self.settled[u] {
                continue;
            }
            self.settled[u] = true;
            if u == t {
                break;
            }
            for (&v, &w) in self.fwd.neighbors(u).iter().zip(self.fwd.weights(u)) {
                let v = v as usize;
                let alt = d + w;
                if alt < self.dist[v] {
                    if self.dist[v].is_infinite() {
                        self.touched.push(v as u32);
                    }
                    self.dist[v] = alt;
                    self.sigma[v] = self.sigma[u];
                    self.heap.push(HeapItem { dist: alt, node: v });
                } else if alt == self.dist[v] && !self.settled[v] {
                    self.sigma[v] += self.sigma[u];
                }
            }
        }
        if !self.settled[t] {
            return;
        }
        let mut cur = t;
        loop {
            let (nbrs, ws) = (self.bwd.neighbors(cur), self.bwd.weights(cur));
            let here = self.dist[cur];
            let is_pred = |j: usize| {
                let u = nbrs[j] as usize;
                self.settled[u] && self.dist[u] + ws[j] == here
            };
            let mut r = rng.gen::<f64>() * self.sigma[cur];
            let mut chosen = None;
            for j in 0..nbrs.len() {
                if is_pred(j) {
                    let u = nbrs[j] as usize;
                    chosen = Some(u);
                    if r < self.sigma[u] {
                        break;
                    }
                    r -= self.sigma[u];
                }
            }
            cur = chosen.expect("reached vertex has a predecessor");
            if cur == s {
                break;
            }
            self.path.push(cur as u32);
        }
    }
}

/// Picks a neighbor satisfying `eligible` with probability proportional to
/// `weight`; rounding leftovers fall to the last eligible neighbor.
fn pick(
    nbrs: &[u32],
    eligible: impl Fn(usize) -> bool,
    weight: &[f64],
    total: f64,
    rng: &mut NkRng,
) -> usize {
    let mut r = rng.gen::<f64>() * total;
    let mut chosen = None;
    for &u in nbrs {
        let u = u as usize;
        if eligible(u) {
            chosen = Some(u);
            if r < weight[u] {
                break;
            }
            r -= weight[u];
        }
    }
    chosen.expect("reached vertex has a predecessor")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Improvement {
    pub target: Node,
    /// Betweenness of the target before any insertion.
    pub initial: f64,
    /// Inserted edges, in the order chosen.
    pub edges: Vec<(Node, Node)>,
    /// Betweenness of the target after each insertion.
    pub trace: Vec<f64>,
}

fn betweenness_of(g: &Graph, v: Node) -> f64 {
    let fwd = Csr::forward(g);
    let mut b = Brandes::new(&fwd, &fwd, g.is_weighted());
    let mut acc = vec![0.0; g.node_count()];
    for s in g.nodes() {
        b.run(s, &mut acc);
    }
    acc[v] / 2.0
}

/// Greedily inserts up to `k` edges incident to `target`, each round choosing
/// the non-neighbor whose new edge maximizes the target's (unnormalized)
/// betweenness; ties go to the smallest id. Stops early once the target is
/// adjacent to every vertex.
pub fn maximize_betweenness(g: &Graph, target: Node, k: usize) -> Result<Improvement> {
    check_vertex(g, target)?;
    if g.is_directed() {
        return Err(Error::Directed("betweenness improvement"));
    }
    if !is_connected(g) {
        return Err(Error::Disconnected("betweenness improvement"));
    }
    if k == 0 {
        return Err(Error::param("budget k must be at least 1"));
    }
    let mut g = g.clone();
    let candidates = |g: &Graph| -> Vec<Node> {
        g.nodes().filter(|&c| c != target && !g.has_edge(target, c)).collect()
    };
    if candidates(&g).is_empty() {
        return Err(Error::param(format!(
            "vertex {target} is already adjacent to every other vertex"
        )));
    }
    let initial = betweenness_of(&g, target);
    let mut edges = Vec::new();
    let mut trace = Vec::new();
    for _ in 0..k {
        let cands = candidates(&g);
        if cands.is_empty() {
            break;
        }
        let scored: Vec<(Node, f64)> = cands
            .par_iter()
            .map(|&c| {
                let mut h = g.clone();
                h.add_weighted_edge(target, c, 1.0).expect("non-edge");
                (c, betweenness_of(&h, target))
            })
            .collect();
        let (best, score) = scored
            .into_iter()
            .reduce(|a, b| if b.1 > a.1 { b } else { a })
            .expect("candidates nonempty");
        g.add_weighted_edge(target, best, 1.0).expect("non-edge");
        edges.push((target, best));
        trace.push(score);
    }
    Ok(Improvement {
        target,
        initial,
        edges,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn small_exact_values() {
        assert_eq!(betweenness_exact(&path(3), false).scores, vec![0.0, 1.0, 0.0]);
        let star = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(betweenness_exact(&star, false).scores[0], 6.0);
        assert_eq!(betweenness_exact(&star, true).scores[0], 1.0);
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(betweenness_exact(&k4, false).scores.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn cycle_splits_paths() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(betweenness_exact(&g, false).scores, vec![0.5; 4]);
        let w = Graph::from_weighted_edges(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)])
            .unwrap();
        assert_eq!(betweenness_exact(&w, false).scores, vec![0.5; 4]);
    }

    #[test]
    fn directed_path() {
        let mut g = Graph::new(3, true, false);
        g.add_edge(0, 1).unwrap();
        g.add_edge(1, 2).unwrap();
        assert_eq!(betweenness_exact(&g, false).scores, vec![0.0, 1.0, 0.0]);
        assert_eq!(betweenness_exact(&g, true).scores, vec![0.0, 0.5, 0.0]);
    }

    #[test]
    fn approx_on_path_is_close() {
        let p = ApproxParams::new(0.1, 0.1, 3);
        let r = betweenness_approx(&path(3), &p).unwrap();
        assert!((r.scores[1] - 1.0).abs() <= 0.1, "{:?}", r.scores);
        assert_eq!(r.scores, betweenness_approx(&path(3), &p).unwrap().scores);
        assert!(betweenness_approx(&path(3), &ApproxParams::new(0.0, 0.1, 0)).is_err());
    }

    #[test]
    fn approx_weighted_matches_unweighted_shape() {
        let w = Graph::from_weighted_edges(3, &[(0, 1, 2.0), (1, 2, 0.5)]).unwrap();
        let r = betweenness_approx(&w, &ApproxParams::new(0.1, 0.1, 5)).unwrap();
        assert!((r.scores[1] - 1.0).abs() <= 0.1);
        assert_eq!(r.scores[0], 0.0);
    }

    #[test]
    fn improvement_on_path() {
        let r = maximize_betweenness(&path(4), 0, 1).unwrap();
        assert_eq!(r.initial, 0.0);
        let mut best = f64::MIN;
        let mut arg = 0;
        for c in [2, 3] {
            let mut h = path(4);
            h.add_edge(0, c).unwrap();
            let b = betweenness_exact(&h, false).scores[0];
            if b > best {
                best = b;
                arg = c;
            }
        }
        assert_eq!(r.edges, vec![(0, arg)]);
        assert_eq!(r.trace, vec![best]);
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(maximize_betweenness(&star, 0, 1).is_err());
    }
}
