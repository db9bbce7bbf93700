// SPDX-License-Identifier: Apache-2.0

//! Closeness and harmonic closeness estimated from a random sample of
//! sources: for a uniform source `s`, `E[f(d(v, s))] = Σ_w f(d(v, w)) / n`.

use std::collections::BinaryHeap;

use rand::Rng;
use rayon::prelude::*;

use super::{ApproxParams, CentralityResult, Measure};
use crate::error::{Error, Result};
use crate::graph::{Graph, Node};
use crate::random::{keyed, CLOSENESS};
use crate::traversal::{is_connected, Bfs, Csr, HeapItem, UNSEEN};

const SOURCE_CHUNK: usize = 32;
const CHUNK_BATCH: usize = 16;

/// Sources needed for absolute error `epsilon` on normalized harmonic
/// closeness with probability `1 - delta`. Each per-source term lies in
/// [0, 1]; the estimate is rescaled by `n / (n - 1)`, so the Hoeffding
/// target shrinks by `(n - 1) / n`.
pub fn harmonic_sample_size(n: usize, epsilon: f64, delta: f64) -> usize {
    if n < 2 {
        return 0;
    }
    let eps = epsilon * (n - 1) as f64 / n as f64;
    ((2.0 * n as f64 / delta).ln() / (2.0 * eps * eps)).ceil() as usize
}

struct Searcher<'a> {
    csr: &'a Csr,
    weighted: bool,
    bfs: Bfs,
    dist: Vec<f64>,
    reached: Vec<Node>,
    heap: BinaryHeap<HeapItem>,
}

impl<'a> Searcher<'a> {
    fn new(csr: &'a Csr, weighted: bool) -> Self {
        let n = csr.node_count();
        Searcher {
            csr,
            weighted,
            bfs: Bfs::new(n),
            dist: vec![f64::INFINITY; n],
            reached: Vec::new(),
            heap: BinaryHeap::new(),
        }
    }

    /// Adds `f(d)` to `acc[v]` for every vertex reached from `s`.
    fn accumulate(&mut self, s: Node, f: &dyn Fn(f64) -> f64, acc: &mut [f64]) {
        if !self.weighted {
            self.bfs.run(self.csr, s);
            for &v in &self.bfs.queue {
                let d = self.bfs.dist[v as usize];
                debug_assert_ne!(d, UNSEEN);
                acc[v as usize] += f(d as f64);
            }
            return;
        }
        for &v in &self.reached {
            self.dist[v] = f64::INFINITY;
        }
        self.reached.clear();
        self.dist[s] = 0.0;
        self.heap.push(HeapItem { dist: 0.0, node: s });
        while let Some(HeapItem { dist: d, node: u }) = self.heap.pop() {
            if d > self.dist[u] {
                continue;
            }
            self.reached.push(u);
            acc[u] += f(d);
            for (&w, &c) in self.csr.neighbors(u).iter().zip(self.csr.weights(u)) {
                let alt = d + c;
                if alt < self.dist[w as usize] {
                    self.dist[w as usize] = alt;
                    self.heap.push(HeapItem { dist: alt, node: w as usize });
                }
            }
        }
    }
}

/// Mean of `f(d(v, s))` over the sampled sources, for every `v`. Sources are
/// summed in fixed chunks, so the result does not depend on the thread count.
fn sampled_means(g: &Graph, params: &ApproxParams, samples: usize, f: &(dyn Fn(f64) -> f64 + Sync)) -> Vec<f64> {
    let n = g.node_count();
    let mut r = keyed(params.seed, CLOSENESS);
    let sources: Vec<Node> = (0..samples).map(|_| r.gen_range(0..n)).collect();
    // d(v, s) for all v is a search from s along reversed arcs.
    let csr = Csr::backward(g);
    let chunks = samples.div_ceil(SOURCE_CHUNK);
    let mut total = vec![0.0; n];
    for batch in (0..chunks).step_by(CHUNK_BATCH) {
        let parts: Vec<Vec<f64>> = (batch..chunks.min(batch + CHUNK_BATCH))
            .into_par_iter()
            .map_init(
                || Searcher::new(&csr, g.is_weighted()),
                |search, c| {
                    let mut acc = vec![0.0; n];
                    for &s in &sources[c * SOURCE_CHUNK..samples.min((c + 1) * SOURCE_CHUNK)] {
                        search.accumulate(s, f, &mut acc);
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
    let k = samples as f64;
    total.iter_mut().for_each(|x| *x /= k);
    total
}

/// Normalized harmonic closeness estimated from
/// [`harmonic_sample_size`] uniformly drawn sources.
pub fn harmonic_approx(g: &Graph, params: &ApproxParams) -> Result<CentralityResult> {
    params.validate()?;
    let n = g.node_count();
    if n < 2 {
        return Ok(CentralityResult::new(Measure::Harmonic, true, vec![0.0; n]));
    }
    let samples = harmonic_sample_size(n, params.epsilon, params.delta);
    let inv = |d: f64| if d > 0.0 { 1.0 / d } else { 0.0 };
    let scale = n as f64 / (n - 1) as f64;
    let scores = sampled_means(g, params, samples, &inv).into_iter().map(|x| x * scale).collect();
    let mut result = CentralityResult::new(Measure::Harmonic, true, scores);
    result.samples = Some(samples);
    Ok(result)
}

/// Closeness `(n - 1) / Σ_w d(v, w)` with the distance sum estimated as `n`
/// times the mean distance to the sampled sources. Uses the same number of
/// sources as [`harmonic_approx`]; unlike the harmonic estimate there is no
/// absolute error guarantee on the reciprocal. Connected undirected graphs
/// only.
pub fn closeness_approx(g: &Graph, params: &ApproxParams) -> Result<CentralityResult> {
    params.validate()?;
    if g.is_directed() {
        return Err(Error::Directed("closeness"));
    }
    if !is_connected(g) {
        return Err(Error::Disconnected("closeness"));
    }
    let n = g.node_count();
    if n < 2 {
        return Ok(CentralityResult::new(Measure::Closeness, true, vec![0.0; n]));
    }
    let samples = harmonic_sample_size(n, params.epsilon, params.delta);
    let means = sampled_means(g, params, samples, &|d| d);
    let scores = means
        .into_iter()
        .map(|m| if m > 0.0 { (n - 1) as f64 / (n as f64 * m) } else { 0.0 })
        .collect();
    let mut result = CentralityResult::new(Measure::Closeness, true, scores);
    result.samples = Some(samples);
    Ok(result)
}
