// SPDX-License-Identifier: Apache-2.0

//! Multilevel Louvain (PLM): local moving, contraction, recursion and
//! prolongation, with optional refinement on the way back down.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering::Relaxed};

use rand::seq::SliceRandom;
use rayon::prelude::*;

use super::{modularity_with_resolution, Partition};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::random::{self, NkRng};

/// Smallest modularity gain that counts as an improvement.
const MIN_GAIN: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct PlmConfig {
    pub gamma: f64,
    pub refine: bool,
    pub seed: u64,
    /// Cap on local-moving sweeps per move phase.
    pub max_passes: usize,
    /// Move vertices concurrently. Results then depend on scheduling.
    pub parallel: bool,
}

impl Default for PlmConfig {
    fn default() -> Self {
        PlmConfig {
            gamma: 1.0,
            refine: false,
            seed: 0,
            max_passes: 64,
            parallel: false,
        }
    }
}

/// One accepted vertex move, reported in terms of the input graph.
#[derive(Debug, Clone)]
pub struct MoveEvent {
    /// Hierarchy depth; 0 is the input graph.
    pub level: usize,
    pub vertex: usize,
    pub from: usize,
    pub to: usize,
    /// Modularity change predicted by the local delta formula.
    pub delta: f64,
    /// Community label of every input vertex before and after the move.
    pub before: Vec<usize>,
    pub after: Vec<usize>,
}

/// Weighted undirected graph with self-loop weights, one per hierarchy level.
#[derive(Debug, Clone)]
pub(crate) struct Level {
    pub adj: Vec<Vec<(usize, f64)>>,
    pub loops: Vec<f64>,
    total: f64,
}

impl Level {
    pub fn from_graph(g: &Graph) -> Self {
        let adj = g
            .nodes()
            .map(|u| g.adjacency(u).iter().map(|a| (a.node, a.weight)).collect())
            .collect();
        Level {
            adj,
            loops: vec![0.0; g.node_count()],
            total: g.total_weight(),
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    fn volumes(&self) -> Vec<f64> {
        self.adj
            .iter()
            .zip(&self.loops)
            .map(|(list, &l)| list.iter().map(|&(_, w)| w).sum::<f64>() + 2.0 * l)
            .collect()
    }

    /// Contracts each community of `labels` into a single vertex. Returns
    /// the coarse level and the fine-to-coarse vertex map.
    pub fn coarsen(&self, labels: &[usize]) -> (Level, Vec<usize>) {
        let map = Partition::from_assignment(labels.to_vec()).assignment;
        let k = map.iter().max().map_or(0, |&m| m + 1);
        let mut members = vec![Vec::new(); k];
        for (u, &c) in map.iter().enumerate() {
            members[c].push(u);
        }
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); k];
        let mut loops = vec![0.0; k];
        let mut acc = vec![0.0; k];
        let mut touched = Vec::new();
        for c in 0..k {
            for &u in &members[c] {
                loops[c] += self.loops[u];
                for &(v, w) in &self.adj[u] {
                    let d = map[v];
                    if d == c {
                        if u < v {
                            loops[c] += w;
                        }
                    } else if d > c {
                        if acc[d] == 0.0 {
                            touched.push(d);
                        }
                        acc[d] += w;
                    }
                }
            }
            touched.sort_unstable();
            for &d in &touched {
                adj[c].push((d, acc[d]));
                adj[d].push((c, acc[d]));
                acc[d] = 0.0;
            }
            touched.clear();
        }
        let total = self.total;
        (Level { adj, loops, total }, map)
    }

    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::new(self.n(), false, true);
        for (u, list) in self.adj.iter().enumerate() {
            for &(v, w) in list {
                if u < v {
                    g.add_weighted_edge(u, v, w)
                        .expect("coarse edges are unique and positive");
                }
            }
        }
        g
    }
}

pub fn plm(g: &Graph, config: &PlmConfig) -> Result<Partition> {
    run(g, config, None)
}

/// Sequential PLM that reports every accepted move to `observer`.
pub fn plm_observed(
    g: &Graph,
    config: &PlmConfig,
    observer: &mut dyn FnMut(&MoveEvent),
) -> Result<Partition> {
    let cfg = PlmConfig {
        parallel: false,
        ..config.clone()
    };
    run(g, &cfg, Some(observer))
}

fn run(g: &Graph, cfg: &PlmConfig, observer: Option<&mut dyn FnMut(&MoveEvent)>) -> Result<Partition> {
    if g.is_directed() {
        return Err(Error::Directed("plm"));
    }
    if !(cfg.gamma.is_finite() && cfg.gamma >= 0.0) {
        return Err(Error::param("gamma must be a non-negative number"));
    }
    let n = g.node_count();
    if g.edge_count() == 0 {
        return Ok(Partition::singletons(n));
    }
    let level = Level::from_graph(g);
    let to_level: Vec<usize> = (0..n).collect();
    let mut ctx = Context { cfg, observer };
    let zeta = ctx.run_level(&level, 0, &to_level);
    let result = Partition::from_assignment(zeta);
    if cfg.parallel {
        // Concurrent moves act on stale tallies; keep the singleton floor.
        let singles = Partition::singletons(n);
        if modularity_with_resolution(g, &result, cfg.gamma)?
            < modularity_with_resolution(g, &singles, cfg.gamma)?
        {
            return Ok(singles);
        }
    }
    Ok(result)
}

struct Context<'a, 'o> {
    cfg: &'a PlmConfig,
    observer: Option<&'o mut dyn FnMut(&MoveEvent)>,
}

impl Context<'_, '_> {
    fn run_level(&mut self, level: &Level, depth: usize, to_level: &[usize]) -> Vec<usize> {
        let n = level.n();
        let mut zeta: Vec<usize> = (0..n).collect();
        let mut rng = random::stream(self.cfg.seed, random::PLM, 2 * depth as u64);
        if !self.move_phase(level, &mut zeta, &mut rng, depth, to_level) {
            return zeta;
        }
        let zeta = split_disconnected(level, &zeta);
        let k = zeta.iter().max().map_or(0, |&m| m + 1);
        if k == n {
            return zeta;
        }
        let (coarse, map) = level.coarsen(&zeta);
        let coarse_to_level: Vec<usize> = to_level.iter().map(|&x| map[x]).collect();
        let coarse_labels = self.run_level(&coarse, depth + 1, &coarse_to_level);
        let mut zeta: Vec<usize> = map.iter().map(|&c| coarse_labels[c]).collect();
        if self.cfg.refine {
            let mut rng = random::stream(self.cfg.seed, random::PLM, 2 * depth as u64 + 1);
            if self.move_phase(level, &mut zeta, &mut rng, depth, to_level) {
                zeta = split_disconnected(level, &zeta);
            }
        }
        zeta
    }

    fn move_phase(
        &mut self,
        level: &Level,
        zeta: &mut Vec<usize>,
        rng: &mut NkRng,
        depth: usize,
        to_level: &[usize],
    ) -> bool {
        if self.cfg.parallel && self.observer.is_none() {
            return move_phase_parallel(level, zeta, self.cfg, rng);
        }
        let n = level.n();
        let vol = level.volumes();
        let total = level.total;
        let mut comm_vol = vec![0.0; n];
        for v in 0..n {
            comm_vol[zeta[v]] += vol[v];
        }
        let mut acc = vec![0.0; n];
        let mut touched = Vec::new();
        let mut order: Vec<usize> = (0..n).collect();
        let mut any = false;
        for _ in 0..self.cfg.max_passes {
            order.shuffle(rng);
            let mut moves = 0;
            for &v in &order {
                let a = zeta[v];
                for &(u, w) in &level.adj[v] {
                    let c = zeta[u];
                    if acc[c] == 0.0 {
                        touched.push(c);
                    }
                    acc[c] += w;
                }
                let best = best_move(v, a, &acc, &touched, &vol, |c| comm_vol[c], total, self.cfg.gamma);
                if let Some((to, delta)) = best {
                    let before = self.observer.as_ref().map(|_| project(zeta, to_level));
                    comm_vol[a] -= vol[v];
                    comm_vol[to] += vol[v];
                    zeta[v] = to;
                    moves += 1;
                    if let (Some(obs), Some(before)) = (self.observer.as_mut(), before) {
                        obs(&MoveEvent {
                            level: depth,
                            vertex: v,
                            from: a,
                            to,
                            delta,
                            before,
                            after: project(zeta, to_level),
                        });
                    }
                }
                for c in touched.drain(..) {
                    acc[c] = 0.0;
                }
            }
            if moves == 0 {
                break;
            }
            any = true;
        }
        any
    }
}

fn project(zeta: &[usize], to_level: &[usize]) -> Vec<usize> {
    to_level.iter().map(|&x| zeta[x]).collect()
}

/// Best strictly improving target community for `v`, with its modularity
/// delta. Ties go to the smaller community id.
#[allow(clippy::too_many_arguments)]
#[inline]
fn best_move(
    v: usize,
    current: usize,
    acc: &[f64],
    touched: &[usize],
    vol: &[f64],
    comm_vol: impl Fn(usize) -> f64,
    total: f64,
    gamma: f64,
) -> Option<(usize, f64)> {
    // Moving v from A to B changes Q by
    //   (k_vB - k_vA') / W - γ vol_v (vol_B - vol_A') / (2 W²)
    // where A' = A \ {v} and k_vX is the edge weight from v into X.
    let k_a = acc[current];
    let vol_a = comm_vol(current) - vol[v];
    let mut best: Option<(usize, f64)> = None;
    for &c in touched {
        if c == current {
            continue;
        }
        let delta = (acc[c] - k_a) / total
            - gamma * vol[v] * (comm_vol(c) - vol_a) / (2.0 * total * total);
        if delta > MIN_GAIN {
            match best {
                Some((bc, bd)) if delta < bd || (delta == bd && c > bc) => {}
                _ => best = Some((c, delta)),
            }
        }
    }
    best
}

fn atomic_add(slot: &AtomicU64, x: f64) {
    let mut cur = slot.load(Relaxed);
    loop {
        let next = (f64::from_bits(cur) + x).to_bits();
        match slot.compare_exchange_weak(cur, next, Relaxed, Relaxed) {
            Ok(_) => return,
            Err(seen) => cur = seen,
        }
    }
}

fn move_phase_parallel(level: &Level, zeta: &mut Vec<usize>, cfg: &PlmConfig, rng: &mut NkRng) -> bool {
    let n = level.n();
    let vol = level.volumes();
    let total = level.total;
    let comm: Vec<AtomicUsize> = zeta.iter().map(|&c| AtomicUsize::new(c)).collect();
    let mut tally = vec![0.0; n];
    for v in 0..n {
        tally[zeta[v]] += vol[v];
    }
    let comm_vol: Vec<AtomicU64> = tally.into_iter().map(|x| AtomicU64::new(x.to_bits())).collect();
    let mut order: Vec<usize> = (0..n).collect();
    let mut any = false;
    for _ in 0..cfg.max_passes {
        order.shuffle(rng);
        let moves = AtomicUsize::new(0);
        order.par_iter().with_min_len(512).for_each_init(
            || (vec![0.0; n], Vec::new()),
            |(acc, touched), &v| {
                let a = comm[v].load(Relaxed);
                for &(u, w) in &level.adj[v] {
                    let c = comm[u].load(Relaxed);
                    if acc[c] == 0.0 {
                        touched.push(c);
                    }
                    acc[c] += w;
                }
                let load = |c: usize| f64::from_bits(comm_vol[c].load(Relaxed));
                if let Some((to, _)) = best_move(v, a, acc, touched, &vol, load, total, cfg.gamma) {
                    comm[v].store(to, Relaxed);
                    atomic_add(&comm_vol[a], -vol[v]);
                    atomic_add(&comm_vol[to], vol[v]);
                    moves.fetch_add(1, Relaxed);
                }
                for c in touched.drain(..) {
                    acc[c] = 0.0;
                }
            },
        );
        if moves.into_inner() == 0 {
            break;
        }
        any = true;
    }
    *zeta = comm.into_iter().map(AtomicUsize::into_inner).collect();
    any
}

/// Splits every community into its connected pieces and relabels densely.
fn split_disconnected(level: &Level, zeta: &[usize]) -> Vec<usize> {
    let n = level.n();
    let mut out = vec![usize::MAX; n];
    let mut next = 0;
    let mut stack = Vec::new();
    for s in 0..n {
        if out[s] != usize::MAX {
            continue;
        }
        out[s] = next;
        stack.push(s);
        while let Some(u) = stack.pop() {
            for &(v, _) in &level.adj[u] {
                if out[v] == usize::MAX && zeta[v] == zeta[s] {
                    out[v] = next;
                    stack.push(v);
                }
            }
        }
        next += 1;
    }
    out
}
