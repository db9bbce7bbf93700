// SPDX-License-Identifier: Apache-2.0

//! Label propagation (PLP).

use std::sync::atomic::{AtomicUsize, Ordering::Relaxed};

use rand::seq::SliceRandom;
use rayon::prelude::*;

use super::Partition;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::random;

#[derive(Debug, Clone)]
pub struct PlpConfig {
    pub seed: u64,
    pub max_iters: usize,
    /// Stop once a round updates at most this many labels.
    pub threshold: usize,
    pub parallel: bool,
}

impl Default for PlpConfig {
    fn default() -> Self {
        PlpConfig {
            seed: 0,
            max_iters: 100,
            threshold: 0,
            parallel: false,
        }
    }
}

/// Dominant neighbor label by total edge weight; ties go to the smallest
/// label. `None` for isolated vertices.
fn dominant(
    g: &Graph,
    v: usize,
    label: impl Fn(usize) -> usize,
    acc: &mut [f64],
    touched: &mut Vec<usize>,
) -> Option<usize> {
    for a in g.adjacency(v) {
        let l = label(a.node);
        if acc[l] == 0.0 {
            touched.push(l);
        }
        acc[l] += a.weight;
    }
    let mut best: Option<(usize, f64)> = None;
    for &l in touched.iter() {
        match best {
            Some((bl, bw)) if acc[l] < bw || (acc[l] == bw && l > bl) => {}
            _ => best = Some((l, acc[l])),
        }
    }
    for l in touched.drain(..) {
        acc[l] = 0.0;
    }
    best.map(|(l, _)| l)
}

pub fn plp(g: &Graph, config: &PlpConfig) -> Result<Partition> {
    if g.is_directed() {
        return Err(Error::Directed("plp"));
    }
    let n = g.node_count();
    let mut rng = random::keyed(config.seed, random::PLP);
    let mut order: Vec<usize> = (0..n).collect();

    let labels = if config.parallel {
        let labels: Vec<AtomicUsize> = (0..n).map(AtomicUsize::new).collect();
        for _ in 0..config.max_iters {
            order.shuffle(&mut rng);
            let updated = AtomicUsize::new(0);
            order.par_iter().with_min_len(512).for_each_init(
                || (vec![0.0; n], Vec::new()),
                |(acc, touched), &v| {
                    let found = dominant(g, v, |u| labels[u].load(Relaxed), acc, touched);
                    if let Some(l) = found {
                        if labels[v].swap(l, Relaxed) != l {
                            updated.fetch_add(1, Relaxed);
                        }
                    }
                },
            );
            if updated.into_inner() <= config.threshold {
                break;
            }
        }
        labels.into_iter().map(AtomicUsize::into_inner).collect()
    } else {
        let mut labels: Vec<usize> = (0..n).collect();
        let mut acc = vec![0.0; n];
        let mut touched = Vec::new();
        for _ in 0..config.max_iters {
            order.shuffle(&mut rng);
            let mut updated = 0;
            for &v in &order {
                if let Some(l) = dominant(g, v, |u| labels[u], &mut acc, &mut touched) {
                    if labels[v] != l {
                        labels[v] = l;
                        updated += 1;
                    }
                }
            }
            if updated <= config.threshold {
                break;
            }
        }
        labels
    };
    Ok(Partition::from_assignment(labels))
}
