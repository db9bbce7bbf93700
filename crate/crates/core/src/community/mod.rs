// SPDX-License-Identifier: Apache-2.0

//! Disjoint communities: partitions, modularity, coarsening, similarity
//! scores, and the detection algorithms in the submodules.

mod local;
mod plm;
mod plp;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Node};

pub use local::{conductance, expand_seed, max_clique_in_neighborhood, SeedCommunity, SeedStrategy};
pub use plm::{plm, plm_observed, MoveEvent, PlmConfig};
pub use plp::{plp, PlpConfig};

/// Vertex to community assignment with dense community ids in `[0, k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    assignment: Vec<usize>,
    k: usize,
}

impl Partition {
    /// Relabels arbitrary labels to dense ids in order of first appearance.
    pub fn from_assignment(labels: Vec<usize>) -> Self {
        let mut remap: HashMap<usize, usize> = HashMap::new();
        let assignment: Vec<usize> = labels
            .into_iter()
            .map(|l| {
                let next = remap.len();
                *remap.entry(l).or_insert(next)
            })
            .collect();
        Partition {
            k: remap.len(),
            assignment,
        }
    }

    pub fn singletons(n: usize) -> Self {
        Partition {
            assignment: (0..n).collect(),
            k: n,
        }
    }

    pub fn single(n: usize) -> Self {
        Partition {
            assignment: vec![0; n],
            k: usize::from(n > 0),
        }
    }

    pub fn node_count(&self) -> usize {
        self.assignment.len()
    }

    pub fn community_count(&self) -> usize {
        self.k
    }

    pub fn community_of(&self, v: Node) -> usize {
        self.assignment[v]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.k];
        for &c in &self.assignment {
            s[c] += 1;
        }
        s
    }

    /// Members of each community, ascending.
    pub fn members(&self) -> Vec<Vec<Node>> {
        let mut m = vec![Vec::new(); self.k];
        for (v, &c) in self.assignment.iter().enumerate() {
            m[c].push(v);
        }
        m
    }

    /// Per-community volume and internal edge weight.
    pub fn tallies(&self, g: &Graph) -> Result<Tallies> {
        self.check_size(g.node_count())?;
        let mut volume = vec![0.0; self.k];
        let mut internal = vec![0.0; self.k];
        for e in g.edges() {
            let (cu, cv) = (self.assignment[e.u], self.assignment[e.v]);
            volume[cu] += e.weight;
            volume[cv] += e.weight;
            if cu == cv {
                internal[cu] += e.weight;
            }
        }
        Ok(Tallies { volume, internal })
    }

    fn check_size(&self, n: usize) -> Result<()> {
        if self.assignment.len() == n {
            Ok(())
        } else {
            Err(Error::param(format!(
                "partition covers {} vertices, graph has {}",
                self.assignment.len(),
                n
            )))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tallies {
    pub volume: Vec<f64>,
    pub internal: Vec<f64>,
}

pub fn modularity(g: &Graph, p: &Partition) -> Result<f64> {
    modularity_with_resolution(g, p, 1.0)
}

/// `Q = Σ_c e_c / W - γ (vol_c / 2W)²` with `W` the total edge weight.
pub fn modularity_with_resolution(g: &Graph, p: &Partition, gamma: f64) -> Result<f64> {
    if g.is_directed() {
        return Err(Error::Directed("modularity"));
    }
    let t = p.tallies(g)?;
    let total = g.total_weight();
    if total <= 0.0 {
        return Err(Error::param("modularity is undefined on a graph without edges"));
    }
    Ok(modularity_from_tallies(&t.internal, &t.volume, total, gamma))
}

fn modularity_from_tallies(internal: &[f64], volume: &[f64], total: f64, gamma: f64) -> f64 {
    internal
        .iter()
        .zip(volume)
        .map(|(&e, &vol)| e / total - gamma * (vol / (2.0 * total)).powi(2))
        .sum()
}

/// Result of contracting every community into one vertex. Intra-community
/// weight is kept in `loops` because [`Graph`] has no self-loops.
#[derive(Debug, Clone)]
pub struct Coarsened {
    pub graph: Graph,
    pub loops: Vec<f64>,
    /// Fine vertex to coarse vertex.
    pub mapping: Vec<usize>,
}

pub fn coarsen(g: &Graph, p: &Partition) -> Result<Coarsened> {
    if g.is_directed() {
        return Err(Error::Directed("coarsen"));
    }
    p.check_size(g.node_count())?;
    let level = plm::Level::from_graph(g);
    let (coarse, mapping) = level.coarsen(p.assignment());
    Ok(Coarsened {
        graph: coarse.to_graph(),
        loops: coarse.loops.clone(),
        mapping,
    })
}

/// Modularity of a partition of a graph carrying self-loop weights, as
/// produced by [`coarsen`].
pub fn modularity_with_loops(g: &Graph, loops: &[f64], p: &Partition, gamma: f64) -> Result<f64> {
    if loops.len() != g.node_count() {
        return Err(Error::param("one loop weight per vertex required"));
    }
    let mut t = p.tallies(g)?;
    for (v, &l) in loops.iter().enumerate() {
        let c = p.community_of(v);
        t.internal[c] += l;
        t.volume[c] += 2.0 * l;
    }
    let total = g.total_weight() + loops.iter().sum::<f64>();
    if total <= 0.0 {
        return Err(Error::param("modularity is undefined on a graph without edges"));
    }
    Ok(modularity_from_tallies(&t.internal, &t.volume, total, gamma))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Similarity {
    Rand,
    Jaccard,
    Nmi,
}

/// Pair-counting Rand / Jaccard index or normalized mutual information
/// (arithmetic-mean normalization). Degenerate denominators resolve to 1
/// when the partitions are identical and 0 otherwise.
pub fn partition_similarity(a: &Partition, b: &Partition, kind: Similarity) -> Result<f64> {
    let n = a.node_count();
    if b.node_count() != n {
        return Err(Error::param(format!(
            "partitions differ in size ({} vs {})",
            n,
            b.node_count()
        )));
    }
    let mut joint: HashMap<(usize, usize), u64> = HashMap::new();
    for v in 0..n {
        *joint.entry((a.community_of(v), b.community_of(v))).or_default() += 1;
    }
    let sa: Vec<u64> = a.sizes().into_iter().map(|s| s as u64).collect();
    let sb: Vec<u64> = b.sizes().into_iter().map(|s| s as u64).collect();
    let identical = joint.len() == sa.len() && joint.len() == sb.len();

    match kind {
        Similarity::Rand | Similarity::Jaccard => {
            let pairs = |x: u64| (x * x.saturating_sub(1) / 2) as f64;
            let both: f64 = joint.values().map(|&c| pairs(c)).sum();
            let in_a: f64 = sa.iter().map(|&c| pairs(c)).sum();
            let in_b: f64 = sb.iter().map(|&c| pairs(c)).sum();
            let total = pairs(n as u64);
            if kind == Similarity::Rand {
                if total == 0.0 {
                    return Ok(1.0);
                }
                let apart_both = total - in_a - in_b + both;
                Ok((both + apart_both) / total)
            } else {
                let union = in_a + in_b - both;
                if union == 0.0 {
                    return Ok(if identical { 1.0 } else { 0.0 });
                }
                Ok(both / union)
            }
        }
        Similarity::Nmi => {
            let nf = n as f64;
            let entropy = |sizes: &[u64]| -> f64 {
                sizes
                    .iter()
                    .filter(|&&s| s > 0)
                    .map(|&s| {
                        let p = s as f64 / nf;
                        -p * p.ln()
                    })
                    .sum()
            };
            let (ha, hb) = (entropy(&sa), entropy(&sb));
            if ha + hb == 0.0 {
                return Ok(if identical { 1.0 } else { 0.0 });
            }
            let mi: f64 = joint
                .iter()
                .map(|(&(i, j), &c)| {
                    let c = c as f64;
                    c / nf * (c * nf / (sa[i] as f64 * sb[j] as f64)).ln()
                })
                .sum();
            Ok((2.0 * mi / (ha + hb)).clamp(0.0, 1.0))
        }
    }
}
