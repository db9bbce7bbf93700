// SPDX-License-Identifier: Apache-2.0

//! Local community detection around seed vertices.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Node};
use crate::traversal::check_vertex;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedCommunity {
    pub seeds: Vec<Node>,
    /// Ascending.
    pub members: Vec<Node>,
    pub conductance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeedStrategy {
    /// Add the frontier vertex that lowers conductance most, until none does.
    Greedy,
    /// Grow each seed by a maximum clique of its neighborhood, then greedy.
    CliqueGreedy,
    /// Breadth-first search that stops after `size` vertices.
    BfsBaseline { size: usize },
}

/// `cut(C) / min(vol(C), vol(V \ C))`; 0 when the smaller side has no volume.
pub fn conductance(g: &Graph, members: &[Node]) -> Result<f64> {
    if g.is_directed() {
        return Err(Error::Directed("conductance"));
    }
    let mut inside = vec![false; g.node_count()];
    for &v in members {
        check_vertex(g, v)?;
        inside[v] = true;
    }
    let size = inside.iter().filter(|&&b| b).count();
    if size == 0 || size == g.node_count() {
        return Err(Error::param("conductance needs a proper nonempty vertex subset"));
    }
    let mut cut = 0.0;
    let mut vol = 0.0;
    for e in g.edges() {
        match (inside[e.u], inside[e.v]) {
            (true, true) => vol += 2.0 * e.weight,
            (true, false) | (false, true) => {
                cut += e.weight;
                vol += e.weight;
            }
            _ => {}
        }
    }
    Ok(ratio(cut, vol, 2.0 * g.total_weight()))
}

fn ratio(cut: f64, vol: f64, total_vol: f64) -> f64 {
    let denom = vol.min(total_vol - vol);
    if denom <= 0.0 {
        0.0
    } else {
        cut / denom
    }
}

pub fn expand_seed(g: &Graph, seeds: &[Node], strategy: SeedStrategy) -> Result<SeedCommunity> {
    if g.is_directed() {
        return Err(Error::Directed("expand_seed"));
    }
    if seeds.is_empty() {
        return Err(Error::param("at least one seed vertex is required"));
    }
    for &s in seeds {
        check_vertex(g, s)?;
    }
    let mut start: Vec<Node> = seeds.to_vec();
    start.sort_unstable();
    start.dedup();
    if !induces_connected(g, &start) {
        return Err(Error::param("seed vertices must induce a connected subgraph"));
    }
    let members = match strategy {
        SeedStrategy::Greedy => greedy(g, &start),
        SeedStrategy::CliqueGreedy => {
            let mut init = start.clone();
            for &s in &start {
                init.extend(max_clique_in_neighborhood(g, s)?);
            }
            init.sort_unstable();
            init.dedup();
            greedy(g, &init)
        }
        SeedStrategy::BfsBaseline { size } => bfs_baseline(g, seeds, size),
    };
    let conductance = if members.len() == g.node_count() {
        0.0
    } else {
        conductance(g, &members)?
    };
    Ok(SeedCommunity {
        seeds: start,
        members,
        conductance,
    })
}

fn induces_connected(g: &Graph, set: &[Node]) -> bool {
    let mut inside = vec![false; g.node_count()];
    for &v in set {
        inside[v] = true;
    }
    let mut seen = vec![false; g.node_count()];
    let mut stack = vec![set[0]];
    seen[set[0]] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for v in g.neighbors(u) {
            if inside[v] && !seen[v] {
                seen[v] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    count == set.len()
}

fn greedy(g: &Graph, init: &[Node]) -> Vec<Node> {
    let n = g.node_count();
    let total_vol = 2.0 * g.total_weight();
    let wdeg: Vec<f64> = g.nodes().map(|u| g.weighted_degree(u)).collect();
    let mut inside = vec![false; n];
    let mut to_inside = vec![0.0; n];
    let mut frontier = BTreeSet::new();
    let mut members = Vec::new();
    let (mut cut, mut vol) = (0.0, 0.0);

    let add = |v: Node,
                   inside: &mut Vec<bool>,
                   to_inside: &mut Vec<f64>,
                   frontier: &mut BTreeSet<Node>,
                   cut: &mut f64,
                   vol: &mut f64| {
        *cut += wdeg[v] - 2.0 * to_inside[v];
        *vol += wdeg[v];
        inside[v] = true;
        frontier.remove(&v);
        for a in g.adjacency(v) {
            to_inside[a.node] += a.weight;
            if !inside[a.node] {
                frontier.insert(a.node);
            }
        }
    };
    for &v in init {
        add(v, &mut inside, &mut to_inside, &mut frontier, &mut cut, &mut vol);
        members.push(v);
    }
    let mut current = ratio(cut, vol, total_vol);
    loop {
        if members.len() + 1 >= n {
            break;
        }
        let mut best: Option<(Node, f64)> = None;
        for &v in &frontier {
            let phi = ratio(cut + wdeg[v] - 2.0 * to_inside[v], vol + wdeg[v], total_vol);
            if best.is_none_or(|(_, b)| phi < b) {
                best = Some((v, phi));
            }
        }
        match best {
            Some((v, phi)) if phi < current - 1e-12 => {
                add(v, &mut inside, &mut to_inside, &mut frontier, &mut cut, &mut vol);
                members.push(v);
                current = phi;
            }
            _ => break,
        }
    }
    members.sort_unstable();
    members
}

fn bfs_baseline(g: &Graph, seeds: &[Node], size: usize) -> Vec<Node> {
    let mut seen = vec![false; g.node_count()];
    let mut queue = VecDeque::new();
    let mut visited = Vec::new();
    for &s in seeds {
        if !seen[s] {
            seen[s] = true;
            queue.push_back(s);
            visited.push(s);
        }
    }
    let mut nbrs = Vec::new();
    while let Some(u) = queue.pop_front() {
        if visited.len() >= size {
            break;
        }
        nbrs.clear();
        nbrs.extend(g.neighbors(u));
        nbrs.sort_unstable();
        for &v in &nbrs {
            if visited.len() >= size {
                break;
            }
            if !seen[v] {
                seen[v] = true;
                visited.push(v);
                queue.push_back(v);
            }
        }
    }
    visited.sort_unstable();
    visited
}

/// Largest clique in the subgraph induced by the neighbors of `s`
/// (Bron–Kerbosch with pivoting). Ties go to the lexicographically smallest
/// vertex list.
pub fn max_clique_in_neighborhood(g: &Graph, s: Node) -> Result<Vec<Node>> {
    check_vertex(g, s)?;
    let mut nbrs: Vec<Node> = g.neighbors(s).collect();
    nbrs.sort_unstable();
    let k = nbrs.len();
    let local: std::collections::HashMap<Node, usize> =
        nbrs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let adj: Vec<BTreeSet<usize>> = nbrs
        .iter()
        .map(|&v| g.neighbors(v).filter_map(|w| local.get(&w).copied()).collect())
        .collect();
    let mut best: Vec<usize> = Vec::new();
    let mut r = Vec::new();
    bron_kerbosch(&adj, &mut r, (0..k).collect(), BTreeSet::new(), &mut best);
    Ok(best.into_iter().map(|i| nbrs[i]).collect())
}

fn bron_kerbosch(
    adj: &[BTreeSet<usize>],
    r: &mut Vec<usize>,
    p: BTreeSet<usize>,
    mut x: BTreeSet<usize>,
    best: &mut Vec<usize>,
) {
    if p.is_empty() {
        if x.is_empty() {
            let mut c = r.clone();
            c.sort_unstable();
            if c.len() > best.len() || (c.len() == best.len() && c < *best) {
                *best = c;
            }
        }
        return;
    }
    if r.len() + p.len() < best.len() {
        return;
    }
    let pivot = *p
        .union(&x)
        .max_by_key(|&&u| (p.intersection(&adj[u]).count(), std::cmp::Reverse(u)))
        .expect("p is nonempty");
    let candidates: Vec<usize> = p.difference(&adj[pivot]).copied().collect();
    let mut p = p;
    for v in candidates {
        r.push(v);
        let np = p.intersection(&adj[v]).copied().collect();
        let nx = x.intersection(&adj[v]).copied().collect();
        bron_kerbosch(adj, r, np, nx, best);
        r.pop();
        p.remove(&v);
        x.insert(v);
    }
}
