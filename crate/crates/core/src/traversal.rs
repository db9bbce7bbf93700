// SPDX-License-Identifier: Apache-2.0

//! Shortest paths, connectivity, clustering and diameter.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::community::Partition;
use crate::error::{Error, Result};
use crate::graph::{Graph, Node};

/// Result of a single-source shortest path run.
///
/// `dist` holds hop counts on unweighted graphs and weight sums otherwise;
/// unreachable vertices carry `f64::INFINITY`. `order` lists the reached
/// vertices by non-decreasing distance.
#[derive(Debug, Clone)]
pub struct DistanceVector {
    pub source: Node,
    pub dist: Vec<f64>,
    pub sigma: Vec<f64>,
    pub predecessors: Vec<Vec<Node>>,
    pub order: Vec<Node>,
}

impl DistanceVector {
    pub fn is_reachable(&self, v: Node) -> bool {
        self.dist[v].is_finite()
    }
}

/// Min-heap entry keyed by tentative distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct HeapItem {
    pub dist: f64,
    pub node: Node,
}

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn check_vertex(g: &Graph, v: Node) -> Result<()> {
    if v < g.node_count() {
        Ok(())
    } else {
        Err(Error::VertexOutOfRange {
            vertex: v,
            n: g.node_count(),
        })
    }
}

/// BFS on unweighted graphs, Dijkstra otherwise. Fills path counts and
/// predecessor lists along with the distances.
pub fn sssp(g: &Graph, source: Node) -> Result<DistanceVector> {
    check_vertex(g, source)?;
    let n = g.node_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut sigma = vec![0.0; n];
    let mut predecessors = vec![Vec::new(); n];
    let mut order = Vec::new();
    dist[source] = 0.0;
    sigma[source] = 1.0;

    if !g.is_weighted() {
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for a in g.adjacency(u) {
                let v = a.node;
                if dist[v].is_infinite() {
                    dist[v] = dist[u] + 1.0;
                    queue.push_back(v);
                }
                if dist[v] == dist[u] + 1.0 {
                    sigma[v] += sigma[u];
                    predecessors[v].push(u);
                }
            }
        }
    } else {
        let mut settled = vec![false; n];
        let mut heap = BinaryHeap::from([HeapItem {
            dist: 0.0,
            node: source,
        }]);
        while let Some(HeapItem { dist: d, node: u }) = heap.pop() {
            if settled[u] || d > dist[u] {
                continue;
            }
            settled[u] = true;
            order.push(u);
            for a in g.adjacency(u) {
                let v = a.node;
                let alt = d + a.weight;
                if alt < dist[v] {
                    dist[v] = alt;
                    sigma[v] = sigma[u];
                    predecessors[v].clear();
                    predecessors[v].push(u);
                    heap.push(HeapItem { dist: alt, node: v });
                } else if alt == dist[v] && !settled[v] {
                    sigma[v] += sigma[u];
                    predecessors[v].push(u);
                }
            }
        }
    }
    Ok(DistanceVector {
        source,
        dist,
        sigma,
        predecessors,
        order,
    })
}

/// Distances from every source in `sources` to each vertex (the minimum over
/// sources). Unreachable vertices get `f64::INFINITY`.
pub fn multi_source_distances(g: &Graph, sources: &[Node]) -> Result<Vec<f64>> {
    let n = g.node_count();
    let mut dist = vec![f64::INFINITY; n];
    for &s in sources {
        check_vertex(g, s)?;
        dist[s] = 0.0;
    }
    if !g.is_weighted() {
        let mut queue: VecDeque<Node> = sources.iter().copied().collect();
        while let Some(u) = queue.pop_front() {
            for v in g.neighbors(u) {
                if dist[v].is_infinite() {
                    dist[v] = dist[u] + 1.0;
                    queue.push_back(v);
                }
            }
        }
    } else {
        let mut heap: BinaryHeap<HeapItem> = sources
            .iter()
            .map(|&s| HeapItem { dist: 0.0, node: s })
            .collect();
        while let Some(HeapItem { dist: d, node: u }) = heap.pop() {
            if d > dist[u] {
                continue;
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
    }
    Ok(dist)
}

pub fn distances(g: &Graph, source: Node) -> Result<Vec<f64>> {
    multi_source_distances(g, &[source])
}

/// Compact forward adjacency used by traversal-heavy kernels.
#[derive(Debug, Clone)]
pub(crate) struct Csr {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    weights: Vec<f64>,
}

impl Csr {
    pub fn forward(g: &Graph) -> Self {
        Self::build(g, false)
    }

    /// Reverse adjacency (in-neighbors); identical to `forward` when undirected.
    pub fn backward(g: &Graph) -> Self {
        Self::build(g, true)
    }

    fn build(g: &Graph, reverse: bool) -> Self {
        let n = g.node_count();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        let mut weights = Vec::new();
        offsets.push(0);
        for u in 0..n {
            let list = if reverse { g.in_adjacency(u) } else { g.adjacency(u) };
            for a in list {
                targets.push(a.node as u32);
                if g.is_weighted() {
                    weights.push(a.weight);
                }
            }
            offsets.push(targets.len());
        }
        Csr {
            offsets,
            targets,
            weights,
        }
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn neighbors(&self, u: usize) -> &[u32] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    #[inline]
    pub fn weights(&self, u: usize) -> &[f64] {
        &self.weights[self.offsets[u]..self.offsets[u + 1]]
    }
}

pub(crate) const UNSEEN: u32 = u32::MAX;

/// Reusable BFS state for hop distances.
pub(crate) struct Bfs {
    pub dist: Vec<u32>,
    pub queue: Vec<u32>,
}

impl Bfs {
    pub fn new(n: usize) -> Self {
        Bfs {
            dist: vec![UNSEEN; n],
            queue: Vec::with_capacity(n),
        }
    }

    /// Runs a full BFS from `s`; `queue` holds the visit order afterwards.
    pub fn run(&mut self, csr: &Csr, s: usize) {
        self.reset();
        self.dist[s] = 0;
        self.queue.push(s as u32);
        let mut head = 0;
        while head < self.queue.len() {
            let u = self.queue[head] as usize;
            head += 1;
            let du = self.dist[u] + 1;
            for &v in csr.neighbors(u) {
                let slot = &mut self.dist[v as usize];
                if *slot == UNSEEN {
                    *slot = du;
                    self.queue.push(v);
                }
            }
        }
    }

    pub fn reset(&mut self) {
        for &v in &self.queue {
            self.dist[v as usize] = UNSEEN;
        }
        self.queue.clear();
    }
}

/// Labels weakly connected components.
fn component_labels(g: &Graph) -> Vec<usize> {
    let n = g.node_count();
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    let mut stack = Vec::new();
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = next;
        stack.push(s);
        while let Some(u) = stack.pop() {
            let out = g.adjacency(u).iter();
            let inc = if g.is_directed() {
                g.in_adjacency(u).iter()
            } else {
                [].iter()
            };
            for a in out.chain(inc) {
                if label[a.node] == usize::MAX {
                    label[a.node] = next;
                    stack.push(a.node);
                }
            }
        }
        next += 1;
    }
    label
}

pub fn connected_components(g: &Graph) -> Result<Partition> {
    if g.is_directed() {
        return Err(Error::Directed("connected_components"));
    }
    Ok(Partition::from_assignment(component_labels(g)))
}

/// Weak component count; works for directed graphs too.
pub fn component_count(g: &Graph) -> usize {
    component_labels(g).into_iter().max().map_or(0, |m| m + 1)
}

pub fn is_connected(g: &Graph) -> bool {
    component_count(g) <= 1
}

/// Local clustering coefficient on the unweighted view of an undirected graph.
pub fn local_clustering(g: &Graph) -> Result<Vec<f64>> {
    if g.is_directed() {
        return Err(Error::Directed("local_clustering"));
    }
    let n = g.node_count();
    let csr = Csr::forward(g);
    Ok((0..n)
        .into_par_iter()
        .map_init(
            || vec![false; n],
            |mark, u| {
                let nb = csr.neighbors(u);
                let d = nb.len();
                if d < 2 {
                    return 0.0;
                }
                for &v in nb {
                    mark[v as usize] = true;
                }
                let mut links = 0usize;
                for &v in nb {
                    links += csr
                        .neighbors(v as usize)
                        .iter()
                        .filter(|&&w| mark[w as usize])
                        .count();
                }
                for &v in nb {
                    mark[v as usize] = false;
                }
                // every triangle through u was counted from both ends
                let triangles = links / 2;
                triangles as f64 / (d * (d - 1) / 2) as f64
            },
        )
        .collect())
}

pub fn mean_clustering(g: &Graph) -> Result<f64> {
    let c = local_clustering(g)?;
    if c.is_empty() {
        return Ok(0.0);
    }
    Ok(c.iter().sum::<f64>() / c.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diameter {
    /// Largest finite distance (hop count on the unweighted view).
    pub value: usize,
    /// False when `value` is only a double-sweep lower bound.
    pub exact: bool,
}

pub const EXACT_DIAMETER_LIMIT: usize = 1000;

/// Largest finite hop distance. Exact via all-sources BFS up to
/// [`EXACT_DIAMETER_LIMIT`] vertices, otherwise a double-sweep lower bound
/// started at the highest-degree vertex.
pub fn diameter(g: &Graph) -> Diameter {
    let n = g.node_count();
    if n == 0 {
        return Diameter {
            value: 0,
            exact: true,
        };
    }
    let csr = Csr::forward(g);
    let ecc = |bfs: &mut Bfs, s: usize| -> (usize, usize) {
        bfs.run(&csr, s);
        let far = *bfs.queue.last().expect("source is always visited") as usize;
        (bfs.dist[far] as usize, far)
    };
    if n <= EXACT_DIAMETER_LIMIT {
        let value = (0..n)
            .into_par_iter()
            .map_init(|| Bfs::new(n), |bfs, s| ecc(bfs, s).0)
            .max()
            .unwrap_or(0);
        Diameter { value, exact: true }
    } else {
        let start = (0..n).max_by_key(|&u| (g.degree(u), std::cmp::Reverse(u))).unwrap();
        let mut bfs = Bfs::new(n);
        let (_, far) = ecc(&mut bfs, start);
        let (value, _) = ecc(&mut bfs, far);
        Diameter {
            value,
            exact: false,
        }
    }
}
