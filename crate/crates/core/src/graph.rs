// SPDX-License-Identifier: Apache-2.0

//! Adjacency-array graph with dense vertex ids and dense edge ids.
//!
//! Every vertex owns a growable list of [`AdjEntry`] values. Undirected edges
//! are stored in both endpoint lists; directed graphs additionally keep
//! in-neighbor lists so reverse traversals are as cheap as forward ones.
//! Edge ids are dense in `[0, m)`: removing an edge moves the edge with the
//! highest id into the freed slot.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

pub type Node = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdjEntry {
    pub node: Node,
    pub weight: f64,
    pub edge: EdgeId,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub id: EdgeId,
    pub u: Node,
    pub v: Node,
    pub weight: f64,
}

#[derive(Debug, Clone)]
pub struct Graph {
    directed: bool,
    weighted: bool,
    out_adj: Vec<Vec<AdjEntry>>,
    // Only populated for directed graphs.
    in_adj: Vec<Vec<AdjEntry>>,
    edges: Vec<Edge>,
}

impl Graph {
    pub fn new(n: usize, directed: bool, weighted: bool) -> Self {
        Graph {
            directed,
            weighted,
            out_adj: vec![Vec::new(); n],
            in_adj: if directed { vec![Vec::new(); n] } else { Vec::new() },
            edges: Vec::new(),
        }
    }

    pub fn undirected(n: usize) -> Self {
        Self::new(n, false, false)
    }

    /// Unweighted undirected graph from an edge list.
    pub fn from_edges(n: usize, edges: &[(Node, Node)]) -> Result<Self> {
        let mut g = Self::undirected(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn from_weighted_edges(n: usize, edges: &[(Node, Node, f64)]) -> Result<Self> {
        let mut g = Self::new(n, false, true);
        for &(u, v, w) in edges {
            g.add_weighted_edge(u, v, w)?;
        }
        Ok(g)
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.out_adj.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn nodes(&self) -> std::ops::Range<Node> {
        0..self.node_count()
    }

    pub fn add_node(&mut self) -> Node {
        self.out_adj.push(Vec::new());
        if self.directed {
            self.in_adj.push(Vec::new());
        }
        self.out_adj.len() - 1
    }

    pub fn add_edge(&mut self, u: Node, v: Node) -> Result<EdgeId> {
        self.insert(u, v, 1.0)
    }

    pub fn add_weighted_edge(&mut self, u: Node, v: Node, weight: f64) -> Result<EdgeId> {
        if !(weight.is_finite() && weight > 0.0) || (!self.weighted && weight != 1.0) {
            return Err(Error::InvalidWeight(weight));
        }
        self.insert(u, v, weight)
    }

    fn insert(&mut self, u: Node, v: Node, weight: f64) -> Result<EdgeId> {
        self.check_node(u)?;
        self.check_node(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Err(Error::DuplicateEdge(u, v));
        }
        let id = self.edges.len();
        self.edges.push(Edge { id, u, v, weight });
        self.out_adj[u].push(AdjEntry { node: v, weight, edge: id });
        if self.directed {
            self.in_adj[v].push(AdjEntry { node: u, weight, edge: id });
        } else {
            self.out_adj[v].push(AdjEntry { node: u, weight, edge: id });
        }
        Ok(id)
    }

    pub fn remove_edge(&mut self, u: Node, v: Node) -> Result<()> {
        self.check_node(u)?;
        self.check_node(v)?;
        let id = self.edge_id(u, v).ok_or(Error::MissingEdge(u, v))?;
        let e = self.edges[id];
        Self::drop_entry(&mut self.out_adj[e.u], id);
        if self.directed {
            Self::drop_entry(&mut self.in_adj[e.v], id);
        } else {
            Self::drop_entry(&mut self.out_adj[e.v], id);
        }
        self.edges.swap_remove(id);
        if id < self.edges.len() {
            // The former last edge now lives at `id`.
            let moved = &mut self.edges[id];
            let old = moved.id;
            moved.id = id;
            let (mu, mv) = (moved.u, moved.v);
            Self::relabel_entry(&mut self.out_adj[mu], old, id);
            if self.directed {
                Self::relabel_entry(&mut self.in_adj[mv], old, id);
            } else {
                Self::relabel_entry(&mut self.out_adj[mv], old, id);
            }
        }
        Ok(())
    }

    fn drop_entry(list: &mut Vec<AdjEntry>, id: EdgeId) {
        if let Some(pos) = list.iter().position(|a| a.edge == id) {
            list.remove(pos);
        }
    }

    fn relabel_entry(list: &mut [AdjEntry], old: EdgeId, new: EdgeId) {
        if let Some(a) = list.iter_mut().find(|a| a.edge == old) {
            a.edge = new;
        }
    }

    fn check_node(&self, u: Node) -> Result<()> {
        if u < self.node_count() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: u,
                n: self.node_count(),
            })
        }
    }

    pub fn has_edge(&self, u: Node, v: Node) -> bool {
        self.edge_id(u, v).is_some()
    }

    pub fn edge_id(&self, u: Node, v: Node) -> Option<EdgeId> {
        if u >= self.node_count() || v >= self.node_count() {
            return None;
        }
        // Scan whichever list is shorter.
        let (list, target) = if self.directed {
            if self.out_adj[u].len() <= self.in_adj[v].len() {
                (&self.out_adj[u], v)
            } else {
                (&self.in_adj[v], u)
            }
        } else if self.out_adj[u].len() <= self.out_adj[v].len() {
            (&self.out_adj[u], v)
        } else {
            (&self.out_adj[v], u)
        };
        list.iter().find(|a| a.node == target).map(|a| a.edge)
    }

    pub fn weight(&self, u: Node, v: Node) -> Option<f64> {
        self.edge_id(u, v).map(|id| self.edges[id].weight)
    }

    /// Out-degree for directed graphs.
    #[inline]
    pub fn degree(&self, u: Node) -> usize {
        self.out_adj[u].len()
    }

    #[inline]
    pub fn in_degree(&self, u: Node) -> usize {
        if self.directed {
            self.in_adj[u].len()
        } else {
            self.out_adj[u].len()
        }
    }

    pub fn weighted_degree(&self, u: Node) -> f64 {
        self.out_adj[u].iter().map(|a| a.weight).sum()
    }

    pub fn max_degree(&self) -> usize {
        self.out_adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    #[inline]
    pub fn adjacency(&self, u: Node) -> &[AdjEntry] {
        &self.out_adj[u]
    }

    /// In-neighbors; same as [`Graph::adjacency`] for undirected graphs.
    #[inline]
    pub fn in_adjacency(&self, u: Node) -> &[AdjEntry] {
        if self.directed {
            &self.in_adj[u]
        } else {
            &self.out_adj[u]
        }
    }

    pub fn neighbors(&self, u: Node) -> impl Iterator<Item = Node> + '_ {
        self.out_adj[u].iter().map(|a| a.node)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Edge {
        self.edges[id]
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Randomly permutes every neighbor list. Edge ids are unchanged.
    pub fn shuffle_adjacency<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        for list in self.out_adj.iter_mut().chain(self.in_adj.iter_mut()) {
            list.shuffle(rng);
        }
    }

    /// Same vertex set, keeping the edges accepted by `keep` in edge-id order.
    pub fn filter_edges(&self, mut keep: impl FnMut(&Edge) -> bool) -> Graph {
        let mut out = Graph::new(self.node_count(), self.directed, self.weighted);
        for e in &self.edges {
            if keep(e) {
                out.insert(e.u, e.v, e.weight)
                    .expect("edges of a valid graph are valid");
            }
        }
        out
    }

    /// Sorted `(min, max)` endpoint pairs, handy for comparing edge sets.
    pub fn edge_set(&self) -> Vec<(Node, Node)> {
        let mut set: Vec<_> = self
            .edges
            .iter()
            .map(|e| {
                if self.directed {
                    (e.u, e.v)
                } else {
                    (e.u.min(e.v), e.u.max(e.v))
                }
            })
            .collect();
        set.sort_unstable();
        set
    }
}
