// SPDX-License-Identifier: Apache-2.0

//! Edge sparsification: score every edge, optionally turn the scores into
//! local-filter exponents, then keep the best-rated edges.

use rand::distributions::Open01;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::centrality::degree_centrality;
use crate::error::{Error, Result};
use crate::graph::{Graph, Node};
use crate::random::{keyed, EDGE_SCORES};
use crate::stats::{spearman, Correlation};
use crate::traversal::{component_count, diameter, mean_clustering, Diameter};

/// Slack used when comparing exponents, so that exact powers such as
/// `4^0.5 = 2` are not lost to rounding in `ln` and `powf`.
pub const EXPONENT_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scorer {
    Random,
    Triangles,
    Jaccard,
    LocalDegree,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeScores {
    /// One score per edge id; higher means more important.
    pub values: Vec<f64>,
    pub scorer: Scorer,
    /// True after [`transform_local_filter`].
    pub local_filter: bool,
}

impl EdgeScores {
    fn new(values: Vec<f64>, scorer: Scorer) -> Self {
        EdgeScores {
            values,
            scorer,
            local_filter: false,
        }
    }

    fn check(&self, g: &Graph) -> Result<()> {
        if self.values.len() == g.edge_count() {
            Ok(())
        } else {
            Err(Error::param(format!(
                "{} edge scores for a graph with {} edges",
                self.values.len(),
                g.edge_count()
            )))
        }
    }
}

fn require_undirected(g: &Graph, what: &'static str) -> Result<()> {
    if g.is_directed() {
        Err(Error::Directed(what))
    } else {
        Ok(())
    }
}

/// Independent uniform (0, 1) scores.
pub fn score_random(g: &Graph, seed: u64) -> EdgeScores {
    let mut r = keyed(seed, EDGE_SCORES);
    let values = (0..g.edge_count()).map(|_| r.sample(Open01)).collect();
    EdgeScores::new(values, Scorer::Random)
}

fn sorted_neighbors(g: &Graph) -> Vec<Vec<Node>> {
    g.nodes()
        .into_par_iter()
        .map(|u| {
            let mut nb: Vec<Node> = g.neighbors(u).collect();
            nb.sort_unstable();
            nb
        })
        .collect()
}

fn common_count(a: &[Node], b: &[Node]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

fn triangle_counts(g: &Graph) -> Vec<usize> {
    let nb = sorted_neighbors(g);
    g.edges()
        .par_iter()
        .map(|e| common_count(&nb[e.u], &nb[e.v]))
        .collect()
}

/// Number of triangles through each edge (common neighbors of its endpoints).
pub fn score_triangles(g: &Graph) -> Result<EdgeScores> {
    require_undirected(g, "triangle edge scores")?;
    let values = triangle_counts(g).into_iter().map(|c| c as f64).collect();
    Ok(EdgeScores::new(values, Scorer::Triangles))
}

/// Common neighbors over `|N(u) ∪ N(v) \ {u, v}|`; 0 when that set is empty.
pub fn score_jaccard(g: &Graph) -> Result<EdgeScores> {
    require_undirected(g, "Jaccard edge scores")?;
    let values = triangle_counts(g)
        .into_iter()
        .zip(g.edges())
        .map(|(c, e)| {
            let union = g.degree(e.u) + g.degree(e.v) - 2 - c;
            if union == 0 {
                0.0
            } else {
                c as f64 / union as f64
            }
        })
        .collect();
    Ok(EdgeScores::new(values, Scorer::Jaccard))
}

/// For each vertex, its incident edges ordered by the given key (best
/// first, ties by neighbor id); yields `(edge id, 1-based rank)`.
fn ranked_incident<K, F>(g: &Graph, u: Node, key: F) -> Vec<(usize, usize)>
where
    K: Copy,
    F: Fn(usize, Node) -> K,
    K: PartialOrd,
{
    let mut inc: Vec<(usize, Node)> = g.adjacency(u).iter().map(|a| (a.edge, a.node)).collect();
    inc.sort_by(|a, b| {
        key(b.0, b.1)
            .partial_cmp(&key(a.0, a.1))
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.1.cmp(&b.1))
    });
    inc.iter().enumerate().map(|(r, &(e, _))| (e, r + 1)).collect()
}

/// Combines per-endpoint edge values by taking the maximum.
fn max_over_endpoints(g: &Graph, per_vertex: impl Fn(Node) -> Vec<(usize, f64)> + Sync) -> Vec<f64> {
    let parts: Vec<Vec<(usize, f64)>> = g.nodes().into_par_iter().map(&per_vertex).collect();
    let mut values = vec![f64::NEG_INFINITY; g.edge_count()];
    for part in parts {
        for (e, x) in part {
            values[e] = values[e].max(x);
        }
    }
    values
}

/// Local degree: each vertex ranks its neighbors by degree, descending, where
/// neighbors of equal degree share the best rank (one plus the number of
/// strictly higher-degree neighbors). The edge to the rank-`r` neighbor of a
/// degree-`d` vertex scores `1 - ln r / ln d` (1 when `d = 1`). An edge keeps
/// the better of its two endpoint scores.
pub fn score_local_degree(g: &Graph) -> Result<EdgeScores> {
    require_undirected(g, "local degree edge scores")?;
    let values = max_over_endpoints(g, |u| {
        let d = g.degree(u);
        let mut degrees: Vec<usize> = g.neighbors(u).map(|v| g.degree(v)).collect();
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        g.adjacency(u)
            .iter()
            .map(|a| {
                let rank = 1 + degrees.partition_point(|&x| x > g.degree(a.node));
                (a.edge, local_score(rank, d))
            })
            .collect()
    });
    Ok(EdgeScores::new(values, Scorer::LocalDegree))
}

fn local_score(rank: usize, degree: usize) -> f64 {
    if degree <= 1 {
        1.0
    } else {
        1.0 - (rank as f64).ln() / (degree as f64).ln()
    }
}

/// Rewrites scores as local-filter levels. A degree-`d` vertex keeping its
/// top `⌈d^e⌉` neighbors keeps the rank-`r` one exactly when
/// `e > ln(r - 1) / ln d` (always for `r = 1`), so the edge gets level
/// `1 - ln(r - 1) / ln d` (1 for `r = 1`), maximized over both endpoints.
/// Keeping levels above `1 - e` then equals keeping, at each vertex, its top
/// `⌈d^e⌉` edges and taking the union; see [`filter_local`].
pub fn transform_local_filter(g: &Graph, s: &EdgeScores) -> Result<EdgeScores> {
    require_undirected(g, "local filtering")?;
    s.check(g)?;
    let values = max_over_endpoints(g, |u| {
        let d = g.degree(u) as f64;
        ranked_incident(g, u, |e, _| s.values[e])
            .into_iter()
            .map(|(e, r)| {
                let level = if r == 1 { 1.0 } else { 1.0 - ((r - 1) as f64).ln() / d.ln() };
                (e, level)
            })
            .collect()
    });
    Ok(EdgeScores {
        values,
        scorer: s.scorer,
        local_filter: true,
    })
}

/// Subgraph on the same vertices keeping edges whose score exceeds `threshold`.
pub fn filter_threshold(g: &Graph, s: &EdgeScores, threshold: f64) -> Result<Graph> {
    s.check(g)?;
    Ok(g.filter_edges(|e| s.values[e.id] > threshold))
}

/// Keeps, at every vertex, its top `⌈d^e⌉` edges by score (union over
/// endpoints). `e` must lie in (0, 1].
pub fn filter_local(g: &Graph, s: &EdgeScores, exponent: f64) -> Result<Graph> {
    if !(exponent > 0.0 && exponent <= 1.0) {
        return Err(Error::param(format!("local filter exponent must lie in (0, 1], got {exponent}")));
    }
    let levels = transform_local_filter(g, s)?;
    filter_threshold(g, &levels, 1.0 - exponent + EXPONENT_SLACK)
}

/// `⌈fraction · m⌉`, treating products within rounding error of an integer
/// as that integer.
pub fn kept_edge_count(m: usize, fraction: f64) -> usize {
    let x = fraction * m as f64;
    let nearest = x.round();
    let count = if (x - nearest).abs() < 1e-9 { nearest } else { x.ceil() };
    (count as usize).min(m)
}

/// Keeps the `⌈fraction · m⌉` highest-scored edges (ties by edge id).
pub fn filter_fraction(g: &Graph, s: &EdgeScores, fraction: f64) -> Result<Graph> {
    s.check(g)?;
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::param(format!("fraction must lie in [0, 1], got {fraction}")));
    }
    let m = g.edge_count();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| s.values[b].total_cmp(&s.values[a]).then(a.cmp(&b)));
    let mut keep = vec![false; m];
    for &e in &order[..kept_edge_count(m, fraction)] {
        keep[e] = true;
    }
    Ok(g.filter_edges(|e| keep[e.id]))
}

/// How well a sparsified graph preserves properties of the original.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreservationReport {
    /// Spearman correlation of the two degree sequences.
    pub degree_spearman: Correlation,
    pub clustering_original: f64,
    pub clustering_sparsified: f64,
    /// Sparsified minus original mean local clustering.
    pub clustering_delta: f64,
    pub components_original: usize,
    pub components_sparsified: usize,
    pub component_delta: i64,
    pub diameter_original: Diameter,
    pub diameter_sparsified: Diameter,
    /// Difference of the largest finite hop distances.
    pub diameter_delta: i64,
}

pub fn preservation_report(g: &Graph, h: &Graph) -> Result<PreservationReport> {
    if g.node_count() != h.node_count() {
        return Err(Error::param(format!(
            "vertex counts differ: {} vs {}",
            g.node_count(),
            h.node_count()
        )));
    }
    let degree_spearman = if g.node_count() >= 2 {
        spearman(&degree_centrality(g).scores, &degree_centrality(h).scores)?
    } else {
        Correlation::Degenerate
    };
    let clustering_original = mean_clustering(g)?;
    let clustering_sparsified = mean_clustering(h)?;
    let components_original = component_count(g);
    let components_sparsified = component_count(h);
    let diameter_original = diameter(g);
    let diameter_sparsified = diameter(h);
    Ok(PreservationReport {
        degree_spearman,
        clustering_original,
        clustering_sparsified,
        clustering_delta: clustering_sparsified - clustering_original,
        components_original,
        components_sparsified,
        component_delta: components_sparsified as i64 - components_original as i64,
        diameter_delta: diameter_sparsified.value as i64 - diameter_original.value as i64,
        diameter_original,
        diameter_sparsified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(n: usize) -> Graph {
        let mut g = Graph::undirected(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    fn star(leaves: usize) -> Graph {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Graph::from_edges(leaves + 1, &edges).unwrap()
    }

    #[test]
    fn triangle_scores() {
        assert_eq!(score_triangles(&k(3)).unwrap().values, vec![1.0; 3]);
        assert_eq!(score_triangles(&k(4)).unwrap().values, vec![2.0; 6]);
        assert_eq!(score_triangles(&star(4)).unwrap().values, vec![0.0; 4]);
        assert_eq!(score_jaccard(&k(4)).unwrap().values, vec![1.0; 6]);
        assert_eq!(score_jaccard(&Graph::from_edges(2, &[(0, 1)]).unwrap()).unwrap().values, vec![0.0]);
    }

    #[test]
    fn random_scores() {
        let g = k(6);
        let a = score_random(&g, 9);
        assert_eq!(a, score_random(&g, 9));
        assert!(a.values.iter().all(|&x| x > 0.0 && x < 1.0));
    }

    #[test]
    fn local_degree_star_and_ring() {
        assert_eq!(score_local_degree(&star(4)).unwrap().values, vec![1.0; 4]);
        let ring = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let s = score_local_degree(&ring).unwrap().values;
        assert!(s.iter().all(|&x| x == s[0]));
    }

    #[test]
    fn fraction_counts() {
        let g = k(5);
        let s = score_random(&g, 1);
        assert_eq!(filter_fraction(&g, &s, 1.0).unwrap().edge_set(), g.edge_set());
        assert_eq!(filter_fraction(&g, &s, 0.0).unwrap().edge_count(), 0);
        assert_eq!(filter_fraction(&g, &s, 0.5).unwrap().edge_count(), 5);
        assert_eq!(filter_fraction(&g, &s, 0.31).unwrap().edge_count(), 4);
        assert_eq!(kept_edge_count(30, 0.1), 3);
        assert!(filter_fraction(&g, &s, 1.5).is_err());
    }

    #[test]
    fn local_filter_extremes() {
        let g = k(6);
        let s = score_random(&g, 2);
        assert_eq!(filter_local(&g, &s, 1.0).unwrap().edge_count(), g.edge_count());
        let t = transform_local_filter(&g, &s).unwrap();
        // Every vertex's best edge always survives.
        let h = filter_local(&g, &s, 1e-6).unwrap();
        for u in g.nodes() {
            let best = g
                .adjacency(u)
                .iter()
                .max_by(|a, b| s.values[a.edge].total_cmp(&s.values[b.edge]))
                .unwrap();
            assert!(h.has_edge(u, best.node));
            assert_eq!(t.values[best.edge], 1.0);
        }
    }

    #[test]
    fn identity_report() {
        let g = k(5);
        let r = preservation_report(&g, &g).unwrap();
        assert_eq!(r.degree_spearman, Correlation::Degenerate);
        assert_eq!((r.clustering_delta, r.component_delta, r.diameter_delta), (0.0, 0, 0));
        let p = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(preservation_report(&p, &p).unwrap().degree_spearman, Correlation::Value(1.0));
        let empty = preservation_report(&g, &Graph::undirected(5)).unwrap();
        assert_eq!(empty.clustering_sparsified, 0.0);
    }
}
