// SPDX-License-Identifier: Apache-2.0

mod support;

use netkit::centrality::betweenness_exact;
use netkit::community::{modularity, modularity_with_resolution, Partition};
use netkit::group::{ged_walk_eval, GedParams};
use netkit::sparsify::score_triangles;
use netkit::traversal::sssp;
use rand::Rng;
use support::*;

const TOL: f64 = 1e-9;

fn mixed_graph(i: u64) -> netkit::Graph {
    let mut r = rng(i);
    let n = r.gen_range(2..=50);
    let p = r.gen_range(0.02..0.3);
    let directed = i % 4 == 1;
    let weighted = i % 3 == 2;
    random_graph(n, p, directed, weighted, 1000 + i)
}

#[test]
fn betweenness_matches_pair_dependencies() {
    for i in 0..200 {
        let g = mixed_graph(i);
        for normalized in [false, true] {
            let got = betweenness_exact(&g, normalized).scores;
            let want = betweenness_by_pairs(&g, normalized);
            assert_vec_close(&got, &want, TOL, &format!("graph {i} normalized={normalized}"));
        }
    }
}

#[test]
fn sssp_matches_floyd_warshall_and_path_counts() {
    for i in 0..200 {
        let g = mixed_graph(i);
        let d = floyd_warshall(&g);
        let sigma = path_counts(&g, &d);
        for s in 0..g.node_count() {
            let r = sssp(&g, s).unwrap();
            for t in 0..g.node_count() {
                assert_eq!(r.dist[t], d[s][t], "graph {i} dist {s}->{t}");
                if d[s][t].is_finite() {
                    assert!(close(r.sigma[t], sigma[s][t], TOL), "graph {i} sigma {s}->{t}");
                }
            }
        }
    }
}

#[test]
fn sigma_matches_simple_path_enumeration() {
    for i in 0..60 {
        let mut r = rng(i + 7);
        let n = r.gen_range(2..=8);
        let g = random_graph(n, 0.45, i % 2 == 1, i % 3 == 0, 3000 + i);
        for s in 0..n {
            let (best, count) = enumerate_shortest_paths(&g, s);
            let res = sssp(&g, s).unwrap();
            for t in 0..n {
                assert_eq!(res.dist[t], best[t], "graph {i} dist {s}->{t}");
                if best[t].is_finite() {
                    assert_eq!(res.sigma[t], count[t], "graph {i} sigma {s}->{t}");
                }
            }
        }
    }
}

#[test]
fn triangle_scores_match_dense_count() {
    for i in 0..200 {
        let mut r = rng(i + 11);
        let g = random_graph(r.gen_range(2..=50), r.gen_range(0.05..0.5), false, false, 5000 + i);
        let got = score_triangles(&g).unwrap().values;
        assert_eq!(got, triangles_per_edge(&g), "graph {i}");
    }
}

#[test]
fn modularity_matches_dense_formula() {
    for i in 0..200 {
        let mut r = rng(i + 13);
        let n = r.gen_range(2..=50);
        let g = random_graph(n, r.gen_range(0.05..0.4), false, i % 2 == 0, 7000 + i);
        if g.edge_count() == 0 {
            continue;
        }
        let k = r.gen_range(1..=n);
        let labels: Vec<usize> = (0..n).map(|_| r.gen_range(0..k)).collect();
        let p = Partition::from_assignment(labels.clone());
        let q = modularity(&g, &p).unwrap();
        assert!(close(q, modularity_dense(&g, &labels, 1.0), TOL), "graph {i}");
        let gamma = r.gen_range(0.2..2.0);
        let qg = modularity_with_resolution(&g, &p, gamma).unwrap();
        assert!(close(qg, modularity_dense(&g, &labels, gamma), TOL), "graph {i} gamma {gamma}");
    }
}

#[test]
fn ged_walk_matches_walk_enumeration() {
    let mut checked = 0;
    for i in 0..200u64 {
        let mut r = rng(i + 17);
        let n = r.gen_range(2..=8);
        let g = random_graph(n, 0.4, i % 5 == 0, false, 9000 + i);
        if g.edge_count() == 0 {
            continue;
        }
        let alpha = 0.9 / (g.max_degree() as f64 + 1.0);
        let len = r.gen_range(1..=5);
        let k = r.gen_range(1..=n.min(3));
        let s: Vec<usize> = rand::seq::index::sample(&mut r, n, k).into_vec();
        let got = ged_walk_eval(&g, &s, &GedParams::with_walk_length(alpha, len)).unwrap();
        let want = ged_walks_enumerated(&g, &s, alpha, len);
        assert!(close(got, want, TOL), "graph {i}: got {got}, expected {want}");
        checked += 1;
    }
    assert!(checked >= 150);
}
