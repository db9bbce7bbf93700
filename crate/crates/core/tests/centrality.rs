// SPDX-License-Identifier: Apache-2.0

mod support;

use netkit::centrality::{
    approx_sample_size, betweenness_approx, betweenness_exact, closeness, degree_centrality,
    electrical_closeness, harmonic, katz, maximize_betweenness, pagerank, top_k_closeness,
    ApproxParams, KatzParams, KatzSolver, PageRankParams,
};
use netkit::generators::{barabasi_albert, gnp};
use netkit::Graph;
use proptest::prelude::*;
use rand::Rng;
use support::*;

fn closeness_dense(d: &[Vec<f64>]) -> Vec<f64> {
    let n = d.len();
    d.iter()
        .map(|row| {
            let s: f64 = row.iter().sum();
            if s > 0.0 {
                (n - 1) as f64 / s
            } else {
                0.0
            }
        })
        .collect()
}

#[test]
fn closeness_and_harmonic_match_distance_matrix() {
    for (name, g) in corpus() {
        let d = floyd_warshall(&g);
        assert_vec_close(&closeness(&g).unwrap().scores, &closeness_dense(&d), 1e-12, &name);
        let h: Vec<f64> = d
            .iter()
            .map(|row| row.iter().filter(|&&x| x > 0.0 && x.is_finite()).map(|x| 1.0 / x).sum())
            .collect();
        assert_vec_close(&harmonic(&g, false).scores, &h, 1e-12, &name);
    }
}

#[test]
fn closeness_rejects_disconnected_and_directed() {
    let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
    assert!(closeness(&g).is_err());
    let mut d = Graph::new(3, true, false);
    d.add_edge(0, 1).unwrap();
    d.add_edge(1, 2).unwrap();
    d.add_edge(2, 0).unwrap();
    assert!(closeness(&d).is_err());
}

#[test]
fn top_k_closeness_equals_full_ranking_on_corpus() {
    for (name, g) in corpus() {
        let full = closeness(&g).unwrap();
        for k in [1, 5, 10] {
            let k = k.min(g.node_count());
            let top = top_k_closeness(&g, k).unwrap();
            let expected: Vec<(usize, f64)> = full.top(k);
            assert_eq!(top.top, expected, "{name} k={k}");
        }
    }
}

#[test]
fn top_k_closeness_prunes_on_scale_free_graph() {
    let g = barabasi_albert(3000, 3, 1).unwrap();
    let top = top_k_closeness(&g, 10).unwrap();
    assert!(top.completed < g.node_count() / 2, "completed {}", top.completed);
    assert_eq!(top.completed + top.pruned, g.node_count());
}

#[test]
fn katz_bounds_sandwich_dense_solution() {
    for i in 0..30u64 {
        let mut r = rng(i);
        let n = r.gen_range(5..=120);
        let g = random_graph(n, r.gen_range(0.02..0.2), i % 3 == 0, false, 400 + i);
        if g.max_degree() == 0 {
            continue;
        }
        let params = KatzParams::default_for(&g);
        let exact = katz_dense(&g, params.alpha);
        let mut solver = KatzSolver::new(&g, &params).unwrap();
        loop {
            for v in 0..n {
                let slack = 1e-12 * (1.0 + exact[v]);
                assert!(solver.lower()[v] <= exact[v] + slack, "graph {i} iter {} v {v}", solver.iterations());
                assert!(exact[v] <= solver.upper()[v] + slack, "graph {i} iter {} v {v}", solver.iterations());
            }
            if solver.is_resolved() || solver.iterations() > 500 {
                break;
            }
            solver.step();
        }
        let order = katz(&g, &params).unwrap().ranking();
        for w in order.windows(2) {
            assert!(exact[w[0]] >= exact[w[1]] - 1e-9, "graph {i}: {} before {}", w[0], w[1]);
        }
    }
}

#[test]
fn katz_rejects_divergent_alpha() {
    let g = star(5);
    assert!(katz(&g, &KatzParams::new(0.25)).is_err());
    assert!(katz(&g, &KatzParams::new(0.0)).is_err());
}

#[test]
fn pagerank_matches_power_iteration() {
    for i in 0..10u64 {
        let g = random_graph(40, 0.1, i % 2 == 0, false, 600 + i);
        let pr = pagerank(&g, &PageRankParams::default()).unwrap().scores;
        let n = g.node_count();
        let a = adjacency_matrix(&g);
        let out: Vec<f64> = a.iter().map(|r| r.iter().sum()).collect();
        let mut x = vec![1.0 / n as f64; n];
        for _ in 0..2000 {
            let dangling: f64 = (0..n).filter(|&u| out[u] == 0.0).map(|u| x[u]).sum();
            let mut y = vec![(0.15 + 0.85 * dangling) / n as f64; n];
            for u in 0..n {
                for v in 0..n {
                    if a[u][v] > 0.0 {
                        y[v] += 0.85 * x[u] / out[u];
                    }
                }
            }
            x = y;
        }
        assert_vec_close(&pr, &x, 1e-8, &format!("graph {i}"));
        assert!((pr.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn electrical_closeness_is_exact_on_trees() {
    for seed in 0..10 {
        let g = random_tree(30, seed);
        let e = electrical_closeness(&g, &ApproxParams::new(0.1, 0.1, seed)).unwrap();
        let d = floyd_warshall(&g);
        for v in 0..30 {
            assert!((e.resistance[v] - d[e.pivot][v]).abs() < 1e-9, "tree {seed} v {v}");
        }
        assert_vec_close(&e.result.scores, &closeness_dense(&d), 1e-9, "tree closeness");
    }
}

#[test]
fn electrical_resistances_match_pseudoinverse() {
    for seed in 0..4u64 {
        let g = random_connected(40, 0.15, false, 700 + seed);
        let e = electrical_closeness(&g, &ApproxParams::new(0.05, 0.1, seed)).unwrap();
        let pinv = laplacian_pinv(&g);
        let err: f64 = (0..40)
            .map(|v| (e.resistance[v] - effective_resistance(&pinv, e.pivot, v)).abs())
            .sum::<f64>()
            / 40.0;
        assert!(err <= 0.05, "graph {seed}: mean error {err}");
        for v in 0..40 {
            assert!((e.diagonal[v] - pinv[v][v]).abs() < 0.1, "graph {seed} diag {v}");
        }
    }
}

#[test]
fn approx_betweenness_within_epsilon() {
    let g = gnp(80, 0.08, 3).unwrap();
    let exact = betweenness_exact(&g, true).scores;
    let params = ApproxParams::new(0.05, 0.1, 9);
    let approx = betweenness_approx(&g, &params).unwrap();
    assert_eq!(approx.samples, Some(approx_sample_size(80, 0.05, 0.1)));
    let worst = exact.iter().zip(&approx.scores).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(worst <= 0.05, "max error {worst}");
}

#[test]
fn approx_betweenness_weighted_within_epsilon() {
    let g = random_connected(50, 0.1, true, 77);
    let exact = betweenness_exact(&g, true).scores;
    let approx = betweenness_approx(&g, &ApproxParams::new(0.05, 0.1, 4)).unwrap();
    let worst = exact.iter().zip(&approx.scores).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(worst <= 0.05, "max error {worst}");
}

#[test]
fn maximize_betweenness_matches_exhaustive_first_choice() {
    for seed in 0..6u64 {
        let g = random_connected(12, 0.15, false, 800 + seed);
        let target = (seed as usize) % 12;
        let imp = maximize_betweenness(&g, target, 2).unwrap();
        let base = betweenness_by_pairs(&g, false)[target];
        assert!(close(imp.initial, base, 1e-9));
        // First pick must be the best single insertion, ties by id.
        let mut best: Option<(f64, usize)> = None;
        for v in 0..12 {
            if v == target || g.has_edge(target, v) {
                continue;
            }
            let mut h = g.clone();
            h.add_edge(target, v).unwrap();
            let b = betweenness_by_pairs(&h, false)[target];
            if best.map_or(true, |(bb, _)| b > bb + 1e-9) {
                best = Some((b, v));
            }
        }
        let (b, v) = best.unwrap();
        let (x, y) = imp.edges[0];
        assert_eq!(if x == target { y } else { x }, v, "graph {seed}");
        assert!(close(imp.trace[0], b, 1e-9));
        assert!(imp.trace.windows(2).all(|w| w[1] >= w[0] - 1e-9) || imp.trace.len() < 2);
    }
}

#[test]
fn degree_centrality_is_degree() {
    let g = two_triangles_bridge();
    assert_eq!(degree_centrality(&g).scores, vec![2.0, 2.0, 3.0, 3.0, 2.0, 2.0]);
}

fn arb_graph() -> impl Strategy<Value = Graph> {
    (3usize..25, 0.05f64..0.5, any::<u64>()).prop_map(|(n, p, s)| random_connected(n, p, false, s))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Each unordered pair {s,t} contributes d(s,t) - 1 interior vertices in total.
    #[test]
    fn raw_betweenness_sums_interior_lengths(g in arb_graph()) {
        let b = betweenness_exact(&g, false).scores;
        let d = floyd_warshall(&g);
        let n = g.node_count();
        let mut want = 0.0;
        for s in 0..n {
            for t in s + 1..n {
                want += d[s][t] - 1.0;
            }
        }
        prop_assert!(close(b.iter().sum::<f64>(), want, 1e-9));
        prop_assert!(b.iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn normalized_scores_stay_in_unit_interval(g in arb_graph()) {
        for x in betweenness_exact(&g, true).scores {
            prop_assert!((0.0..=1.0 + 1e-12).contains(&x));
        }
        for x in closeness(&g).unwrap().scores {
            prop_assert!(x > 0.0 && x <= 1.0 + 1e-12);
        }
        for x in harmonic(&g, true).scores {
            prop_assert!(x > 0.0 && x <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn relabeling_permutes_betweenness(g in arb_graph(), seed in any::<u64>()) {
        let n = g.node_count();
        let mut perm: Vec<usize> = (0..n).collect();
        rand::seq::SliceRandom::shuffle(&mut perm[..], &mut rng(seed));
        let edges: Vec<_> = g.edges().iter().map(|e| (perm[e.u], perm[e.v])).collect();
        let h = Graph::from_edges(n, &edges).unwrap();
        let bg = betweenness_exact(&g, false).scores;
        let bh = betweenness_exact(&h, false).scores;
        for v in 0..n {
            prop_assert!(close(bg[v], bh[perm[v]], 1e-9));
        }
    }
}
