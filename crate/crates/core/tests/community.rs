// SPDX-License-Identifier: Apache-2.0

mod support;

use std::collections::HashMap;

use netkit::community::{
    conductance, expand_seed, modularity, partition_similarity, plm, plm_observed, plp,
    Partition, PlmConfig, PlpConfig, SeedStrategy, Similarity,
};
use netkit::generators::planted_partition;
use netkit::traversal::connected_components;
use netkit::Graph;
use proptest::prelude::*;
use rand::Rng;
use support::*;

fn community_graphs() -> Vec<Graph> {
    let mut out: Vec<Graph> = (0..6u64)
        .map(|s| planted_partition(&[15, 25, 30], 0.35, 0.03, 60 + s).unwrap().0)
        .collect();
    for i in 0..14u64 {
        let mut r = rng(i);
        let n = r.gen_range(10..=200);
        out.push(random_graph(n, r.gen_range(2.0..8.0) / n as f64, false, i % 2 == 0, 90 + i));
    }
    out.into_iter().filter(|g| g.edge_count() > 0).collect()
}

#[test]
fn plm_recovers_planted_partition() {
    let mut hits = 0;
    for seed in 0..10 {
        let (g, truth) = planted_partition(&[50, 50], 0.3, 0.01, seed).unwrap();
        let p = plm(&g, &PlmConfig { seed, ..Default::default() }).unwrap();
        if partition_similarity(&p, &truth, Similarity::Nmi).unwrap() >= 0.9 {
            hits += 1;
        }
    }
    assert!(hits >= 9, "recovered {hits} of 10");
}

#[test]
fn refinement_never_lowers_modularity() {
    for (i, g) in community_graphs().into_iter().enumerate() {
        for seed in 0..3 {
            let base = plm(&g, &PlmConfig { seed, ..Default::default() }).unwrap();
            let refined = plm(&g, &PlmConfig { seed, refine: true, ..Default::default() }).unwrap();
            let (qb, qr) = (modularity(&g, &base).unwrap(), modularity(&g, &refined).unwrap());
            assert!(qr >= qb - 1e-12, "graph {i} seed {seed}: {qr} < {qb}");
        }
    }
}

#[test]
fn move_deltas_match_recomputed_modularity() {
    for (i, g) in community_graphs().into_iter().enumerate() {
        let mut events = 0;
        let cfg = PlmConfig { seed: i as u64, refine: true, ..Default::default() };
        plm_observed(&g, &cfg, &mut |e| {
            let before = modularity_dense(&g, &e.before, 1.0);
            let after = modularity_dense(&g, &e.after, 1.0);
            assert!(e.delta > 0.0);
            assert!((after - before - e.delta).abs() < 1e-9, "graph {i} level {}", e.level);
            events += 1;
        })
        .unwrap();
        assert!(events > 0);
    }
}

#[test]
fn plm_communities_are_connected() {
    for g in community_graphs() {
        let p = plm(&g, &PlmConfig { refine: true, ..Default::default() }).unwrap();
        for members in p.members() {
            let sub = g.filter_edges(|e| members.contains(&e.u) && members.contains(&e.v));
            let comp = connected_components(&sub).unwrap().assignment().to_vec();
            assert!(members.iter().all(|&v| comp[v] == comp[members[0]]));
        }
    }
}

#[test]
fn plp_labels_are_locally_dominant() {
    for g in community_graphs() {
        let p = plp(&g, &PlpConfig { max_iters: 1000, ..Default::default() }).unwrap();
        for v in g.nodes() {
            let mut w: HashMap<usize, f64> = HashMap::new();
            for a in g.adjacency(v) {
                *w.entry(p.community_of(a.node)).or_default() += a.weight;
            }
            if let Some(best) = w.values().copied().reduce(f64::max) {
                let own = w.get(&p.community_of(v)).copied().unwrap_or(0.0);
                assert!(own >= best, "vertex {v}");
            }
        }
    }
}

#[test]
fn plp_is_deterministic_for_a_seed() {
    let (g, _) = planted_partition(&[30, 30, 30], 0.3, 0.02, 5).unwrap();
    let cfg = PlpConfig { seed: 3, ..Default::default() };
    assert_eq!(plp(&g, &cfg).unwrap(), plp(&g, &cfg).unwrap());
}

#[test]
fn similarity_examples() {
    let a = Partition::from_assignment(vec![0, 0, 1, 1]);
    let b = Partition::from_assignment(vec![5, 5, 2, 2]);
    for kind in [Similarity::Rand, Similarity::Jaccard, Similarity::Nmi] {
        assert_eq!(partition_similarity(&a, &b, kind).unwrap(), 1.0);
    }
    let c = Partition::from_assignment(vec![0, 1, 0, 1]);
    assert!(partition_similarity(&a, &c, Similarity::Nmi).unwrap().abs() < 1e-12);
    // pairs: {01,23} vs {02,13}; agreements are the two pairs apart in both
    assert!((partition_similarity(&a, &c, Similarity::Rand).unwrap() - 2.0 / 6.0).abs() < 1e-12);
    assert_eq!(partition_similarity(&a, &c, Similarity::Jaccard).unwrap(), 0.0);
}

fn conductance_dense(g: &Graph, members: &[usize]) -> f64 {
    let w = weight_matrix(g);
    let inside: Vec<bool> = (0..g.node_count()).map(|v| members.contains(&v)).collect();
    let (mut cut, mut vol_in, mut vol_out) = (0.0, 0.0, 0.0);
    for u in 0..w.len() {
        for v in 0..w.len() {
            if inside[u] {
                vol_in += w[u][v];
                if !inside[v] {
                    cut += w[u][v];
                }
            } else {
                vol_out += w[u][v];
            }
        }
    }
    let m = f64::min(vol_in, vol_out);
    if m == 0.0 {
        0.0
    } else {
        cut / m
    }
}

#[test]
fn conductance_matches_dense() {
    for i in 0..50u64 {
        let g = random_graph(20, 0.2, false, i % 2 == 0, 300 + i);
        let mut r = rng(i);
        let k = r.gen_range(1..20);
        let s = rand::seq::index::sample(&mut r, 20, k).into_vec();
        assert!(close(conductance(&g, &s).unwrap(), conductance_dense(&g, &s), 1e-12));
    }
}

#[test]
fn seed_expansion_finds_the_clique() {
    let g = two_triangles_bridge();
    let c = expand_seed(&g, &[0], SeedStrategy::Greedy).unwrap();
    assert_eq!(c.members, vec![0, 1, 2]);
    assert!(close(c.conductance, 1.0 / 7.0, 1e-12));
    let c = expand_seed(&g, &[4], SeedStrategy::CliqueGreedy).unwrap();
    assert_eq!(c.members, vec![3, 4, 5]);
    let b = expand_seed(&g, &[0], SeedStrategy::BfsBaseline { size: 4 }).unwrap();
    assert_eq!(b.members.len(), 4);
}

#[test]
fn seed_expansion_never_worse_than_seed() {
    for (g, truth) in planted_corpus() {
        for s in [0, 25, 50] {
            let c = expand_seed(&g, &[s], SeedStrategy::Greedy).unwrap();
            assert!(c.members.contains(&s));
            assert!(c.conductance <= conductance(&g, &[s]).unwrap() + 1e-12);
            let same = c.members.iter().filter(|&&v| truth.community_of(v) == truth.community_of(s));
            assert!(same.count() * 2 >= c.members.len());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn plm_beats_singletons(n in 5usize..80, p in 0.05f64..0.3, seed in any::<u64>()) {
        let g = random_graph(n, p, false, false, seed);
        prop_assume!(g.edge_count() > 0);
        let part = plm(&g, &PlmConfig { seed, ..Default::default() }).unwrap();
        let q = modularity(&g, &part).unwrap();
        prop_assert!(q >= modularity(&g, &Partition::singletons(n)).unwrap() - 1e-12);
        prop_assert!(q <= 1.0);
        prop_assert!(close(q, modularity_dense(&g, part.assignment(), 1.0), 1e-9));
    }

    #[test]
    fn similarity_is_symmetric_and_bounded(
        a in proptest::collection::vec(0usize..4, 2..40),
        seed in any::<u64>(),
    ) {
        let mut r = rng(seed);
        let b: Vec<usize> = a.iter().map(|_| r.gen_range(0..4)).collect();
        let (pa, pb) = (Partition::from_assignment(a), Partition::from_assignment(b));
        for kind in [Similarity::Rand, Similarity::Jaccard, Similarity::Nmi] {
            let x = partition_similarity(&pa, &pb, kind).unwrap();
            let y = partition_similarity(&pb, &pa, kind).unwrap();
            prop_assert!((x - y).abs() < 1e-12);
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&x));
            prop_assert!((partition_similarity(&pa, &pa, kind).unwrap() - 1.0).abs() < 1e-12);
        }
    }
}
