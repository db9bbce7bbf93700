// SPDX-License-Identifier: Apache-2.0

use netkit::centrality::{betweenness_exact, degree_centrality};
use netkit::stats::{spearman, sturges_bins, Correlation};
use netkit::Graph;
use netkit_cli::profile::{profile, MeasureStatus, ProfileConfig, ProfileMeasure, ProfileReport};
use netkit_cli::render;

fn config() -> ProfileConfig {
    ProfileConfig {
        timestamp: false,
        ..Default::default()
    }
}

fn index(r: &ProfileReport, name: &str) -> usize {
    r.correlation.measures.iter().position(|m| m == name).unwrap()
}

#[test]
fn path_degree_and_betweenness_agree() {
    let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
    let r = profile(&g, &config()).unwrap();
    r.validate().unwrap();
    let (d, b) = (index(&r, "degree"), index(&r, "betweenness"));
    assert_eq!(r.correlation.matrix[d][b], Correlation::Value(1.0));
    let direct = spearman(&degree_centrality(&g).scores, &betweenness_exact(&g, true).scores).unwrap();
    assert_eq!(direct, Correlation::Value(1.0));
}

#[test]
fn complete_graph_is_degenerate_everywhere() {
    let mut edges = Vec::new();
    for u in 0..4 {
        for v in u + 1..4 {
            edges.push((u, v));
        }
    }
    let g = Graph::from_edges(4, &edges).unwrap();
    let r = profile(&g, &config()).unwrap();
    r.validate().unwrap();
    assert!(r.correlation.matrix.iter().flatten().all(|c| *c == Correlation::Degenerate));
    let json = render::to_json(&r);
    assert!(json.contains("null"));
    assert!(render::to_html(&r).contains('\u{2014}'));
}

#[test]
fn disconnected_graph_falls_back_to_harmonic() {
    let g = Graph::from_edges(5, &[(0, 1), (1, 2), (3, 4)]).unwrap();
    let r = profile(&g, &config()).unwrap();
    r.validate().unwrap();
    let m = r.measures.iter().find(|m| m.requested == ProfileMeasure::Closeness).unwrap();
    assert_eq!(m.name, "harmonic");
    assert!(m.note.as_ref().unwrap().contains("disconnected"));
    assert!(r.notes.iter().any(|n| n.contains("harmonic")));
    assert_eq!(r.graph.components, 2);
}

#[test]
fn failed_measure_is_recorded_and_report_still_built() {
    let mut g = Graph::new(3, true, false);
    g.add_edge(0, 1).unwrap();
    g.add_edge(1, 2).unwrap();
    // Katz default alpha is fine, but mean clustering is undefined on directed input.
    let r = profile(&g, &config()).unwrap();
    r.validate().unwrap();
    assert!(r.graph.mean_clustering.is_none());
    assert!(r.measures.iter().all(|m| m.status == MeasureStatus::Ok));
    let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
    let cfg = ProfileConfig {
        approx: netkit::centrality::ApproxParams::new(-1.0, 0.1, 0),
        ..config()
    };
    // Bad sampling parameters only matter above the exact limit; the report is unaffected here.
    assert!(profile(&star, &cfg).unwrap().measures.iter().all(|m| m.status == MeasureStatus::Ok));
}

#[test]
fn empty_selection_keeps_global_stats() {
    let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
    let r = profile(&g, &ProfileConfig { measures: vec![], ..config() }).unwrap();
    r.validate().unwrap();
    assert!(r.measures.is_empty() && r.correlation.measures.is_empty());
    assert_eq!((r.graph.n, r.graph.m), (3, 2));
    assert!((r.graph.density - 2.0 / 3.0).abs() < 1e-15);
    assert_eq!(r.graph.diameter.value, 2);
    assert!(r.graph.diameter.exact);
}

#[test]
fn histograms_and_bins() {
    let g = netkit::generators::barabasi_albert(300, 2, 1).unwrap();
    let r = profile(&g, &config()).unwrap();
    r.validate().unwrap();
    for m in &r.measures {
        assert_eq!(m.histogram.as_ref().unwrap().counts.len(), sturges_bins(300));
    }
    let r = profile(&g, &ProfileConfig { bins: Some(7), ..config() }).unwrap();
    assert!(r.measures.iter().all(|m| m.histogram.as_ref().unwrap().counts.len() == 7));
}

#[test]
fn json_round_trips_and_html_has_a_section_per_measure() {
    let g = netkit::generators::watts_strogatz(60, 4, 0.2, 2).unwrap();
    let r = profile(&g, &config()).unwrap();
    let back = render::from_json(&render::to_json(&r)).unwrap();
    assert_eq!(back, r);
    let html = render::to_html(&r);
    for m in &r.measures {
        assert!(html.contains(&format!("<h2>{}</h2>", m.name)));
    }
    let notes = usize::from(!r.notes.is_empty());
    assert_eq!(html.matches("<section>").count(), r.measures.len() + 2 + notes);
}

#[test]
fn correlation_matches_pairwise_calls() {
    let g = netkit::generators::barabasi_albert(200, 3, 4).unwrap();
    let r = profile(&g, &config()).unwrap();
    let d = degree_centrality(&g).scores;
    let b = betweenness_exact(&g, true).scores;
    let (i, j) = (index(&r, "degree"), index(&r, "betweenness"));
    assert_eq!(r.correlation.matrix[i][j], spearman(&d, &b).unwrap());
    assert_eq!(r.correlation.matrix[j][i], r.correlation.matrix[i][j]);
}
