// SPDX-License-Identifier: Apache-2.0

//! Profiling report: global graph statistics, per-measure histograms and
//! summaries, and the Spearman correlation matrix between measures.

use std::fmt;
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use netkit::centrality::{
    betweenness_approx, betweenness_exact, closeness, closeness_approx, degree_centrality,
    harmonic, harmonic_approx, harmonic_sample_size, katz, pagerank, ApproxParams,
    CentralityResult, KatzParams, PageRankParams,
};
use netkit::stats::{histogram, spearman, sturges_bins, summary, Correlation, Histogram, Summary};
use netkit::traversal::{component_count, diameter, is_connected, mean_clustering, Diameter};
use netkit::{Graph, Result};
use serde::{Deserialize, Serialize};

/// Exact betweenness up to this many vertices, sampling above.
pub const EXACT_BETWEENNESS_LIMIT: usize = 2000;

/// Exact closeness and harmonic closeness up to this many vertices, sampled above.
pub const EXACT_CLOSENESS_LIMIT: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileMeasure {
    Degree,
    /// Closeness, or harmonic closeness on disconnected/directed graphs.
    Closeness,
    Harmonic,
    /// Exact up to [`EXACT_BETWEENNESS_LIMIT`] vertices, sampled above.
    Betweenness,
    Katz,
    PageRank,
}

impl ProfileMeasure {
    pub const DEFAULT: [ProfileMeasure; 5] = [
        ProfileMeasure::Degree,
        ProfileMeasure::Closeness,
        ProfileMeasure::Betweenness,
        ProfileMeasure::Katz,
        ProfileMeasure::PageRank,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProfileMeasure::Degree => "degree",
            ProfileMeasure::Closeness => "closeness",
            ProfileMeasure::Harmonic => "harmonic",
            ProfileMeasure::Betweenness => "betweenness",
            ProfileMeasure::Katz => "katz",
            ProfileMeasure::PageRank => "pagerank",
        }
    }
}

impl fmt::Display for ProfileMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProfileMeasure {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "degree" => Ok(ProfileMeasure::Degree),
            "closeness" => Ok(ProfileMeasure::Closeness),
            "harmonic" => Ok(ProfileMeasure::Harmonic),
            "betweenness" => Ok(ProfileMeasure::Betweenness),
            "katz" => Ok(ProfileMeasure::Katz),
            "pagerank" => Ok(ProfileMeasure::PageRank),
            other => Err(format!("unknown measure `{other}`")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProfileConfig {
    pub measures: Vec<ProfileMeasure>,
    /// Histogram bins; Sturges' rule when `None`.
    pub bins: Option<usize>,
    /// Sampling parameters for betweenness above the exact limit.
    pub approx: ApproxParams,
    /// Sampling parameters for closeness and harmonic closeness above the exact limit.
    pub closeness_approx: ApproxParams,
    /// Include a generation timestamp in the report.
    pub timestamp: bool,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        ProfileConfig {
            measures: ProfileMeasure::DEFAULT.to_vec(),
            bins: None,
            approx: ApproxParams::new(0.01, 0.1, 0),
            closeness_approx: ApproxParams::new(0.05, 0.1, 0),
            timestamp: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalStats {
    pub n: usize,
    pub m: usize,
    pub directed: bool,
    pub weighted: bool,
    pub density: f64,
    pub components: usize,
    pub mean_clustering: Option<f64>,
    pub diameter: Diameter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureStatus {
    Ok,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    /// Name of the measure actually computed.
    pub name: String,
    /// The measure that was requested.
    pub requested: ProfileMeasure,
    pub status: MeasureStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalized: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub histogram: Option<Histogram>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<Summary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    /// Row/column labels: the successfully computed measures, in order.
    pub measures: Vec<String>,
    /// Spearman coefficients; `null` where undefined (a constant ranking).
    pub matrix: Vec<Vec<Correlation>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileReport {
    /// Seconds since the Unix epoch; omitted when timestamps are disabled.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_at: Option<u64>,
    pub graph: GlobalStats,
    pub measures: Vec<MeasureReport>,
    pub correlation: CorrelationMatrix,
    pub notes: Vec<String>,
}

impl ProfileReport {
    /// Checks the structural invariants: square symmetric correlation matrix
    /// with coefficients in [-1, 1] and a unit (or undefined) diagonal, and
    /// histogram counts summing to n.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let k = self.correlation.measures.len();
        let m = &self.correlation.matrix;
        if m.len() != k || m.iter().any(|row| row.len() != k) {
            return Err(format!("correlation matrix is not {k}x{k}"));
        }
        for i in 0..k {
            if let Correlation::Value(d) = m[i][i] {
                if d != 1.0 {
                    return Err(format!("diagonal entry {i} is {d}"));
                }
            }
            for j in 0..k {
                if m[i][j] != m[j][i] {
                    return Err(format!("entries ({i}, {j}) and ({j}, {i}) differ"));
                }
                if let Correlation::Value(x) = m[i][j] {
                    if !(-1.0..=1.0).contains(&x) {
                        return Err(format!("entry ({i}, {j}) = {x} outside [-1, 1]"));
                    }
                }
            }
        }
        for r in &self.measures {
            if let Some(h) = &r.histogram {
                let mass: usize = h.counts.iter().sum();
                if mass != self.graph.n {
                    return Err(format!("histogram of {} holds {mass} of {} vertices", r.name, self.graph.n));
                }
            }
        }
        Ok(())
    }
}

pub fn global_stats(g: &Graph) -> GlobalStats {
    let n = g.node_count();
    let m = g.edge_count();
    let pairs = n as f64 * (n as f64 - 1.0);
    let density = if n < 2 {
        0.0
    } else if g.is_directed() {
        m as f64 / pairs
    } else {
        2.0 * m as f64 / pairs
    };
    GlobalStats {
        n,
        m,
        directed: g.is_directed(),
        weighted: g.is_weighted(),
        density,
        components: component_count(g),
        mean_clustering: mean_clustering(g).ok(),
        diameter: diameter(g),
    }
}

type MeasureRun = (Result<CentralityResult>, String, Option<String>);

fn sampled_note(what: &str, r: Option<&CentralityResult>, a: &ApproxParams, limit: usize) -> Option<String> {
    r.map(|r| {
        format!(
            "{what} estimated from {} samples (epsilon={}, delta={}): n > {limit}",
            r.samples.unwrap_or(0),
            a.epsilon,
            a.delta
        )
    })
}

/// Sampling pays off only when it needs fewer searches than there are vertices.
fn sample_closeness(g: &Graph, config: &ProfileConfig) -> bool {
    let n = g.node_count();
    let a = config.closeness_approx;
    n > EXACT_CLOSENESS_LIMIT && harmonic_sample_size(n, a.epsilon, a.delta) < n
}

fn run_harmonic(g: &Graph, config: &ProfileConfig) -> MeasureRun {
    if sample_closeness(g, config) {
        let a = config.closeness_approx;
        let r = harmonic_approx(g, &a);
        let note = sampled_note("harmonic closeness", r.as_ref().ok(), &a, EXACT_CLOSENESS_LIMIT);
        (r, "harmonic_approx".into(), note)
    } else {
        (Ok(harmonic(g, true)), "harmonic".into(), None)
    }
}

fn run_measure(
    g: &Graph,
    measure: ProfileMeasure,
    config: &ProfileConfig,
) -> MeasureRun {
    match measure {
        ProfileMeasure::Degree => (Ok(degree_centrality(g)), "degree".into(), None),
        ProfileMeasure::Closeness => {
            if g.is_directed() || !is_connected(g) {
                let why = if g.is_directed() { "directed" } else { "disconnected" };
                let (r, name, note) = run_harmonic(g, config);
                let fallback = format!("closeness replaced by harmonic closeness: graph is {why}");
                let note = Some(match note {
                    Some(n) => format!("{fallback}; {n}"),
                    None => fallback,
                });
                (r, name, note)
            } else if sample_closeness(g, config) {
                let a = config.closeness_approx;
                let r = closeness_approx(g, &a);
                let note = sampled_note("closeness", r.as_ref().ok(), &a, EXACT_CLOSENESS_LIMIT);
                (r, "closeness_approx".into(), note)
            } else {
                (closeness(g), "closeness".into(), None)
            }
        }
        ProfileMeasure::Harmonic => run_harmonic(g, config),
        ProfileMeasure::Betweenness => {
            if g.node_count() <= EXACT_BETWEENNESS_LIMIT {
                (Ok(betweenness_exact(g, true)), "betweenness".into(), None)
            } else {
                let a = config.approx;
                let r = betweenness_approx(g, &a);
                let note = sampled_note("betweenness", r.as_ref().ok(), &a, EXACT_BETWEENNESS_LIMIT);
                (r, "betweenness_approx".into(), note)
            }
        }
        ProfileMeasure::Katz => {
            let params = KatzParams::default_for(g);
            let r = katz(g, &params);
            let note = Some(format!("katz alpha = 1/(max_degree+1) = {}", params.alpha));
            (r, "katz".into(), note)
        }
        ProfileMeasure::PageRank => (
            pagerank(g, &PageRankParams::default()),
            "pagerank".into(),
            None,
        ),
    }
}

/// Runs the selected measures and assembles the report. A failing measure is
/// recorded with its error and left out of the correlation matrix.
pub fn profile(g: &Graph, config: &ProfileConfig) -> Result<ProfileReport> {
    let n = g.node_count();
    let bins = config.bins.unwrap_or_else(|| sturges_bins(n));
    let mut notes = Vec::new();
    let mut measures = Vec::new();
    let mut columns: Vec<(String, Vec<f64>)> = Vec::new();
    for &requested in &config.measures {
        let (result, name, note) = run_measure(g, requested, config);
        if let Some(note) = &note {
            notes.push(note.clone());
        }
        match result {
            Ok(r) => {
                let (hist, summ) = if n > 0 {
                    (Some(histogram(&r.scores, bins)?), Some(summary(&r.scores)?))
                } else {
                    (None, None)
                };
                measures.push(MeasureReport {
                    name: name.clone(),
                    requested,
                    status: MeasureStatus::Ok,
                    note,
                    normalized: Some(r.normalized),
                    histogram: hist,
                    summary: summ,
                });
                columns.push((name, r.scores));
            }
            Err(e) => measures.push(MeasureReport {
                name,
                requested,
                status: MeasureStatus::Failed,
                note: Some(e.to_string()),
                normalized: None,
                histogram: None,
                summary: None,
            }),
        }
    }
    let k = columns.len();
    let mut matrix = vec![vec![Correlation::Degenerate; k]; k];
    if n >= 2 {
        for i in 0..k {
            for j in i..k {
                let c = spearman(&columns[i].1, &columns[j].1)?;
                matrix[i][j] = c;
                matrix[j][i] = c;
            }
        }
    }
    let generated_at = config.timestamp.then(|| {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0)
    });
    Ok(ProfileReport {
        generated_at,
        graph: global_stats(g),
        measures,
        correlation: CorrelationMatrix {
            measures: columns.into_iter().map(|(name, _)| name).collect(),
            matrix,
        },
        notes,
    })
}
