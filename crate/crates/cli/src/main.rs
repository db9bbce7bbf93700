// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use netkit::centrality::{
    betweenness_approx, betweenness_exact, closeness, closeness_approx, degree_centrality,
    electrical_closeness, harmonic, harmonic_approx, katz, maximize_betweenness, pagerank, top_k_closeness, ApproxParams,
    CentralityResult, KatzParams, PageRankParams,
};
use netkit::community::{
    expand_seed, modularity, plm, plp, Partition, PlmConfig, PlpConfig, SeedStrategy,
};
use netkit::generators;
use netkit::group::{
    ged_walk_greedy, group_closeness_greedy, group_closeness_local_search, group_degree_greedy,
    group_harmonic_greedy, GedParams,
};
use netkit::io::{format_graph, parse_graph, Format};
use netkit::sparsify::{
    filter_fraction, filter_local, filter_threshold, preservation_report, score_jaccard,
    score_local_degree, score_random, score_triangles, transform_local_filter,
};
use netkit::{Graph, Node};
use netkit_cli::profile::{profile, ProfileConfig, ProfileMeasure};
use netkit_cli::render;

#[derive(Parser, Debug)]
#[command(name = "netkit", version, about = "Network analysis toolkit")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Input graph file; `-` reads standard input.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Graph file format, for both reading and writing graphs.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Edgelist)]
    format: FormatArg,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 1 runs sequentially and makes every command deterministic.
    #[arg(long, global = true, env = "NETKIT_THREADS")]
    threads: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Edgelist,
    Metis,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Edgelist => Format::EdgeList,
            FormatArg::Metis => Format::Metis,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a synthetic graph.
    Generate {
        #[command(subcommand)]
        model: Model,
    },
    /// Vertex centrality scores as `vertex,score` CSV.
    Centrality(CentralityArgs),
    /// Greedy vertex group maximization, as JSON.
    Group(GroupArgs),
    /// Community detection: `vertex,community` CSV, or JSON for seed expansion.
    Community(CommunityArgs),
    /// Score edges and keep the most important ones; writes the sparsified graph.
    Sparsify(SparsifyArgs),
    /// Global statistics, centrality distributions and rank correlations.
    Profile(ProfileArgs),
}

#[derive(Subcommand, Debug)]
enum Model {
    /// Erdős–Rényi G(n, p).
    Gnp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
    },
    /// Barabási–Albert preferential attachment, `k` edges per new vertex.
    Ba {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Watts–Strogatz ring lattice with rewiring.
    Ws {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        beta: f64,
    },
    /// Chung–Lu with the given expected degrees.
    ChungLu {
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<f64>,
    },
    /// Planted partition with the given block sizes.
    Planted {
        #[arg(long, value_delimiter = ',', required = true)]
        blocks: Vec<usize>,
        #[arg(long)]
        p_in: f64,
        #[arg(long)]
        p_out: f64,
        /// Also write the ground-truth `vertex,community` CSV here.
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// 2D grid, optionally a torus.
    Lattice {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long)]
        periodic: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CentralityMeasure {
    Degree,
    Closeness,
    ClosenessApprox,
    Harmonic,
    HarmonicApprox,
    Betweenness,
    BetweennessApprox,
    Katz,
    Pagerank,
    Electrical,
    TopkCloseness,
    MaximizeBetweenness,
}

#[derive(Args, Debug)]
struct CentralityArgs {
    #[arg(long, value_enum)]
    measure: CentralityMeasure,
    /// Raw scores instead of normalized ones (betweenness, harmonic).
    #[arg(long)]
    raw: bool,
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    /// Katz decay; defaults to 1 / (max degree + 1).
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 0.85)]
    damping: f64,
    /// Result size for top-k closeness; edge budget for betweenness maximization.
    #[arg(long, default_value_t = 10)]
    k: usize,
    /// Target vertex for betweenness maximization.
    #[arg(long)]
    target: Option<Node>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GroupMeasureArg {
    Degree,
    Closeness,
    Harmonic,
    Gedwalk,
}

#[derive(Args, Debug)]
struct GroupArgs {
    #[arg(long, value_enum)]
    measure: GroupMeasureArg,
    #[arg(long)]
    k: usize,
    /// Swap-based local search instead of greedy (closeness only).
    #[arg(long)]
    local_search: bool,
    /// GED-Walk decay; defaults to 1 / (max degree + 1).
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    walk_length: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Algorithm {
    Plm,
    Plp,
    Seed,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Strategy {
    Greedy,
    CliqueGreedy,
    Bfs,
}

#[derive(Args, Debug)]
struct CommunityArgs {
    #[arg(long, value_enum, default_value_t = Algorithm::Plm)]
    algorithm: Algorithm,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[arg(long)]
    refine: bool,
    #[arg(long, default_value_t = 100)]
    max_iters: usize,
    /// Seed vertices for `--algorithm seed`.
    #[arg(long, value_delimiter = ',')]
    seeds: Vec<Node>,
    #[arg(long, value_enum, default_value_t = Strategy::Greedy)]
    strategy: Strategy,
    /// Community size for the BFS baseline strategy.
    #[arg(long, default_value_t = 10)]
    size: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ScorerArg {
    Random,
    Triangles,
    Jaccard,
    LocalDegree,
}

#[derive(Args, Debug)]
struct SparsifyArgs {
    #[arg(long, value_enum)]
    scorer: ScorerArg,
    /// Apply the per-vertex local filter transform before filtering.
    #[arg(long)]
    local_filter: bool,
    /// Keep this fraction of the edges by global score rank.
    #[arg(long, conflicts_with_all = ["threshold", "exponent"])]
    fraction: Option<f64>,
    /// Keep edges scoring at least this much.
    #[arg(long, conflicts_with = "exponent")]
    threshold: Option<f64>,
    /// Local filter exponent: every vertex keeps its top ceil(d^e) edges.
    #[arg(long)]
    exponent: Option<f64>,
    /// Write a JSON preservation report (degree, clustering, components, diameter) here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReportFormat {
    Json,
    Html,
}

#[derive(Args, Debug)]
struct ProfileArgs {
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    report_format: ReportFormat,
    /// Comma-separated measures; `none` for global statistics only.
    #[arg(long, value_delimiter = ',')]
    measures: Option<Vec<String>>,
    /// Histogram bins; Sturges' rule by default.
    #[arg(long)]
    bins: Option<usize>,
    /// Betweenness sampling error above the exact-betweenness size limit.
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    /// Closeness sampling error above the exact-closeness size limit.
    #[arg(long, default_value_t = 0.05)]
    closeness_epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    /// Leave the generation timestamp out of the report.
    #[arg(long)]
    no_timestamp: bool,
}

enum Failure {
    Usage(String),
    Core(netkit::Error),
    Io(String),
}

impl From<netkit::Error> for Failure {
    fn from(e: netkit::Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Io(_) => 2,
            Failure::Core(e) if e.is_input_error() => 2,
            Failure::Core(_) => 3,
        }
    }
}

type CmdResult = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

struct Ctx {
    common: Common,
}

impl Ctx {
    fn sequential(&self) -> bool {
        rayon::current_num_threads() == 1
    }

    fn read_input(&self) -> Result<Graph, Failure> {
        let path = self
            .common
            .input
            .as_ref()
            .ok_or_else(|| usage("this command needs --input"))?;
        let text = if path.as_os_str() == "-" {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Io(format!("reading standard input: {e}")))?;
            s
        } else {
            fs::read_to_string(path)
                .map_err(|e| Failure::Io(format!("reading {}: {e}", path.display())))?
        };
        let g = parse_graph(&text, self.common.format.into())?;
        eprintln!("read graph: n={} m={}", g.node_count(), g.edge_count());
        Ok(g)
    }

    fn emit(&self, text: &str) -> CmdResult {
        write_to(self.common.out.as_ref(), text)
    }

    fn emit_graph(&self, g: &Graph) -> CmdResult {
        self.emit(&format_graph(g, self.common.format.into())?)
    }
}

fn write_to(path: Option<&PathBuf>, text: &str) -> CmdResult {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("writing {}: {e}", p.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Io(format!("writing standard output: {e}")))
        }
    }
}

fn scores_csv(scores: &[f64]) -> String {
    let mut s = String::from("vertex,score\n");
    for (v, x) in scores.iter().enumerate() {
        s.push_str(&format!("{v},{x}\n"));
    }
    s
}

fn partition_csv(p: &Partition) -> String {
    let mut s = String::from("vertex,community\n");
    for (v, c) in p.assignment().iter().enumerate() {
        s.push_str(&format!("{v},{c}\n"));
    }
    s
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    s
}

fn default_alpha(g: &Graph) -> f64 {
    1.0 / (g.max_degree() as f64 + 1.0)
}

fn generate(ctx: &Ctx, model: &Model) -> CmdResult {
    let seed = ctx.common.seed;
    let g = match model {
        Model::Gnp { n, p } => generators::gnp(*n, *p, seed)?,
        Model::Ba { n, k } => generators::barabasi_albert(*n, *k, seed)?,
        Model::Ws { n, k, beta } => generators::watts_strogatz(*n, *k, *beta, seed)?,
        Model::ChungLu { weights } => generators::chung_lu(weights, seed)?,
        Model::Planted { blocks, p_in, p_out, truth } => {
            let (g, p) = generators::planted_partition(blocks, *p_in, *p_out, seed)?;
            if let Some(path) = truth {
                write_to(Some(path), &partition_csv(&p))?;
            }
            g
        }
        Model::Lattice { rows, cols, periodic } => generators::lattice(*rows, *cols, *periodic)?,
    };
    eprintln!("generated graph: n={} m={}", g.node_count(), g.edge_count());
    ctx.emit_graph(&g)
}

fn centrality(ctx: &Ctx, a: &CentralityArgs) -> CmdResult {
    let g = ctx.read_input()?;
    let approx = ApproxParams::new(a.epsilon, a.delta, ctx.common.seed);
    let result: CentralityResult = match a.measure {
        CentralityMeasure::Degree => degree_centrality(&g),
        CentralityMeasure::Closeness => closeness(&g)?,
        CentralityMeasure::ClosenessApprox => closeness_approx(&g, &approx)?,
        CentralityMeasure::Harmonic => harmonic(&g, !a.raw),
        CentralityMeasure::HarmonicApprox => harmonic_approx(&g, &approx)?,
        CentralityMeasure::Betweenness => betweenness_exact(&g, !a.raw),
        CentralityMeasure::BetweennessApprox => betweenness_approx(&g, &approx)?,
        CentralityMeasure::Katz => {
            katz(&g, &KatzParams::new(a.alpha.unwrap_or_else(|| default_alpha(&g))))?
        }
        CentralityMeasure::Pagerank => pagerank(
            &g,
            &PageRankParams {
                damping: a.damping,
                ..PageRankParams::default()
            },
        )?,
        CentralityMeasure::Electrical => {
            let e = electrical_closeness(&g, &approx)?;
            eprintln!("pivot={} spanning_trees={}", e.pivot, e.samples);
            e.result
        }
        CentralityMeasure::TopkCloseness => {
            let t = top_k_closeness(&g, a.k)?;
            eprintln!("completed_searches={} pruned_searches={}", t.completed, t.pruned);
            let mut s = String::from("vertex,score\n");
            for (v, x) in &t.top {
                s.push_str(&format!("{v},{x}\n"));
            }
            return ctx.emit(&s);
        }
        CentralityMeasure::MaximizeBetweenness => {
            let target = a
                .target
                .ok_or_else(|| usage("maximize-betweenness needs --target"))?;
            let imp = maximize_betweenness(&g, target, a.k)?;
            return ctx.emit(&to_json(&imp));
        }
    };
    if let Some(s) = result.samples {
        eprintln!("samples={s}");
    }
    if let Some(i) = result.iterations {
        eprintln!("iterations={i}");
    }
    ctx.emit(&scores_csv(&result.scores))
}

fn group(ctx: &Ctx, a: &GroupArgs) -> CmdResult {
    let g = ctx.read_input()?;
    if a.local_search && !matches!(a.measure, GroupMeasureArg::Closeness) {
        return Err(usage("--local-search applies to group closeness only"));
    }
    let grp = match a.measure {
        GroupMeasureArg::Degree => group_degree_greedy(&g, a.k)?,
        GroupMeasureArg::Closeness if a.local_search => group_closeness_local_search(&g, a.k, None)?,
        GroupMeasureArg::Closeness => group_closeness_greedy(&g, a.k)?,
        GroupMeasureArg::Harmonic => group_harmonic_greedy(&g, a.k)?,
        GroupMeasureArg::Gedwalk => {
            let alpha = a.alpha.unwrap_or_else(|| default_alpha(&g));
            let params = match a.walk_length {
                Some(l) => GedParams::with_walk_length(alpha, l),
                None => GedParams::new(alpha),
            };
            ged_walk_greedy(&g, a.k, &params)?
        }
    };
    ctx.emit(&to_json(&grp))
}

fn community(ctx: &Ctx, a: &CommunityArgs) -> CmdResult {
    let g = ctx.read_input()?;
    let parallel = !ctx.sequential();
    let p = match a.algorithm {
        Algorithm::Plm => plm(
            &g,
            &PlmConfig {
                gamma: a.gamma,
                refine: a.refine,
                seed: ctx.common.seed,
                parallel,
                ..PlmConfig::default()
            },
        )?,
        Algorithm::Plp => plp(
            &g,
            &PlpConfig {
                seed: ctx.common.seed,
                max_iters: a.max_iters,
                parallel,
                ..PlpConfig::default()
            },
        )?,
        Algorithm::Seed => {
            if a.seeds.is_empty() {
                return Err(usage("--algorithm seed needs --seeds"));
            }
            let strategy = match a.strategy {
                Strategy::Greedy => SeedStrategy::Greedy,
                Strategy::CliqueGreedy => SeedStrategy::CliqueGreedy,
                Strategy::Bfs => SeedStrategy::BfsBaseline { size: a.size },
            };
            let c = expand_seed(&g, &a.seeds, strategy)?;
            return ctx.emit(&to_json(&c));
        }
    };
    if !g.is_directed() {
        eprintln!("communities={} modularity={}", p.community_count(), modularity(&g, &p)?);
    }
    ctx.emit(&partition_csv(&p))
}

fn sparsify(ctx: &Ctx, a: &SparsifyArgs) -> CmdResult {
    let g = ctx.read_input()?;
    let mut scores = match a.scorer {
        ScorerArg::Random => score_random(&g, ctx.common.seed),
        ScorerArg::Triangles => score_triangles(&g)?,
        ScorerArg::Jaccard => score_jaccard(&g)?,
        ScorerArg::LocalDegree => score_local_degree(&g)?,
    };
    if a.local_filter {
        scores = transform_local_filter(&g, &scores)?;
    }
    let h = match (a.fraction, a.threshold, a.exponent) {
        (Some(f), _, _) => filter_fraction(&g, &scores, f)?,
        (_, Some(t), _) => filter_threshold(&g, &scores, t)?,
        (_, _, Some(e)) => filter_local(&g, &scores, e)?,
        _ => return Err(usage("give one of --fraction, --threshold or --exponent")),
    };
    eprintln!("kept {} of {} edges", h.edge_count(), g.edge_count());
    if let Some(path) = &a.report {
        write_to(Some(path), &to_json(&preservation_report(&g, &h)?))?;
    }
    ctx.emit_graph(&h)
}

fn run_profile(ctx: &Ctx, a: &ProfileArgs) -> CmdResult {
    let g = ctx.read_input()?;
    let measures = match &a.measures {
        None => ProfileMeasure::DEFAULT.to_vec(),
        Some(list) if list.len() == 1 && list[0] == "none" => Vec::new(),
        Some(list) => list
            .iter()
            .map(|s| s.parse::<ProfileMeasure>())
            .collect::<Result<_, _>>()
            .map_err(usage)?,
    };
    let config = ProfileConfig {
        measures,
        bins: a.bins,
        approx: ApproxParams::new(a.epsilon, a.delta, ctx.common.seed),
        closeness_approx: ApproxParams::new(a.closeness_epsilon, a.delta, ctx.common.seed),
        timestamp: !a.no_timestamp,
    };
    let report = profile(&g, &config)?;
    let text = match a.report_format {
        ReportFormat::Json => render::to_json(&report),
        ReportFormat::Html => render::to_html(&report),
    };
    ctx.emit(&text)
}

fn run(cli: Cli) -> CmdResult {
    if let Some(t) = cli.common.threads {
        if t == 0 {
            return Err(usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| usage(format!("cannot start thread pool: {e}")))?;
    }
    let ctx = Ctx { common: cli.common };
    match &cli.command {
        Command::Generate { model } => generate(&ctx, model),
        Command::Centrality(a) => centrality(&ctx, a),
        Command::Group(a) => group(&ctx, a),
        Command::Community(a) => community(&ctx, a),
        Command::Sparsify(a) => sparsify(&ctx, a),
        Command::Profile(a) => run_profile(&ctx, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let code = f.exit_code();
            match f {
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Io(m) => eprintln!("error: {m}"),
                Failure::Core(e) => eprintln!("error: {e}"),
            }
            ExitCode::from(code)
        }
    }
}
