//! Command-line front end: reads edge-list or STP graphs, runs the connector
//! pipeline, the exact solver, or the benchmark harness, and writes JSON,
//! DOT, CSV, or LP files.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when the instance
//! is infeasible (query vertices in different components).

use std::fs;
use std::io::BufReader;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use minwc::{
    brute_force_connector, export_dot, export_flow_ip, export_tree_ip, generate_synthetic,
    generate_workload, parse_edge_list, parse_stp, records_to_csv, records_to_json, run_bench,
    summarize, wiener_steiner, AlgorithmConfig, BenchConfig, CyclePolicy, Graph, Method, QuerySet,
    SummaryRow, SyntheticModel, WorkloadSpec,
};

fn main() {
    std::process::exit(run(std::env::args().collect()));
}

fn run(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                minwc::Error::QueryDisconnected | minwc::Error::TerminalsDisconnected => 2,
                _ => 1,
            }
        }
    }
}

#[derive(Parser)]
#[command(
    name = "minwc",
    version,
    about = "Approximate minimum Wiener connectors: small subgraphs tying a query set together"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the approximation pipeline on a query set
    Query(QueryCmd),
    /// Generate a workload and benchmark methods on it
    Bench(BenchCmd),
    /// Brute-force optimum for small instances
    Exact(ExactCmd),
    /// Write an integer program certifying bounds on an instance
    ExportIp(ExportIpCmd),
    /// Generate a synthetic graph as an edge list
    Gen(GenCmd),
    /// Print summary statistics for a graph file
    Stats(StatsCmd),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Edgelist,
    Stp,
}

#[derive(Args)]
struct GraphInput {
    /// Graph file to read
    #[arg(long)]
    graph: PathBuf,
    /// Input format; inferred from the file extension when omitted
    #[arg(long, value_enum)]
    format: Option<Format>,
}

struct Loaded {
    graph: Graph,
    terminals: Option<QuerySet>,
}

fn load_graph(input: &GraphInput) -> minwc::Result<Loaded> {
    let format = input.format.unwrap_or_else(|| {
        let stp = input
            .graph
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("stp"));
        if stp {
            Format::Stp
        } else {
            Format::Edgelist
        }
    });
    let reader = BufReader::new(fs::File::open(&input.graph)?);
    let (graph, terminals, loops, dups) = match format {
        Format::Edgelist => {
            let p = parse_edge_list(reader)?;
            (p.graph, None, p.self_loops_dropped, p.duplicate_edges_dropped)
        }
        Format::Stp => {
            let s = parse_stp(reader)?;
            (
                s.graph,
                Some(s.terminals),
                s.self_loops_dropped,
                s.duplicate_edges_dropped,
            )
        }
    };
    if loops + dups > 0 {
        eprintln!(
            "warning: normalized input, dropped {loops} self-loops and {dups} duplicate edges"
        );
    }
    Ok(Loaded { graph, terminals })
}

fn parse_query_list(spec: &str) -> minwc::Result<Vec<usize>> {
    spec.split(',')
        .map(|t| {
            t.trim().parse::<usize>().map_err(|_| {
                minwc::Error::InvalidParameter(format!("bad vertex id {:?} in query list", t.trim()))
            })
        })
        .collect()
}

/// Explicit --query wins; STP terminals are the fallback.
fn resolve_query(explicit: Option<&str>, loaded: &Loaded) -> minwc::Result<QuerySet> {
    match explicit {
        Some(spec) => QuerySet::new(parse_query_list(spec)?),
        None => match &loaded.terminals {
            Some(t) => Ok(t.clone()),
            None => Err(minwc::Error::InvalidParameter(
                "--query is required for edge-list graphs".into(),
            )),
        },
    }
}

fn parse_methods(spec: &str) -> minwc::Result<Vec<Method>> {
    let methods: Vec<Method> = spec
        .split(',')
        .map(|t| Method::from_str(t.trim()))
        .collect::<minwc::Result<_>>()?;
    if methods.is_empty() {
        return Err(minwc::Error::InvalidParameter("no methods given".into()));
    }
    Ok(methods)
}

fn json_err(e: serde_json::Error) -> minwc::Error {
    minwc::Error::InvalidParameter(format!("json serialization failed: {e}"))
}

fn write_out(path: Option<&PathBuf>, content: &str) -> minwc::Result<()> {
    match path {
        Some(p) => fs::write(p, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn dispatch(cli: Cli) -> minwc::Result<()> {
    match cli.cmd {
        Cmd::Query(c) => cmd_query(c),
        Cmd::Bench(c) => cmd_bench(c),
        Cmd::Exact(c) => cmd_exact(c),
        Cmd::ExportIp(c) => cmd_export_ip(c),
        Cmd::Gen(c) => cmd_gen(c),
        Cmd::Stats(c) => cmd_stats(c),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum QueryOut {
    Json,
    Dot,
}

#[derive(Args)]
struct QueryCmd {
    #[command(flatten)]
    input: GraphInput,
    /// Comma-separated 0-based vertex ids; defaults to STP terminals
    #[arg(long)]
    query: Option<String>,
    /// Resolution of the internal parameter sweep (smaller = finer)
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Output format
    #[arg(long, value_enum, default_value_t = QueryOut::Json)]
    out: QueryOut,
    /// Echoed into the JSON output for bookkeeping
    #[arg(long)]
    seed: Option<u64>,
    /// Consider every vertex of the query's component as a root, not just
    /// query vertices (slower, sometimes better)
    #[arg(long)]
    all_roots: bool,
}

fn cmd_query(cmd: QueryCmd) -> minwc::Result<()> {
    let loaded = load_graph(&cmd.input)?;
    let query = resolve_query(cmd.query.as_deref(), &loaded)?;
    let cfg = AlgorithmConfig {
        beta: cmd.beta,
        all_roots: cmd.all_roots,
        ..AlgorithmConfig::default()
    };
    let connector = wiener_steiner(&loaded.graph, &query, &cfg)?;
    match cmd.out {
        QueryOut::Json => {
            let mut doc = json!({
                "schema": 1,
                "query": query.vertices(),
                "beta": cmd.beta,
                "vertices": connector.vertices,
                "wiener": connector.wiener,
                "size": connector.size,
                "density": connector.density,
            });
            if let Some(seed) = cmd.seed {
                doc["seed"] = json!(seed);
            }
            println!("{}", serde_json::to_string_pretty(&doc).map_err(json_err)?);
        }
        QueryOut::Dot => {
            print!("{}", export_dot(&loaded.graph, &query, &connector)?);
        }
    }
    Ok(())
}

#[derive(Args)]
struct BenchCmd {
    #[command(flatten)]
    input: GraphInput,
    /// Comma-separated query sizes
    #[arg(long, default_value = "5")]
    sizes: String,
    /// Target mean pairwise distance between query vertices
    #[arg(long)]
    target_distance: Option<f64>,
    /// Queries generated per size
    #[arg(long, default_value_t = 5)]
    repetitions: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Comma-separated methods: ws-q, st, exact
    #[arg(long, default_value = "ws-q,st")]
    methods: String,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Optional-vertex budget for the exact method
    #[arg(long, default_value_t = 20)]
    exact_budget: usize,
    /// Record wall times (makes outputs differ between runs)
    #[arg(long)]
    timing: bool,
    /// Dataset id stamped on records; defaults to the file stem
    #[arg(long)]
    dataset: Option<String>,
    /// Records file (.json for JSON, anything else CSV); stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_bench(cmd: BenchCmd) -> minwc::Result<()> {
    let loaded = load_graph(&cmd.input)?;
    let sizes = parse_query_list(&cmd.sizes)?;
    let methods = parse_methods(&cmd.methods)?;
    let dataset = cmd.dataset.clone().unwrap_or_else(|| {
        cmd.input
            .graph
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "dataset".to_string())
    });
    let spec = WorkloadSpec {
        sizes,
        target_avg_distance: cmd.target_distance,
        repetitions: cmd.repetitions,
        seed: cmd.seed,
    };
    let workload = generate_workload(&loaded.graph, &spec)?;
    let cfg = BenchConfig {
        dataset,
        methods,
        algorithm: AlgorithmConfig {
            beta: cmd.beta,
            ..AlgorithmConfig::default()
        },
        exact_budget: cmd.exact_budget,
        timing: cmd.timing,
        ..BenchConfig::default()
    };
    let records = run_bench(&loaded.graph, &workload, &cfg);
    let as_json = cmd
        .out
        .as_ref()
        .and_then(|p| p.extension())
        .is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let body = if as_json {
        records_to_json(&records)?
    } else {
        records_to_csv(&records)?
    };
    write_out(cmd.out.as_ref(), &body)?;
    // The summary goes wherever the records are not.
    let summary = render_summary(&summarize(&records));
    if cmd.out.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    Ok(())
}

fn render_summary(rows: &[SummaryRow]) -> String {
    let fmt_opt = |v: Option<f64>| v.map(|x| format!("{x:.3}")).unwrap_or_else(|| "-".into());
    let mut out = format!(
        "{:<16} {:<6} {:>6} {:>7} {:>8} {:>9} {:>9} {:>9} {:>11} {:>9}\n",
        "dataset", "method", "q_size", "queries", "failures", "size", "density", "bc", "wiener",
        "time_ms"
    );
    for r in rows {
        out.push_str(&format!(
            "{:<16} {:<6} {:>6} {:>7} {:>8} {:>9} {:>9} {:>9} {:>11} {:>9}\n",
            r.dataset,
            r.method.as_str(),
            r.q_size,
            r.queries,
            r.failures,
            fmt_opt(r.mean_size),
            fmt_opt(r.mean_density),
            fmt_opt(r.mean_betweenness),
            fmt_opt(r.mean_wiener),
            fmt_opt(r.mean_time_ms),
        ));
    }
    out
}

#[derive(Args)]
struct ExactCmd {
    #[command(flatten)]
    input: GraphInput,
    /// Comma-separated 0-based vertex ids; defaults to STP terminals
    #[arg(long)]
    query: Option<String>,
    /// Refuse instances with more optional vertices than this
    #[arg(long, default_value_t = 20)]
    budget: usize,
}

fn cmd_exact(cmd: ExactCmd) -> minwc::Result<()> {
    let loaded = load_graph(&cmd.input)?;
    let query = resolve_query(cmd.query.as_deref(), &loaded)?;
    let connector = brute_force_connector(&loaded.graph, &query, cmd.budget)?;
    let doc = json!({
        "schema": 1,
        "query": query.vertices(),
        "budget": cmd.budget,
        "vertices": connector.vertices,
        "wiener": connector.wiener,
        "size": connector.size,
        "density": connector.density,
    });
    println!("{}", serde_json::to_string_pretty(&doc).map_err(json_err)?);
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IpKind {
    Flow,
    Tree,
}

#[derive(Args)]
struct ExportIpCmd {
    #[command(flatten)]
    input: GraphInput,
    /// Comma-separated 0-based vertex ids; defaults to STP terminals
    #[arg(long)]
    query: Option<String>,
    /// flow = exact program, tree = cheaper lower-bound relaxation
    #[arg(long, value_enum)]
    kind: IpKind,
    /// Tree model only: "none" or a maximum cycle length to exclude
    #[arg(long, default_value = "none")]
    cycles: String,
    /// LP file to write; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_export_ip(cmd: ExportIpCmd) -> minwc::Result<()> {
    let loaded = load_graph(&cmd.input)?;
    let query = resolve_query(cmd.query.as_deref(), &loaded)?;
    let cycles = match cmd.cycles.as_str() {
        "none" => CyclePolicy::None,
        other => {
            let len = other.parse::<usize>().map_err(|_| {
                minwc::Error::InvalidParameter(format!(
                    "--cycles expects \"none\" or a length, got {other:?}"
                ))
            })?;
            CyclePolicy::UpTo(len)
        }
    };
    let model = match cmd.kind {
        IpKind::Flow => {
            if cycles != CyclePolicy::None {
                return Err(minwc::Error::InvalidParameter(
                    "--cycles applies to the tree model only".into(),
                ));
            }
            export_flow_ip(&loaded.graph, &query)?
        }
        IpKind::Tree => export_tree_ip(&loaded.graph, &query, cycles)?,
    };
    write_out(cmd.out.as_ref(), &model.to_lp())
}

#[derive(Args)]
struct GenCmd {
    /// er (uniform random) or pl (preferential attachment)
    #[arg(long)]
    model: String,
    /// Vertex count
    #[arg(long)]
    n: usize,
    /// Edge count target (exact for er, approximate for pl)
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Edge-list file to write; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_gen(cmd: GenCmd) -> minwc::Result<()> {
    let model = SyntheticModel::from_str(&cmd.model)?;
    let g = generate_synthetic(model, cmd.n, cmd.m, cmd.seed)?;
    let mut body = format!(
        "# model={} n={} m={} seed={}\n",
        cmd.model,
        g.vertex_count(),
        g.edge_count(),
        cmd.seed
    );
    for (u, v) in g.edges() {
        body.push_str(&format!("{u} {v}\n"));
    }
    write_out(cmd.out.as_ref(), &body)
}

#[derive(Args)]
struct StatsCmd {
    #[command(flatten)]
    input: GraphInput,
}

fn cmd_stats(cmd: StatsCmd) -> minwc::Result<()> {
    let loaded = load_graph(&cmd.input)?;
    let g = &loaded.graph;
    let n = g.vertex_count();
    let m = g.edge_count();
    let density = if n >= 2 {
        2.0 * m as f64 / (n as f64 * (n as f64 - 1.0))
    } else {
        0.0
    };
    let degrees: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let labels = g.component_labels();
    let components = labels
        .iter()
        .enumerate()
        .filter(|&(v, &l)| l == v)
        .count();
    println!("vertices: {n}");
    println!("edges: {m}");
    println!("density: {density:.6}");
    if n > 0 {
        println!("average degree: {:.6}", 2.0 * m as f64 / n as f64);
        println!("min degree: {}", degrees.iter().min().unwrap());
        println!("max degree: {}", degrees.iter().max().unwrap());
    }
    println!("components: {components}");
    println!("giant component: {}", g.giant_component().len());
    if let Some(t) = &loaded.terminals {
        println!("terminals: {}", t.len());
    }
    Ok(())
}
