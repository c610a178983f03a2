//! Workload generation and the benchmark runner.
//!
//! A workload is a reproducible batch of query sets with controlled size
//! and, optionally, controlled mean pairwise distance. The runner executes
//! the configured methods on every query, records per-query metrics, and
//! aggregates them into per-(dataset, method, query size) summaries. With
//! timing disabled the CSV and JSON outputs are byte-identical across runs
//! with the same seed.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::connector::{wiener_steiner, AlgorithmConfig};
use crate::error::{Error, Result};
use crate::exact::brute_force_connector;
use crate::graph::{bfs_sssp, Graph, QuerySet};
use crate::metrics::brandes_betweenness;
use crate::steiner::steiner_baseline_st;

/// How a workload should be generated.
#[derive(Debug, Clone, Serialize)]
pub struct WorkloadSpec {
    /// Query sizes to generate, in order.
    pub sizes: Vec<usize>,
    /// Target mean pairwise distance between query vertices; `None` samples
    /// uniformly from the giant component.
    pub target_avg_distance: Option<f64>,
    /// Queries per size.
    pub repetitions: usize,
    pub seed: u64,
}

/// A generated batch of query sets. Query ids are positions in `queries`.
#[derive(Debug, Clone, Serialize)]
pub struct Workload {
    pub spec: WorkloadSpec,
    pub queries: Vec<QuerySet>,
}

const WORKLOAD_RETRIES: usize = 1000;

/// Generate `spec.repetitions` query sets per requested size, all inside the
/// giant component so they are co-connected. With a distance target, each
/// vertex after the first is drawn from the candidates whose addition keeps
/// the running pairwise-distance sum closest to the target, and the finished
/// query is accepted only when its mean pairwise distance lands within 0.5
/// of the target; failed draws are retried up to 1000 times.
pub fn generate_workload(g: &Graph, spec: &WorkloadSpec) -> Result<Workload> {
    if spec.repetitions == 0 {
        return Err(Error::InvalidParameter("repetitions must be positive".into()));
    }
    if let Some(t) = spec.target_avg_distance {
        if !(t >= 1.0) || !t.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "target average distance must be a finite value >= 1, got {t}"
            )));
        }
    }
    let comp = g.giant_component();
    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
    let mut queries = Vec::new();
    for &k in &spec.sizes {
        if k == 0 {
            return Err(Error::InvalidParameter("query size 0 requested".into()));
        }
        if k > comp.len() {
            return Err(Error::WorkloadGeneration(format!(
                "query size {k} exceeds the giant component ({} vertices)",
                comp.len()
            )));
        }
        for _ in 0..spec.repetitions {
            let q = match spec.target_avg_distance {
                None => sample_uniform(&comp, k, &mut rng),
                Some(t) => sample_with_target(g, &comp, k, t, &mut rng)?,
            };
            let q = QuerySet::new(q)?;
            q.validate_in(g)?;
            queries.push(q);
        }
    }
    Ok(Workload {
        spec: spec.clone(),
        queries,
    })
}

fn sample_uniform(comp: &[usize], k: usize, rng: &mut ChaCha20Rng) -> Vec<usize> {
    rand::seq::index::sample(rng, comp.len(), k)
        .into_iter()
        .map(|i| comp[i])
        .collect()
}

fn sample_with_target(
    g: &Graph,
    comp: &[usize],
    k: usize,
    target: f64,
    rng: &mut ChaCha20Rng,
) -> Result<Vec<usize>> {
    if k == 1 {
        return Ok(vec![comp[rng.gen_range(0..comp.len())]]);
    }
    let mut in_query = vec![false; g.vertex_count()];
    for _ in 0..=WORKLOAD_RETRIES {
        let seed_v = comp[rng.gen_range(0..comp.len())];
        let mut chosen = vec![seed_v];
        in_query.fill(false);
        in_query[seed_v] = true;
        let mut maps = vec![bfs_sssp(g, seed_v)?];
        let mut sum: u64 = 0;
        for step in 2..=k {
            let pairs_after = (step * (step - 1) / 2) as f64;
            let target_sum = target * pairs_after;
            // Candidates adding the distance mass that lands the running
            // sum nearest the target; ties are drawn at random.
            let mut best: Vec<(usize, u64)> = Vec::new();
            let mut best_err = f64::INFINITY;
            for &v in comp {
                if in_query[v] {
                    continue;
                }
                let add: u64 = maps.iter().map(|d| d.dist(v).unwrap()).sum();
                let err = ((sum + add) as f64 - target_sum).abs();
                if err + 1e-9 < best_err {
                    best_err = err;
                    best.clear();
                    best.push((v, add));
                } else if err - best_err <= 1e-9 {
                    best.push((v, add));
                }
            }
            let (v, add) = best[rng.gen_range(0..best.len())];
            sum += add;
            chosen.push(v);
            in_query[v] = true;
            maps.push(bfs_sssp(g, v)?);
        }
        let pairs = (k * (k - 1) / 2) as f64;
        if (sum as f64 / pairs - target).abs() <= 0.5 {
            return Ok(chosen);
        }
    }
    Err(Error::WorkloadGeneration(format!(
        "no query of size {k} with mean pairwise distance {target} +/- 0.5 \
         found after {WORKLOAD_RETRIES} retries"
    )))
}

/// Benchmark methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Method {
    /// The approximation pipeline rooted at query vertices.
    WsQ,
    /// Pruned unweighted Steiner-tree baseline.
    St,
    /// Brute-force optimum, feasible on small instances only.
    Exact,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::WsQ => "ws-q",
            Method::St => "st",
            Method::Exact => "exact",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Method> {
        match s {
            "ws-q" => Ok(Method::WsQ),
            "st" => Ok(Method::St),
            "exact" => Ok(Method::Exact),
            other => Err(Error::InvalidParameter(format!(
                "unknown method {other:?} (expected ws-q, st, or exact)"
            ))),
        }
    }
}

impl Serialize for Method {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// Runner configuration.
#[derive(Debug, Clone)]
pub struct BenchConfig {
    /// Dataset id stamped on every record.
    pub dataset: String,
    pub methods: Vec<Method>,
    pub algorithm: AlgorithmConfig,
    /// Vertex budget passed to the exact method.
    pub exact_budget: usize,
    /// Betweenness is computed exactly up to this many edges and reported
    /// as missing above it.
    pub betweenness_edge_cap: usize,
    /// Record wall times. Off by default so outputs are byte-identical
    /// across runs.
    pub timing: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            dataset: "dataset".to_string(),
            methods: vec![Method::WsQ, Method::St],
            algorithm: AlgorithmConfig::default(),
            exact_budget: 20,
            betweenness_edge_cap: 100_000,
            timing: false,
        }
    }
}

/// One (query, method) outcome. Metric fields are empty when the method
/// failed on the query; `vertices` always allows recomputing them.
#[derive(Debug, Clone, Serialize)]
pub struct BenchRecord {
    pub dataset: String,
    pub method: Method,
    pub query_id: usize,
    pub q_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub density: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub betweenness: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wiener: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<usize>>,
}

/// Per-(dataset, method, query size) averages over successful records.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryRow {
    pub dataset: String,
    pub method: Method,
    pub q_size: usize,
    pub queries: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_size: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_density: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_betweenness: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_wiener: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_time_ms: Option<f64>,
}

/// Run every configured method on every workload query. Queries run in
/// parallel; the output is canonically ordered by (dataset, method, query
/// id) regardless of completion order. Per-query failures are recorded in
/// the `error` field, not raised.
pub fn run_bench(g: &Graph, workload: &Workload, cfg: &BenchConfig) -> Vec<BenchRecord> {
    let bc = if g.edge_count() <= cfg.betweenness_edge_cap {
        Some(brandes_betweenness(g))
    } else {
        None
    };
    let tasks: Vec<(usize, &QuerySet, Method)> = workload
        .queries
        .iter()
        .enumerate()
        .flat_map(|(id, q)| cfg.methods.iter().map(move |&m| (id, q, m)))
        .collect();
    let mut records: Vec<BenchRecord> = tasks
        .par_iter()
        .map(|&(query_id, query, method)| {
            let start = Instant::now();
            let outcome = match method {
                Method::WsQ => wiener_steiner(g, query, &cfg.algorithm),
                Method::St => steiner_baseline_st(g, query),
                Method::Exact => brute_force_connector(g, query, cfg.exact_budget),
            };
            let time_ms = cfg
                .timing
                .then(|| start.elapsed().as_secs_f64() * 1000.0);
            let mut record = BenchRecord {
                dataset: cfg.dataset.clone(),
                method,
                query_id,
                q_size: query.len(),
                size: None,
                density: None,
                betweenness: None,
                wiener: None,
                time_ms,
                error: None,
                vertices: None,
            };
            match outcome {
                Ok(connector) => {
                    record.size = Some(connector.size);
                    record.density = Some(connector.density);
                    record.betweenness = bc.as_ref().map(|bc| {
                        connector.vertices.iter().map(|&v| bc[v]).sum::<f64>()
                            / connector.vertices.len() as f64
                    });
                    record.wiener = Some(connector.wiener);
                    record.vertices = Some(connector.vertices);
                }
                Err(e) => record.error = Some(e.to_string()),
            }
            record
        })
        .collect();
    records.sort_by(|a, b| {
        (a.dataset.as_str(), a.method.as_str(), a.query_id)
            .cmp(&(b.dataset.as_str(), b.method.as_str(), b.query_id))
    });
    records
}

/// Aggregate records into per-(dataset, method, query size) means.
pub fn summarize(records: &[BenchRecord]) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<(String, &'static str, usize), Vec<&BenchRecord>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.dataset.clone(), r.method.as_str(), r.q_size))
            .or_default()
            .push(r);
    }
    let mean_of = |vals: Vec<f64>| -> Option<f64> {
        if vals.is_empty() {
            None
        } else {
            Some(vals.iter().sum::<f64>() / vals.len() as f64)
        }
    };
    groups.into_values().map(|rs| {
            let method = rs[0].method;
            SummaryRow {
                dataset: rs[0].dataset.clone(),
                method,
                q_size: rs[0].q_size,
                queries: rs.len(),
                failures: rs.iter().filter(|r| r.error.is_some()).count(),
                mean_size: mean_of(rs.iter().filter_map(|r| r.size.map(|s| s as f64)).collect()),
                mean_density: mean_of(rs.iter().filter_map(|r| r.density).collect()),
                mean_betweenness: mean_of(rs.iter().filter_map(|r| r.betweenness).collect()),
                mean_wiener: mean_of(rs.iter().filter_map(|r| r.wiener.map(|w| w as f64)).collect()),
                mean_time_ms: mean_of(rs.iter().filter_map(|r| r.time_ms).collect()),
            }
        })
        .collect()
}

/// CSV with a fixed column order. Floats use six decimal places, times
/// three; missing values are empty fields; vertex sets are space-joined.
pub fn records_to_csv(records: &[BenchRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "dataset",
        "method",
        "query_id",
        "q_size",
        "size",
        "density",
        "betweenness",
        "wiener",
        "time_ms",
        "error",
        "vertices",
    ])
    .map_err(csv_err)?;
    for r in records {
        let fmt_opt_f = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_default();
        w.write_record([
            r.dataset.clone(),
            r.method.as_str().to_string(),
            r.query_id.to_string(),
            r.q_size.to_string(),
            r.size.map(|s| s.to_string()).unwrap_or_default(),
            fmt_opt_f(r.density),
            fmt_opt_f(r.betweenness),
            r.wiener.map(|x| x.to_string()).unwrap_or_default(),
            r.time_ms.map(|x| format!("{x:.3}")).unwrap_or_default(),
            r.error.clone().unwrap_or_default(),
            r.vertices
                .as_ref()
                .map(|vs| {
                    vs.iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .unwrap_or_default(),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| Error::InvalidParameter(e.to_string()))
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidParameter(format!("csv serialization failed: {e}"))
}

/// Versioned JSON document holding records and their summary.
pub fn records_to_json(records: &[BenchRecord]) -> Result<String> {
    #[derive(Serialize)]
    struct Output<'a> {
        schema: u32,
        records: &'a [BenchRecord],
        summary: Vec<SummaryRow>,
    }
    let doc = Output {
        schema: 1,
        records,
        summary: summarize(records),
    };
    let mut s = serde_json::to_string_pretty(&doc)
        .map_err(|e| Error::InvalidParameter(format!("json serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}
