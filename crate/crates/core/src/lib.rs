//! Find a small connected subgraph that contains a set of query vertices and
//! keeps them close together: the objective is the Wiener index, the sum of
//! pairwise shortest-path distances inside the chosen subgraph.
//!
//! The main entry point is [`wiener_steiner`], a constant-factor
//! approximation that sweeps rooted, reweighted Steiner-tree instances and
//! keeps the best candidate. Exact baselines ([`brute_force_connector`],
//! [`brute_force_steiner`]), integer-program exporters for certifying lower
//! bounds ([`export_flow_ip`], [`export_tree_ip`]), and a benchmark harness
//! ([`generate_workload`], [`run_bench`]) sit alongside it.

pub mod bench;
pub mod connector;
pub mod dot;
pub mod error;
pub mod exact;
pub mod graph;
pub mod ip;
pub mod metrics;
pub mod parse;
pub mod steiner;
pub mod synthetic;

pub use bench::{generate_workload, records_to_csv, records_to_json, run_bench, summarize,
    BenchConfig, BenchRecord, Method, SummaryRow, Workload, WorkloadSpec};
pub use connector::{
    adjust_distances, build_rooted_weights, local_prune, shortest_path_connector, wiener_steiner,
    AlgorithmConfig,
};
pub use dot::export_dot;
pub use error::{Error, Result};
pub use exact::brute_force_connector;
pub use graph::{bfs_sssp, dijkstra_sssp, Connector, DistanceMap, Graph, QuerySet, WeightedGraph};
pub use ip::{export_flow_ip, export_tree_ip, verify_ip_assignment, CyclePolicy, IpModel};
pub use metrics::{brandes_betweenness, root_cost_a, wiener_index};
pub use parse::{parse_edge_list, parse_stp, StpInstance};
pub use steiner::{brute_force_steiner, mehlhorn_steiner, steiner_baseline_st, RootedTree};
pub use synthetic::{generate_synthetic, SyntheticModel};
