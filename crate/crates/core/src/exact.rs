//! Exact minimum Wiener connector by subset enumeration. Exponential in the
//! number of optional vertices, so guarded by a budget; meant as ground truth
//! for small instances.

use crate::error::{Error, Result};
use crate::graph::{bfs_sssp, Connector, Graph, QuerySet};
use crate::metrics::wiener_index;

/// Enumerate every superset of the query inside its component and return the
/// connector minimizing (Wiener index, size, lexicographic vertex set).
/// Instances with more than `budget` optional vertices are refused; 20 is a
/// sensible default.
pub fn brute_force_connector(g: &Graph, query: &QuerySet, budget: usize) -> Result<Connector> {
    query.validate_in(g)?;
    let reach = bfs_sssp(g, query.vertices()[0])?;
    let extras: Vec<usize> = (0..g.vertex_count())
        .filter(|&v| reach.reached(v) && !query.contains(v))
        .collect();
    if extras.len() > budget {
        return Err(Error::InstanceTooLarge {
            what: "optional connector vertices",
            actual: extras.len(),
            limit: budget,
        });
    }

    let mut best: Option<(u64, usize, Vec<usize>)> = None;
    for mask in 0u64..(1u64 << extras.len()) {
        let mut s: Vec<usize> = query.vertices().to_vec();
        for (i, &v) in extras.iter().enumerate() {
            if mask >> i & 1 == 1 {
                s.push(v);
            }
        }
        s.sort_unstable();
        let Ok(w) = wiener_index(g, &s) else {
            continue; // induced subgraph is disconnected
        };
        let cand = (w, s.len(), s);
        match &best {
            Some(b) if *b <= cand => {}
            _ => best = Some(cand),
        }
    }
    let (_, _, vertices) = best.ok_or(Error::QueryDisconnected)?;
    Connector::from_vertex_set(g, vertices)
}
