//! Graphviz export of a solved instance: the induced solution subgraph with
//! query vertices shaded darker than the vertices the solver added.

use crate::error::Result;
use crate::graph::{Connector, Graph, QuerySet};

/// DOT rendering of the connector's induced subgraph. Vertices and edges are
/// emitted in ascending order, so output is stable.
pub fn export_dot(g: &Graph, query: &QuerySet, connector: &Connector) -> Result<String> {
    let (sub, map) = g.induced_subgraph(&connector.vertices)?;
    let mut out = String::from("graph connector {\n  node [style=filled];\n");
    for &v in &map {
        if query.contains(v) {
            out.push_str(&format!(
                "  {v} [fillcolor=\"gray25\", fontcolor=\"white\"];\n"
            ));
        } else {
            out.push_str(&format!("  {v} [fillcolor=\"gray85\"];\n"));
        }
    }
    for (i, j) in sub.edges() {
        out.push_str(&format!("  {} -- {};\n", map[i], map[j]));
    }
    out.push_str("}\n");
    Ok(out)
}
