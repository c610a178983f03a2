//! Readers for the two input formats: whitespace-separated edge lists with
//! 0-based ids, and the Steiner-instance STP section format with 1-based ids
//! (remapped to 0-based at parse time; the original label of vertex v is
//! v + 1).

use std::io::BufRead;

use crate::error::{Error, Result};
use crate::graph::{Graph, QuerySet, WeightedGraph};

/// Parse result. Normalization is silent but counted so callers can warn.
#[derive(Debug)]
pub struct ParsedGraph {
    pub graph: Graph,
    pub self_loops_dropped: usize,
    pub duplicate_edges_dropped: usize,
}

/// One edge per line, `u v`, 0-based, with `#` comments and blank lines
/// skipped. The vertex count is one past the largest id seen.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<ParsedGraph> {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut max_id = None::<usize>;
    let mut self_loops = 0;
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let text = match line.split('#').next() {
            Some(t) => t.trim(),
            None => "",
        };
        if text.is_empty() {
            continue;
        }
        let mut it = text.split_whitespace();
        let (u, v) = match (it.next(), it.next()) {
            (Some(a), Some(b)) => {
                let parse = |tok: &str| {
                    tok.parse::<usize>().map_err(|_| Error::EdgeListParse {
                        line: lineno,
                        msg: format!("expected a non-negative integer id, got {tok:?}"),
                    })
                };
                (parse(a)?, parse(b)?)
            }
            _ => {
                return Err(Error::EdgeListParse {
                    line: lineno,
                    msg: "expected two ids per line".into(),
                })
            }
        };
        if it.next().is_some() {
            return Err(Error::EdgeListParse {
                line: lineno,
                msg: "expected exactly two ids per line".into(),
            });
        }
        max_id = Some(max_id.map_or(u.max(v), |m: usize| m.max(u).max(v)));
        if u == v {
            self_loops += 1;
        } else {
            edges.push((u.min(v), u.max(v)));
        }
    }
    let n = max_id.map_or(0, |m| m + 1);
    let before = edges.len();
    edges.sort_unstable();
    edges.dedup();
    let duplicates = before - edges.len();
    Ok(ParsedGraph {
        graph: Graph::from_edges(n, edges)?,
        self_loops_dropped: self_loops,
        duplicate_edges_dropped: duplicates,
    })
}

/// A parsed STP instance. `weights` is present when any edge weight differs
/// from 1; the topology is always available unweighted.
#[derive(Debug)]
pub struct StpInstance {
    pub graph: Graph,
    pub weights: Option<WeightedGraph>,
    pub terminals: QuerySet,
    pub self_loops_dropped: usize,
    pub duplicate_edges_dropped: usize,
}

/// Parse the `SECTION Graph` / `SECTION Terminals` subset of the STP format:
/// `Nodes k`, `Edges m`, `E u v w` and `T v` lines with 1-based ids. Unknown
/// sections are skipped. Ids are shifted down by one.
pub fn parse_stp<R: BufRead>(reader: R) -> Result<StpInstance> {
    let err = |section: &str, msg: String| Error::StpParse {
        section: section.to_string(),
        msg,
    };

    let mut nodes: Option<usize> = None;
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut terminals: Vec<usize> = Vec::new();
    let mut saw_graph = false;
    let mut saw_terminals = false;
    let mut section: Option<String> = None;
    let mut self_loops = 0;

    for line in reader.lines() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let lower = text.to_ascii_lowercase();
        if let Some(rest) = lower.strip_prefix("section") {
            let name = rest.trim().to_string();
            saw_graph |= name == "graph";
            saw_terminals |= name == "terminals";
            section = Some(name);
            continue;
        }
        if lower == "end" {
            section = None;
            continue;
        }
        if lower == "eof" {
            break;
        }
        let Some(sec) = section.as_deref() else {
            continue; // preamble, e.g. the magic header line
        };
        let mut toks = text.split_whitespace();
        let key = toks.next().unwrap_or("").to_ascii_lowercase();
        match (sec, key.as_str()) {
            ("graph", "nodes") => {
                let k = toks
                    .next()
                    .and_then(|t| t.parse::<usize>().ok())
                    .ok_or_else(|| err("Graph", "bad Nodes line".into()))?;
                nodes = Some(k);
            }
            ("graph", "edges") => {} // trust the E lines
            ("graph", "e") => {
                let mut take = |what: &str| {
                    toks.next()
                        .and_then(|t| t.parse::<usize>().ok())
                        .ok_or_else(|| err("Graph", format!("E line missing {what}")))
                };
                let u = take("first endpoint")?;
                let v = take("second endpoint")?;
                let w = match toks.next() {
                    None => 1.0,
                    Some(t) => t
                        .parse::<f64>()
                        .map_err(|_| err("Graph", format!("bad edge weight {t:?}")))?,
                };
                if !(w > 0.0) || !w.is_finite() {
                    return Err(err("Graph", format!("non-positive edge weight {w}")));
                }
                let n = nodes.ok_or_else(|| err("Graph", "E line before Nodes".into()))?;
                for &x in &[u, v] {
                    if x == 0 || x > n {
                        return Err(err("Graph", format!("vertex id {x} out of range 1..={n}")));
                    }
                }
                if u == v {
                    self_loops += 1;
                } else {
                    let (a, b) = (u.min(v) - 1, u.max(v) - 1);
                    edges.push((a, b, w));
                }
            }
            ("terminals", "terminals") => {} // count line; trust the T lines
            ("terminals", "t") => {
                let v = toks
                    .next()
                    .and_then(|t| t.parse::<usize>().ok())
                    .ok_or_else(|| err("Terminals", "bad T line".into()))?;
                let n = nodes.ok_or_else(|| err("Terminals", "Terminals before Graph".into()))?;
                if v == 0 || v > n {
                    return Err(err(
                        "Terminals",
                        format!("terminal id {v} out of range 1..={n}"),
                    ));
                }
                terminals.push(v - 1);
            }
            _ => {} // unknown line in a known or skipped section
        }
    }

    if !saw_graph {
        return Err(err("Graph", "section missing".into()));
    }
    if !saw_terminals {
        return Err(err("Terminals", "section missing".into()));
    }
    let n = nodes.ok_or_else(|| err("Graph", "Nodes line missing".into()))?;
    if terminals.is_empty() {
        return Err(err("Terminals", "no T lines".into()));
    }

    edges.sort_unstable_by_key(|a| (a.0, a.1));
    let before = edges.len();
    edges.dedup_by_key(|e| (e.0, e.1));
    let duplicates = before - edges.len();

    let unit = edges.iter().all(|&(_, _, w)| w == 1.0);
    let graph = Graph::from_edges(n, edges.iter().map(|&(u, v, _)| (u, v)))?;
    let weights = if unit {
        None
    } else {
        Some(WeightedGraph::from_edges(n, &edges)?)
    };
    Ok(StpInstance {
        graph,
        weights,
        terminals: QuerySet::new(terminals)?,
        self_loops_dropped: self_loops,
        duplicate_edges_dropped: duplicates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    #[test]
    fn edge_list_roundtrip() {
        let text = "# toy\n0 1\n1 2\n\n2 0  # closing edge\n";
        let p = parse_edge_list(Cursor::new(text)).unwrap();
        assert_eq!(p.graph.vertex_count(), 3);
        assert_eq!(p.graph.edge_count(), 3);
        assert_eq!(p.self_loops_dropped, 0);
    }

    #[test]
    fn edge_list_counts_normalization() {
        let text = "0 1\n1 0\n3 3\n1 2\n";
        let p = parse_edge_list(Cursor::new(text)).unwrap();
        assert_eq!(p.graph.vertex_count(), 4);
        assert_eq!(p.graph.edge_count(), 2);
        assert_eq!(p.self_loops_dropped, 1);
        assert_eq!(p.duplicate_edges_dropped, 1);
    }

    #[test]
    fn edge_list_reports_line_numbers() {
        let text = "0 1\nnope 2\n";
        match parse_edge_list(Cursor::new(text)) {
            Err(Error::EdgeListParse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_edge_list(Cursor::new("0 1 2\n")).is_err());
        assert!(parse_edge_list(Cursor::new("0\n")).is_err());
    }

    #[test]
    fn empty_edge_list_is_empty_graph() {
        let p = parse_edge_list(Cursor::new("# nothing\n")).unwrap();
        assert_eq!(p.graph.vertex_count(), 0);
    }

    const STP: &str = "33D32945 STP File, STP Format Version 1.0\n\
SECTION Comment\nName \"toy\"\nEND\n\n\
SECTION Graph\nNodes 4\nEdges 4\nE 1 2 1\nE 2 3 1\nE 3 4 1\nE 4 1 1\nEND\n\n\
SECTION Terminals\nTerminals 2\nT 1\nT 3\nEND\n\nEOF\n";

    #[test]
    fn stp_parses_and_remaps_to_zero_based() {
        let inst = parse_stp(Cursor::new(STP)).unwrap();
        assert_eq!(inst.graph.vertex_count(), 4);
        assert_eq!(inst.graph.edge_count(), 4);
        assert!(inst.weights.is_none());
        assert_eq!(inst.terminals.vertices(), &[0, 2]);
    }

    #[test]
    fn stp_weighted_instances_keep_weights() {
        let text = STP.replace("E 1 2 1", "E 1 2 5");
        let inst = parse_stp(Cursor::new(text)).unwrap();
        let wg = inst.weights.expect("weights");
        assert_eq!(wg.edge_weight(0, 1), Some(5.0));
        assert_eq!(wg.edge_weight(1, 2), Some(1.0));
    }

    #[test]
    fn stp_errors_name_the_section() {
        let no_terms = "SECTION Graph\nNodes 2\nEdges 1\nE 1 2 1\nEND\nEOF\n";
        match parse_stp(Cursor::new(no_terms)) {
            Err(Error::StpParse { section, .. }) => assert_eq!(section, "Terminals"),
            other => panic!("expected stp error, got {other:?}"),
        }
        let bad_id = STP.replace("E 4 1 1", "E 9 1 1");
        match parse_stp(Cursor::new(bad_id)) {
            Err(Error::StpParse { section, .. }) => assert_eq!(section, "Graph"),
            other => panic!("expected stp error, got {other:?}"),
        }
        let bad_w = STP.replace("E 4 1 1", "E 4 1 0");
        assert!(parse_stp(Cursor::new(bad_w)).is_err());
    }
}
