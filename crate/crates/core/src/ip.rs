//! Integer-program exporters for certifying lower bounds with an external
//! solver, written in the plain LP text dialect (Minimize / Subject To /
//! Bounds / Binary / End).
//!
//! Two models are emitted for a graph G and query set Q:
//!
//! * flow: binary y_u picks vertices, p_st counts chosen pairs, and a unit
//!   flow f between every chosen pair forces connectivity through chosen
//!   vertices. Solving it exactly gives the true optimum; the objective
//!   counts one unit of flow per edge crossed, so it equals the Wiener
//!   index of the chosen subgraph.
//!   Sizes: n + P(1 + 2m) variables and P(n + 2m + 1) + |Q| rows, where
//!   P = n(n-1)/2.
//! * tree: routes pair demand through a parent forest and prices each pair
//!   at its distance in G, which never exceeds the induced distance. With
//!   cycle rows only partially enumerated this stays a relaxation, so its
//!   optimum is a valid lower bound on the best connector.
//!   Sizes: n + P + 2m variables and (n - 1) + 1 + 2m + P + |Q| rows plus
//!   one row per enumerated cycle.
//!
//! All coefficients are integers and every emission order is fixed, so the
//! text is byte-stable.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{bfs_sssp, Graph, QuerySet};
use crate::metrics::wiener_index;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub binary: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowOp {
    Le,
    Ge,
    Eq,
}

impl RowOp {
    fn symbol(self) -> &'static str {
        match self {
            RowOp::Le => "<=",
            RowOp::Ge => ">=",
            RowOp::Eq => "=",
        }
    }
}

/// One linear constraint: terms `op` rhs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub name: String,
    pub terms: Vec<(i64, usize)>,
    pub op: RowOp,
    pub rhs: i64,
}

/// A minimization program over named variables. Continuous variables are
/// non-negative by default; binary ones are listed in the Binary section.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IpModel {
    pub comments: Vec<String>,
    pub variables: Vec<Variable>,
    pub objective: Vec<(i64, usize)>,
    pub rows: Vec<Row>,
}

impl IpModel {
    pub fn variable_count(&self) -> usize {
        self.variables.len()
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn name_index(&self) -> HashMap<&str, usize> {
        self.variables
            .iter()
            .enumerate()
            .map(|(i, v)| (v.name.as_str(), i))
            .collect()
    }

    /// Normal form for comparisons: variables sorted by name, term lists
    /// sorted by variable, comments dropped.
    pub fn canonical(&self) -> IpModel {
        let mut order: Vec<usize> = (0..self.variables.len()).collect();
        order.sort_by(|&a, &b| self.variables[a].name.cmp(&self.variables[b].name));
        let mut remap = vec![0usize; self.variables.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let fix = |terms: &[(i64, usize)]| {
            let mut t: Vec<(i64, usize)> = terms.iter().map(|&(c, v)| (c, remap[v])).collect();
            t.sort_by_key(|&(_, v)| v);
            t
        };
        IpModel {
            comments: Vec::new(),
            variables: order
                .iter()
                .map(|&old| self.variables[old].clone())
                .collect(),
            objective: fix(&self.objective),
            rows: self
                .rows
                .iter()
                .map(|r| Row {
                    name: r.name.clone(),
                    terms: fix(&r.terms),
                    op: r.op,
                    rhs: r.rhs,
                })
                .collect(),
        }
    }

    /// Render as LP text.
    pub fn to_lp(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            out.push_str("\\ ");
            out.push_str(c);
            out.push('\n');
        }
        out.push_str("Minimize\n");
        out.push_str(&self.expr_lines("obj", &self.objective, None));
        out.push_str("Subject To\n");
        for row in &self.rows {
            out.push_str(&self.expr_lines(
                &row.name,
                &row.terms,
                Some((row.op, row.rhs)),
            ));
        }
        out.push_str("Bounds\n");
        out.push_str("Binary\n");
        for v in &self.variables {
            if v.binary {
                out.push(' ');
                out.push_str(&v.name);
                out.push('\n');
            }
        }
        out.push_str("End\n");
        out
    }

    fn expr_lines(&self, label: &str, terms: &[(i64, usize)], tail: Option<(RowOp, i64)>) -> String {
        let mut out = format!(" {label}:");
        let mut on_line = 0;
        for (i, &(coef, var)) in terms.iter().enumerate() {
            if on_line == 12 {
                out.push_str("\n   ");
                on_line = 0;
            }
            let name = &self.variables[var].name;
            let mag = coef.unsigned_abs();
            if i == 0 {
                if coef < 0 {
                    out.push_str(" -");
                }
            } else if coef < 0 {
                out.push_str(" -");
            } else {
                out.push_str(" +");
            }
            if mag == 1 {
                out.push_str(&format!(" {name}"));
            } else {
                out.push_str(&format!(" {mag} {name}"));
            }
            on_line += 1;
        }
        if let Some((op, rhs)) = tail {
            out.push_str(&format!(" {} {rhs}", op.symbol()));
        }
        out.push('\n');
        out
    }

    /// Read back the subset of the LP dialect this module writes: integer
    /// coefficients, named rows, a Bounds section with no explicit bounds,
    /// and a Binary section.
    pub fn parse_lp(text: &str) -> Result<IpModel> {
        #[derive(PartialEq, Clone, Copy)]
        enum Section {
            Preamble,
            Objective,
            Rows,
            Bounds,
            Binary,
            Done,
        }
        let mut comments = Vec::new();
        let mut section = Section::Preamble;
        let mut tokens: Vec<(usize, String)> = Vec::new(); // objective + rows stream
        let mut binary_names: Vec<String> = Vec::new();
        let mut row_split = usize::MAX; // token index where rows begin

        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(c) = line.strip_prefix('\\') {
                comments.push(c.trim().to_string());
                continue;
            }
            let lower = line.to_ascii_lowercase();
            match lower.as_str() {
                "minimize" => {
                    section = Section::Objective;
                    continue;
                }
                "subject to" => {
                    section = Section::Rows;
                    row_split = tokens.len();
                    continue;
                }
                "bounds" => {
                    section = Section::Bounds;
                    continue;
                }
                "binary" => {
                    section = Section::Binary;
                    continue;
                }
                "end" => {
                    section = Section::Done;
                    continue;
                }
                _ => {}
            }
            match section {
                Section::Objective | Section::Rows => {
                    for t in line.split_whitespace() {
                        tokens.push((lineno, t.to_string()));
                    }
                }
                Section::Binary => {
                    for t in line.split_whitespace() {
                        binary_names.push(t.to_string());
                    }
                }
                Section::Bounds => {
                    return Err(Error::LpParse {
                        line: lineno,
                        msg: "explicit bounds are not supported".into(),
                    });
                }
                Section::Preamble | Section::Done => {
                    return Err(Error::LpParse {
                        line: lineno,
                        msg: format!("unexpected content {line:?}"),
                    });
                }
            }
        }
        if row_split == usize::MAX {
            return Err(Error::LpParse {
                line: 0,
                msg: "missing Subject To section".into(),
            });
        }

        let mut model = IpModel::default();
        model.comments = comments;
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut var_of = |model: &mut IpModel, name: &str| -> usize {
            if let Some(&i) = index.get(name) {
                return i;
            }
            let i = model.variables.len();
            model.variables.push(Variable {
                name: name.to_string(),
                binary: false,
            });
            index.insert(name.to_string(), i);
            i
        };

        // Term streams: [label:] (sign? coef? name)* [op rhs].
        let parse_expr = |model: &mut IpModel,
                          var_of: &mut dyn FnMut(&mut IpModel, &str) -> usize,
                          toks: &[(usize, String)]|
         -> Result<(Option<String>, Vec<(i64, usize)>, Option<(RowOp, i64)>)> {
            let mut label = None;
            let mut terms = Vec::new();
            let mut tail = None;
            let mut i = 0;
            if let Some((_, first)) = toks.first() {
                if let Some(l) = first.strip_suffix(':') {
                    label = Some(l.to_string());
                    i = 1;
                }
            }
            let mut sign = 1i64;
            let mut coef: Option<i64> = None;
            while i < toks.len() {
                let (line, tok) = &toks[i];
                i += 1;
                match tok.as_str() {
                    "+" => {}
                    "-" => sign = -sign,
                    "<=" | ">=" | "=" => {
                        let op = match tok.as_str() {
                            "<=" => RowOp::Le,
                            ">=" => RowOp::Ge,
                            _ => RowOp::Eq,
                        };
                        let (l2, rhs_tok) = toks.get(i).ok_or(Error::LpParse {
                            line: *line,
                            msg: "missing right-hand side".into(),
                        })?;
                        let rhs = rhs_tok.parse::<i64>().map_err(|_| Error::LpParse {
                            line: *l2,
                            msg: format!("bad right-hand side {rhs_tok:?}"),
                        })?;
                        i += 1;
                        tail = Some((op, rhs));
                        if i != toks.len() {
                            return Err(Error::LpParse {
                                line: *line,
                                msg: "content after right-hand side".into(),
                            });
                        }
                    }
                    t if t.chars().all(|c| c.is_ascii_digit()) => {
                        if coef.is_some() {
                            return Err(Error::LpParse {
                                line: *line,
                                msg: "two coefficients in a row".into(),
                            });
                        }
                        coef = Some(t.parse::<i64>().map_err(|_| Error::LpParse {
                            line: *line,
                            msg: format!("bad coefficient {t:?}"),
                        })?);
                    }
                    name => {
                        let v = var_of(model, name);
                        terms.push((sign * coef.take().unwrap_or(1), v));
                        sign = 1;
                    }
                }
            }
            if coef.is_some() {
                let line = toks.last().map(|t| t.0).unwrap_or(0);
                return Err(Error::LpParse {
                    line,
                    msg: "dangling coefficient".into(),
                });
            }
            Ok((label, terms, tail))
        };

        // Objective.
        let (_, objective, tail) = parse_expr(&mut model, &mut var_of, &tokens[..row_split])?;
        if tail.is_some() {
            return Err(Error::LpParse {
                line: 0,
                msg: "objective must not have a relation".into(),
            });
        }
        model.objective = objective;

        // Rows: split the stream at label tokens.
        let rows_toks = &tokens[row_split..];
        let mut starts: Vec<usize> = rows_toks
            .iter()
            .enumerate()
            .filter(|(_, (_, t))| t.ends_with(':'))
            .map(|(i, _)| i)
            .collect();
        starts.push(rows_toks.len());
        for pair in starts.windows(2) {
            let chunk = &rows_toks[pair[0]..pair[1]];
            let (label, terms, tail) = parse_expr(&mut model, &mut var_of, chunk)?;
            let name = label.ok_or(Error::LpParse {
                line: chunk[0].0,
                msg: "row without a name".into(),
            })?;
            let (op, rhs) = tail.ok_or(Error::LpParse {
                line: chunk[0].0,
                msg: format!("row {name} without a relation"),
            })?;
            model.rows.push(Row {
                name,
                terms,
                op,
                rhs,
            });
        }

        for name in binary_names {
            let i = var_of(&mut model, &name);
            model.variables[i].binary = true;
        }
        Ok(model)
    }
}

fn pair_name(s: usize, t: usize) -> String {
    format!("p_{s}_{t}")
}

struct ModelBuilder {
    model: IpModel,
    index: HashMap<String, usize>,
}

impl ModelBuilder {
    fn new() -> Self {
        ModelBuilder {
            model: IpModel::default(),
            index: HashMap::new(),
        }
    }

    fn var(&mut self, name: String, binary: bool) -> usize {
        debug_assert!(!self.index.contains_key(&name), "duplicate variable {name}");
        let i = self.model.variables.len();
        self.index.insert(name.clone(), i);
        self.model.variables.push(Variable { name, binary });
        i
    }

    fn get(&self, name: &str) -> usize {
        self.index[name]
    }

    fn row(&mut self, name: String, terms: Vec<(i64, usize)>, op: RowOp, rhs: i64) {
        self.model.rows.push(Row {
            name,
            terms,
            op,
            rhs,
        });
    }
}

/// Default cap on flow-model variables; beyond it the export refuses.
pub const FLOW_VARIABLE_LIMIT: usize = 2_000_000;

/// Exact pairwise-flow program. Every unordered vertex pair gets a pair
/// indicator and, if both endpoints are chosen, must route a unit of flow
/// between them over chosen vertices. Minimizing total flow makes the
/// objective the Wiener index of the chosen set, so an exact solve certifies
/// the optimum.
pub fn export_flow_ip(g: &Graph, query: &QuerySet) -> Result<IpModel> {
    query.validate_in(g)?;
    let n = g.vertex_count();
    let m = g.edge_count();
    let pairs_count = n * (n - 1) / 2;
    let var_count = n + pairs_count * (1 + 2 * m);
    if var_count > FLOW_VARIABLE_LIMIT {
        return Err(Error::InstanceTooLarge {
            what: "flow model variables",
            actual: var_count,
            limit: FLOW_VARIABLE_LIMIT,
        });
    }

    let mut b = ModelBuilder::new();
    b.model.comments = vec![
        "pairwise-flow program for the minimum Wiener connector".to_string(),
        format!(
            "graph: {n} vertices, {m} edges; query: {:?} (0-based)",
            query.vertices()
        ),
        "y_u = vertex chosen; p_s_t = both endpoints chosen;".to_string(),
        "f_s_t_u_v = flow for pair (s,t) on arc u->v, one unit per chosen pair".to_string(),
        "objective = sum of all flow = Wiener index of the chosen subgraph".to_string(),
    ];

    for u in 0..n {
        b.var(format!("y_{u}"), true);
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|s| (s + 1..n).map(move |t| (s, t)))
        .collect();
    for &(s, t) in &pairs {
        b.var(pair_name(s, t), false);
    }
    let arcs: Vec<(usize, usize)> = g
        .edges()
        .flat_map(|(u, v)| [(u, v), (v, u)])
        .collect();
    for &(s, t) in &pairs {
        for &(u, v) in &arcs {
            b.var(format!("f_{s}_{t}_{u}_{v}"), false);
        }
    }

    let mut objective = Vec::with_capacity(pairs.len() * arcs.len());
    for &(s, t) in &pairs {
        for &(u, v) in &arcs {
            objective.push((1i64, b.get(&format!("f_{s}_{t}_{u}_{v}"))));
        }
    }
    b.model.objective = objective;

    for &(s, t) in &pairs {
        let p = b.get(&pair_name(s, t));
        for v in 0..n {
            let mut terms = Vec::new();
            for &u in g.neighbors(v) {
                terms.push((1i64, b.get(&format!("f_{s}_{t}_{u}_{v}"))));
            }
            for &u in g.neighbors(v) {
                terms.push((-1i64, b.get(&format!("f_{s}_{t}_{v}_{u}"))));
            }
            if v == s {
                terms.push((1, p));
            } else if v == t {
                terms.push((-1, p));
            }
            b.row(format!("flow_{s}_{t}_{v}"), terms, RowOp::Eq, 0);
        }
        for &(u, v) in &arcs {
            let f = b.get(&format!("f_{s}_{t}_{u}_{v}"));
            let y = b.get(&format!("y_{u}"));
            b.row(
                format!("cap_{s}_{t}_{u}_{v}"),
                vec![(1, f), (-1, y)],
                RowOp::Le,
                0,
            );
        }
        let ys = b.get(&format!("y_{s}"));
        let yt = b.get(&format!("y_{t}"));
        b.row(
            format!("link_{s}_{t}"),
            vec![(1, p), (-1, ys), (-1, yt)],
            RowOp::Ge,
            -1,
        );
    }
    for &q in query.vertices() {
        let y = b.get(&format!("y_{q}"));
        b.row(format!("fix_{q}"), vec![(1, y)], RowOp::Eq, 1);
    }
    Ok(b.model)
}

/// How many cycle rows the tree exporter adds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CyclePolicy {
    /// No cycle rows: cheapest, loosest still-valid relaxation.
    None,
    /// All simple cycles up to this length, capped at
    /// [`CYCLE_COUNT_CAP`] rows.
    UpTo(usize),
}

/// Most cycle rows the tree exporter will enumerate.
pub const CYCLE_COUNT_CAP: usize = 10_000;

/// Tree-relaxation program. Pair demand is priced at host-graph distance,
/// which never exceeds the induced distance, and chosen vertices form a
/// parent structure; with cycles only partially excluded the feasible region
/// contains every true connector, so the optimum is a certified lower bound
/// on the minimum Wiener index.
pub fn export_tree_ip(g: &Graph, query: &QuerySet, cycles: CyclePolicy) -> Result<IpModel> {
    query.validate_in(g)?;
    let n = g.vertex_count();
    let m = g.edge_count();
    let q_root = query.vertices()[0];

    let mut b = ModelBuilder::new();
    b.model.comments = vec![
        "tree-relaxation program for the minimum Wiener connector".to_string(),
        format!(
            "graph: {n} vertices, {m} edges; query: {:?} (0-based), parent root {q_root}",
            query.vertices()
        ),
        "pairs are priced at host-graph distance, a lower bound on induced distance,".to_string(),
        "and cycle exclusion is partial, so the optimum is a valid lower bound".to_string(),
        "x_u_v = v is the parent of u; both direction rows per edge are emitted".to_string(),
        match cycles {
            CyclePolicy::None => "cycle rows: none".to_string(),
            CyclePolicy::UpTo(l) => format!(
                "cycle rows: all simple cycles of length <= {l}, capped at {CYCLE_COUNT_CAP} rows"
            ),
        },
    ];

    for u in 0..n {
        b.var(format!("y_{u}"), true);
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|s| (s + 1..n).map(move |t| (s, t)))
        .collect();
    for &(s, t) in &pairs {
        b.var(pair_name(s, t), false);
    }
    let arcs: Vec<(usize, usize)> = g
        .edges()
        .flat_map(|(u, v)| [(u, v), (v, u)])
        .collect();
    for &(u, v) in &arcs {
        b.var(format!("x_{u}_{v}"), false);
    }

    // Pair prices need all-pairs distances.
    let mut objective = Vec::new();
    for s in 0..n {
        let d = bfs_sssp(g, s)?;
        for t in s + 1..n {
            if let Some(dist) = d.dist(t) {
                objective.push((dist as i64, b.get(&pair_name(s, t))));
            }
        }
    }
    b.model.objective = objective;

    for v in 0..n {
        if v == q_root {
            continue;
        }
        let mut terms: Vec<(i64, usize)> = g
            .neighbors(v)
            .iter()
            .map(|&u| (1i64, b.get(&format!("x_{v}_{u}"))))
            .collect();
        terms.push((-1, b.get(&format!("y_{v}"))));
        b.row(format!("parent_{v}"), terms, RowOp::Eq, 0);
    }
    let mut card: Vec<(i64, usize)> = arcs
        .iter()
        .map(|&(u, v)| (1i64, b.get(&format!("x_{u}_{v}"))))
        .collect();
    card.extend((0..n).map(|u| (-1i64, b.get(&format!("y_{u}")))));
    b.row("card".to_string(), card, RowOp::Eq, -1);
    for (u, v) in g.edges() {
        let xuv = b.get(&format!("x_{u}_{v}"));
        let xvu = b.get(&format!("x_{v}_{u}"));
        let yu = b.get(&format!("y_{u}"));
        let yv = b.get(&format!("y_{v}"));
        b.row(
            format!("dir_{u}_{v}"),
            vec![(1, xuv), (1, xvu), (-1, yu)],
            RowOp::Le,
            0,
        );
        b.row(
            format!("dir_{v}_{u}"),
            vec![(1, xuv), (1, xvu), (-1, yv)],
            RowOp::Le,
            0,
        );
    }
    for &(s, t) in &pairs {
        let p = b.get(&pair_name(s, t));
        let ys = b.get(&format!("y_{s}"));
        let yt = b.get(&format!("y_{t}"));
        b.row(
            format!("link_{s}_{t}"),
            vec![(1, p), (-1, ys), (-1, yt)],
            RowOp::Ge,
            -1,
        );
    }
    for &q in query.vertices() {
        let y = b.get(&format!("y_{q}"));
        b.row(format!("fix_{q}"), vec![(1, y)], RowOp::Eq, 1);
    }

    if let CyclePolicy::UpTo(max_len) = cycles {
        let cycles = enumerate_cycles(g, max_len, CYCLE_COUNT_CAP);
        for (i, cycle) in cycles.iter().enumerate() {
            let mut terms = Vec::with_capacity(2 * cycle.len());
            for k in 0..cycle.len() {
                let u = cycle[k];
                let v = cycle[(k + 1) % cycle.len()];
                terms.push((1i64, b.get(&format!("x_{u}_{v}"))));
                terms.push((1i64, b.get(&format!("x_{v}_{u}"))));
            }
            b.row(format!("cyc_{i}"), terms, RowOp::Le, cycle.len() as i64 - 1);
        }
    }
    Ok(b.model)
}

/// All simple cycles of length 3..=max_len, each listed once starting at its
/// smallest vertex with the smaller second vertex, ascending. Stops at `cap`.
fn enumerate_cycles(g: &Graph, max_len: usize, cap: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let n = g.vertex_count();
    let mut path: Vec<usize> = Vec::new();
    let mut on_path = vec![false; n];

    fn dfs(
        g: &Graph,
        start: usize,
        path: &mut Vec<usize>,
        on_path: &mut Vec<bool>,
        max_len: usize,
        cap: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if out.len() >= cap {
            return;
        }
        let last = *path.last().unwrap();
        for &next in g.neighbors(last) {
            if out.len() >= cap {
                return;
            }
            if next == start && path.len() >= 3 {
                // Canonical orientation: second vertex below the last one.
                if path[1] < path[path.len() - 1] {
                    out.push(path.clone());
                }
                continue;
            }
            if next <= start || on_path[next] || path.len() == max_len {
                continue;
            }
            path.push(next);
            on_path[next] = true;
            dfs(g, start, path, on_path, max_len, cap, out);
            on_path[next] = false;
            path.pop();
        }
    }

    if max_len < 3 {
        return out;
    }
    for start in 0..n {
        if out.len() >= cap {
            break;
        }
        path.clear();
        path.push(start);
        on_path[start] = true;
        dfs(g, start, &mut path, &mut on_path, max_len, cap, &mut out);
        on_path[start] = false;
    }
    out
}

/// One failed constraint in a verification report.
#[derive(Debug, Clone, Serialize)]
pub struct RowViolation {
    pub row: String,
    pub lhs: i64,
    pub op: String,
    pub rhs: i64,
}

/// Result of checking the intended assignment for a vertex set against an
/// exported model.
#[derive(Debug, Serialize)]
pub struct AssignmentReport {
    pub kind: String,
    pub violations: Vec<RowViolation>,
    pub objective: i64,
    pub wiener: u64,
    /// Flow models: objective equals the Wiener index. Tree models: the
    /// objective is a lower bound, so it must not exceed it.
    pub objective_consistent: bool,
}

impl AssignmentReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty() && self.objective_consistent
    }
}

/// Build the assignment a connector `s` is meant to induce (membership for
/// y, pair membership for p, canonical shortest paths inside the induced
/// subgraph for flows, a breadth-first parent forest for x) and evaluate
/// every row of `model` against it exactly.
pub fn verify_ip_assignment(
    model: &IpModel,
    g: &Graph,
    s: &[usize],
    query: &QuerySet,
) -> Result<AssignmentReport> {
    for &q in query.vertices() {
        if s.binary_search(&q).is_err() {
            return Err(Error::InvalidParameter(format!(
                "query vertex {q} missing from the vertex set"
            )));
        }
    }
    let wiener = wiener_index(g, s)?;
    let (sub, map) = g.induced_subgraph(s)?;
    let index = model.name_index();
    let is_flow = model.variables.iter().any(|v| v.name.starts_with("f_"));
    let mut values = vec![0i64; model.variables.len()];

    let set = |values: &mut Vec<i64>, name: &str, val: i64| -> Result<()> {
        match index.get(name) {
            Some(&i) => {
                values[i] = val;
                Ok(())
            }
            None => Err(Error::InvalidParameter(format!(
                "model has no variable {name}; wrong model for this graph?"
            ))),
        }
    };

    for &v in s {
        set(&mut values, &format!("y_{v}"), 1)?;
    }
    for (i, &sv) in s.iter().enumerate() {
        for &tv in &s[i + 1..] {
            set(&mut values, &pair_name(sv, tv), 1)?;
        }
    }

    if is_flow {
        // One unit along the canonical shortest path of each pair, inside
        // the induced subgraph.
        for si in 0..map.len() {
            let d = bfs_sssp(&sub, si)?;
            for ti in si + 1..map.len() {
                let (sv, tv) = (map[si], map[ti]);
                let mut cur = ti;
                while cur != si {
                    let dc = d.dist(cur).unwrap();
                    let prev = sub
                        .neighbors(cur)
                        .iter()
                        .copied()
                        .find(|&u| d.dist(u) == Some(dc - 1))
                        .expect("bfs level structure");
                    // Arc directed toward t.
                    set(
                        &mut values,
                        &format!("f_{sv}_{tv}_{}_{}", map[prev], map[cur]),
                        1,
                    )?;
                    cur = prev;
                }
            }
        }
    } else {
        // Parent forest from the query root.
        let root = query.vertices()[0];
        let ri = map.binary_search(&root).unwrap();
        let d = bfs_sssp(&sub, ri)?;
        for vi in 0..map.len() {
            if vi == ri {
                continue;
            }
            let p = d.parent(vi).ok_or(Error::Unreachable {
                vertex: map[vi],
                root,
            })?;
            set(&mut values, &format!("x_{}_{}", map[vi], map[p]), 1)?;
        }
    }

    let eval = |terms: &[(i64, usize)]| -> i64 {
        terms.iter().map(|&(c, v)| c * values[v]).sum()
    };
    let mut violations = Vec::new();
    for row in &model.rows {
        let lhs = eval(&row.terms);
        let ok = match row.op {
            RowOp::Le => lhs <= row.rhs,
            RowOp::Ge => lhs >= row.rhs,
            RowOp::Eq => lhs == row.rhs,
        };
        if !ok {
            violations.push(RowViolation {
                row: row.name.clone(),
                lhs,
                op: row.op.symbol().to_string(),
                rhs: row.rhs,
            });
        }
    }
    let objective = eval(&model.objective);
    let objective_consistent = if is_flow {
        objective == wiener as i64
    } else {
        objective <= wiener as i64
    };
    Ok(AssignmentReport {
        kind: if is_flow { "flow" } else { "tree" }.to_string(),
        violations,
        objective,
        wiener,
        objective_consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::from_edges(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn flow_model_counts_on_the_triangle() {
        let g = triangle();
        let q = QuerySet::new(vec![0, 1]).unwrap();
        let model = export_flow_ip(&g, &q).unwrap();
        // 3 y + 3 p + 3 pairs * 6 arcs of flow.
        assert_eq!(model.variable_count(), 24);
        // 3 pairs * (3 conservation + 6 capacity + 1 linking) + 2 fixing.
        assert_eq!(model.row_count(), 32);
        assert_eq!(model.objective.len(), 18);
    }

    #[test]
    fn tree_model_counts_and_cycle_row() {
        let g = triangle();
        let q = QuerySet::new(vec![0, 1, 2]).unwrap();
        let model = export_tree_ip(&g, &q, CyclePolicy::UpTo(3)).unwrap();
        // 3 y + 3 p + 6 x.
        assert_eq!(model.variable_count(), 12);
        // 2 parent + 1 card + 6 direction + 3 pair links + 3 fixing + 1 cycle.
        assert_eq!(model.row_count(), 16);
        let cyc = model.rows.iter().find(|r| r.name == "cyc_0").unwrap();
        assert_eq!(cyc.terms.len(), 6);
        assert_eq!(cyc.op, RowOp::Le);
        assert_eq!(cyc.rhs, 2);
        let none = export_tree_ip(&g, &q, CyclePolicy::None).unwrap();
        assert_eq!(none.row_count(), 15);
    }

    #[test]
    fn lp_text_is_stable_and_round_trips() {
        let g = triangle();
        let q = QuerySet::new(vec![0, 1]).unwrap();
        for model in [
            export_flow_ip(&g, &q).unwrap(),
            export_tree_ip(&g, &q, CyclePolicy::UpTo(4)).unwrap(),
        ] {
            let text = model.to_lp();
            assert_eq!(text, model.to_lp());
            let parsed = IpModel::parse_lp(&text).unwrap();
            assert_eq!(parsed.canonical(), model.canonical());
            assert_eq!(IpModel::parse_lp(&parsed.to_lp()).unwrap().canonical(),
                model.canonical());
        }
    }

    #[test]
    fn lp_parser_rejects_garbage() {
        assert!(IpModel::parse_lp("Minimize\n obj: x\nEnd\n").is_err());
        assert!(IpModel::parse_lp("nonsense\n").is_err());
        let bad_rhs = "Minimize\n obj: x\nSubject To\n r: x <= frog\nEnd\n";
        assert!(IpModel::parse_lp(bad_rhs).is_err());
    }

    #[test]
    fn intended_assignment_is_feasible_on_a_path() {
        let g = Graph::from_edges(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        let q = QuerySet::new(vec![0, 3]).unwrap();
        let s = vec![0, 1, 2, 3];
        let flow = export_flow_ip(&g, &q).unwrap();
        let report = verify_ip_assignment(&flow, &g, &s, &q).unwrap();
        assert!(report.violations.is_empty(), "{:?}", report.violations);
        assert_eq!(report.objective, 10);
        assert!(report.objective_consistent);
        let tree = export_tree_ip(&g, &q, CyclePolicy::UpTo(6)).unwrap();
        let report = verify_ip_assignment(&tree, &g, &s, &q).unwrap();
        assert!(report.ok(), "{:?}", report.violations);
        assert_eq!(report.objective, 10); // a path prices pairs exactly
    }

    #[test]
    fn verifier_flags_broken_rows() {
        let g = triangle();
        let q = QuerySet::new(vec![0, 1]).unwrap();
        let mut model = export_flow_ip(&g, &q).unwrap();
        // Corrupt a fixing row so the intended assignment cannot satisfy it.
        let fix = model.rows.iter_mut().find(|r| r.name == "fix_0").unwrap();
        fix.rhs = 0;
        let report = verify_ip_assignment(&model, &g, &[0, 1], &q).unwrap();
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].row, "fix_0");
    }

    #[test]
    fn cycle_enumeration_is_canonical() {
        // Two triangles sharing an edge; cycles: both triangles + the square.
        let g = Graph::from_edges(4, vec![(0, 1), (1, 2), (0, 2), (1, 3), (2, 3)]).unwrap();
        let cycles = enumerate_cycles(&g, 4, 100);
        assert_eq!(
            cycles,
            vec![vec![0, 1, 2], vec![0, 1, 3, 2], vec![1, 2, 3]]
        );
        assert_eq!(enumerate_cycles(&g, 3, 100).len(), 2);
        assert_eq!(enumerate_cycles(&g, 4, 1).len(), 1);
    }
}
