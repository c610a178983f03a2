//! The approximation pipeline. For every root r in the query set and every
//! scale λ from a geometric grid, reweight the graph so that an edge costs
//! λ + max(d(r,u), d(r,v))/λ, pull a 2-approximate Steiner tree out of the
//! reweighted instance, then splice in shortest paths wherever the tree has
//! stretched a root distance by more than 1+sqrt(2). The candidate pool is
//! deduplicated and the winner is the candidate whose induced subgraph
//! minimizes the exact Wiener index (small candidates) or the size-weighted
//! root distance cost (large ones). The result is a constant-factor
//! approximation of the best possible connector.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{
    bfs_sssp, Connector, DistanceMap, Graph, QuerySet, RootCost, WeightedGraph,
};
use crate::metrics::{root_cost_a, wiener_index};
use crate::steiner::{mehlhorn_steiner, RootedTree};

/// Which λ values the sweep visits. Grid points are integer powers of 1+β.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaPolicy {
    /// Cover [1/sqrt(2), sqrt(n)], where the optimal scale provably lives.
    CoverOptimal,
    /// Exponents 1 through ceil(log_{1+β} n).
    Literal,
    /// Both of the above; at most twice the sweep cost. The default.
    Union,
}

#[derive(Debug, Clone)]
pub struct AlgorithmConfig {
    /// Grid ratio is 1+β; the approximation factor degrades by (1+β)^2.
    pub beta: f64,
    /// Candidates no larger than this are ranked by exact Wiener index.
    pub exact_selection_size_cap: usize,
    pub lambda_policy: LambdaPolicy,
    /// Sweep roots over the whole component instead of just the query set.
    /// Triples of query roots already carry the guarantee; this is for
    /// experiments.
    pub all_roots: bool,
}

impl Default for AlgorithmConfig {
    fn default() -> Self {
        AlgorithmConfig {
            beta: 1.0,
            exact_selection_size_cap: 1000,
            lambda_policy: LambdaPolicy::Union,
            all_roots: false,
        }
    }
}

impl AlgorithmConfig {
    fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0) || !self.beta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "beta must be positive and finite, got {}",
                self.beta
            )));
        }
        Ok(())
    }
}

/// One entry of the candidate pool.
#[derive(Debug, Clone)]
pub struct CandidateSolution {
    pub vertices: Vec<usize>,
    pub root: usize,
    pub lambda: f64,
    /// Size-weighted root distance cost inside the induced subgraph.
    pub cost_a: u64,
    /// Exact Wiener index, present when the candidate is small enough.
    pub wiener: Option<u64>,
}

impl CandidateSolution {
    fn selection_key(&self) -> (u64, usize, &[usize]) {
        (
            self.wiener.unwrap_or(self.cost_a),
            self.vertices.len(),
            &self.vertices,
        )
    }
}

/// The λ grid for a graph on `n` vertices. Exponents run over a contiguous
/// integer range, so the grid is sorted and duplicate-free.
pub fn lambda_grid(beta: f64, n: usize, policy: LambdaPolicy) -> Result<Vec<f64>> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "beta must be positive and finite, got {beta}"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidParameter(
            "lambda grid needs at least two vertices".into(),
        ));
    }
    let ratio = (1.0 + beta).ln();
    let cover_lo = ((0.5f64.ln() / 2.0) / ratio).floor() as i32;
    let cover_hi = (((n as f64).ln() / 2.0) / ratio).ceil() as i32;
    let lit_hi = (((n as f64).ln() / ratio).ceil() as i32).max(1);
    let (lo, hi) = match policy {
        LambdaPolicy::CoverOptimal => (cover_lo, cover_hi),
        LambdaPolicy::Literal => (1, lit_hi),
        LambdaPolicy::Union => (cover_lo.min(1), cover_hi.max(lit_hi)),
    };
    Ok((lo..=hi).map(|t| (1.0 + beta).powi(t)).collect())
}

/// Size-weighted distance cost with distances in the host graph rather than
/// the induced subgraph: |S| * sum over u in S of d_G(u, r).
pub fn cost_a_tilde(s: &[usize], dist_r: &DistanceMap<u64>) -> Result<u64> {
    let mut sum = 0u64;
    for &v in s {
        sum += dist_r.dist(v).ok_or(Error::Unreachable {
            vertex: v,
            root: dist_r.source,
        })?;
    }
    Ok(s.len() as u64 * sum)
}

/// Scale-balanced cost λ|S| + (sum of root distances)/λ.
pub fn cost_b(s: &[usize], lambda: f64, dist_r: &DistanceMap<u64>) -> Result<f64> {
    let mut sum = 0u64;
    for &v in s {
        sum += dist_r.dist(v).ok_or(Error::Unreachable {
            vertex: v,
            root: dist_r.source,
        })?;
    }
    Ok(lambda * s.len() as f64 + sum as f64 / lambda)
}

/// Reweight the component of the distance source: each surviving edge costs
/// λ + max(d(r,u), d(r,v))/λ. Edges with an unreached endpoint are dropped;
/// other components keep their vertices but lose their edges.
pub fn build_rooted_weights(
    g: &Graph,
    dist_r: &DistanceMap<u64>,
    lambda: f64,
) -> Result<WeightedGraph> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "lambda must be positive and finite, got {lambda}"
        )));
    }
    let mut edges = Vec::with_capacity(g.edge_count());
    for (u, v) in g.edges() {
        let (Some(du), Some(dv)) = (dist_r.dist(u), dist_r.dist(v)) else {
            continue;
        };
        let w = lambda + du.max(dv) as f64 / lambda;
        edges.push((u, v, w));
    }
    WeightedGraph::from_edges(g.vertex_count(), &edges)
}

/// True when d > (1 + sqrt(2)) * s, decided in exact integer arithmetic:
/// d - s must be positive with (d - s)^2 > 2 s^2.
fn exceeds_alpha(d: u64, s: u64) -> bool {
    d > s && {
        let gap = (d - s) as u128;
        gap * gap > 2 * (s as u128) * (s as u128)
    }
}

/// Splice shortest paths into a tree until no vertex is more than 1+sqrt(2)
/// times farther from the root than in the host graph. `dist` must be the
/// BFS map from the tree's root. The result keeps every tree vertex, grows
/// by at most a 1+sqrt(2) factor, and its root-distance mass grows by at
/// most sqrt(2).
pub fn adjust_distances(
    g: &Graph,
    tree: &RootedTree,
    dist: &DistanceMap<u64>,
) -> Result<RootedTree> {
    let root = tree.root();
    if dist.source != root {
        return Err(Error::InvalidParameter(format!(
            "distance map rooted at {} but tree rooted at {root}",
            dist.source
        )));
    }
    for &(u, v) in tree.edges() {
        if !g.has_edge(u, v) {
            return Err(Error::InvalidParameter(format!(
                "tree edge ({u}, {v}) is not a graph edge"
            )));
        }
    }
    for &v in tree.vertices() {
        if !dist.reached(v) {
            return Err(Error::Unreachable {
                vertex: v,
                root,
            });
        }
    }

    let n = g.vertex_count();
    let mut d: Vec<Option<u64>> = vec![None; n];
    let mut p: Vec<Option<usize>> = vec![None; n];
    d[root] = Some(0);

    fn relax(d: &mut [Option<u64>], p: &mut [Option<usize>], u: usize, v: usize) {
        let cand = d[u].expect("relax from an unreached vertex") + 1;
        if d[v].is_none_or(|dv| cand < dv) {
            d[v] = Some(cand);
            p[v] = Some(u);
        }
    }

    // Graft the BFS shortest path onto the tree so that u ends at exactly
    // its graph distance: collect the stale tail bottom-up, fix it top-down.
    let add_path = |d: &mut Vec<Option<u64>>, p: &mut Vec<Option<usize>>, u: usize| {
        let mut stale = Vec::new();
        let mut v = u;
        while d[v].is_none_or(|dv| dv > dist.dist(v).unwrap()) {
            stale.push(v);
            v = dist.parent(v).expect("walked past the source");
        }
        while let Some(x) = stale.pop() {
            relax(d, p, dist.parent(x).unwrap(), x);
        }
    };

    let check = |d: &mut Vec<Option<u64>>, p: &mut Vec<Option<usize>>, u: usize| {
        let du = d[u].expect("visited vertex must be reached");
        if exceeds_alpha(du, dist.dist(u).unwrap()) {
            add_path(d, p, u);
        }
    };

    let tadj = tree.adjacency();
    struct Frame {
        u: usize,
        parent: usize,
        idx: usize,
    }
    check(&mut d, &mut p, root);
    let mut stack = vec![Frame {
        u: root,
        parent: usize::MAX,
        idx: 0,
    }];
    while let Some(top) = stack.last_mut() {
        let children = &tadj[&top.u];
        if top.idx < children.len() {
            let v = children[top.idx];
            top.idx += 1;
            if v == top.parent {
                continue;
            }
            let u = top.u;
            relax(&mut d, &mut p, u, v);
            check(&mut d, &mut p, v);
            stack.push(Frame {
                u: v,
                parent: u,
                idx: 0,
            });
        } else {
            let done = stack.pop().unwrap();
            if let Some(below) = stack.last() {
                relax(&mut d, &mut p, done.u, below.u);
            }
        }
    }

    let edges: Vec<(usize, usize)> = (0..n)
        .filter_map(|v| p[v].map(|pv| (v, pv)))
        .collect();
    RootedTree::new(root, edges)
}

/// Minimum connector for a two-vertex query: the lexicographically canonical
/// shortest path between the pair.
pub fn shortest_path_connector(g: &Graph, query: &QuerySet) -> Result<Connector> {
    if query.len() != 2 {
        return Err(Error::InvalidParameter(format!(
            "shortest-path connector needs exactly two query vertices, got {}",
            query.len()
        )));
    }
    query.validate_in(g)?;
    let (s, t) = (query.vertices()[0], query.vertices()[1]);
    let dist = bfs_sssp(g, s)?;
    let mut path = vec![t];
    let mut cur = t;
    while cur != s {
        let dcur = dist.dist(cur).unwrap();
        // Deterministic parent: smallest id one level closer to s.
        let prev = g
            .neighbors(cur)
            .iter()
            .copied()
            .find(|&u| dist.dist(u) == Some(dcur - 1))
            .expect("bfs level structure");
        path.push(prev);
        cur = prev;
    }
    Connector::from_vertex_set(g, path)
}

/// Greedy post-pass: repeatedly drop a non-query vertex while doing so keeps
/// the connector connected and strictly lowers its Wiener index. Scans in
/// ascending id order, so the result is deterministic. Never worse than its
/// input.
pub fn local_prune(g: &Graph, connector: &Connector, query: &QuerySet) -> Result<Connector> {
    let mut current = connector.vertices.clone();
    let mut best = wiener_index(g, &current)?;
    'scan: loop {
        for (i, &v) in current.iter().enumerate() {
            if query.contains(v) {
                continue;
            }
            let mut trial = current.clone();
            trial.remove(i);
            if let Ok(w) = wiener_index(g, &trial) {
                if w < best {
                    current = trial;
                    best = w;
                    continue 'scan;
                }
            }
        }
        break;
    }
    Connector::from_vertex_set(g, current)
}

/// Full sweep: approximate minimum Wiener connector for `query`.
pub fn wiener_steiner(g: &Graph, query: &QuerySet, cfg: &AlgorithmConfig) -> Result<Connector> {
    let (winner, _) = wiener_steiner_with_pool(g, query, cfg)?;
    Ok(winner)
}

/// As [`wiener_steiner`], also returning the deduplicated candidate pool the
/// winner was selected from (in sweep order).
pub fn wiener_steiner_with_pool(
    g: &Graph,
    query: &QuerySet,
    cfg: &AlgorithmConfig,
) -> Result<(Connector, Vec<CandidateSolution>)> {
    cfg.validate()?;
    query.validate_in(g)?;

    if query.len() == 1 {
        let v = query.vertices()[0];
        let mut c = Connector::from_vertex_set(g, vec![v])?;
        c.root_cost = Some(RootCost { root: v, cost: 0 });
        return Ok((c, Vec::new()));
    }

    let roots: Vec<usize> = if cfg.all_roots {
        let reach = bfs_sssp(g, query.vertices()[0])?;
        (0..g.vertex_count()).filter(|&v| reach.reached(v)).collect()
    } else {
        query.vertices().to_vec()
    };
    let lambdas = lambda_grid(cfg.beta, g.vertex_count(), cfg.lambda_policy)?;

    let per_root: Vec<Result<Vec<(usize, f64, Vec<usize>)>>> = roots
        .par_iter()
        .map(|&r| {
            let dist_r = bfs_sssp(g, r)?;
            let mut terminals = query.vertices().to_vec();
            terminals.push(r);
            let terminals = QuerySet::new(terminals)?;
            let mut out = Vec::with_capacity(lambdas.len());
            for &lambda in &lambdas {
                let wg = build_rooted_weights(g, &dist_r, lambda)?;
                let tree = mehlhorn_steiner(&wg, &terminals)?.rerooted(r)?;
                let adjusted = adjust_distances(g, &tree, &dist_r)?;
                out.push((r, lambda, adjusted.vertices().to_vec()));
            }
            Ok(out)
        })
        .collect();

    let mut raw: Vec<(usize, f64, Vec<usize>)> = Vec::new();
    for res in per_root {
        raw.extend(res?);
    }
    if query.len() == 2 {
        let sp = shortest_path_connector(g, query)?;
        raw.push((query.vertices()[0], 0.0, sp.vertices));
    }

    let mut seen = std::collections::BTreeSet::new();
    let mut pool = Vec::new();
    for (root, lambda, vertices) in raw {
        if !seen.insert(vertices.clone()) {
            continue;
        }
        let cost_a = root_cost_a(g, &vertices, root)?;
        let wiener = if vertices.len() <= cfg.exact_selection_size_cap {
            Some(wiener_index(g, &vertices)?)
        } else {
            None
        };
        pool.push(CandidateSolution {
            vertices,
            root,
            lambda,
            cost_a,
            wiener,
        });
    }

    let winner = pool
        .iter()
        .min_by(|a, b| a.selection_key().cmp(&b.selection_key()))
        .expect("at least one candidate per root");
    let mut connector = Connector::from_vertex_set(g, winner.vertices.clone())?;
    connector.root_cost = Some(RootCost {
        root: winner.root,
        cost: winner.cost_a,
    });
    Ok((connector, pool))
}
