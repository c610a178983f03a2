//! Steiner trees over weighted graphs: a 2-approximation via Voronoi
//! partition and terminal-distance contraction, an exact enumeration baseline
//! for small instances, and an unweighted baseline that returns connectors.
//!
//! Every tie is broken on (weight, vertex ids), so all of this is
//! deterministic for a given input.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{Connector, Graph, OrdF64, QuerySet, WeightedGraph};

/// A tree subgraph with a distinguished root. Edges are stored normalized
/// (small id first) and sorted; the vertex set always includes the root, so
/// a single-vertex tree is representable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    root: usize,
    vertices: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

impl RootedTree {
    /// Validates that `edges` form a tree containing `root`.
    pub fn new(root: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut norm: Vec<(usize, usize)> = edges
            .into_iter()
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        norm.sort_unstable();
        norm.dedup();
        if norm.iter().any(|&(u, v)| u == v) {
            return Err(Error::NotATree("self-loop edge".into()));
        }
        let mut vertices: Vec<usize> = norm.iter().flat_map(|&(u, v)| [u, v]).collect();
        vertices.push(root);
        vertices.sort_unstable();
        vertices.dedup();
        if norm.len() + 1 != vertices.len() {
            return Err(Error::NotATree(format!(
                "{} edges over {} vertices",
                norm.len(),
                vertices.len()
            )));
        }
        let tree = RootedTree {
            root,
            vertices,
            edges: norm,
        };
        // Right edge count plus connectivity is acyclicity.
        let adj = tree.adjacency();
        let mut seen = BTreeSet::new();
        let mut stack = vec![root];
        seen.insert(root);
        while let Some(u) = stack.pop() {
            for &v in adj.get(&u).map(|l| l.as_slice()).unwrap_or(&[]) {
                if seen.insert(v) {
                    stack.push(v);
                }
            }
        }
        if seen.len() != tree.vertices.len() {
            return Err(Error::NotATree("edges do not connect the root".into()));
        }
        Ok(tree)
    }

    pub fn singleton(root: usize) -> Self {
        RootedTree {
            root,
            vertices: vec![root],
            edges: Vec::new(),
        }
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// Same tree with a different distinguished root.
    pub fn rerooted(self, root: usize) -> Result<Self> {
        if !self.contains(root) {
            return Err(Error::InvalidParameter(format!(
                "new root {root} is not a tree vertex"
            )));
        }
        Ok(RootedTree { root, ..self })
    }

    /// Neighbor lists, sorted.
    pub fn adjacency(&self) -> HashMap<usize, Vec<usize>> {
        let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
        for &v in &self.vertices {
            adj.entry(v).or_default();
        }
        for &(u, v) in &self.edges {
            adj.get_mut(&u).unwrap().push(v);
            adj.get_mut(&v).unwrap().push(u);
        }
        for list in adj.values_mut() {
            list.sort_unstable();
        }
        adj
    }

    /// Hop count from the root to every tree vertex.
    pub fn distances_from_root(&self) -> HashMap<usize, u64> {
        let adj = self.adjacency();
        let mut dist = HashMap::new();
        dist.insert(self.root, 0u64);
        let mut queue = VecDeque::from([self.root]);
        while let Some(u) = queue.pop_front() {
            let du = dist[&u];
            for &v in &adj[&u] {
                if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(v) {
                    e.insert(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Total edge weight under `wg`, which must contain every tree edge.
    pub fn total_weight(&self, wg: &WeightedGraph) -> Result<f64> {
        let mut sum = 0.0;
        for &(u, v) in &self.edges {
            sum += wg.edge_weight(u, v).ok_or_else(|| {
                Error::InvalidParameter(format!("tree edge ({u}, {v}) is not a graph edge"))
            })?;
        }
        Ok(sum)
    }
}

/// Nearest-terminal decomposition from a multi-source Dijkstra: each reached
/// vertex knows its closest source, the distance, and the predecessor on a
/// shortest path toward it. Ties prefer the smaller owner, then the smaller
/// predecessor.
#[derive(Debug)]
pub struct VoronoiPartition {
    pub owner: Vec<Option<usize>>,
    pub dist: Vec<Option<f64>>,
    pub parent: Vec<Option<usize>>,
}

pub fn voronoi_partition(wg: &WeightedGraph, sources: &[usize]) -> Result<VoronoiPartition> {
    let n = wg.vertex_count();
    for &s in sources {
        if s >= n {
            return Err(Error::VertexOutOfRange { vertex: s, n });
        }
    }
    let mut dist: Vec<Option<f64>> = vec![None; n];
    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap: BinaryHeap<(Reverse<OrdF64>, Reverse<usize>)> = BinaryHeap::new();
    for &s in sources {
        dist[s] = Some(0.0);
        owner[s] = Some(s);
        heap.push((Reverse(OrdF64(0.0)), Reverse(s)));
    }
    while let Some((Reverse(OrdF64(du)), Reverse(u))) = heap.pop() {
        if done[u] || dist[u] != Some(du) {
            continue;
        }
        done[u] = true;
        for &(v, w) in wg.neighbors(u) {
            if done[v] {
                continue;
            }
            let cand = du + w;
            let better = match dist[v] {
                None => true,
                Some(dv) => {
                    cand < dv
                        || (cand == dv
                            && (owner[u], Some(u)) < (owner[v], parent[v].or(owner[v])))
                }
            };
            if better {
                dist[v] = Some(cand);
                owner[v] = owner[u];
                parent[v] = Some(u);
                heap.push((Reverse(OrdF64(cand)), Reverse(v)));
            }
        }
    }
    Ok(VoronoiPartition {
        owner,
        dist,
        parent,
    })
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// 2-approximate minimum Steiner tree for `terminals`, rooted at the smallest
/// terminal. Contract each terminal pair to its cheapest boundary crossing,
/// take a spanning tree there, expand back to real paths, re-span, and prune
/// non-terminal leaves.
pub fn mehlhorn_steiner(wg: &WeightedGraph, terminals: &QuerySet) -> Result<RootedTree> {
    let terms = terminals.vertices();
    let root = terms[0];
    if terms.len() == 1 {
        if root >= wg.vertex_count() {
            return Err(Error::VertexOutOfRange {
                vertex: root,
                n: wg.vertex_count(),
            });
        }
        return Ok(RootedTree::singleton(root));
    }
    let vp = voronoi_partition(wg, terms)?;

    // Cheapest boundary crossing per terminal pair. Witness endpoints are
    // oriented so the first one belongs to the smaller terminal.
    let mut crossing: HashMap<(usize, usize), (OrdF64, usize, usize)> = HashMap::new();
    for (u, v, w) in wg.edges() {
        let (Some(ou), Some(ov)) = (vp.owner[u], vp.owner[v]) else {
            continue;
        };
        if ou == ov {
            continue;
        }
        let total = OrdF64(vp.dist[u].unwrap() + w + vp.dist[v].unwrap());
        let (key, wit) = if ou < ov {
            ((ou, ov), (total, u, v))
        } else {
            ((ov, ou), (total, v, u))
        };
        let entry = crossing.entry(key).or_insert(wit);
        if wit < *entry {
            *entry = wit;
        }
    }

    // Spanning tree of the terminal contraction.
    let mut aux: Vec<(OrdF64, usize, usize, usize, usize)> = crossing
        .into_iter()
        .map(|((a, b), (w, u, v))| (w, a, b, u, v))
        .collect();
    aux.sort_unstable_by_key(|x| (x.0, x.1, x.2, x.3, x.4));
    let mut uf = UnionFind::new(terms.len());
    let mut expanded: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut joined = 0;
    for (_, a, b, u, v) in aux {
        let ai = terms.binary_search(&a).unwrap();
        let bi = terms.binary_search(&b).unwrap();
        if !uf.union(ai, bi) {
            continue;
        }
        joined += 1;
        expanded.insert((u.min(v), u.max(v)));
        for mut x in [u, v] {
            while let Some(p) = vp.parent[x] {
                expanded.insert((x.min(p), x.max(p)));
                x = p;
            }
        }
    }
    if joined + 1 != terms.len() {
        return Err(Error::TerminalsDisconnected);
    }

    // The expanded paths can overlap and form cycles; span them again.
    let mut real: Vec<(OrdF64, usize, usize)> = expanded
        .into_iter()
        .map(|(u, v)| (OrdF64(wg.edge_weight(u, v).unwrap()), u, v))
        .collect();
    real.sort_unstable_by_key(|x| (x.0, x.1, x.2));
    let mut ids: Vec<usize> = real.iter().flat_map(|&(_, u, v)| [u, v]).collect();
    ids.sort_unstable();
    ids.dedup();
    let mut uf = UnionFind::new(ids.len());
    let mut tree_adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(_, u, v) in &real {
        let ui = ids.binary_search(&u).unwrap();
        let vi = ids.binary_search(&v).unwrap();
        if uf.union(ui, vi) {
            tree_adj.entry(u).or_default().push(v);
            tree_adj.entry(v).or_default().push(u);
        }
    }

    // Shave non-terminal leaves until none remain.
    let mut degree: HashMap<usize, usize> =
        tree_adj.iter().map(|(&v, l)| (v, l.len())).collect();
    let mut queue: Vec<usize> = degree
        .iter()
        .filter(|&(v, &d)| d == 1 && !terminals.contains(*v))
        .map(|(&v, _)| v)
        .collect();
    queue.sort_unstable();
    let mut removed: BTreeSet<usize> = BTreeSet::new();
    while let Some(v) = queue.pop() {
        removed.insert(v);
        for &u in &tree_adj[&v] {
            if removed.contains(&u) {
                continue;
            }
            let d = degree.get_mut(&u).unwrap();
            *d -= 1;
            if *d == 1 && !terminals.contains(u) {
                queue.push(u);
            }
        }
    }
    let final_edges: Vec<(usize, usize)> = tree_adj
        .iter()
        .flat_map(|(&u, list)| list.iter().map(move |&v| (u, v)))
        .filter(|&(u, v)| u < v && !removed.contains(&u) && !removed.contains(&v))
        .collect();

    RootedTree::new(root, final_edges)
}

/// Exact minimum Steiner tree by enumerating vertex supersets of the
/// terminals and spanning each one. Only instances with at most `budget`
/// optional vertices (in the terminals' component) are accepted; the default
/// budget is 20.
pub fn brute_force_steiner(
    wg: &WeightedGraph,
    terminals: &QuerySet,
    budget: usize,
) -> Result<RootedTree> {
    let terms = terminals.vertices();
    let topo = wg.topology();
    terminals
        .validate_in(&topo)
        .map_err(|_| Error::TerminalsDisconnected)?;
    let root = terms[0];
    if terms.len() == 1 {
        return Ok(RootedTree::singleton(root));
    }
    let reach = crate::graph::bfs_sssp(&topo, root)?;
    let extras: Vec<usize> = (0..wg.vertex_count())
        .filter(|&v| reach.reached(v) && !terminals.contains(v))
        .collect();
    if extras.len() > budget {
        return Err(Error::InstanceTooLarge {
            what: "optional Steiner vertices",
            actual: extras.len(),
            limit: budget,
        });
    }

    let mut edges: Vec<(OrdF64, usize, usize)> = wg
        .edges()
        .map(|(u, v, w)| (OrdF64(w), u, v))
        .collect();
    edges.sort_unstable_by_key(|x| (x.0, x.1, x.2));

    let mut best: Option<(OrdF64, usize, Vec<usize>, Vec<(usize, usize)>)> = None;
    for mask in 0u64..(1u64 << extras.len()) {
        let mut s: Vec<usize> = terms.to_vec();
        for (i, &v) in extras.iter().enumerate() {
            if mask >> i & 1 == 1 {
                s.push(v);
            }
        }
        s.sort_unstable();
        let mut uf = UnionFind::new(s.len());
        let mut weight = 0.0;
        let mut chosen = Vec::with_capacity(s.len() - 1);
        for &(OrdF64(w), u, v) in &edges {
            let (Ok(ui), Ok(vi)) = (s.binary_search(&u), s.binary_search(&v)) else {
                continue;
            };
            if uf.union(ui, vi) {
                weight += w;
                chosen.push((u, v));
            }
        }
        if chosen.len() + 1 != s.len() {
            continue; // the superset does not induce a connected subgraph
        }
        let cand = (OrdF64(weight), s.len(), s, chosen);
        match &best {
            Some((bw, bl, bs, _)) if (*bw, *bl, bs) <= (cand.0, cand.1, &cand.2) => {}
            _ => best = Some(cand),
        }
    }
    let (_, _, _, chosen) = best.ok_or(Error::TerminalsDisconnected)?;
    RootedTree::new(root, chosen)
}

/// Unweighted Steiner-tree baseline: run the 2-approximation with unit
/// weights and report the tree's vertex set as a connector.
pub fn steiner_baseline_st(g: &Graph, query: &QuerySet) -> Result<Connector> {
    query.validate_in(g)?;
    let wg = WeightedGraph::unit_weights(g);
    let tree = mehlhorn_steiner(&wg, query)?;
    Connector::from_vertex_set(g, tree.vertices().to_vec())
}
