//! Simple undirected graphs with dense 0-based vertex ids, plus the few
//! traversals everything else is built from.
//!
//! Public invariant: neighbor lists are sorted and duplicate-free, so
//! iteration order (and everything derived from it) is deterministic.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics;

/// Unweighted simple undirected graph. Self-loops and parallel edges are
/// dropped at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    /// Graph on `n` vertices with no edges.
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Build from an edge list. Vertices outside `0..n` are an error;
    /// self-loops and repeated edges are silently dropped.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            for &x in &[u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                continue;
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut m = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            m += list.len();
        }
        Ok(Graph { adj, m: m / 2 })
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.adj.len() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as (u, v) pairs with u < v, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.adj.len() {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.adj.len(),
            });
        }
        Ok(())
    }

    /// Component label per vertex. Labels are the smallest vertex id in the
    /// component, so they are stable across runs.
    pub fn component_labels(&self) -> Vec<usize> {
        let n = self.adj.len();
        let mut label = vec![usize::MAX; n];
        let mut queue = std::collections::VecDeque::new();
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = s;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if label[v] == usize::MAX {
                        label[v] = s;
                        queue.push_back(v);
                    }
                }
            }
        }
        label
    }

    pub fn is_connected(&self) -> bool {
        let n = self.adj.len();
        if n <= 1 {
            return true;
        }
        self.component_labels().iter().all(|&l| l == 0)
    }

    /// Vertices of the largest connected component; ties go to the component
    /// containing the smallest vertex id.
    pub fn giant_component(&self) -> Vec<usize> {
        let labels = self.component_labels();
        let n = self.adj.len();
        let mut size = vec![0usize; n];
        for &l in &labels {
            size[l] += 1;
        }
        let mut best = 0;
        for l in 0..n {
            if size[l] > size[best] {
                best = l;
            }
        }
        (0..n).filter(|&v| labels[v] == best).collect()
    }

    /// Subgraph induced by `s` (sorted, duplicate-free). Vertex `i` of the
    /// result corresponds to `s[i]`; the returned vector is that mapping.
    pub fn induced_subgraph(&self, s: &[usize]) -> Result<(Graph, Vec<usize>)> {
        for w in s.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidParameter(
                    "vertex set must be sorted and duplicate-free".into(),
                ));
            }
        }
        if let Some(&last) = s.last() {
            self.check_vertex(last)?;
        }
        let mut adj = vec![Vec::new(); s.len()];
        for (i, &u) in s.iter().enumerate() {
            for &v in &self.adj[u] {
                if let Ok(j) = s.binary_search(&v) {
                    adj[i].push(j);
                }
            }
        }
        let m = adj.iter().map(|l| l.len()).sum::<usize>() / 2;
        Ok((Graph { adj, m }, s.to_vec()))
    }
}

/// Undirected graph with strictly positive edge weights.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    adj: Vec<Vec<(usize, f64)>>,
    m: usize,
}

impl WeightedGraph {
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(u, v, w) in edges {
            for &x in &[u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u}, {v}) has non-positive weight {w}"
                )));
            }
            if u == v {
                continue;
            }
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        let mut m = 0;
        for list in &mut adj {
            list.sort_unstable_by_key(|a| a.0);
            list.dedup_by_key(|e| e.0);
            m += list.len();
        }
        Ok(WeightedGraph { adj, m: m / 2 })
    }

    /// Same topology as `g` with every weight 1.
    pub fn unit_weights(g: &Graph) -> Self {
        let adj = g
            .adj
            .iter()
            .map(|list| list.iter().map(|&v| (v, 1.0)).collect())
            .collect();
        WeightedGraph { adj, m: g.m }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adj[v]
    }

    pub fn edge_weight(&self, u: usize, v: usize) -> Option<f64> {
        self.adj
            .get(u)?
            .binary_search_by(|e| e.0.cmp(&v))
            .ok()
            .map(|i| self.adj[u][i].1)
    }

    /// Edges as (u, v, w) with u < v, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .filter(move |&&(v, _)| u < v)
                .map(move |&(v, w)| (u, v, w))
        })
    }

    pub fn topology(&self) -> Graph {
        let adj: Vec<Vec<usize>> = self
            .adj
            .iter()
            .map(|list| list.iter().map(|&(v, _)| v).collect())
            .collect();
        Graph { adj, m: self.m }
    }
}

/// Single-source distances and predecessors. Unreached vertices hold `None`;
/// there is no sentinel value.
#[derive(Debug, Clone)]
pub struct DistanceMap<D> {
    pub source: usize,
    dist: Vec<Option<D>>,
    parent: Vec<Option<usize>>,
}

impl<D: Copy> DistanceMap<D> {
    #[inline]
    pub fn dist(&self, v: usize) -> Option<D> {
        self.dist[v]
    }

    #[inline]
    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn reached(&self, v: usize) -> bool {
        self.dist[v].is_some()
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    /// Path from the source to `v` following parent links, inclusive.
    pub fn path_to(&self, v: usize) -> Option<Vec<usize>> {
        self.dist[v]?;
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        Some(path)
    }
}

/// Breadth-first distances from `source`. Parents are discovery parents;
/// neighbor lists are sorted, so the result is deterministic.
pub fn bfs_sssp(g: &Graph, source: usize) -> Result<DistanceMap<u64>> {
    g.check_vertex(source)?;
    let n = g.vertex_count();
    let mut dist = vec![None; n];
    let mut parent = vec![None; n];
    let mut queue = std::collections::VecDeque::new();
    dist[source] = Some(0);
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &v in g.neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                parent[v] = Some(u);
                queue.push_back(v);
            }
        }
    }
    Ok(DistanceMap {
        source,
        dist,
        parent,
    })
}

/// Dijkstra from `source`. Ties are broken toward the smaller vertex id so
/// parents are deterministic.
pub fn dijkstra_sssp(g: &WeightedGraph, source: usize) -> Result<DistanceMap<f64>> {
    if source >= g.vertex_count() {
        return Err(Error::VertexOutOfRange {
            vertex: source,
            n: g.vertex_count(),
        });
    }
    let n = g.vertex_count();
    let mut dist: Vec<Option<f64>> = vec![None; n];
    let mut parent = vec![None; n];
    let mut done = vec![false; n];
    let mut heap: BinaryHeap<(Reverse<OrdF64>, Reverse<usize>)> = BinaryHeap::new();
    dist[source] = Some(0.0);
    heap.push((Reverse(OrdF64(0.0)), Reverse(source)));
    while let Some((Reverse(OrdF64(du)), Reverse(u))) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for &(v, w) in g.neighbors(u) {
            let cand = du + w;
            let better = match dist[v] {
                None => true,
                Some(dv) => cand < dv || (cand == dv && Some(u) < parent[v].or(Some(usize::MAX))),
            };
            if !done[v] && better {
                dist[v] = Some(cand);
                parent[v] = Some(u);
                heap.push((Reverse(OrdF64(cand)), Reverse(v)));
            }
        }
    }
    Ok(DistanceMap {
        source,
        dist,
        parent,
    })
}

/// f64 wrapper ordered by `total_cmp`, for use in heaps and sorts. Weights in
/// this crate are finite and non-negative, where total_cmp agrees with the
/// usual order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct OrdF64(pub f64);

impl Eq for OrdF64 {}

impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Non-empty set of query vertices, kept sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct QuerySet {
    vertices: Vec<usize>,
}

impl QuerySet {
    pub fn new(mut vertices: Vec<usize>) -> Result<Self> {
        vertices.sort_unstable();
        vertices.dedup();
        if vertices.is_empty() {
            return Err(Error::EmptyQuery);
        }
        Ok(QuerySet { vertices })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    /// Ids in range and all members reachable from one another.
    pub fn validate_in(&self, g: &Graph) -> Result<()> {
        for &v in &self.vertices {
            g.check_vertex(v)?;
        }
        if self.vertices.len() > 1 {
            let reach = bfs_sssp(g, self.vertices[0])?;
            if self.vertices.iter().any(|&v| !reach.reached(v)) {
                return Err(Error::QueryDisconnected);
            }
        }
        Ok(())
    }
}

/// A solved instance: the connector's vertex set together with its metrics,
/// all computed on the induced subgraph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Connector {
    pub vertices: Vec<usize>,
    pub wiener: u64,
    pub size: usize,
    pub density: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub root_cost: Option<RootCost>,
}

/// Root and the size-weighted distance cost used when the connector was
/// selected by proxy rather than by exact Wiener index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootCost {
    pub root: usize,
    pub cost: u64,
}

impl Connector {
    /// Metrics for the subgraph induced by `vertices`, which must be
    /// connected.
    pub fn from_vertex_set(g: &Graph, mut vertices: Vec<usize>) -> Result<Self> {
        vertices.sort_unstable();
        vertices.dedup();
        let wiener = metrics::wiener_index(g, &vertices)?;
        let (sub, _) = g.induced_subgraph(&vertices)?;
        let k = vertices.len();
        let density = if k < 2 {
            0.0
        } else {
            sub.edge_count() as f64 / (k * (k - 1) / 2) as f64
        };
        Ok(Connector {
            size: k,
            wiener,
            density,
            vertices,
            root_cost: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (0..n - 1).map(|i| (i, i + 1))).unwrap()
    }

    #[test]
    fn from_edges_normalizes() {
        let g = Graph::from_edges(4, vec![(0, 1), (1, 0), (2, 2), (1, 2)]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert!(!g.has_edge(2, 2));
        assert!(Graph::from_edges(2, vec![(0, 5)]).is_err());
    }

    #[test]
    fn bfs_distances_on_path() {
        let g = path(5);
        let d = bfs_sssp(&g, 0).unwrap();
        assert_eq!(d.dist(4), Some(4));
        assert_eq!(d.path_to(4).unwrap(), vec![0, 1, 2, 3, 4]);
        assert!(bfs_sssp(&g, 9).is_err());
    }

    #[test]
    fn bfs_leaves_other_components_unreached() {
        let g = Graph::from_edges(4, vec![(0, 1), (2, 3)]).unwrap();
        let d = bfs_sssp(&g, 0).unwrap();
        assert!(d.reached(1));
        assert!(!d.reached(2));
        assert_eq!(d.dist(3), None);
    }

    #[test]
    fn dijkstra_matches_bfs_on_unit_weights() {
        let g = Graph::from_edges(6, vec![(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (1, 5)]).unwrap();
        let wg = WeightedGraph::unit_weights(&g);
        let b = bfs_sssp(&g, 0).unwrap();
        let d = dijkstra_sssp(&wg, 0).unwrap();
        for v in 0..6 {
            assert_eq!(b.dist(v).map(|x| x as f64), d.dist(v));
        }
    }

    #[test]
    fn dijkstra_prefers_lighter_path() {
        let wg =
            WeightedGraph::from_edges(3, &[(0, 1, 10.0), (0, 2, 1.0), (2, 1, 1.0)]).unwrap();
        let d = dijkstra_sssp(&wg, 0).unwrap();
        assert_eq!(d.dist(1), Some(2.0));
        assert_eq!(d.parent(1), Some(2));
    }

    #[test]
    fn weighted_graph_rejects_bad_weights() {
        assert!(WeightedGraph::from_edges(2, &[(0, 1, 0.0)]).is_err());
        assert!(WeightedGraph::from_edges(2, &[(0, 1, -3.0)]).is_err());
    }

    #[test]
    fn induced_subgraph_keeps_mapping() {
        let g = path(5);
        let (sub, map) = g.induced_subgraph(&[1, 2, 4]).unwrap();
        assert_eq!(map, vec![1, 2, 4]);
        assert_eq!(sub.edge_count(), 1);
        assert!(sub.has_edge(0, 1));
        assert!(!sub.has_edge(1, 2));
        assert!(g.induced_subgraph(&[2, 1]).is_err());
    }

    #[test]
    fn components_and_giant() {
        let g = Graph::from_edges(7, vec![(0, 1), (2, 3), (3, 4), (2, 4), (5, 6)]).unwrap();
        assert!(!g.is_connected());
        assert_eq!(g.giant_component(), vec![2, 3, 4]);
        assert!(path(3).is_connected());
    }

    #[test]
    fn query_set_validation() {
        let g = Graph::from_edges(4, vec![(0, 1), (2, 3)]).unwrap();
        assert!(matches!(QuerySet::new(vec![]), Err(Error::EmptyQuery)));
        let q = QuerySet::new(vec![1, 0, 1]).unwrap();
        assert_eq!(q.vertices(), &[0, 1]);
        q.validate_in(&g).unwrap();
        let q2 = QuerySet::new(vec![0, 3]).unwrap();
        assert!(matches!(
            q2.validate_in(&g),
            Err(Error::QueryDisconnected)
        ));
    }

    #[test]
    fn connector_metrics() {
        let g = path(4);
        let c = Connector::from_vertex_set(&g, vec![2, 0, 1]).unwrap();
        assert_eq!(c.size, 3);
        assert_eq!(c.wiener, 4);
        assert!((c.density - 2.0 / 3.0).abs() < 1e-12);
        assert!(Connector::from_vertex_set(&g, vec![0, 2]).is_err());
    }
}
