//! Distance-based subgraph metrics. All distance sums are 64-bit: real
//! instances produce pairwise sums in the billions, well past u32.

use crate::error::{Error, Result};
use crate::graph::{bfs_sssp, Graph};

/// Wiener index of the subgraph induced by `s`: the sum of shortest-path
/// distances over unordered vertex pairs, measured inside the induced
/// subgraph. `s` must be sorted and duplicate-free and induce a connected
/// subgraph. A single vertex has index 0.
pub fn wiener_index(g: &Graph, s: &[usize]) -> Result<u64> {
    let (sub, _) = g.induced_subgraph(s)?;
    wiener_of_connected(&sub)
}

/// Wiener index of a whole graph, which must be connected.
pub(crate) fn wiener_of_connected(g: &Graph) -> Result<u64> {
    let n = g.vertex_count();
    let mut total: u64 = 0;
    for u in 0..n {
        let d = bfs_sssp(g, u)?;
        for v in 0..n {
            match d.dist(v) {
                Some(x) => total += x,
                None => return Err(Error::DisconnectedInduced),
            }
        }
    }
    Ok(total / 2)
}

/// Size-weighted root distance cost |S| * sum over u in S of d(u, r), with
/// distances measured inside the induced subgraph. `r` must be a member of
/// `s` and reach all of it.
pub fn root_cost_a(g: &Graph, s: &[usize], r: usize) -> Result<u64> {
    let (sub, map) = g.induced_subgraph(s)?;
    let ri = map
        .binary_search(&r)
        .map_err(|_| Error::InvalidParameter(format!("root {r} is not in the vertex set")))?;
    let d = bfs_sssp(&sub, ri)?;
    let mut sum: u64 = 0;
    for i in 0..map.len() {
        match d.dist(i) {
            Some(x) => sum += x,
            None => {
                return Err(Error::Unreachable {
                    vertex: map[i],
                    root: r,
                })
            }
        }
    }
    Ok(s.len() as u64 * sum)
}

/// Exact betweenness centrality of every vertex, normalized by the number of
/// vertex pairs excluding the vertex itself, (n-1)(n-2)/2. Graphs with fewer
/// than three vertices score 0 everywhere. Disconnected input is fine; pairs
/// with no path contribute nothing.
pub fn brandes_betweenness(g: &Graph) -> Vec<f64> {
    let n = g.vertex_count();
    let mut centrality = vec![0.0f64; n];
    if n < 3 {
        return centrality;
    }
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![-1i64; n];
    let mut delta = vec![0.0f64; n];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut queue = std::collections::VecDeque::new();

    for s in 0..n {
        for v in 0..n {
            sigma[v] = 0.0;
            dist[v] = -1;
            delta[v] = 0.0;
            preds[v].clear();
        }
        order.clear();
        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &v in g.neighbors(u) {
                if dist[v] < 0 {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
                if dist[v] == dist[u] + 1 {
                    sigma[v] += sigma[u];
                    preds[v].push(u);
                }
            }
        }
        for &w in order.iter().rev() {
            for &p in &preds[w] {
                delta[p] += sigma[p] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                centrality[w] += delta[w];
            }
        }
    }

    // Each unordered pair was accumulated from both endpoints.
    let norm = ((n - 1) * (n - 2)) as f64;
    for c in &mut centrality {
        *c /= norm;
    }
    centrality
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (0..n - 1).map(|i| (i, i + 1))).unwrap()
    }

    fn clique(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, edges).unwrap()
    }

    fn star(k: usize) -> Graph {
        Graph::from_edges(k + 1, (1..=k).map(|v| (0, v))).unwrap()
    }

    /// Floyd-Warshall reference for cross-checking the BFS-based sums.
    fn wiener_oracle(g: &Graph) -> Option<u64> {
        let n = g.vertex_count();
        const INF: u64 = u64::MAX / 4;
        let mut d = vec![vec![INF; n]; n];
        for v in 0..n {
            d[v][v] = 0;
        }
        for (u, v) in g.edges() {
            d[u][v] = 1;
            d[v][u] = 1;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = d[i][k] + d[k][j];
                    if via < d[i][j] {
                        d[i][j] = via;
                    }
                }
            }
        }
        let mut total = 0u64;
        for i in 0..n {
            for j in i + 1..n {
                if d[i][j] >= INF {
                    return None;
                }
                total += d[i][j];
            }
        }
        Some(total)
    }

    #[test]
    fn wiener_closed_forms() {
        // Paths: n(n^2 - 1)/6. Ten in a line gives 165.
        for n in 2..=20u64 {
            let g = path(n as usize);
            let s: Vec<usize> = (0..n as usize).collect();
            assert_eq!(wiener_index(&g, &s).unwrap(), n * (n * n - 1) / 6);
        }
        // Cliques: one per pair.
        for n in 2..=12u64 {
            let g = clique(n as usize);
            let s: Vec<usize> = (0..n as usize).collect();
            assert_eq!(wiener_index(&g, &s).unwrap(), n * (n - 1) / 2);
        }
        // Stars: k spokes at distance 1, C(k,2) pairs at distance 2 -> k^2.
        for k in 1..=12u64 {
            let g = star(k as usize);
            let s: Vec<usize> = (0..=k as usize).collect();
            assert_eq!(wiener_index(&g, &s).unwrap(), k * k);
        }
    }

    #[test]
    fn wiener_on_induced_subset() {
        let g = path(10);
        assert_eq!(wiener_index(&g, &[3, 4, 5]).unwrap(), 4);
        assert_eq!(wiener_index(&g, &[7]).unwrap(), 0);
        assert!(matches!(
            wiener_index(&g, &[0, 5]),
            Err(Error::DisconnectedInduced)
        ));
    }

    #[test]
    fn wiener_matches_floyd_warshall_oracle() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            state >> 33
        };
        for _ in 0..60 {
            let n = 3 + (next() % 10) as usize;
            let mut edges = vec![];
            for u in 0..n {
                for v in u + 1..n {
                    if next() % 100 < 40 {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, edges).unwrap();
            let s: Vec<usize> = (0..n).collect();
            match wiener_oracle(&g) {
                Some(w) => assert_eq!(wiener_index(&g, &s).unwrap(), w),
                None => assert!(wiener_index(&g, &s).is_err()),
            }
        }
    }

    #[test]
    fn root_cost_scales_distance_sum_by_size() {
        let g = path(5);
        let s = [0, 1, 2, 3, 4];
        // From an end of the line: 5 * (0+1+2+3+4).
        assert_eq!(root_cost_a(&g, &s, 0).unwrap(), 50);
        // From the middle: 5 * (2+1+0+1+2).
        assert_eq!(root_cost_a(&g, &s, 2).unwrap(), 30);
        assert!(root_cost_a(&g, &s, 7).is_err());
    }

    #[test]
    fn root_cost_uses_induced_distances() {
        // 0-1-2 chained plus a chord 0-3-2 outside the set: inside {0,1,2}
        // the distance from 0 to 2 is 2 even though G has a shortcut.
        let g = Graph::from_edges(4, vec![(0, 1), (1, 2), (0, 3), (3, 2)]).unwrap();
        assert_eq!(root_cost_a(&g, &[0, 1, 2], 0).unwrap(), 9);
    }

    #[test]
    fn betweenness_reference_points() {
        // Middle of a 3-path carries its single pair.
        let bc = brandes_betweenness(&path(3));
        assert_eq!(bc, vec![0.0, 1.0, 0.0]);
        // Star center carries every pair.
        let bc = brandes_betweenness(&star(5));
        assert!((bc[0] - 1.0).abs() < 1e-12);
        assert!(bc[1..].iter().all(|&x| x == 0.0));
        // Cliques have no interior vertices.
        let bc = brandes_betweenness(&clique(6));
        assert!(bc.iter().all(|&x| x == 0.0));
        // Too small to have interior pairs.
        assert_eq!(brandes_betweenness(&path(2)), vec![0.0, 0.0]);
    }

    #[test]
    fn betweenness_splits_shortest_path_ties() {
        // A 4-cycle: each vertex lies on one of the two shortest paths
        // between its two neighbors' opposite pair.
        let g = Graph::from_edges(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let bc = brandes_betweenness(&g);
        for &x in &bc {
            assert!((x - 1.0 / 6.0).abs() < 1e-12, "{bc:?}");
        }
    }
}
