//! Seeded random graph generators for benchmarks and tests. Same seed, same
//! graph, byte for byte.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyntheticModel {
    /// Uniform random graph with exactly the requested number of edges.
    ErdosRenyi,
    /// Growth by preferential attachment; each arriving vertex attaches to
    /// ceil(m/n) earlier vertices chosen proportionally to degree. Heavy
    /// tailed degrees, always connected.
    PreferentialAttachment,
}

impl std::str::FromStr for SyntheticModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "er" => Ok(SyntheticModel::ErdosRenyi),
            "pl" => Ok(SyntheticModel::PreferentialAttachment),
            other => Err(Error::InvalidParameter(format!(
                "unknown model {other:?} (expected er or pl)"
            ))),
        }
    }
}

pub fn generate_synthetic(
    model: SyntheticModel,
    n: usize,
    target_m: usize,
    seed: u64,
) -> Result<Graph> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    match model {
        SyntheticModel::ErdosRenyi => erdos_renyi(n, target_m, &mut rng),
        SyntheticModel::PreferentialAttachment => preferential(n, target_m, &mut rng),
    }
}

fn erdos_renyi(n: usize, m: usize, rng: &mut ChaCha20Rng) -> Result<Graph> {
    let max = if n < 2 { 0 } else { n * (n - 1) / 2 };
    if m > max {
        return Err(Error::InvalidParameter(format!(
            "{m} edges requested but {n} vertices admit at most {max}"
        )));
    }
    if m == max {
        let mut edges = Vec::with_capacity(max);
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        return Graph::from_edges(n, edges);
    }
    let mut seen = std::collections::HashSet::with_capacity(m * 2);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v {
            continue;
        }
        let key = (u.min(v), u.max(v));
        if seen.insert(key) {
            edges.push(key);
        }
    }
    Graph::from_edges(n, edges)
}

fn preferential(n: usize, target_m: usize, rng: &mut ChaCha20Rng) -> Result<Graph> {
    if n < 2 || target_m == 0 {
        return Err(Error::InvalidParameter(
            "preferential attachment needs n >= 2 and m >= 1".into(),
        ));
    }
    let k = target_m.div_ceil(n).max(1);
    if k >= n {
        return Err(Error::InvalidParameter(format!(
            "per-vertex degree {k} must be below n = {n}"
        )));
    }
    // One slot per edge endpoint: sampling a uniform slot is sampling a
    // vertex proportionally to its degree.
    let mut slots: Vec<usize> = Vec::with_capacity(2 * target_m);
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(target_m);
    for i in k..n {
        let mut targets = std::collections::BTreeSet::new();
        if slots.is_empty() {
            targets.extend(0..k);
        } else {
            while targets.len() < k {
                targets.insert(slots[rng.gen_range(0..slots.len())]);
            }
        }
        for &t in &targets {
            edges.push((i, t));
            slots.push(t);
        }
        slots.extend(std::iter::repeat_n(i, k));
    }
    Graph::from_edges(n, edges)
}
