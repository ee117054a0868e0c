//! Seeded network generators: ring lattices, Watts-Strogatz rewiring,
//! Barabási-Albert seeded growth and variable-binomial random graphs.
//!
//! Every generator is a pure function of its config and an [`RngSeed`].

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Identifies one random stream: a master seed plus a repetition index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl RngSeed {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        RngSeed {
            master_seed,
            stream_index,
        }
    }

    /// The generator for this stream. Streams sharing a master seed are
    /// independent ChaCha streams of the same key.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

impl From<u64> for RngSeed {
    fn from(master_seed: u64) -> Self {
        RngSeed::new(master_seed, 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WsConfig {
    pub n: usize,
    pub k: usize,
    pub p: f64,
}

impl WsConfig {
    pub fn new(n: usize, k: usize, p: f64) -> Result<Self> {
        check_lattice(n, k)?;
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::config(format!(
                "rewiring probability {p} outside [0, 1]"
            )));
        }
        Ok(WsConfig { n, k, p })
    }
}

fn check_lattice(n: usize, k: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::config(format!("ring lattice needs n >= 3, got {n}")));
    }
    if k < 2 || !k.is_multiple_of(2) {
        return Err(Error::config(format!("k must be even and >= 2, got {k}")));
    }
    if k > n - 1 {
        return Err(Error::config(format!("k = {k} exceeds n - 1 = {}", n - 1)));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaConfig {
    pub n: usize,
    pub m: usize,
    pub seed_size: usize,
}

impl BaConfig {
    pub fn new(n: usize, m: usize, seed_size: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::config("m must be at least 1"));
        }
        if seed_size < m.max(3) {
            return Err(Error::config(format!(
                "seed_size {seed_size} below max(m, 3) = {}",
                m.max(3)
            )));
        }
        if n < seed_size {
            return Err(Error::config(format!(
                "n = {n} smaller than seed_size = {seed_size}"
            )));
        }
        Ok(BaConfig { n, m, seed_size })
    }

    /// Uses the default seed ring of `max(m, 3)` nodes.
    pub fn with_default_seed(n: usize, m: usize) -> Result<Self> {
        Self::new(n, m, m.max(3))
    }

    pub fn expected_edges(&self) -> usize {
        self.seed_size + self.m * (self.n - self.seed_size)
    }
}

/// Nodes are split into contiguous blocks; a pair from blocks `(a, b)` is
/// linked with probability `prob[a][b]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomBinomialConfig {
    block_sizes: Vec<usize>,
    prob: Vec<Vec<f64>>,
}

impl RandomBinomialConfig {
    pub fn new(block_sizes: Vec<usize>, prob: Vec<Vec<f64>>) -> Result<Self> {
        let g = block_sizes.len();
        if g == 0 {
            return Err(Error::config("at least one group is required"));
        }
        if prob.len() != g || prob.iter().any(|row| row.len() != g) {
            return Err(Error::config(format!("probability matrix must be {g}x{g}")));
        }
        for (a, row) in prob.iter().enumerate() {
            for (b, &q) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&q) {
                    return Err(Error::config(format!(
                        "probability {q} at ({a}, {b}) outside [0, 1]"
                    )));
                }
                if q != prob[b][a] {
                    return Err(Error::config("probability matrix must be symmetric"));
                }
            }
        }
        Ok(RandomBinomialConfig { block_sizes, prob })
    }

    /// One group: the classic uniform random graph G(n, p).
    pub fn uniform(n: usize, p: f64) -> Result<Self> {
        Self::new(vec![n], vec![vec![p]])
    }

    pub fn n(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    pub fn prob(&self) -> &[Vec<f64>] {
        &self.prob
    }

    fn group_of_each_node(&self) -> Vec<usize> {
        self.block_sizes
            .iter()
            .enumerate()
            .flat_map(|(g, &size)| std::iter::repeat_n(g, size))
            .collect()
    }
}

/// One of the three network families with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorConfig {
    Ws(WsConfig),
    Ba(BaConfig),
    RandomBinomial(RandomBinomialConfig),
}

impl GeneratorConfig {
    pub fn generate(&self, seed: RngSeed) -> Graph {
        match self {
            GeneratorConfig::Ws(c) => ws_generate(c, seed),
            GeneratorConfig::Ba(c) => ba_generate(c, seed),
            GeneratorConfig::RandomBinomial(c) => random_binomial_generate(c, seed),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            GeneratorConfig::Ws(c) => c.n,
            GeneratorConfig::Ba(c) => c.n,
            GeneratorConfig::RandomBinomial(c) => c.n(),
        }
    }
}

/// Mutable adjacency used while a generator runs.
struct Builder {
    adj: Vec<HashSet<usize>>,
}

impl Builder {
    fn new(n: usize) -> Self {
        Builder {
            adj: vec![HashSet::new(); n],
        }
    }

    fn has(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    fn add(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && !self.has(u, v));
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    fn remove(&mut self, u: usize, v: usize) {
        self.adj[u].remove(&v);
        self.adj[v].remove(&u);
    }

    fn finish(self) -> Graph {
        let n = self.adj.len();
        let edges = self
            .adj
            .iter()
            .enumerate()
            .flat_map(|(u, set)| set.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect();
        Graph::from_normalized(n, edges)
    }
}

fn lattice_edges(n: usize, k: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |u| (1..=k / 2).map(move |j| (u, (u + j) % n)))
}

/// Circulant ring: node `v` is linked to `v ± 1, …, v ± k/2 (mod n)`.
pub fn ring_lattice(n: usize, k: usize) -> Result<Graph> {
    check_lattice(n, k)?;
    let edges = lattice_edges(n, k)
        .map(|(u, v)| (u.min(v), u.max(v)))
        .collect();
    Ok(Graph::from_normalized(n, edges))
}

pub fn ws_generate(cfg: &WsConfig, seed: RngSeed) -> Graph {
    ws_generate_traced(cfg, seed).0
}

/// Watts-Strogatz rewiring; also returns how many edges were rewired.
///
/// Nodes are visited in index order and each of their `k/2` clockwise
/// lattice edges gets one uniform draw. When the draw is below `p` the far
/// endpoint is replaced by a uniformly random node, redrawing on self-loops
/// and duplicates. After `n` failed redraws the edge stays where it was.
pub fn ws_generate_traced(cfg: &WsConfig, seed: RngSeed) -> (Graph, usize) {
    let WsConfig { n, k, p } = *cfg;
    let mut rng = seed.rng();
    let mut b = Builder::new(n);
    for (u, v) in lattice_edges(n, k) {
        b.add(u, v);
    }
    let mut rewired = 0;
    for (u, v) in lattice_edges(n, k) {
        if rng.random::<f64>() >= p {
            continue;
        }
        for _ in 0..n {
            let w = rng.random_range(0..n);
            if w != u && !b.has(u, w) {
                b.remove(u, v);
                b.add(u, w);
                rewired += 1;
                break;
            }
        }
    }
    (b.finish(), rewired)
}

/// Barabási-Albert growth from a ring of `seed_size` nodes.
///
/// Each new node links to `m` distinct existing nodes. Targets are drawn
/// from the endpoint list (so proportional to degree), rejecting repeats
/// within the same step.
pub fn ba_generate(cfg: &BaConfig, seed: RngSeed) -> Graph {
    let BaConfig { n, m, seed_size } = *cfg;
    let mut rng = seed.rng();
    let mut edges = Vec::with_capacity(cfg.expected_edges());
    let mut endpoints = Vec::with_capacity(2 * cfg.expected_edges());
    for u in 0..seed_size {
        let v = (u + 1) % seed_size;
        edges.push((u.min(v), u.max(v)));
        endpoints.extend([u, v]);
    }
    let mut targets = Vec::with_capacity(m);
    for v in seed_size..n {
        targets.clear();
        while targets.len() < m {
            let t = endpoints[rng.random_range(0..endpoints.len())];
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for &t in &targets {
            edges.push((t, v));
            endpoints.extend([t, v]);
        }
    }
    Graph::from_normalized(n, edges)
}

/// Includes each unordered pair independently with its group-pair
/// probability. Pairs are visited in lexicographic order.
pub fn random_binomial_generate(cfg: &RandomBinomialConfig, seed: RngSeed) -> Graph {
    let n = cfg.n();
    let group = cfg.group_of_each_node();
    let mut rng = seed.rng();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < cfg.prob[group[u]][group[v]] {
                edges.push((u, v));
            }
        }
    }
    Graph::from_normalized(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_config_errors() {
        assert!(ring_lattice(15, 5).is_err());
        assert!(ring_lattice(4, 4).is_err());
        assert!(ring_lattice(2, 2).is_err());
        assert!(ring_lattice(10, 0).is_err());
        assert!(WsConfig::new(10, 4, 1.5).is_err());
        assert!(WsConfig::new(10, 4, -0.1).is_err());
    }

    #[test]
    fn lattice_shapes() {
        let g = ring_lattice(15, 4).unwrap();
        assert_eq!(g.edge_count(), 30);
        assert!((0..15).all(|v| g.degree(v).unwrap() == 4));
        assert_eq!(ring_lattice(3, 2).unwrap(), Graph::complete(3));
        assert_eq!(ring_lattice(100, 4).unwrap().edge_count(), 200);
        assert_eq!(ring_lattice(7, 6).unwrap(), Graph::complete(7));
    }

    #[test]
    fn ws_zero_p_is_the_lattice() {
        let cfg = WsConfig::new(50, 6, 0.0).unwrap();
        let (g, rewired) = ws_generate_traced(&cfg, RngSeed::new(3, 9));
        assert_eq!(rewired, 0);
        assert_eq!(g, ring_lattice(50, 6).unwrap());
    }

    #[test]
    fn ws_full_rewiring_keeps_edge_count() {
        let cfg = WsConfig::new(100, 4, 1.0).unwrap();
        let (g, rewired) = ws_generate_traced(&cfg, RngSeed::new(1, 0));
        assert_eq!(g.edge_count(), 200);
        assert_eq!(rewired, 200);
        assert_ne!(g, ring_lattice(100, 4).unwrap());
    }

    #[test]
    fn ws_dense_lattice_leaves_unrewirable_edges() {
        // complete graph: every redraw collides, so nothing moves
        let cfg = WsConfig::new(5, 4, 1.0).unwrap();
        let (g, rewired) = ws_generate_traced(&cfg, RngSeed::new(1, 0));
        assert_eq!(rewired, 0);
        assert_eq!(g, Graph::complete(5));
    }

    #[test]
    fn ba_config_errors() {
        assert!(BaConfig::new(10, 0, 3).is_err());
        assert!(BaConfig::new(10, 4, 3).is_err());
        assert!(BaConfig::new(10, 1, 2).is_err());
        assert!(BaConfig::new(4, 1, 5).is_err());
        assert_eq!(BaConfig::with_default_seed(10, 5).unwrap().seed_size, 5);
    }

    #[test]
    fn ba_table_rows() {
        for (n, sum) in [(30, 60), (100, 200)] {
            let cfg = BaConfig::new(n, 1, 3).unwrap();
            let g = ba_generate(&cfg, RngSeed::new(11, 2));
            assert_eq!(g.edge_count(), n);
            assert_eq!(g.degree_histogram().degree_sum(), sum);
        }
    }

    #[test]
    fn ba_without_growth_is_a_ring() {
        for m in 1..=5 {
            let cfg = BaConfig::new(5, m, 5).unwrap();
            let g = ba_generate(&cfg, RngSeed::new(0, 0));
            assert_eq!(g, Graph::new(5, (0..5).map(|u| (u, (u + 1) % 5))).unwrap());
        }
    }

    #[test]
    fn ba_m_equal_to_seed_links_everything() {
        let cfg = BaConfig::new(4, 3, 3).unwrap();
        let g = ba_generate(&cfg, RngSeed::new(5, 5));
        assert_eq!(g, Graph::complete(4));
    }

    #[test]
    fn binomial_extremes() {
        let full = RandomBinomialConfig::uniform(9, 1.0).unwrap();
        assert_eq!(
            random_binomial_generate(&full, 1.into()),
            Graph::complete(9)
        );
        let none = RandomBinomialConfig::uniform(9, 0.0).unwrap();
        assert_eq!(random_binomial_generate(&none, 1.into()), Graph::empty(9));
    }

    #[test]
    fn binomial_blocks() {
        // two cliques with no bridge
        let cfg =
            RandomBinomialConfig::new(vec![3, 4], vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let g = random_binomial_generate(&cfg, 7.into());
        assert_eq!(g.edge_count(), 3 + 6);
        assert!(g.has_edge(0, 2) && g.has_edge(3, 6) && !g.has_edge(2, 3));
    }

    #[test]
    fn binomial_config_errors() {
        assert!(RandomBinomialConfig::new(vec![], vec![]).is_err());
        assert!(RandomBinomialConfig::new(vec![2, 2], vec![vec![0.5]]).is_err());
        assert!(
            RandomBinomialConfig::new(vec![2, 2], vec![vec![0.5, 0.1], vec![0.2, 0.5]]).is_err()
        );
        assert!(RandomBinomialConfig::uniform(5, 1.2).is_err());
    }

    #[test]
    fn streams_differ_but_replay() {
        let cfg = WsConfig::new(60, 4, 0.3).unwrap();
        let a = ws_generate(&cfg, RngSeed::new(42, 0));
        let b = ws_generate(&cfg, RngSeed::new(42, 1));
        assert_ne!(a, b);
        assert_eq!(
            a.to_json(),
            ws_generate(&cfg, RngSeed::new(42, 0)).to_json()
        );
    }
}
