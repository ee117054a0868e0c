//! Undirected simple graphs over dense node indices `0..n`.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An immutable undirected simple graph.
///
/// Edges are stored normalized as `(u, v)` with `u < v` and sorted
/// lexicographically, so two graphs with the same edge set compare equal
/// and serialize to the same bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate edges and
    /// out-of-range endpoints. Edge orientation and order are irrelevant.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut normalized = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::NodeOutOfRange { node: u.max(v), n });
            }
            if u == v {
                return Err(Error::InvalidEdge(u, v, "self-loop"));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::InvalidEdge(e.0, e.1, "duplicate edge"));
            }
            normalized.push(e);
        }
        Ok(Self::from_normalized(n, normalized))
    }

    // Caller guarantees the edges are valid, normalized and unique.
    pub(crate) fn from_normalized(n: usize, mut edges: Vec<(usize, usize)>) -> Self {
        edges.sort_unstable();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_normalized(n, Vec::new())
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Self::from_normalized(n, edges)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` pairs with `u < v`, in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: usize) -> Result<&[usize]> {
        self.check_node(v)?;
        Ok(&self.adj[v])
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        self.check_node(v)?;
        Ok(self.adj[v].len())
    }

    pub fn degree_histogram(&self) -> DegreeHistogram {
        let mut counts = BTreeMap::new();
        for list in &self.adj {
            *counts.entry(list.len()).or_insert(0) += 1;
        }
        DegreeHistogram { counts }
    }

    /// Number of nodes other than `v` within `h` hops of `v`.
    pub fn reach_within(&self, v: usize, h: usize) -> Result<usize> {
        self.check_node(v)?;
        if h == 0 {
            return Err(Error::input("hop budget must be at least 1"));
        }
        Ok(Bfs::new(self.n).reach(self, v, h))
    }

    /// Sum of `reach_within(v, h)` over all nodes, sharing one BFS buffer.
    pub(crate) fn total_reach(&self, h: usize) -> usize {
        let mut bfs = Bfs::new(self.n);
        (0..self.n).map(|v| bfs.reach(self, v, h)).sum()
    }

    fn check_node(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange { node: v, n: self.n })
        }
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            n: self.n,
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
        }
    }

    /// Canonical JSON: `{"n":..,"edges":[[u,v],..]}`, byte-stable per graph.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("graph serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: GraphFile = serde_json::from_str(s)?;
        Graph::try_from(file)
    }
}

/// On-disk representation of a [`Graph`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphFile> for Graph {
    type Error = Error;

    fn try_from(file: GraphFile) -> Result<Self> {
        Graph::new(file.n, file.edges.into_iter().map(|[u, v]| (u, v)))
    }
}

/// Depth-limited BFS with a stamp array so the buffer is reused across
/// source nodes without clearing.
struct Bfs {
    stamp: Vec<u32>,
    epoch: u32,
    frontier: Vec<usize>,
    next: Vec<usize>,
}

impl Bfs {
    fn new(n: usize) -> Self {
        Bfs {
            stamp: vec![0; n],
            epoch: 0,
            frontier: Vec::new(),
            next: Vec::new(),
        }
    }

    fn reach(&mut self, g: &Graph, source: usize, h: usize) -> usize {
        self.epoch += 1;
        let epoch = self.epoch;
        self.stamp[source] = epoch;
        self.frontier.clear();
        self.frontier.push(source);
        let mut reached = 0;
        for _ in 0..h {
            self.next.clear();
            for &u in &self.frontier {
                for &w in &g.adj[u] {
                    if self.stamp[w] != epoch {
                        self.stamp[w] = epoch;
                        self.next.push(w);
                    }
                }
            }
            if self.next.is_empty() {
                break;
            }
            reached += self.next.len();
            std::mem::swap(&mut self.frontier, &mut self.next);
        }
        reached
    }
}

/// Degree → number of nodes with that degree.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeHistogram {
    counts: BTreeMap<usize, usize>,
}

impl DegreeHistogram {
    /// Histogram from explicit `(degree, count)` pairs; zero counts are
    /// dropped and repeated degrees accumulate.
    pub fn from_counts(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut counts = BTreeMap::new();
        for (d, c) in pairs {
            if c > 0 {
                *counts.entry(d).or_insert(0) += c;
            }
        }
        DegreeHistogram { counts }
    }

    pub fn count(&self, degree: usize) -> usize {
        self.counts.get(&degree).copied().unwrap_or(0)
    }

    /// `(degree, count)` pairs in ascending degree order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.counts.iter().map(|(&d, &c)| (d, c))
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Total node count.
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    /// `Σ d·count(d)`, twice the edge count for a histogram of a graph.
    pub fn degree_sum(&self) -> usize {
        self.iter().map(|(d, c)| d * c).sum()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.counts.keys().next_back().copied()
    }
}
