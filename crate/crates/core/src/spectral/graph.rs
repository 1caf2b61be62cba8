use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::SpectralError;
use crate::metric::{graph_distances, validate_metric, FiniteMetricSpace};

/// Simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct FiniteGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    k0: usize,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<RawGraph> for FiniteGraph {
    type Error = SpectralError;

    fn try_from(raw: RawGraph) -> Result<Self, SpectralError> {
        FiniteGraph::new(raw.n, raw.edges)
    }
}

impl From<FiniteGraph> for RawGraph {
    fn from(g: FiniteGraph) -> Self {
        RawGraph {
            n: g.n,
            edges: g.edges,
        }
    }
}

impl FiniteGraph {
    /// Builds a graph, normalizing each edge to `(min, max)`. Duplicate edges
    /// are merged; self-loops and out-of-range endpoints are errors.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, SpectralError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(SpectralError::SelfLoop(u));
            }
            if u >= n || v >= n {
                return Err(SpectralError::VertexOutOfRange { vertex: u.max(v), n });
            }
            set.insert((u.min(v), u.max(v)));
        }
        let edges: Vec<(usize, usize)> = set.into_iter().collect();
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let k0 = adjacency.iter().map(Vec::len).max().unwrap_or(0);
        Ok(Self {
            n,
            edges,
            adjacency,
            k0,
        })
    }

    /// Parses the edge-list format: one `u v` pair per line, 0-indexed.
    /// Blank lines and `#` comments are skipped. The vertex count is one more
    /// than the largest endpoint unless `n` is given.
    pub fn from_edge_list(text: &str, n: Option<usize>) -> Result<Self, SpectralError> {
        let mut edges = Vec::new();
        let mut max_v = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let parse = |s: Option<&str>| -> Result<usize, SpectralError> {
                s.and_then(|t| t.parse().ok())
                    .ok_or_else(|| SpectralError::Parse {
                        line: lineno + 1,
                        content: line.to_string(),
                    })
            };
            let u = parse(parts.next())?;
            let v = parse(parts.next())?;
            if parts.next().is_some() {
                return Err(SpectralError::Parse {
                    line: lineno + 1,
                    content: line.to_string(),
                });
            }
            max_v = Some(max_v.unwrap_or(0).max(u).max(v));
            edges.push((u, v));
        }
        let n = n.unwrap_or(max_v.map_or(0, |m| m + 1));
        Self::new(n, edges)
    }

    pub fn to_edge_list(&self) -> String {
        self.edges.iter().map(|(u, v)| format!("{u} {v}\n")).collect()
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v)));
        Self::new(n, edges).expect("complete graph is simple")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least 3 vertices");
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle is simple")
    }

    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i - 1, i))).expect("path is simple")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    /// Maximum degree.
    pub fn k0(&self) -> usize {
        self.k0
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }

    /// Shortest-path metric; `Disconnected` if the graph is not connected.
    pub fn metric(&self) -> Result<FiniteMetricSpace, SpectralError> {
        let d = graph_distances(&self.adjacency).ok_or(SpectralError::Disconnected)?;
        Ok(validate_metric(&d).expect("graph metrics satisfy the metric axioms"))
    }

    /// Graph diameter, `None` when disconnected.
    pub fn diameter(&self) -> Option<usize> {
        graph_distances(&self.adjacency)
            .map(|d| d.iter().flatten().fold(0.0_f64, |m, &x| m.max(x)) as usize)
    }

    /// Subgraph induced on `vertices`, relabeled `0..vertices.len()` in order.
    pub fn induced(&self, vertices: &[usize]) -> FiniteGraph {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            pos[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|(u, v)| pos[*u] != usize::MAX && pos[*v] != usize::MAX)
            .map(|(u, v)| (pos[*u], pos[*v]));
        FiniteGraph::new(vertices.len(), edges).expect("induced subgraph is simple")
    }
}
