//! Undirected simple graphs over dense vertex ids `0..n`.

use std::collections::{HashSet, VecDeque};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered set of vertex ids, ascending and duplicate-free.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new(mut vertices: Vec<usize>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        VertexSet(vertices)
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(vec![v])
    }

    pub fn all(n: usize) -> Self {
        VertexSet((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// Rank of `v` inside the set.
    pub fn position(&self, v: usize) -> Option<usize> {
        self.0.binary_search(&v).ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::new(iter.into_iter().collect())
    }
}

/// Bijection between the vertices of an induced subgraph (dense local ids)
/// and the ids they had in the parent graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relabeling {
    global: Vec<usize>,
}

impl Relabeling {
    pub fn to_global(&self, local: usize) -> usize {
        self.global[local]
    }

    pub fn to_local(&self, global: usize) -> Option<usize> {
        self.global.binary_search(&global).ok()
    }

    pub fn len(&self) -> usize {
        self.global.len()
    }

    pub fn is_empty(&self) -> bool {
        self.global.is_empty()
    }

    pub fn globals(&self) -> &[usize] {
        &self.global
    }
}

/// Immutable undirected simple graph with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an undirected edge list. Endpoint order inside an
    /// edge does not matter; self-loops and repeated edges are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateEdge(u.min(w[0]), u.max(w[0])));
            }
        }
        Ok(Graph { adj })
    }

    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n] }
    }

    /// `height × width` 4-connected grid, row-major ids (`row * width + col`).
    pub fn grid(height: usize, width: usize) -> Self {
        let id = |i: usize, j: usize| i * width + j;
        let mut edges = Vec::with_capacity(2 * height * width);
        for i in 0..height {
            for j in 0..width {
                if j + 1 < width {
                    edges.push((id(i, j), id(i, j + 1)));
                }
                if i + 1 < height {
                    edges.push((id(i, j), id(i + 1, j)));
                }
            }
        }
        Graph::from_edges(height * width, &edges).expect("grid edges are simple")
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::from_edges(n, &edges).expect("path edges are simple")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
        Graph::from_edges(n, &edges).expect("cycle edges are simple")
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n() })
        }
    }

    /// Hop distances from `source`, truncated at `max_depth` when given.
    pub fn bfs_distances(&self, source: usize, max_depth: Option<usize>) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            if max_depth.is_some_and(|m| du >= m) {
                continue;
            }
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// `N_r(v)`: every vertex at hop distance at most `r` from `v`, `v` included.
    pub fn neighborhood(&self, v: usize, r: usize) -> Result<VertexSet> {
        self.check_vertex(v)?;
        if r > 2 {
            let mut seen = HashSet::from([v]);
            let mut frontier = vec![v];
            for _ in 0..r {
                frontier =
                    frontier.iter().flat_map(|&u| self.adj[u].iter().copied()).filter(|&w| seen.insert(w)).collect();
            }
            return Ok(seen.into_iter().collect());
        }
        // Small radii dominate; linear scans beat hashing there.
        let mut seen = vec![v];
        let mut frontier = vec![v];
        for _ in 0..r {
            let mut next = Vec::new();
            for &u in &frontier {
                for &w in &self.adj[u] {
                    if !seen.contains(&w) && !next.contains(&w) {
                        next.push(w);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            seen.extend_from_slice(&next);
            frontier = next;
        }
        Ok(VertexSet::new(seen))
    }

    /// Subgraph induced by `s`, relabeled to dense ids in ascending order of
    /// the original ids.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<(Graph, Relabeling)> {
        if s.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        for v in s.iter() {
            self.check_vertex(v)?;
        }
        let relabel = Relabeling { global: s.as_slice().to_vec() };
        let adj = s.iter().map(|u| self.adj[u].iter().filter_map(|&w| relabel.to_local(w)).collect()).collect();
        Ok((Graph { adj }, relabel))
    }

    pub fn connected_components(&self) -> Vec<VertexSet> {
        let mut label = vec![usize::MAX; self.n()];
        let mut components = Vec::new();
        for start in 0..self.n() {
            if label[start] != usize::MAX {
                continue;
            }
            let id = components.len();
            label[start] = id;
            let mut members = vec![start];
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if label[w] == usize::MAX {
                        label[w] = id;
                        members.push(w);
                        stack.push(w);
                    }
                }
            }
            components.push(VertexSet::new(members));
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.bfs_distances(0, None).iter().all(Option::is_some)
    }

    /// Fails with the full component listing when the graph is disconnected.
    pub fn require_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected {
                components: self.connected_components().into_iter().map(VertexSet::into_vec).collect(),
            })
        }
    }

    /// A vertex of minimum eccentricity (smallest id on ties).
    pub fn center_vertex(&self) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for v in 0..self.n() {
            let bound = best.map(|(e, _)| e);
            if let Some(ecc) = self.eccentricity_below(v, bound) {
                if best.is_none_or(|(e, _)| ecc < e) {
                    best = Some((ecc, v));
                }
            }
        }
        best.map(|(_, v)| v)
    }

    /// Eccentricity of `v`, or `None` as soon as it provably reaches `bound`.
    fn eccentricity_below(&self, v: usize, bound: Option<usize>) -> Option<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        dist[v] = 0;
        let mut queue = VecDeque::from([v]);
        let mut ecc = 0;
        while let Some(u) = queue.pop_front() {
            ecc = dist[u];
            if bound.is_some_and(|b| ecc >= b) {
                return None;
            }
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        // On disconnected graphs this ranks by the reachable part only.
        Some(ecc)
    }

    pub fn max_degree_vertex(&self) -> Option<usize> {
        (0..self.n()).max_by(|&a, &b| self.degree(a).cmp(&self.degree(b)).then(b.cmp(&a)))
    }
}

/// On-disk graph: `{"n": <int>, "edges": [[u, v], ...]}` with `u < v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&Graph> for GraphFile {
    fn from(g: &Graph) -> Self {
        GraphFile { n: g.n(), edges: g.edges().map(|(u, v)| [u, v]).collect() }
    }
}

impl TryFrom<GraphFile> for Graph {
    type Error = Error;

    fn try_from(file: GraphFile) -> Result<Self> {
        let edges: Vec<_> = file.edges.iter().map(|e| (e[0], e[1])).collect();
        Graph::from_edges(file.n, &edges)
    }
}

impl Graph {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(&GraphFile::from(self)).expect("graph serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GraphFile = serde_json::from_str(text)?;
        Graph::try_from(file)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Graph::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}
