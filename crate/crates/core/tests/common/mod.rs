#![allow(dead_code)]

use gcf_core::translation::PartialMap;
use gcf_core::Graph;

pub fn edges(g: &Graph) -> Vec<(usize, usize)> {
    g.edges().collect()
}

pub fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::from_edges(n, edges).unwrap()
}

pub fn raw(maps: &[PartialMap]) -> Vec<Vec<Option<usize>>> {
    maps.iter().map(|m| m.as_slice().to_vec()).collect()
}

/// Row-major grid id of `(i, j)`.
pub fn at(w: usize, i: usize, j: usize) -> usize {
    i * w + j
}
