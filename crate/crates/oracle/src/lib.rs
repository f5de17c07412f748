//! Slow, obviously-correct reference implementations.
//!
//! Nothing in this crate depends on `gcf-core`. Graphs come in as a vertex
//! count plus an edge list and are stored as a dense adjacency matrix; every
//! routine is a direct transcription of a definition (enumerate everything,
//! filter, compare), so an agreement with the optimized code is evidence
//! rather than a tautology.

mod graphs;
mod paths;
mod report;
mod sampling;
mod statistics;
mod stencil;
mod translations;

pub use graphs::{connected, connected_graphs_up_to_iso, random_connected_graph, SplitMix64};
pub use paths::oracle_min_loss_paths;
pub use report::OracleReport;
pub use sampling::{all_pairs_distances, oracle_select_kept_sequential, oracle_select_kept_simultaneous};
pub use statistics::{oracle_covariance, oracle_knn_edges};
pub use stencil::{oracle_2d_stencil, oracle_grid_shift, Plus, StencilLayout};
pub use translations::{oracle_translations, oracle_translations_restricted, OracleMap};

/// Dense symmetric adjacency matrix built from an edge list.
#[derive(Clone, Debug)]
pub struct AdjMatrix {
    n: usize,
    bits: Vec<bool>,
}

impl AdjMatrix {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut bits = vec![false; n * n];
        for &(u, v) in edges {
            assert!(u < n && v < n && u != v, "bad edge ({u},{v}) for n={n}");
            bits[u * n + v] = true;
            bits[v * n + u] = true;
        }
        AdjMatrix { n, bits }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.n + v]
    }
}
