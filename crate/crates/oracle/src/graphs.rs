//! Small-graph generators for exhaustive and randomized test sweeps.

/// Every connected graph on `n ≤ 7` vertices, one representative per
/// isomorphism class, as sorted `(u, v)` edge lists with `u < v`.
///
/// Brute force: every labeled graph is reduced to the smallest adjacency
/// bitmask over all vertex permutations.
pub fn connected_graphs_up_to_iso(n: usize) -> Vec<Vec<(usize, usize)>> {
    assert!(n <= 7, "isomorphism sweep refuses n > 7");
    if n == 0 {
        return Vec::new();
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let perms = permutations(n);
    let mut seen = std::collections::BTreeSet::new();
    for mask in 0u64..(1 << pairs.len()) {
        let edges: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        if !connected(n, &edges) {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| {
                edges.iter().fold(0u64, |acc, &(u, v)| {
                    let (a, b) = (p[u].min(p[v]), p[u].max(p[v]));
                    acc | 1 << pairs.iter().position(|&e| e == (a, b)).unwrap()
                })
            })
            .min()
            .unwrap();
        seen.insert(canon);
    }
    seen.into_iter()
        .map(|mask| pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect())
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Reachability by repeated edge sweeps.
pub fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    if n == 0 {
        return true;
    }
    let mut reached = vec![false; n];
    reached[0] = true;
    let mut changed = true;
    while changed {
        changed = false;
        for &(u, v) in edges {
            if reached[u] != reached[v] {
                reached[u] = true;
                reached[v] = true;
                changed = true;
            }
        }
    }
    reached.iter().all(|&r| r)
}

/// SplitMix64; enough randomness for test graphs without extra crates.
#[derive(Clone, Debug)]
pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `0..bound` (modulo bias is irrelevant here).
    pub fn below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }
}

/// Random connected graph: a random spanning tree plus `extra` random
/// additional edges (fewer if the graph saturates). Sorted edge list.
pub fn random_connected_graph(n: usize, extra: usize, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = SplitMix64::new(seed);
    let mut edges = std::collections::BTreeSet::new();
    for v in 1..n {
        let u = rng.below(v);
        edges.insert((u, v));
    }
    let max_edges = n * n.saturating_sub(1) / 2;
    let target = (edges.len() + extra).min(max_edges);
    while edges.len() < target {
        let (a, b) = (rng.below(n), rng.below(n));
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    edges.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_class_counts() {
        // Connected unlabeled graphs on 1..=5 vertices.
        let counts: Vec<usize> = (1..=5).map(|n| connected_graphs_up_to_iso(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21]);
    }

    #[test]
    fn random_graphs_are_connected_and_simple() {
        for seed in 0..20 {
            let e = random_connected_graph(9, 4, seed);
            assert!(connected(9, &e));
            assert!(e.iter().all(|&(u, v)| u < v));
            assert_eq!(e, random_connected_graph(9, 4, seed));
        }
    }
}
