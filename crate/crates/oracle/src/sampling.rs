const UNREACHABLE: usize = usize::MAX;

/// Floyd–Warshall hop distances; `usize::MAX` marks unreachable pairs.
pub fn all_pairs_distances(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut d = vec![vec![UNREACHABLE; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0;
    }
    for &(u, v) in edges {
        d[u][v] = 1;
        d[v][u] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            if d[i][k] == UNREACHABLE {
                continue;
            }
            for j in 0..n {
                if d[k][j] == UNREACHABLE {
                    continue;
                }
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// The set-valued induction for stride-`r` kept vertices, applied literally:
/// every vertex that is at distance ≥ r from all current members and ≤ r
/// from at least one of them joins in the same step.
pub fn oracle_select_kept_simultaneous(n: usize, edges: &[(usize, usize)], v0: usize, r: usize) -> Vec<usize> {
    let d = all_pairs_distances(n, edges);
    let mut kept = vec![false; n];
    kept[v0] = true;
    loop {
        let current: Vec<usize> = (0..n).filter(|&v| kept[v]).collect();
        let joining: Vec<usize> = (0..n)
            .filter(|&v| !kept[v])
            .filter(|&v| current.iter().all(|&k| d[v][k] >= r) && current.iter().any(|&k| d[v][k] <= r))
            .collect();
        if joining.is_empty() {
            break;
        }
        for v in joining {
            kept[v] = true;
        }
    }
    (0..n).filter(|&v| kept[v]).collect()
}

/// One vertex at a time: scan all vertices by (distance from `v0`, id) and
/// admit the first one whose distance to the current set is exactly `r`;
/// stop when no vertex qualifies.
pub fn oracle_select_kept_sequential(n: usize, edges: &[(usize, usize)], v0: usize, r: usize) -> Vec<usize> {
    let d = all_pairs_distances(n, edges);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (d[v0][v], v));
    let mut kept = vec![v0];
    loop {
        let next = order.iter().copied().find(|&v| kept.iter().map(|&k| d[v][k]).min() == Some(r));
        match next {
            Some(v) => kept.push(v),
            None => break,
        }
    }
    kept.sort_unstable();
    kept
}
