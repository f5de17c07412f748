const MAX_ORDER: usize = 10;

/// Minimum accumulated loss from `v0` to every vertex, by enumerating every
/// simple path over the given moves `(from, to, loss)`.
///
/// Losses are non-negative, so an optimal walk never needs to revisit a
/// vertex and simple paths are enough.
pub fn oracle_min_loss_paths(n: usize, moves: &[(usize, usize, u64)], v0: usize) -> Vec<Option<u64>> {
    assert!(n <= MAX_ORDER, "path oracle refuses n > {MAX_ORDER}");
    // Parallel moves only matter through their cheapest member.
    let mut cheapest = std::collections::BTreeMap::new();
    for &(a, b, loss) in moves {
        let e = cheapest.entry((a, b)).or_insert(loss);
        *e = (*e).min(loss);
    }
    let mut out_moves: Vec<Vec<(usize, u64)>> = vec![Vec::new(); n];
    for (&(a, b), &loss) in &cheapest {
        out_moves[a].push((b, loss));
    }
    let mut best = vec![None; n];
    let mut on_path = vec![false; n];
    walk(&out_moves, v0, 0, &mut on_path, &mut best);
    best
}

fn walk(out_moves: &[Vec<(usize, u64)>], at: usize, cost: u64, on_path: &mut [bool], best: &mut [Option<u64>]) {
    best[at] = Some(best[at].map_or(cost, |b: u64| b.min(cost)));
    on_path[at] = true;
    for &(next, loss) in &out_moves[at] {
        if !on_path[next] {
            walk(out_moves, next, cost + loss, on_path, best);
        }
    }
    on_path[at] = false;
}
