use crate::AdjMatrix;

/// A partial vertex map: `map[v] = Some(image)` or `None` for ⊥.
pub type OracleMap = Vec<Option<usize>>;

const MAX_FREE_VERTICES: usize = 9;
const MAX_ORDER: usize = 16;

/// All translations of a small graph, identity included.
///
/// Every partial injective map over all vertices is generated, filtered by
/// injectivity / edge constraint / strong neighborhood preservation, then a
/// candidate is dropped if some aligned candidate has a strictly smaller
/// loss. Output is sorted by (loss, map).
pub fn oracle_translations(n: usize, edges: &[(usize, usize)]) -> Vec<OracleMap> {
    let all: Vec<usize> = (0..n).collect();
    run(n, edges, &all, None)
}

/// Same as [`oracle_translations`], but domains are restricted to subsets of
/// `allowed` that contain `required`. The identity over all `n` vertices is
/// still appended.
pub fn oracle_translations_restricted(
    n: usize,
    edges: &[(usize, usize)],
    allowed: &[usize],
    required: usize,
) -> Vec<OracleMap> {
    assert!(allowed.contains(&required), "required vertex outside allowed set");
    run(n, edges, allowed, Some(required))
}

fn run(n: usize, edges: &[(usize, usize)], allowed: &[usize], required: Option<usize>) -> Vec<OracleMap> {
    assert!(n <= MAX_ORDER, "oracle refuses graphs with more than {MAX_ORDER} vertices");
    assert!(allowed.len() <= MAX_FREE_VERTICES, "oracle refuses more than {MAX_FREE_VERTICES} free domain vertices");
    let adj = AdjMatrix::new(n, edges);

    let mut candidates: Vec<(usize, OracleMap)> = Vec::new();
    let mut map: OracleMap = vec![None; n];
    let mut used = vec![false; n];
    enumerate(&adj, allowed, 0, &mut map, &mut used, &mut |m| {
        if is_full_identity(m) {
            return;
        }
        let domain = m.iter().filter(|x| x.is_some()).count();
        if domain == 0 {
            return;
        }
        if let Some(r) = required {
            if m[r].is_none() {
                return;
            }
        }
        if satisfies_properties(&adj, m) {
            candidates.push((n - domain, m.clone()));
        }
    });

    let mut out: Vec<(usize, OracleMap)> = Vec::new();
    for (loss, cand) in &candidates {
        let dominated = candidates.iter().any(|(other_loss, other)| other_loss < loss && aligned(cand, other));
        if !dominated {
            out.push((*loss, cand.clone()));
        }
    }
    out.push((0, (0..n).map(Some).collect()));
    out.sort();
    out.into_iter().map(|(_, m)| m).collect()
}

fn enumerate(
    adj: &AdjMatrix,
    allowed: &[usize],
    depth: usize,
    map: &mut OracleMap,
    used: &mut [bool],
    leaf: &mut dyn FnMut(&OracleMap),
) {
    if depth == allowed.len() {
        leaf(map);
        return;
    }
    let v = allowed[depth];
    map[v] = None;
    enumerate(adj, allowed, depth + 1, map, used, leaf);
    for u in 0..adj.n() {
        if used[u] {
            continue;
        }
        used[u] = true;
        map[v] = Some(u);
        enumerate(adj, allowed, depth + 1, map, used, leaf);
        map[v] = None;
        used[u] = false;
    }
}

fn is_full_identity(m: &OracleMap) -> bool {
    m.iter().enumerate().all(|(v, x)| *x == Some(v))
}

fn satisfies_properties(adj: &AdjMatrix, m: &OracleMap) -> bool {
    let dom: Vec<(usize, usize)> = m.iter().enumerate().filter_map(|(v, x)| x.map(|u| (v, u))).collect();
    // injective
    for (i, a) in dom.iter().enumerate() {
        for b in &dom[i + 1..] {
            if a.1 == b.1 {
                return false;
            }
        }
    }
    // edge-constrained
    if dom.iter().any(|&(v, u)| !adj.adjacent(v, u)) {
        return false;
    }
    // strongly neighborhood-preserving
    for (i, a) in dom.iter().enumerate() {
        for b in &dom[i + 1..] {
            if adj.adjacent(a.0, b.0) != adj.adjacent(a.1, b.1) {
                return false;
            }
        }
    }
    true
}

fn aligned(a: &OracleMap, b: &OracleMap) -> bool {
    a.iter().zip(b).any(|(x, y)| x.is_some() && x == y)
}
