//! Candidate-translations, exact translation enumeration on small graphs and
//! the per-vertex local translation finder.
//!
//! A candidate-translation is a partial vertex map that is injective, sends
//! every vertex of its domain to a neighbor (the identity is exempt), and
//! preserves adjacency and non-adjacency between domain vertices. Its loss is
//! the number of vertices of the ambient graph left outside the domain. A
//! candidate survives as a translation when no candidate agreeing with it on
//! some vertex has a strictly smaller loss.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Relabeling};

/// Largest graph accepted by [`enumerate_translations`].
pub const DEFAULT_ENUMERATION_CAP: usize = 12;

/// Largest 2-hop neighborhood accepted by the local finder.
pub const DEFAULT_MAX_CONTEXT: usize = 64;

/// Partial vertex map over a graph of order `len()`; `None` is ⊥.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartialMap {
    image: Vec<Option<usize>>,
}

impl PartialMap {
    pub fn new(image: Vec<Option<usize>>) -> Self {
        PartialMap { image }
    }

    pub fn identity(n: usize) -> Self {
        PartialMap { image: (0..n).map(Some).collect() }
    }

    /// Map defined only on the listed `(source, target)` pairs.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Self {
        let mut image = vec![None; n];
        for &(s, t) in pairs {
            image[s] = Some(t);
        }
        PartialMap { image }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn get(&self, v: usize) -> Option<usize> {
        self.image.get(v).copied().flatten()
    }

    pub fn as_slice(&self) -> &[Option<usize>] {
        &self.image
    }

    /// `(source, target)` pairs in ascending source order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.image.iter().enumerate().filter_map(|(v, t)| t.map(|t| (v, t)))
    }

    pub fn domain(&self) -> impl Iterator<Item = usize> + '_ {
        self.pairs().map(|(v, _)| v)
    }

    pub fn domain_size(&self) -> usize {
        self.image.iter().filter(|t| t.is_some()).count()
    }

    /// `|V − U|`.
    pub fn loss(&self) -> usize {
        self.len() - self.domain_size()
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(v, t)| *t == Some(v))
    }

    /// Two maps are aligned when they send some vertex to the same image.
    pub fn is_aligned(&self, other: &PartialMap) -> bool {
        self.image.iter().zip(&other.image).any(|(a, b)| a.is_some() && a == b)
    }

    /// Image → preimage. Only meaningful for injective maps.
    pub fn inverse(&self) -> PartialMap {
        let mut image = vec![None; self.len()];
        for (v, t) in self.pairs() {
            image[t] = Some(v);
        }
        PartialMap { image }
    }

    /// Encoding used in files: ⊥ becomes −1.
    pub fn to_signed(&self) -> Vec<i64> {
        self.image.iter().map(|t| t.map_or(-1, |t| t as i64)).collect()
    }
}

/// True iff `m` is injective, edge-constrained and strongly
/// neighborhood-preserving on `g` (the identity is exempt from the edge
/// constraint). Maps of the wrong length are rejected.
pub fn is_candidate_translation(g: &Graph, m: &PartialMap) -> bool {
    if m.len() != g.n() {
        return false;
    }
    if m.is_identity() {
        return true;
    }
    let pairs: Vec<(usize, usize)> = m.pairs().collect();
    if pairs.iter().any(|&(_, t)| t >= g.n()) {
        return false;
    }
    let mut hit = vec![false; g.n()];
    for &(v, t) in &pairs {
        if hit[t] || !g.has_edge(v, t) {
            return false;
        }
        hit[t] = true;
    }
    pairs
        .iter()
        .enumerate()
        .all(|(i, &(a, fa))| pairs[i + 1..].iter().all(|&(b, fb)| g.has_edge(a, b) == g.has_edge(fa, fb)))
}

/// Depth-first search over partial assignments of `order`, pruning on
/// injectivity, the edge constraint and pairwise neighborhood preservation.
struct CandidateSearch<'a> {
    g: &'a Graph,
    order: &'a [usize],
    required: Option<usize>,
    image: Vec<Option<usize>>,
    used: Vec<bool>,
}

impl<'a> CandidateSearch<'a> {
    fn new(g: &'a Graph, order: &'a [usize], required: Option<usize>) -> Self {
        CandidateSearch { g, order, required, image: vec![None; g.n()], used: vec![false; g.n()] }
    }

    /// Calls `visit` with every non-empty candidate whose domain is a subset
    /// of `order` (and contains `required`, if any).
    fn run(&mut self, visit: &mut dyn FnMut(&[Option<usize>], usize)) {
        self.descend(0, 0, visit);
    }

    fn descend(&mut self, depth: usize, domain: usize, visit: &mut dyn FnMut(&[Option<usize>], usize)) {
        if depth == self.order.len() {
            if domain > 0 {
                visit(&self.image, domain);
            }
            return;
        }
        let x = self.order[depth];
        if self.required != Some(x) {
            self.descend(depth + 1, domain, visit);
        }
        let g = self.g;
        for &y in g.neighbors(x) {
            if self.used[y] || !self.preserves(depth, x, y) {
                continue;
            }
            self.used[y] = true;
            self.image[x] = Some(y);
            self.descend(depth + 1, domain + 1, visit);
            self.image[x] = None;
            self.used[y] = false;
        }
    }

    fn preserves(&self, depth: usize, x: usize, y: usize) -> bool {
        self.order[..depth].iter().all(|&w| match self.image[w] {
            Some(z) => self.g.has_edge(x, w) == self.g.has_edge(y, z),
            None => true,
        })
    }
}

/// For each `(source, target)` assignment, the smallest loss of any candidate
/// using it. A candidate is dominated by an aligned one of smaller loss iff
/// one of its own assignments has a smaller entry here.
struct AlignmentTable {
    n: usize,
    min_loss: Vec<usize>,
}

impl AlignmentTable {
    fn new(n: usize) -> Self {
        AlignmentTable { n, min_loss: vec![usize::MAX; n * n] }
    }

    fn record(&mut self, image: &[Option<usize>], loss: usize) {
        for (v, t) in image.iter().enumerate() {
            if let Some(t) = t {
                let slot = &mut self.min_loss[v * self.n + t];
                *slot = (*slot).min(loss);
            }
        }
    }

    fn is_minimal(&self, image: &[Option<usize>], loss: usize) -> bool {
        image.iter().enumerate().all(|(v, t)| t.is_none_or(|t| self.min_loss[v * self.n + t] >= loss))
    }
}

fn sort_maps(maps: &mut [PartialMap]) {
    maps.sort_by(|a, b| a.loss().cmp(&b.loss()).then_with(|| a.cmp(b)));
}

/// Every translation of `g` (identity included), ordered by loss and then
/// lexicographically. Exponential; refuses graphs above
/// [`DEFAULT_ENUMERATION_CAP`] vertices.
pub fn enumerate_translations(g: &Graph) -> Result<Vec<PartialMap>> {
    enumerate_translations_capped(g, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_translations_capped(g: &Graph, cap: usize) -> Result<Vec<PartialMap>> {
    let n = g.n();
    if n > cap {
        return Err(Error::TooLarge { n, cap });
    }
    let order: Vec<usize> = (0..n).collect();

    // Two passes so candidates never have to be stored: the first computes
    // the minimal loss per assignment, the second keeps the minimal maps.
    let mut table = AlignmentTable::new(n);
    CandidateSearch::new(g, &order, None).run(&mut |image, domain| table.record(image, n - domain));

    let mut out = vec![PartialMap::identity(n)];
    CandidateSearch::new(g, &order, None).run(&mut |image, domain| {
        if table.is_minimal(image, n - domain) {
            out.push(PartialMap::new(image.to_vec()));
        }
    });
    sort_maps(&mut out);
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FinderConfig {
    /// Maximum accepted `|N_2(v)|`.
    pub max_context: usize,
}

impl Default for FinderConfig {
    fn default() -> Self {
        FinderConfig { max_context: DEFAULT_MAX_CONTEXT }
    }
}

/// Local translations around one center, expressed in the ids of the
/// subgraph induced by `N_2(center)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalTranslationSet {
    pub center: usize,
    pub context: Graph,
    pub relabel: Relabeling,
    /// Identity first, then by loss and lexicographic order.
    pub maps: Vec<PartialMap>,
}

impl LocalTranslationSet {
    pub fn center_local(&self) -> usize {
        self.relabel.to_local(self.center).expect("center lies in its own context")
    }

    /// Loss inside the context: `|N_2(center)| − |U|`.
    pub fn loss(&self, map: &PartialMap) -> usize {
        map.loss()
    }

    /// `(source, target)` pairs of `map` in original graph ids.
    pub fn global_pairs(&self, map: &PartialMap) -> Vec<(usize, usize)> {
        map.pairs().map(|(s, t)| (self.relabel.to_global(s), self.relabel.to_global(t))).collect()
    }

    pub fn non_identity(&self) -> impl Iterator<Item = &PartialMap> {
        self.maps.iter().filter(|m| !m.is_identity())
    }
}

/// Candidate image vectors (local ids) with their loss.
type ScoredCandidates = Vec<(usize, Vec<Option<usize>>)>;

/// Non-empty candidates around `v`: domains inside `N_1(v)` containing `v`,
/// checked in the subgraph induced by `N_2(v)`. Each comes with its loss.
fn local_candidates(g: &Graph, v: usize, config: &FinderConfig) -> Result<(Graph, Relabeling, ScoredCandidates)> {
    let ball = g.neighborhood(v, 2)?;
    if ball.len() > config.max_context {
        return Err(Error::TooDense { vertex: v, size: ball.len(), cap: config.max_context });
    }
    let (context, relabel) = g.induced_subgraph(&ball)?;
    let center = relabel.to_local(v).expect("center in ball");
    let mut order: Vec<usize> = std::iter::once(center).chain(context.neighbors(center).iter().copied()).collect();
    order.sort_unstable();

    let n = context.n();
    let mut candidates = Vec::new();
    CandidateSearch::new(&context, &order, Some(center))
        .run(&mut |image, domain| candidates.push((n - domain, image.to_vec())));
    Ok((context, relabel, candidates))
}

fn with_identity(n: usize, kept: impl Iterator<Item = Vec<Option<usize>>>) -> Vec<PartialMap> {
    let mut maps = vec![PartialMap::identity(n)];
    maps.extend(kept.map(PartialMap::new));
    sort_maps(&mut maps);
    maps
}

/// Local translations of center `v`: maps whose domain is a subset of
/// `N_1(v)` containing `v`, with images in `N_2(v)`, checked inside the
/// subgraph induced by `N_2(v)` and filtered for aligned minimality.
pub fn find_local_translations(g: &Graph, v: usize, config: &FinderConfig) -> Result<LocalTranslationSet> {
    let (context, relabel, candidates) = local_candidates(g, v, config)?;
    let mut table = AlignmentTable::new(context.n());
    for (loss, image) in &candidates {
        table.record(image, *loss);
    }
    let kept = candidates.into_iter().filter(|(loss, image)| table.is_minimal(image, *loss)).map(|(_, m)| m);
    let maps = with_identity(context.n(), kept);
    Ok(LocalTranslationSet { center: v, context, relabel, maps })
}

/// Kernel moves of center `v`: the same candidates as
/// [`find_local_translations`], but minimality is only required among
/// candidates sending `v` to the same vertex. This keeps at least one move
/// towards every neighbor that some candidate reaches, which the full
/// alignment filter does not (on a grid it removes every move into a
/// corner).
pub fn find_kernel_moves(g: &Graph, v: usize, config: &FinderConfig) -> Result<LocalTranslationSet> {
    let (context, relabel, candidates) = local_candidates(g, v, config)?;
    let center = relabel.to_local(v).expect("center in ball");
    let mut best = vec![usize::MAX; context.n()];
    for (loss, image) in &candidates {
        let t = image[center].expect("center mapped");
        best[t] = best[t].min(*loss);
    }
    let kept = candidates.into_iter().filter(|(loss, image)| best[image[center].unwrap()] == *loss).map(|(_, m)| m);
    let maps = with_identity(context.n(), kept);
    Ok(LocalTranslationSet { center: v, context, relabel, maps })
}

/// Local translation sets for every vertex, in vertex order. Runs on the
/// current rayon pool; the result does not depend on the schedule.
pub fn find_all_local_translations(g: &Graph, config: &FinderConfig) -> Result<Vec<LocalTranslationSet>> {
    (0..g.n()).into_par_iter().map(|v| find_local_translations(g, v, config)).collect()
}

/// [`find_kernel_moves`] for every vertex, in vertex order.
pub fn find_all_kernel_moves(g: &Graph, config: &FinderConfig) -> Result<Vec<LocalTranslationSet>> {
    (0..g.n()).into_par_iter().map(|v| find_kernel_moves(g, v, config)).collect()
}

/// Debug dump of one local translation, in original vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalTranslationRecord {
    pub domain: Vec<usize>,
    pub image: Vec<usize>,
    pub loss: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalTranslationDump {
    pub center: usize,
    pub translations: Vec<LocalTranslationRecord>,
}

impl From<&LocalTranslationSet> for LocalTranslationDump {
    fn from(set: &LocalTranslationSet) -> Self {
        let translations = set
            .maps
            .iter()
            .map(|m| {
                let (domain, image) = set.global_pairs(m).into_iter().unzip();
                LocalTranslationRecord { domain, image, loss: set.loss(m) }
            })
            .collect();
        LocalTranslationDump { center: set.center, translations }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(v: &[i64]) -> PartialMap {
        PartialMap::new(v.iter().map(|&x| if x < 0 { None } else { Some(x as usize) }).collect())
    }

    #[test]
    fn identity_is_always_a_candidate() {
        for g in [Graph::path(4), Graph::grid(3, 3), Graph::empty(2)] {
            assert!(is_candidate_translation(&g, &PartialMap::identity(g.n())));
        }
    }

    #[test]
    fn single_edge_swap_is_candidate_with_zero_loss() {
        let g = Graph::path(2);
        let swap = map(&[1, 0]);
        assert!(is_candidate_translation(&g, &swap));
        assert_eq!(swap.loss(), 0);
    }

    #[test]
    fn non_injective_map_rejected() {
        // path 1–2–3 with 1→2, 3→2
        assert!(!is_candidate_translation(&Graph::path(3), &map(&[1, -1, 1])));
    }

    #[test]
    fn candidate_checks_each_property() {
        let g = Graph::path(4);
        // not edge-constrained: 0 → 2
        assert!(!is_candidate_translation(&g, &map(&[2, -1, -1, -1])));
        // breaks non-adjacency: 0,2 non-adjacent but images 1,1? use 0→1, 2→...
        // 1→0 and 2→3: 1,2 adjacent but 0,3 are not
        assert!(!is_candidate_translation(&g, &map(&[-1, 0, 3, -1])));
        // wrong length
        assert!(!is_candidate_translation(&g, &map(&[1, 0])));
        // partial identity is not exempt
        assert!(!is_candidate_translation(&g, &map(&[0, -1, -1, -1])));
    }

    #[test]
    fn enumerate_small_graphs() {
        assert_eq!(enumerate_translations(&Graph::path(2)).unwrap(), vec![map(&[0, 1]), map(&[1, 0])]);
        assert_eq!(
            enumerate_translations(&Graph::cycle(3)).unwrap(),
            vec![map(&[0, 1, 2]), map(&[1, 2, 0]), map(&[2, 0, 1])]
        );
        // The two shifts plus the two edge swaps, all of loss 1.
        assert_eq!(
            enumerate_translations(&Graph::path(3)).unwrap(),
            vec![map(&[0, 1, 2]), map(&[-1, 0, 1]), map(&[-1, 2, 1]), map(&[1, 0, -1]), map(&[1, 2, -1])]
        );
    }

    #[test]
    fn enumeration_cap() {
        let err = enumerate_translations(&Graph::path(13)).unwrap_err();
        assert!(matches!(err, Error::TooLarge { n: 13, cap: 12 }));
    }

    #[test]
    fn grid_interior_has_four_full_kernel_translations() {
        let g = Graph::grid(5, 6);
        let v0 = 2 * 6 + 2;
        let set = find_local_translations(&g, v0, &FinderConfig::default()).unwrap();
        assert_eq!(set.context.n(), 13);
        let moves: Vec<_> = set.non_identity().collect();
        assert_eq!(moves.len(), 4);
        let c = set.center_local();
        let mut shifts: Vec<isize> = Vec::new();
        for m in moves {
            assert_eq!(m.domain_size(), 5);
            assert_eq!(set.loss(m), 8);
            let pairs = set.global_pairs(m);
            let offset = pairs[0].1 as isize - pairs[0].0 as isize;
            assert!(pairs.iter().all(|&(s, t)| t as isize - s as isize == offset));
            assert!(m.get(c).is_some());
            shifts.push(offset);
        }
        shifts.sort_unstable();
        assert_eq!(shifts, vec![-6, -1, 1, 6]);
    }

    #[test]
    fn star_center_moves() {
        // K_{1,3}: center 0, leaves 1..3. Sending the center to leaf a leaves
        // room for exactly one more assignment x → 0 (x = a is the swap, the
        // other two leaves give shifts); all nine have loss 2.
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let set = find_local_translations(&g, 0, &FinderConfig::default()).unwrap();
        let moves: Vec<_> = set.non_identity().collect();
        assert_eq!(moves.len(), 9);
        assert!(moves.iter().all(|m| m.domain_size() == 2 && set.loss(m) == 2));
        let swaps = moves.iter().filter(|m| m.get(0).is_some_and(|a| m.get(a) == Some(0))).count();
        assert_eq!(swaps, 3);
    }

    #[test]
    fn single_vertex_has_only_identity() {
        let set = find_local_translations(&Graph::empty(1), 0, &FinderConfig::default()).unwrap();
        assert_eq!(set.maps, vec![PartialMap::identity(1)]);
    }

    #[test]
    fn dense_context_is_refused() {
        let edges: Vec<_> = (1..10).map(|v| (0, v)).collect();
        let g = Graph::from_edges(10, &edges).unwrap();
        let err = find_local_translations(&g, 0, &FinderConfig { max_context: 8 }).unwrap_err();
        assert!(matches!(err, Error::TooDense { vertex: 0, size: 10, cap: 8 }));
    }

    #[test]
    fn dump_uses_original_ids() {
        let g = Graph::path(5);
        let set = find_local_translations(&g, 4, &FinderConfig::default()).unwrap();
        let dump = LocalTranslationDump::from(&set);
        assert_eq!(dump.center, 4);
        assert_eq!(dump.translations[0].domain, vec![2, 3, 4]);
        assert!(dump.translations.iter().skip(1).all(|t| t.domain.contains(&4)));
    }
}
