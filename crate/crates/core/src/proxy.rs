//! Propagation of an indexing kernel across the graph along local
//! translations, producing a family of proxy-translations.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::translation::{LocalTranslationSet, PartialMap};

/// Kernel placement: `slots[0]` is the center, the other slots are the
/// current images of the seed's neighbors (or ⊥).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelIndexing {
    pub center: usize,
    pub slots: Vec<Option<usize>>,
    pub cost: u64,
}

/// Slot 0 is `v0`, then the neighbors of `v0` in ascending id order.
pub fn seed_kernel(g: &Graph, v0: usize) -> Result<KernelIndexing> {
    g.check_vertex(v0)?;
    let slots = std::iter::once(v0).chain(g.neighbors(v0).iter().copied()).map(Some).collect();
    Ok(KernelIndexing { center: v0, slots, cost: 0 })
}

/// One way to move the kernel away from `source`, derived from a
/// non-identity local translation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelMove {
    pub source: usize,
    pub target: usize,
    pub loss: u64,
    /// Domain vertices `x` with `φ(φ(x)) = x`.
    pub backtracks: u64,
    /// Domain edges that share a vertex with their own image.
    pub skew: u64,
    /// `(x, φ(x))` in original ids, ascending in `x`.
    pub pairs: Vec<(usize, usize)>,
}

impl KernelMove {
    fn from_map(set: &LocalTranslationSet, map: &PartialMap, cost: MoveCost) -> Self {
        let backtracks = map.pairs().filter(|&(x, y)| map.get(y) == Some(x)).count() as u64;
        let skew = set
            .context
            .edges()
            .filter_map(|(x, y)| Some((x, y, map.get(x)?, map.get(y)?)))
            .filter(|&(x, y, fx, fy)| fx == x || fx == y || fy == x || fy == y)
            .count() as u64;
        let c = set.center_local();
        KernelMove {
            source: set.center,
            target: set.relabel.to_global(map.get(c).expect("center in domain")),
            loss: match cost {
                MoveCost::Kernel => (set.context.degree(c) + 1 - map.domain_size()) as u64,
                MoveCost::Context => set.loss(map) as u64,
            },
            backtracks,
            skew,
            pairs: set.global_pairs(map),
        }
    }

    fn apply(&self, v: usize) -> Option<usize> {
        self.pairs.binary_search_by_key(&v, |&(x, _)| x).ok().map(|i| self.pairs[i].1)
    }
}

/// How much a kernel move costs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum MoveCost {
    /// Kernel vertices the move drops: `|N_1(c)| − |U|`.
    #[default]
    Kernel,
    /// Loss in the 2-hop context: `|N_2(c)| − |U|`. Contexts shrink near the
    /// boundary of a grid, so min-cost paths then hug the border and lose
    /// kernel slots on large grids.
    Context,
}

/// All kernel moves, grouped by source vertex (`moves[c]`).
pub fn kernel_moves(locals: &[LocalTranslationSet], cost: MoveCost) -> Vec<Vec<KernelMove>> {
    locals.iter().map(|set| set.non_identity().map(|m| KernelMove::from_map(set, m, cost)).collect()).collect()
}

/// κ global partial maps `psi[p]` plus the accumulated cost per center.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProxyFamily {
    pub kappa: usize,
    pub v0: usize,
    /// `psi[p][c]`: slot `p` of the kernel stored at center `c`.
    pub psi: Vec<Vec<Option<usize>>>,
    /// `None` for centers the kernel never reached.
    pub cost: Vec<Option<u64>>,
}

// Heap key: total loss first, then the secondary scores that prefer
// maps moving the kernel rigidly, then discovery order and slot contents.
type Key = (u64, u64, u64, usize, Vec<Option<usize>>);

/// Minimum-cost propagation of the seed kernel from `v0`.
///
/// Moving from `c` along a local translation φ costs its [`MoveCost`] and sends
/// every slot `s` to `φ(s)` (⊥ when `s` leaves the domain; ⊥ stays ⊥).
/// Equal-cost arrivals are ordered by the summed backtrack count, then the
/// summed skew, then by which predecessor was settled first, then by slot
/// contents. Unreached centers are left undefined.
pub fn propagate(g: &Graph, locals: &[LocalTranslationSet], v0: usize) -> Result<ProxyFamily> {
    propagate_with_cost(g, locals, v0, MoveCost::default())
}

pub fn propagate_with_cost(
    g: &Graph,
    locals: &[LocalTranslationSet],
    v0: usize,
    cost: MoveCost,
) -> Result<ProxyFamily> {
    let moves = kernel_moves(locals, cost);
    propagate_moves(g, &moves, v0)
}

/// As [`propagate`], with moves precomputed by [`kernel_moves`].
pub fn propagate_moves(g: &Graph, moves: &[Vec<KernelMove>], v0: usize) -> Result<ProxyFamily> {
    let n = g.n();
    if moves.len() != n {
        return Err(Error::ShapeMismatch { what: "local translation sets", expected: n, got: moves.len() });
    }
    let seed = seed_kernel(g, v0)?;
    let kappa = seed.slots.len();
    let mut psi = vec![vec![None; n]; kappa];
    let mut cost = vec![None; n];
    let mut settled = 0usize;

    let mut heap: BinaryHeap<Reverse<(Key, usize)>> = BinaryHeap::new();
    heap.push(Reverse(((0, 0, 0, 0, seed.slots), v0)));
    while let Some(Reverse(((c_loss, c_back, c_skew, _, slots), center))) = heap.pop() {
        if cost[center].is_some() {
            continue;
        }
        cost[center] = Some(c_loss);
        for (p, s) in slots.iter().enumerate() {
            psi[p][center] = *s;
        }
        let rank = settled;
        settled += 1;
        for mv in &moves[center] {
            if cost[mv.target].is_some() {
                continue;
            }
            let next: Vec<Option<usize>> = slots.iter().map(|s| s.and_then(|v| mv.apply(v))).collect();
            debug_assert_eq!(next[0], Some(mv.target));
            let key = (c_loss + mv.loss, c_back + mv.backtracks, c_skew + mv.skew, rank, next);
            heap.push(Reverse((key, mv.target)));
        }
    }
    Ok(ProxyFamily { kappa, v0, psi, cost })
}

impl ProxyFamily {
    pub fn n(&self) -> usize {
        self.cost.len()
    }

    pub fn is_reached(&self, c: usize) -> bool {
        self.cost.get(c).is_some_and(Option::is_some)
    }

    pub fn unreached(&self) -> Vec<usize> {
        (0..self.n()).filter(|&c| !self.is_reached(c)).collect()
    }

    pub fn total_cost(&self) -> u64 {
        self.cost.iter().flatten().sum()
    }

    /// ⊥ entries over reached centers.
    pub fn bottom_count(&self) -> usize {
        (0..self.n())
            .filter(|&c| self.is_reached(c))
            .map(|c| self.psi.iter().filter(|row| row[c].is_none()).count())
            .sum()
    }

    pub fn get(&self, p: usize, c: usize) -> Option<usize> {
        self.psi.get(p).and_then(|row| row.get(c).copied().flatten())
    }

    /// The κ proxy-translations as partial maps over the whole vertex set.
    pub fn as_maps(&self) -> Vec<PartialMap> {
        self.psi.iter().map(|row| PartialMap::new(row.clone())).collect()
    }

    /// Apply `psi[p]` `times` times in a row.
    pub fn compose(&self, p: usize, times: usize, c: usize) -> Option<usize> {
        (0..times).try_fold(c, |v, _| self.get(p, v))
    }

    /// Same family restricted to `psi[p]` iterated `times` times.
    pub fn power(&self, times: usize) -> ProxyFamily {
        let psi = (0..self.kappa).map(|p| (0..self.n()).map(|c| self.compose(p, times, c)).collect()).collect();
        ProxyFamily { psi, ..self.clone() }
    }

    pub fn score(&self) -> SeedScore {
        SeedScore {
            unreached: self.unreached().len(),
            kappa: self.kappa,
            total_cost: self.total_cost(),
            bottoms: self.bottom_count(),
            v0: self.v0,
        }
    }

    /// Shape and id-range checks.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if self.psi.len() != self.kappa || self.kappa == 0 {
            return Err(Error::Format(format!("psi has {} rows, kappa is {}", self.psi.len(), self.kappa)));
        }
        if self.v0 >= n {
            return Err(Error::VertexOutOfRange { vertex: self.v0, n });
        }
        for row in &self.psi {
            if row.len() != n {
                return Err(Error::ShapeMismatch { what: "psi row", expected: n, got: row.len() });
            }
            if let Some(&t) = row.iter().flatten().find(|&&t| t >= n) {
                return Err(Error::VertexOutOfRange { vertex: t, n });
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string(&FamilyFile::from(self)).expect("family serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self> {
        ProxyFamily::try_from(serde_json::from_str::<FamilyFile>(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

/// Structural ranking of seeds, smaller is better. Larger kernels rank
/// first so that low-degree seeds do not win on cost alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SeedScore {
    pub unreached: usize,
    pub kappa: usize,
    pub total_cost: u64,
    pub bottoms: usize,
    pub v0: usize,
}

impl SeedScore {
    fn key(&self) -> (usize, Reverse<usize>, u64, usize, usize) {
        (self.unreached, Reverse(self.kappa), self.total_cost, self.bottoms, self.v0)
    }
}

impl Ord for SeedScore {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for SeedScore {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The max-degree vertex followed by up to `count` distinct random vertices.
pub fn auto_seed_candidates(g: &Graph, count: usize, rng_seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut out: Vec<usize> = g.max_degree_vertex().into_iter().collect();
    let picks = rand::seq::index::sample(&mut rng, g.n(), count.min(g.n()));
    for v in picks.into_iter() {
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

/// Propagate from every candidate seed and keep the best [`SeedScore`].
/// Returns the winner and all scores in candidate order.
pub fn propagate_best(
    g: &Graph,
    locals: &[LocalTranslationSet],
    candidates: &[usize],
    cost: MoveCost,
) -> Result<(ProxyFamily, Vec<SeedScore>)> {
    if candidates.is_empty() {
        return Err(Error::InvalidParameter("no seed candidates".into()));
    }
    let moves = kernel_moves(locals, cost);
    let families: Vec<ProxyFamily> =
        candidates.par_iter().map(|&v0| propagate_moves(g, &moves, v0)).collect::<Result<_>>()?;
    let scores: Vec<SeedScore> = families.iter().map(ProxyFamily::score).collect();
    let best = (0..families.len()).min_by_key(|&i| scores[i]).expect("non-empty");
    let winner = families.into_iter().nth(best).expect("index in range");
    Ok((winner, scores))
}

#[derive(Serialize, Deserialize)]
struct FamilyFile {
    kappa: usize,
    v0: usize,
    psi: Vec<Vec<i64>>,
    cost: Vec<i64>,
}

fn encode(v: Option<usize>) -> i64 {
    v.map_or(-1, |t| t as i64)
}

pub(crate) fn decode(x: i64) -> Result<Option<usize>> {
    match x {
        -1 => Ok(None),
        x if x >= 0 => Ok(Some(x as usize)),
        x => Err(Error::Format(format!("negative entry {x} (only -1 encodes an undefined image)"))),
    }
}

impl From<&ProxyFamily> for FamilyFile {
    fn from(f: &ProxyFamily) -> Self {
        FamilyFile {
            kappa: f.kappa,
            v0: f.v0,
            psi: f.psi.iter().map(|row| row.iter().map(|&t| encode(t)).collect()).collect(),
            cost: f.cost.iter().map(|&c| c.map_or(-1, |c| c as i64)).collect(),
        }
    }
}

impl TryFrom<FamilyFile> for ProxyFamily {
    type Error = Error;

    fn try_from(file: FamilyFile) -> Result<Self> {
        let psi = file
            .psi
            .iter()
            .map(|row| row.iter().map(|&x| decode(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let cost = file.cost.iter().map(|&x| decode(x).map(|c| c.map(|c| c as u64))).collect::<Result<_>>()?;
        let family = ProxyFamily { kappa: file.kappa, v0: file.v0, psi, cost };
        family.validate()?;
        Ok(family)
    }
}
