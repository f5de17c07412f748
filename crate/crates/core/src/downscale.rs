//! Stride-`r` kept-vertex sets, induced translations between kept vertices
//! and the per-level chaining used by strided layers.

use std::collections::VecDeque;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::proxy::{decode, ProxyFamily};
use crate::scheme::{compile_scheme_at_level, ConvScheme};

/// Vertices of `g` reachable from `v0`, ordered by BFS layer, then id.
fn admission_order(g: &Graph, v0: usize) -> Vec<usize> {
    let dist = g.bfs_distances(v0, None);
    let mut order: Vec<usize> = (0..g.n()).filter(|&v| dist[v].is_some()).collect();
    order.sort_by_key(|&v| (dist[v], v));
    order
}

/// Lower distances in `near` (capped at `r + 1`) after admitting `u`.
fn relax(g: &Graph, near: &mut [usize], u: usize, r: usize) {
    near[u] = 0;
    let mut queue = VecDeque::from([u]);
    while let Some(v) = queue.pop_front() {
        let d = near[v];
        if d >= r {
            continue;
        }
        for &w in g.neighbors(v) {
            if near[w] > d + 1 {
                near[w] = d + 1;
                queue.push_back(w);
            }
        }
    }
}

/// Stride-`r` kept set grown from `v0`.
///
/// Candidates are visited in (BFS layer, id) order and admitted one at a
/// time when their distance to the kept set is exactly `r`; passes repeat
/// until one admits nothing. Kept vertices are therefore pairwise at
/// distance ≥ `r`.
pub fn select_kept(g: &Graph, v0: usize, r: usize) -> Result<VertexSet> {
    g.check_vertex(v0)?;
    if r == 0 {
        return Err(Error::InvalidParameter("stride must be at least 1".into()));
    }
    let order = admission_order(g, v0);
    let mut near = vec![r + 1; g.n()];
    let mut kept = vec![v0];
    relax(g, &mut near, v0, r);
    loop {
        let mut admitted = false;
        for &v in &order {
            if near[v] == r {
                kept.push(v);
                relax(g, &mut near, v, r);
                admitted = true;
            }
        }
        if !admitted {
            break;
        }
    }
    Ok(VertexSet::new(kept))
}

/// Kept set and induced ↓r-translations, all in the ids of the graph the
/// plan was computed on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DownscalePlan {
    pub r: usize,
    pub seed: usize,
    pub kept: VertexSet,
    /// `induced[p][i]`: image of `kept[i]` under the p-th induced map.
    pub induced: Vec<Vec<Option<usize>>>,
}

/// For every kept `c`, index `p` of the kernel dilated to `r` hops points at
/// `ψ_p^r(c)`; the induced map keeps that image when it is itself kept.
/// Non-identity indices never map a vertex to itself.
pub fn induce_translations(f: &ProxyFamily, kept: &VertexSet, r: usize) -> Result<DownscalePlan> {
    if r == 0 {
        return Err(Error::InvalidParameter("stride must be at least 1".into()));
    }
    if let Some(v) = kept.iter().find(|&v| v >= f.n()) {
        return Err(Error::VertexOutOfRange { vertex: v, n: f.n() });
    }
    if !kept.contains(f.v0) {
        return Err(Error::InvalidParameter(format!("kept set does not contain the seed {}", f.v0)));
    }
    let induced = (0..f.kappa)
        .map(|p| kept.iter().map(|c| f.compose(p, r, c).filter(|&t| kept.contains(t) && (p == 0 || t != c))).collect())
        .collect();
    Ok(DownscalePlan { r, seed: f.v0, kept: kept.clone(), induced })
}

/// [`select_kept`] from the family's seed followed by [`induce_translations`].
pub fn plan_downscale(g: &Graph, f: &ProxyFamily, r: usize) -> Result<DownscalePlan> {
    let kept = select_kept(g, f.v0, r)?;
    induce_translations(f, &kept, r)
}

impl DownscalePlan {
    /// Kept vertices where the induced identity is undefined (the family
    /// never reached them).
    pub fn uncovered(&self) -> Vec<usize> {
        self.kept.iter().zip(&self.induced[0]).filter(|(_, t)| t.is_none()).map(|(v, _)| v).collect()
    }

    pub fn induced_maps(&self) -> Vec<Vec<(usize, usize)>> {
        self.induced
            .iter()
            .map(|row| self.kept.iter().zip(row).filter_map(|(v, t)| t.map(|t| (v, t))).collect())
            .collect()
    }

    pub fn to_json(&self) -> String {
        let file = PlanFile {
            r: self.r,
            seed: self.seed,
            kept: self.kept.as_slice().to_vec(),
            induced: self.induced.iter().map(|row| row.iter().map(|t| t.map_or(-1, |t| t as i64)).collect()).collect(),
        };
        let mut text = serde_json::to_string(&file).expect("plan serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PlanFile = serde_json::from_str(text)?;
        let kept = VertexSet::new(file.kept.clone());
        if kept.len() != file.kept.len() {
            return Err(Error::Format("kept list has duplicates".into()));
        }
        if kept.as_slice() != file.kept.as_slice() {
            return Err(Error::Format("kept list must be ascending".into()));
        }
        let induced = file
            .induced
            .iter()
            .map(|row| {
                if row.len() != kept.len() {
                    return Err(Error::ShapeMismatch { what: "induced row", expected: kept.len(), got: row.len() });
                }
                row.iter().map(|&x| decode(x)).collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if induced.is_empty() {
            return Err(Error::Format("induced must hold at least the identity row".into()));
        }
        Ok(DownscalePlan { r: file.r, seed: file.seed, kept, induced })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PlanFile {
    r: usize,
    seed: usize,
    kept: Vec<usize>,
    induced: Vec<Vec<i64>>,
}

/// One coarser level: the kept vertices renumbered densely, the graph
/// joining kept vertices at parent distance ≤ r, and the induced maps
/// repackaged as a family so the scheme compiler applies unchanged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    pub graph: Graph,
    pub family: ProxyFamily,
    /// Dense id → id in the parent graph.
    pub parent: Vec<usize>,
}

pub fn chain(g: &Graph, f: &ProxyFamily, plan: &DownscalePlan) -> Result<Level> {
    let kept = &plan.kept;
    let dense = |v: usize| kept.position(v).expect("induced images are kept");
    let mut edges = Vec::new();
    for (i, u) in kept.iter().enumerate() {
        for v in g.neighborhood(u, plan.r)?.iter() {
            match kept.position(v) {
                Some(j) if j > i => edges.push((i, j)),
                _ => {}
            }
        }
    }
    let graph = Graph::from_edges(kept.len(), &edges)?;
    let psi = plan.induced.iter().map(|row| row.iter().map(|t| t.map(dense)).collect()).collect();
    let cost = kept.iter().zip(&plan.induced[0]).map(|(v, t)| t.and(f.cost.get(v).copied().flatten())).collect();
    let family = ProxyFamily { kappa: f.kappa, v0: dense(plan.seed), psi, cost };
    Ok(Level { graph, family, parent: kept.as_slice().to_vec() })
}

/// Everything produced for one stride step.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelArtifacts {
    pub plan: DownscalePlan,
    /// Strided layer from the previous level onto the kept vertices.
    pub strided: ConvScheme,
    /// Unstrided layer on the new level.
    pub scheme: ConvScheme,
    pub level: Level,
}

/// Apply the strides in order, each on the level produced by the previous.
pub fn downscale_chain(g: &Graph, f: &ProxyFamily, strides: &[usize]) -> Result<Vec<LevelArtifacts>> {
    let mut out = Vec::with_capacity(strides.len());
    let (mut graph, mut family) = (g.clone(), f.clone());
    for (k, &r) in strides.iter().enumerate() {
        let plan = plan_downscale(&graph, &family, r)?;
        let strided = compile_scheme_at_level(&family, &plan.kept, k + 1)?;
        let level = chain(&graph, &family, &plan)?;
        let scheme = compile_scheme_at_level(&level.family, &VertexSet::all(level.graph.n()), k + 1)?;
        graph = level.graph.clone();
        family = level.family.clone();
        out.push(LevelArtifacts { plan, strided, scheme, level });
    }
    Ok(out)
}
