//! Exact reference structures on `h × w` grid graphs (row-major ids) and a
//! checker that runs the pipeline on a grid against them.

use serde::Serialize;

use crate::downscale::downscale_chain;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::proxy::{propagate_with_cost, MoveCost, ProxyFamily};
use crate::scheme::{compile_scheme, ConvScheme};
use crate::translation::{find_all_kernel_moves, FinderConfig};

/// Pixel offset of each kernel slot for an interior seed. The seed's
/// neighbors in ascending id order are up, left, right, down.
pub const KERNEL_OFFSETS: [(isize, isize); 5] = [(0, 0), (-1, 0), (0, -1), (0, 1), (1, 0)];

fn offset(h: usize, w: usize, v: usize, dy: isize, dx: isize) -> Option<usize> {
    let i = (v / w) as isize + dy;
    let j = (v % w) as isize + dx;
    (i >= 0 && j >= 0 && i < h as isize && j < w as isize).then(|| i as usize * w + j as usize)
}

/// `v ↦ v + (dy, dx)`, ⊥ when the shift leaves the grid.
pub fn shift_map(h: usize, w: usize, dy: isize, dx: isize) -> Vec<Option<usize>> {
    (0..h * w).map(|v| offset(h, w, v, dy, dx)).collect()
}

/// Expected scheme row of `v` with the kernel arms stretched to `dilation` pixels.
pub fn reference_row(h: usize, w: usize, v: usize, dilation: usize) -> Vec<Option<usize>> {
    let d = dilation as isize;
    KERNEL_OFFSETS.iter().map(|&(dy, dx)| offset(h, w, v, dy * d, dx * d)).collect()
}

/// Vertices whose coordinate parity `(i + j) mod 2` equals that of `v0`.
pub fn parity_class(h: usize, w: usize, v0: usize) -> VertexSet {
    let parity = (v0 / w + v0 % w) % 2;
    (0..h * w).filter(|v| (v / w + v % w) % 2 == parity).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowMismatch {
    pub row: usize,
    pub vertex: usize,
    pub expected: Vec<Option<usize>>,
    pub got: Vec<Option<usize>>,
}

/// First row of `scheme` (whose ids are grid ids) that differs from
/// [`reference_row`].
pub fn first_scheme_mismatch(h: usize, w: usize, scheme: &ConvScheme, dilation: usize) -> Option<RowMismatch> {
    scheme.out.iter().zip(&scheme.index).enumerate().find_map(|(row, (&v, got))| {
        let expected = if v < h * w { reference_row(h, w, v, dilation) } else { Vec::new() };
        (expected != *got).then(|| RowMismatch { row, vertex: v, expected, got: got.clone() })
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl GridCheck {
    fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        GridCheck { name: name.to_string(), pass, detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridReport {
    pub height: usize,
    pub width: usize,
    pub stride: usize,
    pub v0: usize,
    pub checks: Vec<GridCheck>,
}

impl GridReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn describe(m: &Option<RowMismatch>) -> String {
    match m {
        None => "all rows match".into(),
        Some(m) => format!("row {} (vertex {}): expected {:?}, got {:?}", m.row, m.vertex, m.expected, m.got),
    }
}

/// Checks of the family alone: kernel size, reach, and the four shifts.
pub fn check_family(h: usize, w: usize, f: &ProxyFamily) -> Vec<GridCheck> {
    let mut checks = vec![
        GridCheck::new("kappa", f.kappa == 5, format!("kappa = {}", f.kappa)),
        GridCheck::new("reach", f.unreached().is_empty(), format!("{} unreached", f.unreached().len())),
    ];
    if f.kappa == 5 {
        for (p, &(dy, dx)) in KERNEL_OFFSETS.iter().enumerate() {
            let expected = shift_map(h, w, dy, dx);
            let bad = (0..h * w).find(|&v| f.psi[p][v] != expected[v]);
            let defined = f.psi[p].iter().flatten().count();
            let detail = match bad {
                None => format!("shift ({dy},{dx}), {defined} defined"),
                Some(v) => format!("vertex {v}: expected {:?}, got {:?}", expected[v], f.psi[p][v]),
            };
            checks.push(GridCheck::new(&format!("psi[{p}]"), bad.is_none(), detail));
        }
    }
    checks
}

/// Run translation search, propagation, scheme compilation and optionally
/// one stride-2 step on an `h × w` grid and compare everything with the
/// exact grid structures. `v0` defaults to the grid center.
pub fn verify_grid(
    h: usize,
    w: usize,
    stride: usize,
    v0: Option<usize>,
    config: &FinderConfig,
    cost: MoveCost,
) -> Result<GridReport> {
    if h < 3 || w < 3 {
        return Err(Error::InvalidParameter("grid sides must be at least 3".into()));
    }
    if !(1..=2).contains(&stride) {
        return Err(Error::InvalidParameter("grid verification supports stride 1 or 2".into()));
    }
    let g = Graph::grid(h, w);
    let v0 = match v0 {
        Some(v) => v,
        None => g.center_vertex().expect("non-empty grid"),
    };
    g.check_vertex(v0)?;
    let locals = find_all_kernel_moves(&g, config)?;
    let f = propagate_with_cost(&g, &locals, v0, cost)?;
    let mut checks = check_family(h, w, &f);
    if !checks.iter().all(|c| c.pass) {
        return Ok(GridReport { height: h, width: w, stride, v0, checks });
    }

    let scheme = compile_scheme(&f, &VertexSet::all(g.n()))?;
    let mismatch = first_scheme_mismatch(h, w, &scheme, 1);
    checks.push(GridCheck::new("scheme", mismatch.is_none(), describe(&mismatch)));

    if stride == 2 {
        let level = downscale_chain(&g, &f, &[2])?.remove(0);
        let parity = parity_class(h, w, v0);
        checks.push(GridCheck::new(
            "kept",
            level.plan.kept == parity,
            format!("{} kept, parity class has {}", level.plan.kept.len(), parity.len()),
        ));
        let mismatch = first_scheme_mismatch(h, w, &level.strided, 1);
        checks.push(GridCheck::new("strided scheme", mismatch.is_none(), describe(&mismatch)));

        // Level scheme in grid ids: 2-pixel arms, restricted to kept vertices.
        let to_parent = |t: Option<usize>| t.map(|t| level.level.parent[t]);
        let lifted = ConvScheme {
            out: level.scheme.out.iter().map(|&v| level.level.parent[v]).collect(),
            index: level.scheme.index.iter().map(|row| row.iter().map(|&t| to_parent(t)).collect()).collect(),
            ..level.scheme.clone()
        };
        let mismatch = first_scheme_mismatch(h, w, &lifted, 2);
        checks.push(GridCheck::new("level scheme", mismatch.is_none(), describe(&mismatch)));
    }
    Ok(GridReport { height: h, width: w, stride, v0, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_structures() {
        assert_eq!(shift_map(2, 3, 0, 1), vec![Some(1), Some(2), None, Some(4), Some(5), None]);
        assert_eq!(reference_row(3, 3, 4, 1), vec![Some(4), Some(1), Some(3), Some(5), Some(7)]);
        assert_eq!(reference_row(3, 3, 0, 1), vec![Some(0), None, None, Some(1), Some(3)]);
        assert_eq!(parity_class(2, 2, 0).into_vec(), vec![0, 3]);
    }

    #[test]
    fn small_grids_pass() {
        for (h, w) in [(3, 3), (6, 5), (5, 6), (4, 7)] {
            for stride in [1, 2] {
                let r = verify_grid(h, w, stride, None, &FinderConfig::default(), MoveCost::Kernel).unwrap();
                assert!(r.pass(), "{h}x{w} stride {stride}: {:?}", r.checks);
            }
        }
    }

    #[test]
    fn corrupted_scheme_is_caught() {
        let g = Graph::grid(3, 3);
        let f = ProxyFamily {
            kappa: 5,
            v0: 4,
            psi: KERNEL_OFFSETS.iter().map(|&(dy, dx)| shift_map(3, 3, dy, dx)).collect(),
            cost: vec![Some(0); 9],
        };
        let mut s = compile_scheme(&f, &VertexSet::all(g.n())).unwrap();
        assert!(first_scheme_mismatch(3, 3, &s, 1).is_none());
        s.index[5][3] = Some(0);
        let m = first_scheme_mismatch(3, 3, &s, 1).unwrap();
        assert_eq!((m.row, m.vertex), (5, 5));
    }
}
