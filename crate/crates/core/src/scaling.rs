//! Wall-time measurements of the two translation steps on growing grids.

use std::time::Instant;

use serde::Serialize;

use crate::error::Result;
use crate::graph::Graph;
use crate::proxy::{kernel_moves, propagate_moves, MoveCost};
use crate::translation::{find_all_kernel_moves, FinderConfig};

/// Grid sides giving n = 1024, 4096 and 16384.
pub const DEFAULT_SIDES: [usize; 3] = [32, 64, 128];

/// Largest accepted `t(4n) / t(n)`.
pub const MAX_RATIO: f64 = 6.0;

#[derive(Clone, Debug, Serialize)]
pub struct ScalingPoint {
    pub side: usize,
    pub n: usize,
    /// Best of the repeats, in seconds.
    pub local_seconds: f64,
    pub propagate_seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingReport {
    pub threads: usize,
    pub repeats: usize,
    pub points: Vec<ScalingPoint>,
    /// `t(n_{i+1}) / t(n_i)` for consecutive points.
    pub local_ratios: Vec<f64>,
    pub propagate_ratios: Vec<f64>,
    pub max_ratio: f64,
    pub pass: bool,
}

fn best_of<T>(repeats: usize, mut run: impl FnMut() -> Result<T>) -> Result<(f64, T)> {
    let mut best = f64::INFINITY;
    let mut last = None;
    for _ in 0..repeats.max(1) {
        let start = Instant::now();
        let out = run()?;
        best = best.min(start.elapsed().as_secs_f64());
        last = Some(out);
    }
    Ok((best, last.expect("at least one run")))
}

fn ratios(xs: impl Iterator<Item = f64>) -> Vec<f64> {
    let xs: Vec<f64> = xs.collect();
    xs.windows(2).map(|p| p[1] / p[0].max(1e-9)).collect()
}

/// Time the local search and the propagation (from the grid center) on
/// square grids of the given sides.
pub fn measure_grid_scaling(sides: &[usize], repeats: usize, config: &FinderConfig) -> Result<ScalingReport> {
    let mut points = Vec::with_capacity(sides.len());
    for &side in sides {
        let g = Graph::grid(side, side);
        let v0 = g.center_vertex().expect("non-empty grid");
        let (local_seconds, locals) = best_of(repeats, || find_all_kernel_moves(&g, config))?;
        let (propagate_seconds, _) = best_of(repeats, || {
            let moves = kernel_moves(&locals, MoveCost::Kernel);
            propagate_moves(&g, &moves, v0)
        })?;
        points.push(ScalingPoint { side, n: g.n(), local_seconds, propagate_seconds });
    }
    let local_ratios = ratios(points.iter().map(|p| p.local_seconds));
    let propagate_ratios = ratios(points.iter().map(|p| p.propagate_seconds));
    let pass = local_ratios.iter().chain(&propagate_ratios).all(|&r| r <= MAX_RATIO);
    Ok(ScalingReport {
        threads: rayon::current_num_threads(),
        repeats: repeats.max(1),
        points,
        local_ratios,
        propagate_ratios,
        max_ratio: MAX_RATIO,
        pass,
    })
}
