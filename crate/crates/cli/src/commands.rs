use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use gcf_core::augment::{augment_dataset, injective_indices, AugmentationSpec};
use gcf_core::downscale::downscale_chain;
use gcf_core::grid::{first_scheme_mismatch, verify_grid as run_verify_grid};
use gcf_core::inference::knn_covariance_graph;
use gcf_core::proxy::{auto_seed_candidates, propagate_best, ProxyFamily};
use gcf_core::scaling::measure_grid_scaling;
use gcf_core::scheme::{compile_scheme, ConvScheme};
use gcf_core::signals::{SignalFormat, SignalMatrix};
use gcf_core::translation::{find_all_kernel_moves, FinderConfig, LocalTranslationDump};
use gcf_core::{Error, Graph, VertexSet};
use serde_json::json;

use crate::exit::CheckFailed;
use crate::{
    AugmentArgs, BuildSchemeArgs, DownscaleArgs, FindTranslationsArgs, GridArgs, InferGraphArgs, StatsArgs,
    VerifyGridArgs,
};

fn load_graph(path: &Path) -> Result<Graph> {
    Graph::load(path).with_context(|| format!("reading graph {}", path.display()))
}

fn load_family(path: &Path) -> Result<ProxyFamily> {
    ProxyFamily::load(path).with_context(|| format!("reading family {}", path.display()))
}

fn load_signals(path: &Path) -> Result<SignalMatrix> {
    SignalMatrix::load(path).with_context(|| format!("reading signals {}", path.display()))
}

fn write(path: &Path, bytes: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

pub fn infer_graph(a: InferGraphArgs) -> Result<()> {
    let mut s = load_signals(&a.signals)?;
    if let Some(c) = a.average_channels {
        s = s.average_channels(c)?;
    }
    let g = knn_covariance_graph(&s, a.k, a.statistic)?;
    write(&a.out, g.to_json())?;
    println!("graph: n={} edges={} max_degree={}", g.n(), g.edge_count(), g.max_degree());
    let components = g.connected_components();
    if components.len() > 1 {
        for (i, c) in components.iter().enumerate() {
            eprintln!("component {i}: {} vertices, first {:?}", c.len(), &c.as_slice()[..c.len().min(8)]);
        }
        if !a.allow_disconnected {
            return Err(
                Error::Disconnected { components: components.into_iter().map(VertexSet::into_vec).collect() }.into()
            );
        }
    }
    Ok(())
}

pub fn find_translations(a: FindTranslationsArgs) -> Result<()> {
    let g = load_graph(&a.graph)?;
    g.require_connected()?;
    let config = FinderConfig { max_context: a.search.max_context };
    let locals = find_all_kernel_moves(&g, &config)?;
    if let Some(path) = &a.dump_locals {
        let dump: Vec<LocalTranslationDump> = locals.iter().map(LocalTranslationDump::from).collect();
        write(path, serde_json::to_string(&dump)? + "\n")?;
    }
    let candidates = match (a.seed, a.auto) {
        (Some(seeds), _) => {
            for &v in &seeds {
                g.check_vertex(v)?;
            }
            seeds
        }
        (None, Some(count)) => auto_seed_candidates(&g, count, a.rng_seed),
        (None, None) => vec![g.center_vertex().ok_or(Error::EmptyVertexSet)?],
    };
    let (f, scores) = propagate_best(&g, &locals, &candidates, a.search.move_cost)?;
    if scores.len() > 1 {
        for s in &scores {
            eprintln!(
                "seed {}: unreached={} kappa={} total_cost={} bottoms={}",
                s.v0, s.unreached, s.kappa, s.total_cost, s.bottoms
            );
        }
        eprintln!("selected seed {}", f.v0);
    }
    let unreached = f.unreached();
    if !unreached.is_empty() {
        eprintln!("warning: {} vertices unreached by propagation: {:?}", unreached.len(), unreached);
    }
    write(&a.out, f.to_json())?;
    println!("family: kappa={} v0={} total_cost={} bottoms={}", f.kappa, f.v0, f.total_cost(), f.bottom_count());
    Ok(())
}

fn save_scheme(s: &ConvScheme, path: &Path, binary: bool) -> Result<()> {
    if binary {
        write(path, s.to_binary())
    } else {
        write(path, s.to_json())
    }
}

pub fn build_scheme(a: BuildSchemeArgs) -> Result<()> {
    let f = load_family(&a.family)?;
    let out = match a.vertices {
        Some(v) => VertexSet::new(v),
        None => VertexSet::all(f.n()),
    };
    let s = compile_scheme(&f, &out)?;
    save_scheme(&s, &a.out, a.binary)?;
    let st = s.stats();
    println!("scheme: rows={} kappa={} bottoms={} fill_ratio={:.6}", st.rows, st.kappa, st.bottoms, st.fill_ratio);
    Ok(())
}

pub fn downscale(a: DownscaleArgs) -> Result<()> {
    if let Some(&r) = a.stride.iter().find(|&&r| r == 0) {
        return Err(Error::InvalidParameter(format!("stride {r} must be at least 1")).into());
    }
    let g = load_graph(&a.graph)?;
    let f = load_family(&a.family)?;
    if f.n() != g.n() {
        return Err(Error::ShapeMismatch { what: "family vertices", expected: g.n(), got: f.n() }.into());
    }
    fs::create_dir_all(&a.out_dir).with_context(|| format!("creating {}", a.out_dir.display()))?;
    let ext = if a.binary { "bin" } else { "json" };
    for (k, level) in downscale_chain(&g, &f, &a.stride)?.iter().enumerate() {
        let name = |what: &str, ext: &str| a.out_dir.join(format!("level{}_{what}.{ext}", k + 1));
        write(&name("plan", "json"), level.plan.to_json())?;
        save_scheme(&level.strided, &name("strided", ext), a.binary)?;
        save_scheme(&level.scheme, &name("scheme", ext), a.binary)?;
        write(&name("graph", "json"), level.level.graph.to_json())?;
        write(&name("family", "json"), level.level.family.to_json())?;
        let uncovered = level.plan.uncovered();
        if !uncovered.is_empty() {
            eprintln!("warning: level {}: kept vertices never covered: {:?}", k + 1, uncovered);
        }
        println!(
            "level {}: r={} kept={} edges={} induced_defined={}",
            k + 1,
            level.plan.r,
            level.plan.kept.len(),
            level.level.graph.edge_count(),
            level.plan.induced.iter().flatten().flatten().count()
        );
    }
    Ok(())
}

pub fn augment(a: AugmentArgs) -> Result<()> {
    let s = load_signals(&a.signals)?;
    let f = load_family(&a.family)?;
    let spec = AugmentationSpec {
        indices: a.indices.unwrap_or_else(|| (1..f.kappa).collect()),
        repetitions: a.reps,
        fill: a.fill,
        draws: a.draws,
    };
    let out = augment_dataset(&s, &f, &spec, a.seed).map_err(|e| match e {
        Error::NonInjective { .. } => {
            let usable = injective_indices(&f, spec.repetitions);
            anyhow::Error::from(e).context(format!("injective indices at --reps {}: {usable:?}", spec.repetitions))
        }
        e => e.into(),
    })?;
    out.save(&a.out, SignalFormat::from_path(&a.out)).with_context(|| format!("writing {}", a.out.display()))?;
    println!("augmented: {} rows -> {} rows", s.m(), out.m());
    Ok(())
}

pub fn verify_grid(a: VerifyGridArgs) -> Result<()> {
    let (h, w) = (a.height, a.width);
    if let Some(path) = &a.scheme {
        let s = ConvScheme::load(path).with_context(|| format!("reading scheme {}", path.display()))?;
        return match first_scheme_mismatch(h, w, &s, a.dilation) {
            None => {
                println!("PASS {h}x{w} scheme {} ({} rows)", path.display(), s.rows());
                Ok(())
            }
            Some(m) => {
                println!("FAIL {h}x{w} scheme {}", path.display());
                Err(CheckFailed(format!(
                    "first mismatching row {} (vertex {}): expected {:?}, got {:?}",
                    m.row, m.vertex, m.expected, m.got
                ))
                .into())
            }
        };
    }
    let config = FinderConfig { max_context: a.search.max_context };
    let report = run_verify_grid(h, w, a.stride, a.seed, &config, a.search.move_cost)?;
    if a.json {
        println!("{}", serde_json::to_string(&report)?);
    } else {
        for c in &report.checks {
            println!("{:<16} {}  {}", c.name, if c.pass { "ok" } else { "FAIL" }, c.detail);
        }
        println!("{} {h}x{w} stride {} seed {}", if report.pass() { "PASS" } else { "FAIL" }, a.stride, report.v0);
    }
    if report.pass() {
        Ok(())
    } else {
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
        Err(CheckFailed(format!("grid checks failed: {}", failed.join(", "))).into())
    }
}

pub fn stats(a: StatsArgs) -> Result<()> {
    let mut any = false;
    if let Some(path) = &a.graph {
        let g = load_graph(path)?;
        let comps = g.connected_components();
        let v = json!({
            "n": g.n(),
            "edges": g.edge_count(),
            "max_degree": g.max_degree(),
            "components": comps.len(),
        });
        println!("{}", json!({ "graph": v }));
        any = true;
    }
    if let Some(path) = &a.family {
        let f = load_family(path)?;
        println!("{}", json!({ "family": f.score(), "kappa": f.kappa }));
        any = true;
    }
    if let Some(path) = &a.scheme {
        let s = ConvScheme::load(path).with_context(|| format!("reading scheme {}", path.display()))?;
        println!("{}", json!({ "scheme": s.stats() }));
        any = true;
    }
    if a.scaling {
        let report = measure_grid_scaling(&a.sides, a.repeats, &FinderConfig::default())?;
        println!("{}", json!({ "scaling": report }));
        any = true;
    }
    if !any {
        return Err(
            Error::InvalidParameter("nothing to report: pass --graph, --family, --scheme or --scaling".into()).into()
        );
    }
    Ok(())
}

pub fn grid(a: GridArgs) -> Result<()> {
    let g = Graph::grid(a.height, a.width);
    write(&a.out, g.to_json())?;
    println!("graph: n={} edges={}", g.n(), g.edge_count());
    Ok(())
}
