mod common;

use common::*;
use gcf_core::grid::{shift_map, KERNEL_OFFSETS};
use gcf_core::proxy::ProxyFamily;
use gcf_core::scheme::ConvScheme;
use gcf_core::signals::SignalMatrix;
use gcf_core::Graph;
use serde_json::Value;

#[test]
fn six_by_five_family_has_the_four_shifts() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["grid", "6", "5", "-o", "g.json"]);
    ok(d, &["find-translations", "--graph", "g.json", "-o", "f.json"]);
    let f = ProxyFamily::load(d.join("f.json")).unwrap();
    assert_eq!(f.kappa, 5);
    for (p, &(dy, dx)) in KERNEL_OFFSETS.iter().enumerate() {
        assert_eq!(f.psi[p], shift_map(6, 5, dy, dx));
    }
}

#[test]
fn verify_grid_reports() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for (h, w) in [("6", "5"), ("3", "3")] {
        let out = ok(d, &["verify-grid", h, w]);
        assert!(out.lines().last().unwrap().starts_with("PASS"), "{out}");
        let out = ok(d, &["verify-grid", h, w, "--stride", "2"]);
        assert!(out.lines().last().unwrap().starts_with("PASS"), "{out}");
    }
    let report: Value = serde_json::from_str(&ok(d, &["verify-grid", "4", "4", "--json"])).unwrap();
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn corrupted_scheme_fails_with_first_row() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["grid", "6", "5", "-o", "g.json"]);
    ok(d, &["find-translations", "--graph", "g.json", "-o", "f.json"]);
    ok(d, &["build-scheme", "--family", "f.json", "-o", "s.json"]);
    ok(d, &["verify-grid", "6", "5", "--scheme", "s.json"]);

    let mut s = ConvScheme::load(d.join("s.json")).unwrap();
    s.index[7][2] = s.index[7][3];
    s.index[9][1] = None;
    s.save_json(d.join("bad.json")).unwrap();
    let out = run_in(d, &["verify-grid", "6", "5", "--scheme", "bad.json"]);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("FAIL"));
    assert!(stderr(&out).contains("first mismatching row 7 (vertex 7)"), "{}", stderr(&out));
}

#[test]
fn infer_graph_usage_and_validation() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write_csv(&d.join("x.csv"), &smooth_grid_signals(2, 4, 40, 1));
    let out = run_in(d, &["infer-graph", "--signals", "x.csv", "--k", "8", "-o", "g.json"]);
    assert_eq!(code(&out), 2);
    let out = run_in(d, &["infer-graph", "--signals", "missing.csv", "-o", "g.json"]);
    assert_eq!(code(&out), 2);

    // two independent blocks of perfectly correlated columns
    write_csv(
        &d.join("blocks.csv"),
        &[vec![1.0, 1.0, 0.0, 0.0], vec![-1.0, -1.0, 2.0, 2.0], vec![0.5, 0.5, -2.0, -2.0]],
    );
    let out = run_in(d, &["infer-graph", "--signals", "blocks.csv", "--k", "1", "-o", "g.json"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("component 1"));
    ok(d, &["infer-graph", "--signals", "blocks.csv", "--k", "1", "--allow-disconnected", "-o", "g.json"]);
    assert_eq!(std::fs::read_to_string(d.join("g.json")).unwrap(), "{\"n\":4,\"edges\":[[0,1],[2,3]]}\n");
}

#[test]
fn infer_graph_matches_library_and_channel_average() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let rows = smooth_grid_signals(4, 4, 200, 3);
    write_csv(&d.join("x.csv"), &rows);
    ok(d, &["infer-graph", "--signals", "x.csv", "-o", "g.json"]);
    let g = Graph::load(d.join("g.json")).unwrap();
    assert_eq!(g.n(), 16);
    let s = SignalMatrix::from_rows(&rows).unwrap();
    let expected = gcf_core::inference::knn_covariance_graph(&s, 4, Default::default()).unwrap();
    assert_eq!(g, expected);

    // Three identical channels average back to the same signals.
    let tripled: Vec<Vec<f64>> = rows.iter().map(|r| [r.as_slice(), r, r].concat()).collect();
    write_csv(&d.join("rgb.csv"), &tripled);
    ok(d, &["infer-graph", "--signals", "rgb.csv", "--average-channels", "3", "-o", "g3.json"]);
    assert_eq!(Graph::load(d.join("g3.json")).unwrap(), g);
    let out = run_in(d, &["infer-graph", "--signals", "rgb.csv", "--average-channels", "5", "-o", "g5.json"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn auto_seed_winner_is_the_best_explicit_seed() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let edges = gcf_oracle::random_connected_graph(14, 8, 21);
    Graph::from_edges(14, &edges).unwrap().save(d.join("g.json")).unwrap();
    let out = run_in(d, &["find-translations", "--graph", "g.json", "--auto", "5", "--rng-seed", "3", "-o", "f.json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let log = stderr(&out);
    let seeds: Vec<usize> = log
        .lines()
        .filter_map(|l| l.strip_prefix("seed ").and_then(|r| r.split(':').next()).map(|v| v.parse().unwrap()))
        .collect();
    let selected: usize = log.lines().find_map(|l| l.strip_prefix("selected seed ")).unwrap().parse().unwrap();
    assert!(seeds.len() >= 5);

    let mut best = None;
    for &v in &seeds {
        let name = format!("f{v}.json");
        ok(d, &["find-translations", "--graph", "g.json", "--seed", &v.to_string(), "-o", &name]);
        let f = ProxyFamily::load(d.join(&name)).unwrap();
        let key = (f.unreached().len(), std::cmp::Reverse(f.kappa), f.total_cost(), f.bottom_count(), v);
        best = best.min(Some(key)).or(Some(key));
    }
    assert_eq!(best.unwrap().4, selected);
    assert_eq!(std::fs::read(d.join("f.json")).unwrap(), std::fs::read(d.join(format!("f{selected}.json"))).unwrap());
}

#[test]
fn chained_pipeline_on_16x16() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["grid", "16", "16", "-o", "g.json"]);
    ok(d, &["find-translations", "--graph", "g.json", "-o", "f.json"]);
    ok(d, &["build-scheme", "--family", "f.json", "-o", "s.json"]);
    ok(d, &["verify-grid", "16", "16", "--scheme", "s.json"]);
    let summary = ok(
        d,
        &[
            "downscale",
            "--graph",
            "g.json",
            "--family",
            "f.json",
            "--stride",
            "2",
            "--stride",
            "2",
            "--out-dir",
            "levels",
        ],
    );
    assert!(summary.contains("level 1: r=2 kept=128"));
    assert!(summary.contains("level 2: r=2 kept=34"));
    for name in ["plan", "strided", "scheme", "graph", "family"] {
        for level in [1, 2] {
            assert!(d.join(format!("levels/level{level}_{name}.json")).exists());
        }
    }
    // The strided layer still has grid ids and unit arms.
    ok(d, &["verify-grid", "16", "16", "--scheme", "levels/level1_strided.json"]);
    // Level-1 schemes rebuilt through the CLI from the level family agree with the stored one.
    ok(d, &["build-scheme", "--family", "levels/level1_family.json", "-o", "s1.json"]);
    let stored = ConvScheme::load(d.join("levels/level1_scheme.json")).unwrap();
    let rebuilt = ConvScheme::load(d.join("s1.json")).unwrap();
    assert_eq!(stored.index, rebuilt.index);
}

#[test]
fn stride_one_keeps_everything() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["grid", "4", "5", "-o", "g.json"]);
    ok(d, &["find-translations", "--graph", "g.json", "-o", "f.json"]);
    let out = ok(d, &["downscale", "--graph", "g.json", "--family", "f.json", "--stride", "1", "--out-dir", "l"]);
    assert!(out.contains("kept=20"));
    ok(d, &["build-scheme", "--family", "f.json", "-o", "s.json"]);
    let plain = ConvScheme::load(d.join("s.json")).unwrap();
    let strided = ConvScheme::load(d.join("l/level1_strided.json")).unwrap();
    assert_eq!(plain.index, strided.index);
    let run = run_in(d, &["downscale", "--graph", "g.json", "--family", "f.json", "--stride", "0", "--out-dir", "l"]);
    assert_eq!(code(&run), 2);
}

#[test]
fn stats_match_library() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["grid", "5", "7", "-o", "g.json"]);
    ok(d, &["find-translations", "--graph", "g.json", "-o", "f.json"]);
    ok(d, &["build-scheme", "--family", "f.json", "--binary", "-o", "s.bin"]);
    let printed: Value = serde_json::from_str(&ok(d, &["stats", "--scheme", "s.bin"])).unwrap();
    let s = ConvScheme::load(d.join("s.bin")).unwrap();
    assert_eq!(printed["scheme"], serde_json::to_value(s.stats()).unwrap());
    assert_eq!(code(&run_in(d, &["stats"])), 2);
}

#[test]
fn augment_writes_requested_format() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["grid", "3", "4", "-o", "g.json"]);
    ok(d, &["find-translations", "--graph", "g.json", "-o", "f.json"]);
    write_csv(&d.join("x.csv"), &smooth_grid_signals(3, 4, 6, 2));
    ok(d, &["augment", "--signals", "x.csv", "--family", "f.json", "--indices", "1,4", "--draws", "2", "-o", "y.gsig"]);
    let y = SignalMatrix::load(d.join("y.gsig")).unwrap();
    assert_eq!((y.m(), y.n()), (18, 12));
    assert!(std::fs::read(d.join("y.gsig")).unwrap().starts_with(b"GSIG"));
    ok(d, &["augment", "--signals", "x.csv", "--family", "f.json", "--fill", "-1", "-o", "y.csv"]);
    assert_eq!(SignalMatrix::load(d.join("y.csv")).unwrap().m(), 12);
    let bad = run_in(d, &["augment", "--signals", "x.csv", "--family", "f.json", "--indices", "7", "-o", "z.csv"]);
    assert_eq!(code(&bad), 2);
}

#[test]
fn thread_settings() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["grid", "3", "3", "-o", "g.json"]);
    let out = gcf().current_dir(d).env("GCF_THREADS", "many").args(["verify-grid", "3", "3"]).output().unwrap();
    assert_eq!(code(&out), 2);
    let out = gcf()
        .current_dir(d)
        .env("GCF_THREADS", "2")
        .args(["--threads", "0", "verify-grid", "3", "3"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "GCF_THREADS overrides --threads");
    assert_eq!(code(&run_in(d, &["--threads", "0", "verify-grid", "3", "3"])), 2);
}

#[test]
fn dense_graph_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let edges: Vec<(usize, usize)> = (1..70).map(|v| (0, v)).collect();
    Graph::from_edges(70, &edges).unwrap().save(d.join("star.json")).unwrap();
    let out = run_in(d, &["find-translations", "--graph", "star.json", "-o", "f.json"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("too dense"));
    Graph::from_edges(3, &[(0, 1)]).unwrap().save(d.join("split.json")).unwrap();
    assert_eq!(code(&run_in(d, &["find-translations", "--graph", "split.json", "-o", "f.json"])), 3);
}
