#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn gcf() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gcf"));
    cmd.env_remove("GCF_THREADS");
    cmd
}

pub fn run_in(dir: &Path, args: &[&str]) -> Output {
    gcf().current_dir(dir).args(args).output().expect("gcf runs")
}

pub fn ok(dir: &Path, args: &[&str]) -> String {
    let out = run_in(dir, args);
    assert!(
        out.status.success(),
        "gcf {args:?} failed with {:?}\nstdout:\n{}\nstderr:\n{}",
        out.status.code(),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Every regular file under `dir`, sorted, with its bytes.
pub fn snapshot(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut files = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                files.push((p.strip_prefix(dir).unwrap().to_path_buf(), std::fs::read(&p).unwrap()));
            }
        }
    }
    files.sort();
    files
}

/// `m` samples of a smooth random field on an `h × w` grid: white noise
/// averaged over each pixel's plus-shaped neighborhood.
pub fn smooth_grid_signals(h: usize, w: usize, m: usize, seed: u64) -> Vec<Vec<f64>> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..m)
        .map(|_| {
            let z: Vec<f64> = (0..h * w).map(|_| rng.gen_range(-1.0..1.0)).collect();
            (0..h * w)
                .map(|v| {
                    let (i, j) = ((v / w) as isize, (v % w) as isize);
                    [(0, 0), (-1, 0), (1, 0), (0, -1), (0, 1)]
                        .iter()
                        .filter_map(|&(dy, dx)| {
                            let (a, b) = (i + dy, j + dx);
                            (a >= 0 && b >= 0 && a < h as isize && b < w as isize)
                                .then(|| z[a as usize * w + b as usize])
                        })
                        .sum()
                })
                .collect()
        })
        .collect()
}

pub fn write_csv(path: &Path, rows: &[Vec<f64>]) {
    let text: String =
        rows.iter().map(|r| r.iter().map(|v| format!("{v}")).collect::<Vec<_>>().join(",") + "\n").collect();
    std::fs::write(path, text).unwrap();
}
