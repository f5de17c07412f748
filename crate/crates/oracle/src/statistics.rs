/// Sample covariance by direct double summation, divisor `m - 1`.
pub fn oracle_covariance(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let m = rows.len();
    assert!(m >= 2);
    let n = rows[0].len();
    let mut mean = vec![0.0; n];
    for j in 0..n {
        for row in rows {
            mean[j] += row[j];
        }
        mean[j] /= m as f64;
    }
    let mut cov = vec![vec![0.0; n]; n];
    for j in 0..n {
        for k in 0..n {
            let mut acc = 0.0;
            for row in rows {
                acc += (row[j] - mean[j]) * (row[k] - mean[k]);
            }
            cov[j][k] = acc / (m as f64 - 1.0);
        }
    }
    cov
}

/// Union of every vertex's `k` best-scoring partners, found by fully sorting
/// each row (descending score, ascending id on ties). Edges come back as
/// sorted `(u, v)` pairs with `u < v`.
pub fn oracle_knn_edges(scores: &[Vec<f64>], k: usize) -> Vec<(usize, usize)> {
    let n = scores.len();
    let mut edges = Vec::new();
    for (i, row) in scores.iter().enumerate() {
        let mut others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        others.sort_by(|&a, &b| row[b].partial_cmp(&row[a]).unwrap().then(a.cmp(&b)));
        for &j in others.iter().take(k) {
            edges.push((i.min(j), i.max(j)));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    edges
}
