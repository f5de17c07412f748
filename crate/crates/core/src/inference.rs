//! k-nearest-covariance graph inference from training signals.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::signals::SignalMatrix;

pub const DEFAULT_K: usize = 4;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Statistic {
    #[default]
    Covariance,
    /// Covariance normalized by both standard deviations; constant columns
    /// get 0 against everything.
    Correlation,
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "covariance" => Ok(Statistic::Covariance),
            "correlation" => Ok(Statistic::Correlation),
            other => Err(Error::InvalidParameter(format!("unknown statistic {other:?}"))),
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Statistic::Covariance => "covariance",
            Statistic::Correlation => "correlation",
        })
    }
}

/// Sample covariance (divisor m − 1) between columns.
pub fn covariance_matrix(s: &SignalMatrix) -> Result<Vec<Vec<f64>>> {
    let (m, n) = (s.m(), s.n());
    if m < 2 {
        return Err(Error::NotEnoughSamples(m));
    }
    if let Some(i) = s.values().iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { row: i / n, col: i % n });
    }
    let mut mean = vec![0.0; n];
    for row in s.rows() {
        for (acc, v) in mean.iter_mut().zip(row) {
            *acc += v;
        }
    }
    mean.iter_mut().for_each(|v| *v /= m as f64);
    // Column-major centered copy keeps the inner products contiguous.
    let centered: Vec<Vec<f64>> = (0..n).map(|j| s.rows().map(|row| row[j] - mean[j]).collect()).collect();
    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (i..n)
                .map(|j| centered[i].iter().zip(&centered[j]).map(|(a, b)| a * b).sum::<f64>() / (m - 1) as f64)
                .collect()
        })
        .collect();
    let mut cov = vec![vec![0.0; n]; n];
    for (i, row) in upper.into_iter().enumerate() {
        for (off, v) in row.into_iter().enumerate() {
            cov[i][i + off] = v;
            cov[i + off][i] = v;
        }
    }
    Ok(cov)
}

pub fn correlation_matrix(s: &SignalMatrix) -> Result<Vec<Vec<f64>>> {
    let mut c = covariance_matrix(s)?;
    let sd: Vec<f64> = (0..c.len()).map(|i| c[i][i].sqrt()).collect();
    for (i, row) in c.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            let denom = sd[i] * sd[j];
            *v = if denom > 0.0 { *v / denom } else { 0.0 };
        }
    }
    Ok(c)
}

pub fn score_matrix(s: &SignalMatrix, statistic: Statistic) -> Result<Vec<Vec<f64>>> {
    match statistic {
        Statistic::Covariance => covariance_matrix(s),
        Statistic::Correlation => correlation_matrix(s),
    }
}

/// The `k` other vertices with the largest score in row `i`, ties broken by
/// ascending id.
pub fn top_k(scores: &[f64], i: usize, k: usize) -> Vec<usize> {
    let by_score = |a: &usize, b: &usize| -> Ordering { scores[*b].total_cmp(&scores[*a]).then(a.cmp(b)) };
    let mut others: Vec<usize> = (0..scores.len()).filter(|&j| j != i).collect();
    if k < others.len() {
        others.select_nth_unstable_by(k, by_score);
        others.truncate(k);
    }
    others.sort_unstable_by(by_score);
    others
}

/// Union of every vertex's top-`k` selection.
pub fn knn_graph(scores: &[Vec<f64>], k: usize) -> Result<Graph> {
    let n = scores.len();
    if k == 0 || k >= n {
        return Err(Error::InvalidNeighborCount { k, n });
    }
    let selections: Vec<Vec<usize>> = (0..n).into_par_iter().map(|i| top_k(&scores[i], i, k)).collect();
    let mut edges: Vec<(usize, usize)> =
        selections.iter().enumerate().flat_map(|(i, sel)| sel.iter().map(move |&j| (i.min(j), i.max(j)))).collect();
    edges.sort_unstable();
    edges.dedup();
    Graph::from_edges(n, &edges)
}

/// Graph keeping, for each vertex, the `k` vertices it covaries with most.
/// The result may be disconnected; callers decide whether that is fatal.
pub fn knn_covariance_graph(s: &SignalMatrix, k: usize, statistic: Statistic) -> Result<Graph> {
    if k == 0 || k >= s.n() {
        return Err(Error::InvalidNeighborCount { k, n: s.n() });
    }
    knn_graph(&score_matrix(s, statistic)?, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_rows_have_zero_covariance() {
        let s = SignalMatrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![1.0, 2.0, 3.0]]).unwrap();
        assert!(covariance_matrix(&s).unwrap().iter().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn equal_columns_covary_like_variance() {
        let s = SignalMatrix::from_rows(&[vec![1.0, 1.0, 0.0], vec![4.0, 4.0, 2.0], vec![2.0, 2.0, 7.0]]).unwrap();
        let c = covariance_matrix(&s).unwrap();
        assert_eq!(c[0][1], c[0][0]);
    }

    #[test]
    fn too_few_samples() {
        let s = SignalMatrix::from_rows(&[vec![1.0, 2.0]]).unwrap();
        assert!(matches!(covariance_matrix(&s).unwrap_err(), Error::NotEnoughSamples(1)));
    }

    #[test]
    fn dominant_pairs_with_k1() {
        let s = SignalMatrix::from_rows(&[
            vec![1.0, 1.0, -1.0, -1.0],
            vec![-1.0, -1.0, 1.0, 1.0],
            vec![2.0, 2.0, 0.0, 0.0],
        ])
        .unwrap();
        let g = knn_covariance_graph(&s, 1, Statistic::Covariance).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (2, 3)]);
    }

    #[test]
    fn ties_break_by_id() {
        assert_eq!(top_k(&[0.0, 1.0, 1.0, 1.0], 0, 2), vec![1, 2]);
        assert_eq!(top_k(&[5.0, 1.0, 1.0, 3.0], 0, 2), vec![3, 1]);
    }

    #[test]
    fn invalid_k() {
        let s = SignalMatrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(knn_covariance_graph(&s, 2, Statistic::Covariance).is_err());
        assert!(knn_covariance_graph(&s, 0, Statistic::Covariance).is_err());
    }

    #[test]
    fn correlation_of_constant_column_is_zero() {
        let s = SignalMatrix::from_rows(&[vec![1.0, 5.0, 2.0], vec![2.0, 5.0, 4.0], vec![3.0, 5.0, 7.0]]).unwrap();
        let c = correlation_matrix(&s).unwrap();
        assert_eq!(c[0][1], 0.0);
        assert!((c[0][0] - 1.0).abs() < 1e-12);
        assert!(c[0][2] > 0.9);
    }
}
