//! Dynamic time warping with absolute-difference local cost, and the
//! similarity score used to assess augmentation quality.
//!
//! The similarity `1 / (1 + distance / max(len_a, len_b))` maps a distance
//! to `(0, 1]`: it is 1 exactly when the distance is 0 and decreases
//! monotonically with distance. Dividing by the longer length keeps scores
//! comparable across series lengths. DTW is not a metric (no triangle
//! inequality), but it is symmetric and non-negative.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::batch::Batch;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DtwResult {
    /// Accumulated local cost along `path`.
    pub distance: f64,
    /// Optimal alignment from `(0, 0)` to `(len_a - 1, len_b - 1)`.
    pub path: Vec<(usize, usize)>,
    pub similarity: f64,
}

fn check(a: &[f64], b: &[f64]) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidInput("DTW needs two non-empty series".into()));
    }
    Ok(())
}

pub fn similarity_from_distance(distance: f64, len_a: usize, len_b: usize) -> f64 {
    1.0 / (1.0 + distance / len_a.max(len_b) as f64)
}

/// Full DTW with the optimal path. Uses `O(len_a * len_b)` memory.
///
/// Backtracking prefers the diagonal step, then a step in `a` only, then a
/// step in `b` only when predecessors tie.
pub fn dtw_distance(a: &[f64], b: &[f64]) -> Result<DtwResult> {
    check(a, b)?;
    let (n, m) = (a.len(), b.len());
    let mut acc = vec![0.0_f64; n * m];
    let at = |i: usize, j: usize| i * m + j;
    for i in 0..n {
        for j in 0..m {
            let cost = (a[i] - b[j]).abs();
            let prev = match (i, j) {
                (0, 0) => 0.0,
                (0, _) => acc[at(0, j - 1)],
                (_, 0) => acc[at(i - 1, 0)],
                _ => acc[at(i - 1, j - 1)]
                    .min(acc[at(i - 1, j)])
                    .min(acc[at(i, j - 1)]),
            };
            acc[at(i, j)] = cost + prev;
        }
    }

    let mut path = vec![(n - 1, m - 1)];
    let (mut i, mut j) = (n - 1, m - 1);
    while (i, j) != (0, 0) {
        (i, j) = match (i, j) {
            (0, _) => (0, j - 1),
            (_, 0) => (i - 1, 0),
            _ => {
                let (d, up, left) = (acc[at(i - 1, j - 1)], acc[at(i - 1, j)], acc[at(i, j - 1)]);
                if d <= up && d <= left {
                    (i - 1, j - 1)
                } else if up <= left {
                    (i - 1, j)
                } else {
                    (i, j - 1)
                }
            }
        };
        path.push((i, j));
    }
    path.reverse();

    let distance = acc[at(n - 1, m - 1)];
    Ok(DtwResult {
        distance,
        path,
        similarity: similarity_from_distance(distance, n, m),
    })
}

/// DTW distance only, in `O(min(len_a, len_b))` memory.
pub fn dtw_cost(a: &[f64], b: &[f64]) -> Result<f64> {
    check(a, b)?;
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut prev = vec![f64::INFINITY; short.len()];
    let mut row = vec![0.0; short.len()];
    for (i, &x) in long.iter().enumerate() {
        for (j, &y) in short.iter().enumerate() {
            let best = match (i, j) {
                (0, 0) => 0.0,
                (_, 0) => prev[0],
                (0, _) => row[j - 1],
                _ => prev[j - 1].min(prev[j]).min(row[j - 1]),
            };
            row[j] = (x - y).abs() + best;
        }
        std::mem::swap(&mut prev, &mut row);
    }
    Ok(prev[short.len() - 1])
}

pub fn dtw_similarity(a: &[f64], b: &[f64]) -> Result<f64> {
    Ok(similarity_from_distance(dtw_cost(a, b)?, a.len(), b.len()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairQuality {
    pub distance: f64,
    pub similarity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualityReport {
    pub pairs: Vec<PairQuality>,
    pub mean_distance: f64,
    pub mean_similarity: f64,
}

/// Pairs series `i` of `original` with series `i` of `augmented` and scores
/// each pair. Series lengths may differ between the batches.
pub fn assess_quality(original: &Batch, augmented: &Batch, parallel: bool) -> Result<QualityReport> {
    if original.n() != augmented.n() {
        return Err(Error::InvalidInput(format!(
            "batches hold {} and {} series",
            original.n(),
            augmented.n()
        )));
    }
    let score = |i: usize| -> PairQuality {
        let (a, b) = (original.series(i), augmented.series(i));
        let distance = dtw_cost(a, b).expect("batch series are non-empty");
        PairQuality {
            distance,
            similarity: similarity_from_distance(distance, a.len(), b.len()),
        }
    };
    let pairs: Vec<PairQuality> = if parallel {
        (0..original.n()).into_par_iter().map(score).collect()
    } else {
        (0..original.n()).map(score).collect()
    };
    let n = pairs.len() as f64;
    Ok(QualityReport {
        mean_distance: pairs.iter().map(|p| p.distance).sum::<f64>() / n,
        mean_similarity: pairs.iter().map(|p| p.similarity).sum::<f64>() / n,
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_distance_is_zero() {
        let x = [1.0, -3.0, 2.5, 2.5, 0.0];
        let r = dtw_distance(&x, &x).unwrap();
        assert_eq!(r.distance, 0.0);
        assert_eq!(r.similarity, 1.0);
        assert_eq!(r.path, (0..5).map(|i| (i, i)).collect::<Vec<_>>());
    }

    #[test]
    fn duplicate_point_is_absorbed() {
        let r = dtw_distance(&[1.0, 2.0, 3.0], &[1.0, 2.0, 2.0, 3.0]).unwrap();
        assert_eq!(r.distance, 0.0);
        assert_eq!(r.path, vec![(0, 0), (1, 1), (1, 2), (2, 3)]);
    }

    #[test]
    fn single_cell() {
        let r = dtw_distance(&[0.0], &[5.0]).unwrap();
        assert_eq!(r.distance, 5.0);
        assert_eq!(r.path, vec![(0, 0)]);
        assert_eq!(r.similarity, 1.0 / 6.0);
    }

    #[test]
    fn empty_rejected() {
        assert!(dtw_distance(&[], &[1.0]).is_err());
        assert!(dtw_cost(&[1.0], &[]).is_err());
    }

    #[test]
    fn path_shape_and_cost() {
        let a = [0.0, 2.0, 1.0, 4.0, -1.0, 3.0];
        let b = [1.0, 1.0, 3.0, 0.0];
        let r = dtw_distance(&a, &b).unwrap();
        assert_eq!(r.path[0], (0, 0));
        assert_eq!(*r.path.last().unwrap(), (5, 3));
        for w in r.path.windows(2) {
            let step = (w[1].0 - w[0].0, w[1].1 - w[0].1);
            assert!([(1, 0), (0, 1), (1, 1)].contains(&step));
        }
        let sum: f64 = r.path.iter().map(|&(i, j)| (a[i] - b[j]).abs()).sum();
        assert!((sum - r.distance).abs() < 1e-12);
        assert_eq!(dtw_cost(&a, &b).unwrap(), r.distance);
        assert_eq!(dtw_cost(&b, &a).unwrap(), r.distance);
    }

    #[test]
    fn similarity_is_monotone() {
        let s: Vec<f64> = [0.0, 0.5, 1.0, 10.0, 1e6].iter().map(|&d| similarity_from_distance(d, 10, 12)).collect();
        assert_eq!(s[0], 1.0);
        assert!(s.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn quality_report() {
        let a = Batch::from_rows(&[[0.0, 1.0, 2.0], [1.0, 1.0, 1.0]]).unwrap();
        let r = assess_quality(&a, &a, false).unwrap();
        assert!(r.pairs.iter().all(|p| p.similarity == 1.0));
        assert_eq!(r.mean_similarity, 1.0);
        let b = Batch::from_rows(&[[0.0, 1.0]]).unwrap();
        assert!(assess_quality(&a, &b, false).is_err());
    }
}
