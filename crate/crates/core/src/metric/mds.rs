//! Classical multidimensional scaling.

use super::DistanceMatrix;
use crate::error::{Error, Result};
use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

/// Points in a 3D embedding; unused trailing axes are zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddedPointCloud {
    /// Original event index of each point.
    pub event_indices: Vec<usize>,
    pub coords: Vec<[f64; 3]>,
    /// Kruskal stress-1 of the embedding against the input distances.
    pub stress: f64,
}

impl EmbeddedPointCloud {
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn distances(&self) -> DistanceMatrix {
        DistanceMatrix::euclidean(&self.coords)
    }
}

/// Embeds `dist` into `dim ≤ 3` dimensions by double centering and the top
/// eigenpairs of the Gram matrix. Negative eigenvalues are clamped to zero.
pub fn mds_embed(
    dist: &DistanceMatrix,
    dim: usize,
    event_indices: Vec<usize>,
) -> Result<EmbeddedPointCloud> {
    let n = dist.len();
    if !(1..=3).contains(&dim) {
        return Err(Error::InvalidArgument(format!(
            "embedding dimension {dim} not in 1..=3"
        )));
    }
    if event_indices.len() != n {
        return Err(Error::InvalidArgument(
            "one event index per point required".into(),
        ));
    }
    if !dist.is_finite() {
        return Err(Error::InvalidArgument(
            "cannot embed a metric with unreachable pairs".into(),
        ));
    }
    if n == 0 {
        return Ok(EmbeddedPointCloud {
            event_indices,
            coords: Vec::new(),
            stress: 0.0,
        });
    }

    let sq = DMatrix::from_fn(n, n, |i, j| dist.get(i, j).powi(2));
    let row_mean: Vec<f64> = (0..n).map(|i| sq.row(i).sum() / n as f64).collect();
    let total_mean = row_mean.iter().sum::<f64>() / n as f64;
    let gram = DMatrix::from_fn(n, n, |i, j| {
        -0.5 * (sq[(i, j)] - row_mean[i] - row_mean[j] + total_mean)
    });

    let eig = SymmetricEigen::new(gram);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let mut coords = vec![[0.0; 3]; n];
    for (axis, &k) in order.iter().take(dim).enumerate() {
        let scale = eig.eigenvalues[k].max(0.0).sqrt();
        for (i, c) in coords.iter_mut().enumerate() {
            c[axis] = eig.eigenvectors[(i, k)] * scale;
        }
    }

    let cloud_dist = DistanceMatrix::euclidean(&coords);
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..n {
        for j in (i + 1)..n {
            num += (cloud_dist.get(i, j) - dist.get(i, j)).powi(2);
            den += dist.get(i, j).powi(2);
        }
    }
    let stress = if den > 0.0 { (num / den).sqrt() } else { 0.0 };
    Ok(EmbeddedPointCloud {
        event_indices,
        coords,
        stress,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equilateral_triangle() {
        let d = DistanceMatrix::from_fn(3, |_, _| 1.0);
        let e = mds_embed(&d, 3, vec![0, 1, 2]).unwrap();
        let r = e.distances();
        for i in 0..3 {
            for j in (i + 1)..3 {
                assert!((r.get(i, j) - 1.0).abs() < 1e-9);
            }
        }
        assert!(e.stress < 1e-9);
    }

    #[test]
    fn collinear_points_use_one_axis() {
        let pts: Vec<[f64; 1]> = (0..10).map(|i| [i as f64 * 0.7]).collect();
        let e = mds_embed(&DistanceMatrix::euclidean(&pts), 3, (0..10).collect()).unwrap();
        for axis in 1..3 {
            let var: f64 = e.coords.iter().map(|c| c[axis] * c[axis]).sum::<f64>() / 10.0;
            assert!(var < 1e-12, "axis {axis} variance {var}");
        }
    }

    #[test]
    fn all_zero_metric_collapses() {
        let e = mds_embed(&DistanceMatrix::from_fn(4, |_, _| 0.0), 3, vec![0, 1, 2, 3]).unwrap();
        assert!(e.coords.iter().all(|c| c.iter().all(|x| x.abs() < 1e-12)));
        assert_eq!(e.stress, 0.0);
    }

    #[test]
    fn infinite_entries_are_rejected() {
        let d = DistanceMatrix::from_fn(2, |_, _| f64::INFINITY);
        assert!(mds_embed(&d, 3, vec![0, 1]).is_err());
    }
}
