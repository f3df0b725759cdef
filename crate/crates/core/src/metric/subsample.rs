//! Density-filtered farthest-point (MaxMin) subsampling.

use super::DistanceMatrix;
use crate::error::{Error, Result};
use rayon::prelude::*;

/// Row access to a finite metric space; rows may be computed on demand.
pub trait MetricRows: Sync {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Distances from point `i` to every point.
    fn row(&self, i: usize) -> Vec<f64>;

    /// Points within `radius` of point `i`, itself included.
    fn count_within(&self, i: usize, radius: f64) -> usize {
        self.row(i).iter().filter(|&&d| d <= radius).count()
    }
}

impl MetricRows for DistanceMatrix {
    fn len(&self) -> usize {
        DistanceMatrix::len(self)
    }

    fn row(&self, i: usize) -> Vec<f64> {
        DistanceMatrix::row(self, i).to_vec()
    }
}

/// Rows used to estimate the density radius.
const RADIUS_SAMPLE_ROWS: usize = 64;

/// Percentile of positive distances used as the default density radius.
pub const DENSITY_RADIUS_PERCENTILE: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct Subsample {
    /// Selected point indices, ascending.
    pub indices: Vec<usize>,
    /// Distances among the selected points, in `indices` order.
    pub matrix: DistanceMatrix,
    /// Points dropped by the density filter, ascending.
    pub discarded: Vec<usize>,
    pub density_radius: f64,
    /// Largest distance from a surviving unselected point to the selection.
    pub covering_radius: f64,
}

/// Nearest-rank percentile of the positive finite values.
fn positive_percentile(values: impl Iterator<Item = f64>, p: f64) -> f64 {
    let mut v: Vec<f64> = values.filter(|d| *d > 0.0 && d.is_finite()).collect();
    if v.is_empty() {
        return 0.0;
    }
    v.sort_by(f64::total_cmp);
    let rank = ((p * v.len() as f64).ceil() as usize).clamp(1, v.len());
    v[rank - 1]
}

/// Estimates the density radius from up to 64 evenly spaced rows (all rows
/// for small inputs).
pub fn density_radius<M: MetricRows + ?Sized>(metric: &M) -> f64 {
    density_radius_at(metric, DENSITY_RADIUS_PERCENTILE)
}

/// As [`density_radius`], at percentile `p` of the positive distances.
pub fn density_radius_at<M: MetricRows + ?Sized>(metric: &M, p: f64) -> f64 {
    let n = metric.len();
    let sources: Vec<usize> = if n <= RADIUS_SAMPLE_ROWS {
        (0..n).collect()
    } else {
        (0..RADIUS_SAMPLE_ROWS)
            .map(|k| k * n / RADIUS_SAMPLE_ROWS)
            .collect()
    };
    let rows: Vec<Vec<f64>> = sources.par_iter().map(|&s| metric.row(s)).collect();
    positive_percentile(rows.into_iter().flatten(), p)
}

/// Drops the `density_quantile` fraction of points with the fewest neighbors
/// within the density radius, then picks `target` points greedily, each
/// maximizing its distance to those already picked.
///
/// The first pick is the survivor farthest from the lowest-index survivor.
/// Ties go to the lower index. `target` is clamped to the survivor count.
pub fn subsample<M: MetricRows + ?Sized>(
    metric: &M,
    target: usize,
    density_quantile: f64,
    radius: Option<f64>,
) -> Result<Subsample> {
    if target == 0 {
        return Err(Error::InvalidArgument(
            "subsample target must be positive".into(),
        ));
    }
    let n = metric.len();
    if n == 0 {
        return Err(Error::Empty("point set"));
    }
    if !(0.0..1.0).contains(&density_quantile) {
        return Err(Error::InvalidArgument(format!(
            "density quantile {density_quantile} not in [0, 1)"
        )));
    }

    let cut = (density_quantile * n as f64).floor() as usize;
    let (rho, discarded) = if cut == 0 {
        (radius.unwrap_or(0.0), Vec::new())
    } else {
        let rho = radius.unwrap_or_else(|| density_radius(metric));
        let density: Vec<usize> = (0..n)
            .into_par_iter()
            .map(|i| metric.count_within(i, rho))
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (density[i], i));
        let mut dropped = order[..cut].to_vec();
        dropped.sort_unstable();
        (rho, dropped)
    };
    let mut alive = vec![true; n];
    for &d in &discarded {
        alive[d] = false;
    }
    let survivors: Vec<usize> = (0..n).filter(|&i| alive[i]).collect();
    let target = target.min(survivors.len());

    let argmax = |mind: &[f64], taken: &[bool]| {
        let mut best: Option<usize> = None;
        for &i in &survivors {
            if taken[i] {
                continue;
            }
            if best.is_none_or(|b| mind[i] > mind[b]) {
                best = Some(i);
            }
        }
        best
    };

    let mut taken = vec![false; n];
    let mut picks = Vec::with_capacity(target);
    let mut rows = Vec::with_capacity(target);
    let r0 = metric.row(survivors[0]);
    let first = argmax(&r0, &taken).unwrap_or(survivors[0]);
    let mut mind = vec![f64::INFINITY; n];
    let mut next = Some(first);
    while picks.len() < target {
        let Some(p) = next else { break };
        taken[p] = true;
        let row = metric.row(p);
        for (m, d) in mind.iter_mut().zip(&row) {
            *m = m.min(*d);
        }
        picks.push(p);
        rows.push(row);
        next = argmax(&mind, &taken);
    }
    let covering_radius = survivors
        .iter()
        .filter(|&&i| !taken[i])
        .map(|&i| mind[i])
        .fold(0.0, f64::max);

    let mut order: Vec<usize> = (0..picks.len()).collect();
    order.sort_by_key(|&k| picks[k]);
    let indices: Vec<usize> = order.iter().map(|&k| picks[k]).collect();
    let matrix = DistanceMatrix::from_fn(indices.len(), |a, b| rows[order[a]][indices[b]]);
    Ok(Subsample {
        indices,
        matrix,
        discarded,
        density_radius: rho,
        covering_radius,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_target_without_filter_is_identity() {
        let pts: Vec<[f64; 2]> = (0..12).map(|i| [i as f64, (i * i) as f64 * 0.1]).collect();
        let m = DistanceMatrix::euclidean(&pts);
        let s = subsample(&m, 12, 0.0, None).unwrap();
        assert_eq!(s.indices, (0..12).collect::<Vec<_>>());
        assert_eq!(s.matrix, m);
        assert_eq!(s.covering_radius, 0.0);
    }

    #[test]
    fn square_corners_win_over_center() {
        let pts = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [0.5, 0.5]];
        let s = subsample(&DistanceMatrix::euclidean(&pts), 4, 0.0, None).unwrap();
        assert_eq!(s.indices, vec![0, 1, 2, 3]);
    }

    #[test]
    fn zero_target_is_an_error() {
        let m = DistanceMatrix::euclidean(&[[0.0], [1.0]]);
        assert!(subsample(&m, 0, 0.0, None).is_err());
    }

    #[test]
    fn percentile_is_nearest_rank() {
        let v = (1..=100).map(f64::from);
        assert_eq!(positive_percentile(v, 0.05), 5.0);
        assert_eq!(positive_percentile([0.0, 0.0].into_iter(), 0.05), 0.0);
    }

    #[test]
    fn radius_percentile_reads_all_small_rows() {
        // Positive distances on a line of 4 points: 1 ×6, 2 ×4, 3 ×2.
        let m = DistanceMatrix::euclidean(&[[0.0], [1.0], [2.0], [3.0]]);
        assert_eq!(density_radius_at(&m, 0.5), 1.0);
        assert_eq!(density_radius_at(&m, 0.75), 2.0);
        assert_eq!(density_radius_at(&m, 1.0), 3.0);
        assert_eq!(density_radius(&m), 1.0);
    }
}
