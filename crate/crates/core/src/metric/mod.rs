//! Encounter graph, its shortest-path metric, subsampling and MDS embedding.

pub mod graph;
pub mod mds;
pub mod paths;
pub mod subsample;

pub use graph::{build_graph, EncounterGraph};
pub use mds::{mds_embed, EmbeddedPointCloud};
pub use paths::{shortest_paths, MetricMatrix, UNREACHABLE};
pub use subsample::{density_radius_at, subsample, MetricRows, Subsample};

use crate::error::{Error, Result};

/// Dense symmetric matrix of non-negative distances; `f64::INFINITY` marks
/// unreachable pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::InvalidArgument(format!(
                "expected {} entries, got {}",
                n * n,
                data.len()
            )));
        }
        Ok(Self { n, data })
    }

    /// Builds a symmetric matrix from `f(i, j)` evaluated for `i < j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = f(i, j);
                data[i * n + j] = d;
                data[j * n + i] = d;
            }
        }
        Self { n, data }
    }

    /// Euclidean distances between points given as coordinate slices.
    pub fn euclidean<P: AsRef<[f64]>>(points: &[P]) -> Self {
        Self::from_fn(points.len(), |i, j| {
            points[i]
                .as_ref()
                .iter()
                .zip(points[j].as_ref())
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn submatrix(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), |a, b| self.get(idx[a], idx[b]))
    }

    /// Largest finite entry (0 for fewer than two points).
    pub fn diameter(&self) -> f64 {
        self.data
            .iter()
            .copied()
            .filter(|d| d.is_finite())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|d| d.is_finite())
    }

    /// Checks symmetry, zero diagonal and non-negativity.
    pub fn check_basic(&self) -> Result<()> {
        for i in 0..self.n {
            if self.get(i, i) != 0.0 {
                return Err(Error::InvalidArgument(format!("non-zero diagonal at {i}")));
            }
            for j in 0..self.n {
                let d = self.get(i, j);
                if !(d >= 0.0) || d != self.get(j, i) {
                    return Err(Error::InvalidArgument(format!(
                        "entry ({i}, {j}) = {d} is negative or asymmetric"
                    )));
                }
            }
        }
        Ok(())
    }
}
