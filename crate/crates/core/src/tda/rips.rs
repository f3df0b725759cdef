use crate::error::{Error, Result};
use crate::metric::DistanceMatrix;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// A simplex of dimension ≤ 2 with ascending vertex labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Simplex {
    Vertex(u32),
    Edge(u32, u32),
    Triangle(u32, u32, u32),
}

impl Simplex {
    pub fn dim(&self) -> usize {
        match self {
            Simplex::Vertex(_) => 0,
            Simplex::Edge(..) => 1,
            Simplex::Triangle(..) => 2,
        }
    }

    pub fn vertices(&self) -> Vec<u32> {
        match *self {
            Simplex::Vertex(a) => vec![a],
            Simplex::Edge(a, b) => vec![a, b],
            Simplex::Triangle(a, b, c) => vec![a, b, c],
        }
    }

    fn padded(&self) -> [u32; 3] {
        match *self {
            Simplex::Vertex(a) => [a, 0, 0],
            Simplex::Edge(a, b) => [a, b, 0],
            Simplex::Triangle(a, b, c) => [a, b, c],
        }
    }

    /// Codimension-one faces.
    pub fn faces(&self) -> Vec<Simplex> {
        match *self {
            Simplex::Vertex(_) => Vec::new(),
            Simplex::Edge(a, b) => vec![Simplex::Vertex(a), Simplex::Vertex(b)],
            Simplex::Triangle(a, b, c) => vec![
                Simplex::Edge(a, b),
                Simplex::Edge(a, c),
                Simplex::Edge(b, c),
            ],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiltrationEntry {
    pub simplex: Simplex,
    pub value: f64,
}

impl FiltrationEntry {
    /// Filtration order: value, then dimension, then vertex tuple.
    pub fn order(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then(self.simplex.dim().cmp(&other.simplex.dim()))
            .then_with(|| self.simplex.padded().cmp(&other.simplex.padded()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RipsFiltration {
    pub vertex_count: usize,
    pub max_epsilon: f64,
    /// Entries in filtration order; faces precede cofaces.
    pub entries: Vec<FiltrationEntry>,
}

impl RipsFiltration {
    pub fn count_dim(&self, dim: usize) -> usize {
        self.entries
            .iter()
            .filter(|e| e.simplex.dim() == dim)
            .count()
    }
}

/// Rips complex up to triangles with all edges of length ≤ `max_epsilon`.
pub fn rips_filtration(dist: &DistanceMatrix, max_epsilon: f64) -> Result<RipsFiltration> {
    if !(max_epsilon >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "max epsilon must be non-negative, got {max_epsilon}"
        )));
    }
    let n = dist.len();
    let mut entries: Vec<FiltrationEntry> = (0..n as u32)
        .map(|v| FiltrationEntry {
            simplex: Simplex::Vertex(v),
            value: 0.0,
        })
        .collect();
    let mut nbr = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = dist.get(i, j);
            if d <= max_epsilon {
                entries.push(FiltrationEntry {
                    simplex: Simplex::Edge(i as u32, j as u32),
                    value: d,
                });
                nbr[i].push(j);
            }
        }
    }
    for i in 0..n {
        for (x, &j) in nbr[i].iter().enumerate() {
            for &k in &nbr[i][x + 1..] {
                if nbr[j].binary_search(&k).is_ok() {
                    let value = dist.get(i, j).max(dist.get(i, k)).max(dist.get(j, k));
                    entries.push(FiltrationEntry {
                        simplex: Simplex::Triangle(i as u32, j as u32, k as u32),
                        value,
                    });
                }
            }
        }
    }
    entries.sort_unstable_by(FiltrationEntry::order);
    Ok(RipsFiltration {
        vertex_count: n,
        max_epsilon,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_points() {
        let d = DistanceMatrix::euclidean(&[[0.0], [1.0]]);
        let f = rips_filtration(&d, 2.0).unwrap();
        assert_eq!((f.count_dim(0), f.count_dim(1), f.count_dim(2)), (2, 1, 0));
        assert_eq!(f.entries[2].value, 1.0);
    }

    #[test]
    fn unit_square() {
        let d = DistanceMatrix::euclidean(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
        let f = rips_filtration(&d, 2.0).unwrap();
        let edges: Vec<f64> = f
            .entries
            .iter()
            .filter(|e| e.simplex.dim() == 1)
            .map(|e| e.value)
            .collect();
        assert_eq!(edges.iter().filter(|&&v| v == 1.0).count(), 4);
        assert_eq!(edges.iter().filter(|&&v| v == 2f64.sqrt()).count(), 2);
        assert_eq!(f.count_dim(2), 4);
        assert!(f
            .entries
            .iter()
            .filter(|e| e.simplex.dim() == 2)
            .all(|e| e.value == 2f64.sqrt()));
    }

    #[test]
    fn zero_epsilon_keeps_vertices_only() {
        let d = DistanceMatrix::euclidean(&[[0.0], [1.0], [3.0]]);
        let f = rips_filtration(&d, 0.0).unwrap();
        assert_eq!(f.entries.len(), 3);
        assert!(rips_filtration(&d, -1.0).is_err());
    }
}
