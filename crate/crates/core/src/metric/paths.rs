//! Shortest-path (geodesic) distances on the encounter graph.

use super::graph::EncounterGraph;
use super::subsample::MetricRows;
use super::DistanceMatrix;
use rayon::prelude::*;
use std::cmp::Reverse;
use std::collections::BinaryHeap;

/// Distance marker for pairs in different components.
pub const UNREACHABLE: u64 = u64::MAX;

impl EncounterGraph {
    /// Dijkstra from vertex `source`; entries are steps, one per event vertex.
    pub fn distances_from(&self, source: usize) -> Vec<u64> {
        let mut dist = self.dijkstra(source, UNREACHABLE);
        dist.truncate(self.len());
        dist
    }

    /// Number of event vertices within `limit` steps of `source`, itself included.
    pub fn count_within(&self, source: usize, limit: u64) -> usize {
        let dist = self.dijkstra(source, limit);
        dist[..self.len()].iter().filter(|&&d| d <= limit).count()
    }

    /// Dijkstra over the auxiliary graph, not expanding beyond `limit`.
    fn dijkstra(&self, source: usize, limit: u64) -> Vec<u64> {
        let mut dist = vec![UNREACHABLE; self.node_count()];
        let mut heap = BinaryHeap::new();
        dist[source] = 0;
        heap.push(Reverse((0u64, source)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            for (v, w) in self.neighbors(u) {
                let nd = d + w;
                if nd < dist[v] && nd <= limit {
                    dist[v] = nd;
                    heap.push(Reverse((nd, v)));
                }
            }
        }
        dist
    }
}

/// All-pairs shortest-path matrix in integer steps of `unit` seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricMatrix {
    n: usize,
    steps: Vec<u64>,
    unit: f64,
}

impl MetricMatrix {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn unit(&self) -> f64 {
        self.unit
    }

    /// Distance in steps, [`UNREACHABLE`] across components.
    #[inline]
    pub fn steps(&self, i: usize, j: usize) -> u64 {
        self.steps[i * self.n + j]
    }

    /// Distance in seconds, infinite across components.
    pub fn seconds(&self, i: usize, j: usize) -> f64 {
        match self.steps(i, j) {
            UNREACHABLE => f64::INFINITY,
            s => s as f64 * self.unit,
        }
    }

    pub fn to_seconds(&self) -> DistanceMatrix {
        DistanceMatrix::from_fn(self.n, |i, j| self.seconds(i, j))
    }
}

/// All-pairs shortest paths by Dijkstra from every vertex.
pub fn shortest_paths(graph: &EncounterGraph) -> MetricMatrix {
    let n = graph.len();
    let rows: Vec<Vec<u64>> = (0..n)
        .into_par_iter()
        .map(|s| graph.distances_from(s))
        .collect();
    MetricMatrix {
        n,
        steps: rows.concat(),
        unit: graph.unit(),
    }
}

/// The encounter metric restricted to a set of vertices (typically one
/// connected component), evaluated lazily row by row.
pub struct GraphRows<'g> {
    graph: &'g EncounterGraph,
    members: Vec<usize>,
}

impl<'g> GraphRows<'g> {
    pub fn new(graph: &'g EncounterGraph, members: Vec<usize>) -> Self {
        Self { graph, members }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }
}

impl MetricRows for GraphRows<'_> {
    fn len(&self) -> usize {
        self.members.len()
    }

    fn row(&self, i: usize) -> Vec<f64> {
        let d = self.graph.distances_from(self.members[i]);
        let unit = self.graph.unit();
        self.members
            .iter()
            .map(|&m| match d[m] {
                UNREACHABLE => f64::INFINITY,
                s => s as f64 * unit,
            })
            .collect()
    }

    fn count_within(&self, i: usize, radius: f64) -> usize {
        // Members of a component are exactly the vertices reachable from it;
        // for an arbitrary member set count only those.
        let limit = (radius / self.graph.unit() + 1e-9).floor() as u64;
        let d = self.graph.dijkstra(self.members[i], limit);
        self.members.iter().filter(|&&m| d[m] <= limit).count()
    }
}
