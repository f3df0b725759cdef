//! Single-linkage clustering of inter-domain clouds.

use super::seam::InterDomainCloud;
use crate::error::{Error, Result};
use crate::metric::DistanceMatrix;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// One agglomeration step in SciPy linkage layout: clusters `a` and `b`
/// (ids `< n` are points, `n + k` is the cluster made by merge `k`) joined at
/// `height` into a cluster of `size` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub a: usize,
    pub b: usize,
    pub height: f64,
    pub size: usize,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
}

/// Single-linkage dendrogram via a minimum spanning tree (Prim, O(n²)).
pub fn single_linkage(dist: &DistanceMatrix) -> Vec<Merge> {
    let n = dist.len();
    if n < 2 {
        return Vec::new();
    }
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut from = vec![0usize; n];
    let mut tree = Vec::with_capacity(n - 1);
    in_tree[0] = true;
    for v in 1..n {
        best[v] = dist.get(0, v);
    }
    for _ in 1..n {
        let mut next = usize::MAX;
        for v in 0..n {
            if !in_tree[v] && (next == usize::MAX || best[v] < best[next]) {
                next = v;
            }
        }
        in_tree[next] = true;
        tree.push((best[next], from[next], next));
        for v in 0..n {
            if !in_tree[v] && dist.get(next, v) < best[v] {
                best[v] = dist.get(next, v);
                from[v] = next;
            }
        }
    }
    tree.sort_by(|x, y| x.0.total_cmp(&y.0));

    let mut uf = UnionFind::new(n);
    let mut cluster_id: Vec<usize> = (0..n).collect();
    let mut size = vec![1usize; n];
    let mut merges = Vec::with_capacity(n - 1);
    for (h, u, v) in tree {
        let (ru, rv) = (uf.find(u), uf.find(v));
        let (a, b) = (
            cluster_id[ru].min(cluster_id[rv]),
            cluster_id[ru].max(cluster_id[rv]),
        );
        uf.parent[rv] = ru;
        size[ru] += size[rv];
        cluster_id[ru] = n + merges.len();
        merges.push(Merge {
            a,
            b,
            height: h,
            size: size[ru],
        });
    }
    merges
}

/// Flat clusters from merges with `height ≤ cutoff`; labels are numbered by
/// first occurrence in point order.
pub fn cut_dendrogram(merges: &[Merge], n: usize, cutoff: f64) -> Vec<usize> {
    let mut uf = UnionFind::new(2 * n);
    for (k, m) in merges.iter().enumerate() {
        let c = n + k;
        if m.height <= cutoff {
            uf.parent[m.a] = c;
            uf.parent[m.b] = c;
        }
    }
    let mut relabel: BTreeMap<usize, usize> = BTreeMap::new();
    (0..n)
        .map(|p| {
            let r = uf.find(p);
            let next = relabel.len();
            *relabel.entry(r).or_insert(next)
        })
        .collect()
}

/// Cluster assignment of one joining static agent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StaticLabel {
    pub agent: u32,
    /// Majority cluster of the agent's events (ties to the lower label).
    pub label: Option<usize>,
    /// The agent's events fall into more than one cluster.
    pub ambiguous: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    pub cutoff: f64,
    /// Cluster label of each cloud point.
    pub labels: Vec<usize>,
    pub cluster_count: usize,
    pub merges: Vec<Merge>,
    pub static_labels: Vec<StaticLabel>,
}

/// Single-linkage clusters of a seam cloud cut at `cutoff` seconds.
pub fn cluster_connections(cloud: &InterDomainCloud, cutoff: f64) -> Result<Clustering> {
    if cloud.is_empty() {
        return Err(Error::Empty("inter-domain cloud"));
    }
    if !(cutoff >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "cluster cutoff must be non-negative, got {cutoff}"
        )));
    }
    let metric = cloud
        .metric
        .as_ref()
        .ok_or(Error::Empty("correspondence metric"))?;
    let merges = single_linkage(metric);
    let labels = cut_dendrogram(&merges, cloud.len(), cutoff);
    let cluster_count = labels.iter().max().map_or(0, |m| m + 1);

    let mut static_labels = Vec::with_capacity(cloud.join_set.len());
    for &s in &cloud.join_set {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for (p, owners) in cloud.owners.iter().enumerate() {
            if owners.contains(&s) {
                *counts.entry(labels[p]).or_default() += 1;
            }
        }
        let label = counts
            .iter()
            .max_by(|x, y| x.1.cmp(y.1).then(y.0.cmp(x.0)))
            .map(|(&l, _)| l);
        static_labels.push(StaticLabel {
            agent: s,
            label,
            ambiguous: counts.len() > 1,
        });
    }
    Ok(Clustering {
        cutoff,
        labels,
        cluster_count,
        merges,
        static_labels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_example() {
        let d = DistanceMatrix::euclidean(&[[0.0], [1.0], [10.0], [11.0]]);
        let m = single_linkage(&d);
        assert_eq!(m.len(), 3);
        assert_eq!(m[2].height, 9.0);
        assert_eq!(m[2].size, 4);
        assert_eq!(cut_dendrogram(&m, 4, 5.0), vec![0, 0, 1, 1]);
        assert_eq!(cut_dendrogram(&m, 4, 100.0), vec![0, 0, 0, 0]);
        assert_eq!(cut_dendrogram(&m, 4, 0.5), vec![0, 1, 2, 3]);
    }

    #[test]
    fn scipy_layout() {
        let d = DistanceMatrix::euclidean(&[[0.0], [1.0], [10.0], [11.0]]);
        let m = single_linkage(&d);
        assert_eq!((m[0].a, m[0].b, m[0].size), (0, 1, 2));
        assert_eq!((m[1].a, m[1].b, m[1].size), (2, 3, 2));
        assert_eq!((m[2].a, m[2].b), (4, 5));
    }

    #[test]
    fn infinite_distances_never_merge() {
        let d = DistanceMatrix::from_fn(3, |i, j| if i + j == 1 { 2.0 } else { f64::INFINITY });
        let m = single_linkage(&d);
        assert!(m[1].height.is_infinite());
        assert_eq!(cut_dendrogram(&m, 3, 1e300), vec![0, 0, 1]);
    }

    #[test]
    fn majority_and_ambiguity() {
        let d = DistanceMatrix::euclidean(&[[0.0], [1.0], [10.0], [11.0], [12.0]]);
        let cloud = InterDomainCloud {
            seam: 1,
            join_set: vec![7, 8],
            event_indices: vec![0, 1, 2, 3, 4],
            owners: vec![vec![7], vec![7], vec![8], vec![8], vec![7]],
            metric: Some(d),
        };
        let c = cluster_connections(&cloud, 5.0).unwrap();
        assert_eq!(c.cluster_count, 2);
        assert_eq!(
            c.static_labels[0],
            StaticLabel {
                agent: 7,
                label: Some(0),
                ambiguous: true
            }
        );
        assert_eq!(
            c.static_labels[1],
            StaticLabel {
                agent: 8,
                label: Some(1),
                ambiguous: false
            }
        );
    }
}
