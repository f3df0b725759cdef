//! Gluing local maps into a graph of components.

use super::linkage::Clustering;
use super::local::LocalMap;
use super::seam::InterDomainCloud;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Seam output: the cloud joining windows `seam` and `seam + 1` and its clusters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeamResult {
    pub seam: usize,
    pub cloud: InterDomainCloud,
    /// `None` when the cloud is empty.
    pub clustering: Option<Clustering>,
}

/// A component of one local map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapNode {
    pub window: usize,
    pub component: usize,
    pub event_count: usize,
    pub robust_components: usize,
    pub robust_holes: usize,
}

/// A connection cluster joining components of consecutive maps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapEdge {
    pub seam: usize,
    pub cluster: usize,
    /// Node indices into [`GlobalMap::nodes`].
    pub from: usize,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalMap {
    pub nodes: Vec<MapNode>,
    pub edges: Vec<MapEdge>,
    /// Connected components of the node graph.
    pub graph_components: usize,
    /// Independent cycles of the node graph, `E − V + C`.
    pub cycle_rank: usize,
    /// Robust holes summed over all local components.
    pub local_holes: usize,
    pub betti0: usize,
    pub betti1: usize,
    pub warnings: Vec<String>,
}

fn majority(votes: impl Iterator<Item = usize>) -> Option<usize> {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for v in votes {
        *counts.entry(v).or_default() += 1;
    }
    counts
        .iter()
        .max_by(|x, y| x.1.cmp(y.1).then(y.0.cmp(x.0)))
        .map(|(&l, _)| l)
}

fn components(n: usize, edges: &[MapEdge]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut count = n;
    for e in edges {
        let (a, b) = (find(&mut parent, e.from), find(&mut parent, e.to));
        if a != b {
            parent[b] = a;
            count -= 1;
        }
    }
    count
}

/// Stitches local maps through the clustered seam connections. Each cluster
/// becomes one edge between the majority components of its events on either
/// side; events owned only by ambiguous static agents do not vote.
pub fn stitch(local_maps: &[LocalMap], seams: &[SeamResult]) -> Result<GlobalMap> {
    if local_maps.is_empty() {
        return Err(Error::Empty("local map list"));
    }
    let mut maps: Vec<&LocalMap> = local_maps.iter().collect();
    maps.sort_by_key(|m| m.window);
    let mut seams: Vec<&SeamResult> = seams.iter().collect();
    seams.sort_by_key(|s| s.seam);

    let mut warnings = Vec::new();
    let mut nodes = Vec::new();
    let mut node_id: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut by_window: BTreeMap<usize, &LocalMap> = BTreeMap::new();
    for m in &maps {
        by_window.insert(m.window, m);
        if m.degenerate {
            warnings.push(format!(
                "window {}: no component large enough to map",
                m.window
            ));
        }
        for c in &m.components {
            node_id.insert((m.window, c.label), nodes.len());
            nodes.push(MapNode {
                window: m.window,
                component: c.label,
                event_count: c.event_indices.len(),
                robust_components: c.report.robust_components,
                robust_holes: c.report.robust_holes,
            });
        }
    }

    let mut edges = Vec::new();
    for s in seams {
        let (Some(left), Some(right)) = (by_window.get(&s.seam), by_window.get(&(s.seam + 1)))
        else {
            warnings.push(format!("seam {}: adjacent local map missing", s.seam));
            continue;
        };
        let Some(cl) = &s.clustering else {
            warnings.push(format!(
                "seam {}: no joining static agents; maps {} and {} left unconnected",
                s.seam,
                s.seam,
                s.seam + 1
            ));
            continue;
        };
        let ambiguous: Vec<u32> = cl
            .static_labels
            .iter()
            .filter(|l| l.ambiguous)
            .map(|l| l.agent)
            .collect();
        let before = edges.len();
        for cluster in 0..cl.cluster_count {
            let usable: Vec<usize> = (0..s.cloud.len())
                .filter(|&p| cl.labels[p] == cluster)
                .filter(|&p| {
                    let owners = &s.cloud.owners[p];
                    owners.is_empty() || owners.iter().any(|o| !ambiguous.contains(o))
                })
                .map(|p| s.cloud.event_indices[p])
                .collect();
            let l = majority(usable.iter().filter_map(|&e| left.component_of(e)));
            let r = majority(usable.iter().filter_map(|&e| right.component_of(e)));
            match (l, r) {
                (Some(l), Some(r)) => edges.push(MapEdge {
                    seam: s.seam,
                    cluster,
                    from: node_id[&(s.seam, l)],
                    to: node_id[&(s.seam + 1, r)],
                }),
                _ => warnings.push(format!(
                    "seam {} cluster {cluster}: no events inside mapped components on both sides",
                    s.seam
                )),
            }
        }
        if edges.len() == before {
            warnings.push(format!(
                "seam {}: maps {} and {} left unconnected",
                s.seam,
                s.seam,
                s.seam + 1
            ));
        }
    }

    let graph_components = components(nodes.len(), &edges);
    let cycle_rank = edges.len() + graph_components - nodes.len();
    let local_holes = nodes.iter().map(|n| n.robust_holes).sum();
    Ok(GlobalMap {
        betti0: graph_components,
        betti1: cycle_rank + local_holes,
        nodes,
        edges,
        graph_components,
        cycle_rank,
        local_holes,
        warnings,
    })
}
