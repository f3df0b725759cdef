//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use proptest::prelude::*;
use swarmtopo::sim::{EncounterEvent, StaticIntervalLog};

/// `(dim, birth, death)` triples sorted for multiset comparison.
pub type Pairs = Vec<(usize, f64, f64)>;

pub fn sorted_pairs(mut v: Pairs) -> Pairs {
    v.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then(a.1.total_cmp(&b.1))
            .then(a.2.total_cmp(&b.2))
    });
    v
}

pub fn diagram_pairs(d: &swarmtopo::tda::PersistenceDiagram) -> Pairs {
    sorted_pairs(d.bars.iter().map(|b| (b.dim, b.birth, b.death)).collect())
}

/// Persistence of the Rips complex (up to triangles) of a dense metric,
/// by textbook column reduction of the full boundary matrix over Z/2.
/// Ties are broken by reverse-lexicographic vertex order, unlike the library.
pub fn naive_persistence(d: &[Vec<f64>], max_eps: f64) -> Pairs {
    let n = d.len();
    let mut simplices: Vec<(f64, Vec<usize>)> = (0..n).map(|v| (0.0, vec![v])).collect();
    for i in 0..n {
        for j in i + 1..n {
            if d[i][j] <= max_eps {
                simplices.push((d[i][j], vec![i, j]));
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let v = d[i][j].max(d[i][k]).max(d[j][k]);
                if d[i][j] <= max_eps && d[i][k] <= max_eps && d[j][k] <= max_eps {
                    simplices.push((v, vec![i, j, k]));
                }
            }
        }
    }
    simplices.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then(a.1.len().cmp(&b.1.len()))
            .then_with(|| b.1.iter().rev().cmp(a.1.iter().rev()))
    });
    let m = simplices.len();
    let position = |verts: &[usize]| simplices.iter().position(|s| s.1 == verts).unwrap();
    let mut columns: Vec<Vec<bool>> = vec![vec![false; m]; m];
    for (c, (_, verts)) in simplices.iter().enumerate() {
        if verts.len() > 1 {
            for skip in 0..verts.len() {
                let face: Vec<usize> = verts
                    .iter()
                    .enumerate()
                    .filter(|&(p, _)| p != skip)
                    .map(|(_, &v)| v)
                    .collect();
                columns[c][position(&face)] = true;
            }
        }
    }
    let low = |col: &[bool]| col.iter().rposition(|&x| x);
    let mut low_owner: Vec<Option<usize>> = vec![None; m];
    for c in 0..m {
        while let Some(l) = low(&columns[c]) {
            match low_owner[l] {
                Some(prev) => {
                    let other = columns[prev].clone();
                    for (x, y) in columns[c].iter_mut().zip(other) {
                        *x ^= y;
                    }
                }
                None => {
                    low_owner[l] = Some(c);
                    break;
                }
            }
        }
    }
    let mut out = Vec::new();
    for s in 0..m {
        let dim = simplices[s].1.len() - 1;
        if dim > 1 {
            continue;
        }
        let birth = simplices[s].0;
        match low_owner[s] {
            Some(c) => {
                let death = simplices[c].0;
                if death > birth {
                    out.push((dim, birth, death));
                }
            }
            None if low(&columns[s]).is_none() => out.push((dim, birth, f64::INFINITY)),
            None => {}
        }
    }
    sorted_pairs(out)
}

/// Connected components of the graph with an edge wherever `d ≤ eps`.
pub fn threshold_components(d: &[Vec<f64>], eps: f64) -> Vec<usize> {
    let n = d.len();
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        label[s] = next;
        while let Some(u) = stack.pop() {
            for v in 0..n {
                if label[v] == usize::MAX && d[u][v] <= eps {
                    label[v] = next;
                    stack.push(v);
                }
            }
        }
        next += 1;
    }
    label
}

/// True when two labelings induce the same partition.
pub fn same_partition(a: &[usize], b: &[usize]) -> bool {
    a.len() == b.len()
        && (0..a.len()).all(|i| (0..a.len()).all(|j| (a[i] == a[j]) == (b[i] == b[j])))
}

/// Zeroing rule for the explicit graph oracle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Zero {
    None,
    Strict,
    Same,
}

/// All-pairs shortest paths in ticks on the explicit event graph, by
/// Floyd-Warshall. `None` marks unreachable pairs.
pub fn explicit_metric(
    ticks: &[(u64, u64, u32, u32)],
    spans: &[(u32, u64, u64)],
    zero: Zero,
) -> Vec<Vec<Option<u64>>> {
    let n = ticks.len();
    let mut d = vec![vec![None; n]; n];
    for i in 0..n {
        d[i][i] = Some(0);
        for j in 0..n {
            if i == j {
                continue;
            }
            let (s1, e1, a1, b1) = ticks[i];
            let (s2, e2, a2, b2) = ticks[j];
            let shared: Vec<u32> = [a1, b1]
                .into_iter()
                .filter(|x| *x == a2 || *x == b2)
                .collect();
            if shared.is_empty() {
                continue;
            }
            let gap = s2.saturating_sub(e1).max(s1.saturating_sub(e2));
            let zeroed = shared.iter().any(|&s| {
                spans
                    .iter()
                    .filter(|sp| sp.0 == s)
                    .any(|&(_, b, e)| match zero {
                        Zero::None => false,
                        Zero::Same => b <= s1 && e1 <= e && b <= s2 && e2 <= e,
                        Zero::Strict => {
                            let lo = s1.max(s2).max(b);
                            let hi = e1.min(e2).min(e);
                            lo <= hi
                        }
                    })
            });
            d[i][j] = Some(if zeroed { 0 } else { gap });
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|x| a + b < x) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

/// A random encounter log on the tick grid, with static spans for a few agents.
#[derive(Clone, Debug)]
pub struct RandomLog {
    pub unit: f64,
    /// `(t0, t1, a, b)` in ticks.
    pub events: Vec<(u64, u64, u32, u32)>,
    /// `(agent, begin, end)` in ticks; disjoint and ascending per agent.
    pub spans: Vec<(u32, u64, u64)>,
}

impl RandomLog {
    pub fn encounter_events(&self) -> Vec<EncounterEvent> {
        self.events
            .iter()
            .enumerate()
            .map(|(k, &(s, e, a, b))| {
                EncounterEvent::new(k, s as f64 * self.unit, e as f64 * self.unit, a, b)
            })
            .collect()
    }

    pub fn statics(&self) -> StaticIntervalLog {
        let mut log = StaticIntervalLog::new();
        for &(a, b, e) in &self.spans {
            log.push(a, b as f64 * self.unit, e as f64 * self.unit)
                .unwrap();
        }
        log
    }
}

pub fn random_log(max_events: usize) -> impl Strategy<Value = RandomLog> {
    let event = (0u64..60, 0u64..12, 0u32..7, 1u32..7)
        .prop_map(|(s, len, a, off)| (s, s + len, a, (a + off) % 7));
    let spans = proptest::collection::vec(
        proptest::collection::btree_set(0u64..80, 0..=4).prop_map(|cuts| {
            let cuts: Vec<u64> = cuts.into_iter().collect();
            cuts.chunks_exact(2)
                .map(|c| (c[0], c[1]))
                .collect::<Vec<_>>()
        }),
        3,
    );
    (
        prop_oneof![Just(1.0), Just(0.1), Just(0.25)],
        proptest::collection::vec(event, 1..=max_events),
        spans,
    )
        .prop_map(|(unit, events, spans)| RandomLog {
            unit,
            events,
            spans: spans
                .into_iter()
                .enumerate()
                .flat_map(|(agent, list)| list.into_iter().map(move |(b, e)| (agent as u32, b, e)))
                .collect(),
        })
}

pub fn dense(d: &swarmtopo::metric::DistanceMatrix) -> Vec<Vec<f64>> {
    (0..d.len()).map(|i| d.row(i).to_vec()).collect()
}

/// Agglomerative single linkage by repeated scan over all cluster pairs.
/// Returns the merge heights in merge order.
pub fn naive_single_linkage(d: &[Vec<f64>]) -> Vec<f64> {
    let mut clusters: Vec<Vec<usize>> = (0..d.len()).map(|i| vec![i]).collect();
    let mut heights = Vec::new();
    while clusters.len() > 1 {
        let mut best = (f64::INFINITY, 0, 1);
        for a in 0..clusters.len() {
            for b in a + 1..clusters.len() {
                let h = clusters[a]
                    .iter()
                    .flat_map(|&i| clusters[b].iter().map(move |&j| d[i][j]))
                    .fold(f64::INFINITY, f64::min);
                if h < best.0 {
                    best = (h, a, b);
                }
            }
        }
        let (h, a, b) = best;
        let merged = clusters.remove(b);
        clusters[a].extend(merged);
        heights.push(h);
    }
    heights
}
