use super::local::window_events;
use super::MapParams;
use crate::error::{Error, Result};
use crate::metric::paths::UNREACHABLE;
use crate::metric::{build_graph, DistanceMatrix, EncounterGraph};
use crate::scenario::Windows;
use crate::sim::{EncounterEvent, StaticIntervalLog, StaticSpan};
use serde::{Deserialize, Serialize};

/// Static interval of `agent` qualifying it to join `W_i` and `W_{i+1}`:
/// it must start by `t_i − Δt` and last until `t_i + Δt`.
fn qualifying_spans(
    statics: &StaticIntervalLog,
    i: usize,
    windows: &Windows,
) -> Vec<(u32, StaticSpan)> {
    let t = windows.grid(i);
    let (lo, hi) = (t - windows.overlap, t + windows.overlap);
    statics
        .agents()
        .filter_map(|s| {
            statics
                .spans(s)
                .iter()
                .find(|sp| sp.begin <= lo && sp.end >= hi)
                .map(|sp| (s, *sp))
        })
        .collect()
}

/// Static agents joining windows `i` and `i + 1`.
pub fn join_set(statics: &StaticIntervalLog, i: usize, windows: &Windows) -> Vec<u32> {
    qualifying_spans(statics, i, windows)
        .into_iter()
        .map(|(s, _)| s)
        .collect()
}

/// Events tied to the joining static agents plus their nearest neighbors,
/// with the encounter metric of `W_i ∪ W_{i+1}` restricted to them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterDomainCloud {
    /// Seam index `i`, joining windows `i` and `i + 1`.
    pub seam: usize,
    pub join_set: Vec<u32>,
    /// Event-log indices of the cloud points, ascending.
    pub event_indices: Vec<usize>,
    /// Joining static agents each point is attached to; empty for points
    /// added only as nearest neighbors.
    pub owners: Vec<Vec<u32>>,
    /// Correspondence metric in seconds, in `event_indices` order.
    #[serde(skip)]
    pub metric: Option<DistanceMatrix>,
}

impl InterDomainCloud {
    pub fn len(&self) -> usize {
        self.event_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.event_indices.is_empty()
    }

    fn empty(seam: usize, join_set: Vec<u32>) -> Self {
        Self {
            seam,
            join_set,
            event_indices: Vec::new(),
            owners: Vec::new(),
            metric: None,
        }
    }
}

/// Groups vertices at distance zero from each other, which share identical
/// distance rows, so each group needs one Dijkstra run.
struct ZeroClasses {
    class_of: Vec<Option<usize>>,
    count: usize,
}

impl ZeroClasses {
    fn new(n: usize) -> Self {
        Self {
            class_of: vec![None; n],
            count: 0,
        }
    }

    /// Returns the class of `v`, computing its row with `f` when new.
    fn class<T>(
        &mut self,
        graph: &EncounterGraph,
        v: usize,
        store: &mut Vec<T>,
        f: impl FnOnce(&[u64]) -> T,
    ) -> usize {
        if let Some(c) = self.class_of[v] {
            return c;
        }
        let row = graph.distances_from(v);
        let c = self.count;
        self.count += 1;
        for (x, &d) in row.iter().enumerate() {
            if d == 0 {
                self.class_of[x] = Some(c);
            }
        }
        store.push(f(&row));
        c
    }
}

/// Builds the inter-domain cloud of seam `i` (`1 ≤ i < N`). An empty join
/// set or an empty event set yields an empty cloud.
/// `events[k].index` must equal `k`.
pub fn inter_domain_cloud(
    events: &[EncounterEvent],
    statics: &StaticIntervalLog,
    i: usize,
    params: &MapParams,
) -> Result<InterDomainCloud> {
    let w = &params.windows;
    if i == 0 || i >= w.count {
        return Err(Error::WindowOutOfRange {
            index: i,
            count: w.count,
        });
    }
    let spans = qualifying_spans(statics, i, w);
    let join: Vec<u32> = spans.iter().map(|(s, _)| *s).collect();
    let mut union = window_events(events, i, w);
    union.extend(window_events(events, i + 1, w));
    union.sort_unstable();
    union.dedup();
    if spans.is_empty() || union.is_empty() {
        return Ok(InterDomainCloud::empty(i, join));
    }
    let sub: Vec<EncounterEvent> = union.iter().map(|&k| events[k]).collect();
    let graph = build_graph(&sub, statics, params.zeroing(), params.time_unit)?;

    let owners_of = |v: usize| -> Vec<u32> {
        let e = &sub[v];
        spans
            .iter()
            .filter(|(s, sp)| e.involves(*s) && sp.intersects(e.t0, e.t1))
            .map(|(s, _)| *s)
            .collect()
    };
    let core: Vec<usize> = (0..sub.len())
        .filter(|&v| !owners_of(v).is_empty())
        .collect();
    if core.is_empty() {
        return Ok(InterDomainCloud::empty(i, join));
    }

    let k = params.knn_k;
    let mut in_cloud = vec![false; sub.len()];
    let mut classes = ZeroClasses::new(sub.len());
    let mut nearest: Vec<Vec<(u64, usize)>> = Vec::new();
    for &v in &core {
        in_cloud[v] = true;
        if k == 0 {
            continue;
        }
        let c = classes.class(&graph, v, &mut nearest, |row| {
            let mut cand: Vec<(u64, usize)> = row
                .iter()
                .enumerate()
                .filter(|(_, &d)| d != UNREACHABLE)
                .map(|(x, &d)| (d, x))
                .collect();
            let keep = (k + 1).min(cand.len());
            if keep < cand.len() {
                cand.select_nth_unstable(keep);
                cand.truncate(keep);
            }
            cand.sort_unstable();
            cand
        });
        for &(_, x) in nearest[c].iter().filter(|&&(_, x)| x != v).take(k) {
            in_cloud[x] = true;
        }
    }

    let points: Vec<usize> = (0..sub.len()).filter(|&v| in_cloud[v]).collect();
    let mut classes = ZeroClasses::new(sub.len());
    let mut rows: Vec<Vec<u64>> = Vec::new();
    let point_class: Vec<usize> = points
        .iter()
        .map(|&v| {
            classes.class(&graph, v, &mut rows, |row| {
                points.iter().map(|&p| row[p]).collect()
            })
        })
        .collect();
    let unit = params.time_unit;
    let metric = DistanceMatrix::from_fn(points.len(), |a, b| match rows[point_class[a]][b] {
        UNREACHABLE => f64::INFINITY,
        d => d as f64 * unit,
    });

    Ok(InterDomainCloud {
        seam: i,
        join_set: join,
        event_indices: points.iter().map(|&v| sub[v].index).collect(),
        owners: points.iter().map(|&v| owners_of(v)).collect(),
        metric: Some(metric),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn windows() -> Windows {
        Windows::new(60.0, 4, 4.0)
    }

    #[test]
    fn join_set_boundaries() {
        let w = windows();
        let mut log = StaticIntervalLog::new();
        log.push(1, 0.0, 60.0).unwrap();
        // Exactly [t_1 − Δt, t_1 + Δt] = [11, 19].
        log.push(2, 11.0, 19.0).unwrap();
        // Two short intervals, neither spanning the seam.
        log.push(3, 10.0, 14.0).unwrap();
        log.push(3, 15.0, 25.0).unwrap();
        assert_eq!(join_set(&log, 1, &w), vec![1, 2]);
        assert_eq!(join_set(&log, 2, &w), vec![1]);
        assert_eq!(join_set(&log, 3, &w), vec![1]);
    }
}
