//! Encounter graph on event vertices.
//!
//! Two events sharing an agent are joined by an edge weighted with the gap
//! between their time intervals (zero when they overlap). Events that share a
//! static agent are zeroed according to [`StaticZeroing`].
//!
//! The explicit graph has up to quadratically many edges per busy agent, so
//! shortest paths run on an equivalent sparse graph instead: every agent gets
//! a timeline chain through the distinct endpoints of its events, each event
//! attaches at weight 0 to the timeline nodes inside its interval, and each
//! static span gets a hub attached at weight 0 to the events it contains.
//! Path lengths between event vertices are identical in both graphs.
//!
//! All weights are integer step counts, which keeps the metric axioms exact.

use crate::error::{Error, Result};
use crate::scenario::StaticZeroing;
use crate::sim::{EncounterEvent, StaticIntervalLog};
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct EncounterGraph {
    events: Vec<EncounterEvent>,
    ticks: Vec<(u64, u64)>,
    unit: f64,
    zeroing: StaticZeroing,
    /// Static spans `(agent, k)` whose interval contains each event's interval.
    hubs_of: Vec<Vec<(u32, usize)>>,
    /// Static spans `(agent, k, begin, end)` in ticks, for the strict rule.
    spans: BTreeMap<u32, Vec<(u64, u64)>>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    weights: Vec<u64>,
}

fn to_ticks(t: f64, unit: f64) -> Result<u64> {
    let x = t / unit;
    let r = x.round();
    if !(r >= 0.0) || (x - r).abs() > 1e-6 * r.max(1.0) {
        return Err(Error::InvalidArgument(format!(
            "time {t} is not a non-negative multiple of {unit}"
        )));
    }
    Ok(r as u64)
}

/// Builds the encounter graph over `events`. Times must lie on the `unit` grid
/// (the simulation step); weights are stored in multiples of `unit`.
pub fn build_graph(
    events: &[EncounterEvent],
    statics: &StaticIntervalLog,
    zeroing: StaticZeroing,
    unit: f64,
) -> Result<EncounterGraph> {
    if events.is_empty() {
        return Err(Error::Empty("event list"));
    }
    if !(unit > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "time unit must be positive, got {unit}"
        )));
    }
    let mut ticks = Vec::with_capacity(events.len());
    for e in events {
        let (a, b) = (to_ticks(e.t0, unit)?, to_ticks(e.t1, unit)?);
        if a > b || e.id_a == e.id_b {
            return Err(Error::InvalidArgument(format!(
                "malformed event {}",
                e.index
            )));
        }
        ticks.push((a, b));
    }

    let mut by_agent: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (k, e) in events.iter().enumerate() {
        by_agent.entry(e.id_a).or_default().push(k);
        by_agent.entry(e.id_b).or_default().push(k);
    }

    let n = events.len();
    let mut edges: Vec<(u32, u32, u64)> = Vec::new();
    let mut next_node = n;

    for list in by_agent.values() {
        if list.len() < 2 {
            continue;
        }
        let mut times: Vec<u64> = list
            .iter()
            .flat_map(|&k| [ticks[k].0, ticks[k].1])
            .collect();
        times.sort_unstable();
        times.dedup();
        let base = next_node;
        next_node += times.len();
        for w in 0..times.len().saturating_sub(1) {
            edges.push((
                (base + w) as u32,
                (base + w + 1) as u32,
                times[w + 1] - times[w],
            ));
        }
        for &k in list {
            let (s, e) = ticks[k];
            let lo = times.partition_point(|&t| t < s);
            let hi = times.partition_point(|&t| t <= e);
            for node in lo..hi {
                edges.push((k as u32, (base + node) as u32, 0));
            }
        }
    }

    let mut spans: BTreeMap<u32, Vec<(u64, u64)>> = BTreeMap::new();
    for (agent, _, b, e) in statics.rows() {
        let b = (b / unit).round() as u64;
        let e = (e / unit).round() as u64;
        spans.entry(agent).or_default().push((b, e));
    }

    let mut hubs_of = vec![Vec::new(); n];
    for (&agent, list) in &by_agent {
        let Some(agent_spans) = spans.get(&agent) else {
            continue;
        };
        for (k, &(b, e)) in agent_spans.iter().enumerate() {
            let members: Vec<usize> = list
                .iter()
                .copied()
                .filter(|&i| b <= ticks[i].0 && ticks[i].1 <= e)
                .collect();
            for &i in &members {
                hubs_of[i].push((agent, k));
            }
            if zeroing == StaticZeroing::SameStaticInterval && members.len() >= 2 {
                let hub = next_node as u32;
                next_node += 1;
                edges.extend(members.iter().map(|&i| (i as u32, hub, 0)));
            }
        }
    }

    let node_count = next_node;
    let mut degree = vec![0usize; node_count + 1];
    for &(a, b, _) in &edges {
        degree[a as usize + 1] += 1;
        degree[b as usize + 1] += 1;
    }
    for i in 0..node_count {
        degree[i + 1] += degree[i];
    }
    let offsets = degree;
    let mut fill = offsets.clone();
    let mut targets = vec![0u32; offsets[node_count]];
    let mut weights = vec![0u64; offsets[node_count]];
    for &(a, b, w) in &edges {
        for (u, v) in [(a, b), (b, a)] {
            let slot = fill[u as usize];
            targets[slot] = v;
            weights[slot] = w;
            fill[u as usize] += 1;
        }
    }

    Ok(EncounterGraph {
        events: events.to_vec(),
        ticks,
        unit,
        zeroing,
        hubs_of,
        spans,
        offsets,
        targets,
        weights,
    })
}

impl EncounterGraph {
    /// Number of event vertices.
    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn events(&self) -> &[EncounterEvent] {
        &self.events
    }

    /// Original log indices of the vertices, in vertex order.
    pub fn event_indices(&self) -> Vec<usize> {
        self.events.iter().map(|e| e.index).collect()
    }

    pub fn unit(&self) -> f64 {
        self.unit
    }

    pub fn zeroing(&self) -> StaticZeroing {
        self.zeroing
    }

    pub fn interval_ticks(&self, i: usize) -> (u64, u64) {
        self.ticks[i]
    }

    /// Vertices of the sparse auxiliary graph (events first).
    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub(crate) fn neighbors(&self, u: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        let r = self.offsets[u]..self.offsets[u + 1];
        self.targets[r.clone()]
            .iter()
            .zip(&self.weights[r])
            .map(|(&v, &w)| (v as usize, w))
    }

    /// Weight of the explicit edge between vertices `i` and `j` in steps, or
    /// `None` if the events share no agent.
    pub fn edge_weight(&self, i: usize, j: usize) -> Option<u64> {
        let (ei, ej) = (&self.events[i], &self.events[j]);
        let shared: Vec<u32> = ei.shared_ids(ej).collect();
        if shared.is_empty() {
            return None;
        }
        let (si, ti) = self.ticks[i];
        let (sj, tj) = self.ticks[j];
        let gap = sj.saturating_sub(ti).max(si.saturating_sub(tj));
        let zeroed = match self.zeroing {
            StaticZeroing::SameStaticInterval => {
                self.hubs_of[i].iter().any(|h| self.hubs_of[j].contains(h))
            }
            StaticZeroing::Strict => {
                let (lo, hi) = (si.max(sj), ti.min(tj));
                lo <= hi
                    && shared.iter().any(|s| {
                        self.spans
                            .get(s)
                            .is_some_and(|v| v.iter().any(|&(b, e)| b <= hi && e >= lo))
                    })
            }
        };
        Some(if zeroed { 0 } else { gap })
    }

    /// Connected components of the event vertices, each sorted, ordered by
    /// decreasing size then smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; self.node_count()];
        let mut comps = Vec::new();
        let mut stack = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            stack.push(s);
            let mut members = Vec::new();
            while let Some(u) = stack.pop() {
                if u < n {
                    members.push(u);
                }
                for (v, _) in self.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            members.sort_unstable();
            comps.push(members);
        }
        comps.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        comps
    }
}
