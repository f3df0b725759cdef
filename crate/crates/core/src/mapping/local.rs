use super::MapParams;
use crate::error::Result;
use crate::metric::paths::GraphRows;
use crate::metric::{build_graph, density_radius_at, mds_embed, subsample, EmbeddedPointCloud};
use crate::scenario::{FiltrationMetric, Windows};
use crate::sim::{EncounterEvent, StaticIntervalLog};
use crate::tda::{classify, persistence, rips_filtration, FeatureReport, PersistenceDiagram};
use serde::{Deserialize, Serialize};

/// Indices into `events` of the events whose interval meets `W_i`.
pub fn window_events(events: &[EncounterEvent], i: usize, windows: &Windows) -> Vec<usize> {
    (0..events.len())
        .filter(|&k| windows.intersects(i, events[k].t0, events[k].t1))
        .collect()
}

/// One connected component of a window's encounter graph, mapped on its own.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalComponent {
    pub label: usize,
    /// Event-log indices of all member events, ascending.
    pub event_indices: Vec<usize>,
    /// Embedding of the subsampled events.
    pub cloud: EmbeddedPointCloud,
    pub diagram: PersistenceDiagram,
    pub report: FeatureReport,
    pub max_epsilon: f64,
    pub density_radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalMap {
    /// Window index, 1-based.
    pub window: usize,
    pub interval: (f64, f64),
    /// Event-log indices of every event meeting the window.
    pub event_indices: Vec<usize>,
    pub components: Vec<LocalComponent>,
    /// Events in components below the minimum size.
    pub dropped_events: usize,
    pub degenerate: bool,
    pub robust_components: usize,
    pub robust_holes: usize,
}

impl LocalMap {
    /// Label of the kept component containing event-log index `event`.
    pub fn component_of(&self, event: usize) -> Option<usize> {
        self.components
            .iter()
            .find(|c| c.event_indices.binary_search(&event).is_ok())
            .map(|c| c.label)
    }
}

/// Maps window `i`: builds the encounter graph of its events and runs
/// subsampling, embedding and persistence on every sizable component.
/// `events[k].index` must equal `k`.
pub fn local_map(
    events: &[EncounterEvent],
    statics: &StaticIntervalLog,
    i: usize,
    params: &MapParams,
) -> Result<LocalMap> {
    let interval = params.windows.bounds(i)?;
    let idx = window_events(events, i, &params.windows);
    let mut map = LocalMap {
        window: i,
        interval,
        event_indices: idx.iter().map(|&k| events[k].index).collect(),
        components: Vec::new(),
        dropped_events: 0,
        degenerate: true,
        robust_components: 0,
        robust_holes: 0,
    };
    if idx.is_empty() {
        return Ok(map);
    }
    let sub: Vec<EncounterEvent> = idx.iter().map(|&k| events[k]).collect();
    let graph = build_graph(&sub, statics, params.zeroing(), params.time_unit)?;
    let tda = &params.tda;
    for members in graph.components() {
        if members.len() < tda.min_component_size.max(1) {
            map.dropped_events += members.len();
            continue;
        }
        let label = map.components.len();
        let event_indices: Vec<usize> = members.iter().map(|&m| sub[m].index).collect();
        let rows = GraphRows::new(&graph, members);
        let embed_size = tda
            .embedding_size
            .unwrap_or(tda.subsample_size)
            .max(tda.subsample_size);
        let sample = subsample(&rows, embed_size, tda.density_quantile, tda.density_radius)?;
        let picked: Vec<usize> = sample.indices.iter().map(|&k| event_indices[k]).collect();
        let embedded = mds_embed(&sample.matrix, 3, picked)?;
        // A larger embedding is thinned again, in embedded coordinates.
        let (cloud, encounter) = if embedded.len() > tda.subsample_size {
            let dist = embedded.distances();
            let radius = density_radius_at(&dist, tda.embedded_density_percentile);
            let inner = subsample(
                &dist,
                tda.subsample_size,
                tda.embedded_density_quantile,
                Some(radius),
            )?;
            let cloud = EmbeddedPointCloud {
                event_indices: inner
                    .indices
                    .iter()
                    .map(|&k| embedded.event_indices[k])
                    .collect(),
                coords: inner.indices.iter().map(|&k| embedded.coords[k]).collect(),
                stress: embedded.stress,
            };
            (cloud, sample.matrix.submatrix(&inner.indices))
        } else {
            (embedded, sample.matrix)
        };
        let filtration_metric = match tda.filtration {
            FiltrationMetric::Encounter => encounter,
            FiltrationMetric::Embedding => cloud.distances(),
        };
        let max_epsilon = tda
            .max_epsilon
            .unwrap_or(1.05 * filtration_metric.diameter());
        let threshold = tda
            .persistence_threshold
            .unwrap_or(tda.persistence_threshold_fraction * max_epsilon);
        let diagram = persistence(&rips_filtration(&filtration_metric, max_epsilon)?);
        let report = classify(&diagram, threshold)?;
        map.robust_components += report.robust_components;
        map.robust_holes += report.robust_holes;
        map.components.push(LocalComponent {
            label,
            event_indices,
            cloud,
            diagram,
            report,
            max_epsilon,
            density_radius: sample.density_radius,
        });
    }
    map.degenerate = map.components.is_empty();
    Ok(map)
}
