//! Local-map, seam and global-map artifacts.

use super::text::{fmt_f64, read_table, table};
use crate::error::{Error, Result};
use crate::mapping::{GlobalMap, LocalMap, SeamResult, StaticLabel};
use crate::tda::Simplex;
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const POINTS_HEADER: [&str; 5] = ["component", "event_index", "x", "y", "z"];
pub const DIAGRAM_HEADER: [&str; 6] = [
    "component",
    "dimension",
    "birth",
    "death",
    "birth_simplex",
    "death_simplex",
];
pub const SEAM_CLOUD_HEADER: [&str; 3] = ["event_index", "label", "owners"];
pub const DENDROGRAM_HEADER: [&str; 4] = ["a", "b", "height", "size"];

fn joined<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

fn split<T: std::str::FromStr>(field: &str) -> Option<Vec<T>> {
    if field.is_empty() {
        return Some(Vec::new());
    }
    field.split(';').map(|x| x.parse().ok()).collect()
}

pub fn points_csv(config_hash: &str, map: &LocalMap) -> String {
    let rows = map.components.iter().flat_map(|c| {
        c.cloud
            .event_indices
            .iter()
            .zip(&c.cloud.coords)
            .map(move |(e, p)| {
                vec![
                    c.label.to_string(),
                    e.to_string(),
                    fmt_f64(p[0]),
                    fmt_f64(p[1]),
                    fmt_f64(p[2]),
                ]
            })
    });
    table(config_hash, &POINTS_HEADER, rows)
}

/// Simplex vertices are written as `;`-separated event-log indices.
pub fn diagram_csv(config_hash: &str, map: &LocalMap) -> String {
    let rows = map.components.iter().flat_map(|c| {
        let events = |s: &Simplex| {
            joined(
                s.vertices()
                    .iter()
                    .map(|&v| c.cloud.event_indices[v as usize]),
            )
        };
        c.diagram.bars.iter().map(move |b| {
            vec![
                c.label.to_string(),
                b.dim.to_string(),
                fmt_f64(b.birth),
                fmt_f64(b.death),
                events(&b.birth_simplex),
                b.death_simplex.as_ref().map(events).unwrap_or_default(),
            ]
        })
    });
    table(config_hash, &DIAGRAM_HEADER, rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointRow {
    pub component: usize,
    pub event_index: usize,
    pub coords: [f64; 3],
}

pub fn read_points(path: &Path) -> Result<Vec<PointRow>> {
    let t = read_table(path, &POINTS_HEADER)?;
    t.rows
        .iter()
        .map(|(line, f)| {
            Ok(PointRow {
                component: t.int(*line, &f[0])?,
                event_index: t.int(*line, &f[1])?,
                coords: [
                    t.f64(*line, &f[2])?,
                    t.f64(*line, &f[3])?,
                    t.f64(*line, &f[4])?,
                ],
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagramRow {
    pub component: usize,
    pub dim: usize,
    pub birth: f64,
    pub death: f64,
    pub birth_simplex: Vec<usize>,
    pub death_simplex: Vec<usize>,
}

pub fn read_diagram(path: &Path) -> Result<Vec<DiagramRow>> {
    let t = read_table(path, &DIAGRAM_HEADER)?;
    t.rows
        .iter()
        .map(|(line, f)| {
            let simplex =
                |s: &str| split(s).ok_or_else(|| t.error(*line, format!("bad simplex {s:?}")));
            Ok(DiagramRow {
                component: t.int(*line, &f[0])?,
                dim: t.int(*line, &f[1])?,
                birth: t.f64(*line, &f[2])?,
                death: t.f64(*line, &f[3])?,
                birth_simplex: simplex(&f[4])?,
                death_simplex: simplex(&f[5])?,
            })
        })
        .collect()
}

pub fn seam_cloud_csv(config_hash: &str, seam: &SeamResult) -> String {
    let c = &seam.cloud;
    let rows = (0..c.len()).map(|p| {
        let label = seam
            .clustering
            .as_ref()
            .map(|cl| cl.labels[p].to_string())
            .unwrap_or_default();
        vec![c.event_indices[p].to_string(), label, joined(&c.owners[p])]
    });
    table(config_hash, &SEAM_CLOUD_HEADER, rows)
}

/// Merges in SciPy linkage layout.
pub fn dendrogram_csv(config_hash: &str, seam: &SeamResult) -> String {
    let merges = seam
        .clustering
        .as_ref()
        .map(|c| c.merges.as_slice())
        .unwrap_or_default();
    let rows = merges.iter().map(|m| {
        vec![
            m.a.to_string(),
            m.b.to_string(),
            fmt_f64(m.height),
            m.size.to_string(),
        ]
    });
    table(config_hash, &DENDROGRAM_HEADER, rows)
}

/// Floats are stored as strings so infinities survive JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentSummary {
    pub label: usize,
    pub event_count: usize,
    pub sample_size: usize,
    pub stress: String,
    pub max_epsilon: String,
    pub density_radius: String,
    pub threshold: String,
    pub robust_components: usize,
    pub robust_holes: usize,
    pub component_lifetimes: Vec<String>,
    pub hole_lifetimes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowSummary {
    pub window: usize,
    pub t_begin: String,
    pub t_end: String,
    pub event_count: usize,
    pub dropped_events: usize,
    pub degenerate: bool,
    pub robust_components: usize,
    pub robust_holes: usize,
    pub components: Vec<ComponentSummary>,
}

impl WindowSummary {
    pub fn new(map: &LocalMap) -> Self {
        let strings = |v: &[f64]| v.iter().map(|&x| fmt_f64(x)).collect();
        Self {
            window: map.window,
            t_begin: fmt_f64(map.interval.0),
            t_end: fmt_f64(map.interval.1),
            event_count: map.event_indices.len(),
            dropped_events: map.dropped_events,
            degenerate: map.degenerate,
            robust_components: map.robust_components,
            robust_holes: map.robust_holes,
            components: map
                .components
                .iter()
                .map(|c| ComponentSummary {
                    label: c.label,
                    event_count: c.event_indices.len(),
                    sample_size: c.cloud.len(),
                    stress: fmt_f64(c.cloud.stress),
                    max_epsilon: fmt_f64(c.max_epsilon),
                    density_radius: fmt_f64(c.density_radius),
                    threshold: fmt_f64(c.report.threshold),
                    robust_components: c.report.robust_components,
                    robust_holes: c.report.robust_holes,
                    component_lifetimes: strings(&c.report.component_lifetimes),
                    hole_lifetimes: strings(&c.report.hole_lifetimes),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeamSummary {
    pub seam: usize,
    pub join_set: Vec<u32>,
    pub cloud_size: usize,
    pub cutoff: Option<String>,
    /// Zero for an empty cloud.
    pub cluster_count: usize,
    pub static_labels: Vec<StaticLabel>,
}

impl SeamSummary {
    pub fn new(seam: &SeamResult) -> Self {
        let cl = seam.clustering.as_ref();
        Self {
            seam: seam.seam,
            join_set: seam.cloud.join_set.clone(),
            cloud_size: seam.cloud.len(),
            cutoff: cl.map(|c| fmt_f64(c.cutoff)),
            cluster_count: cl.map_or(0, |c| c.cluster_count),
            static_labels: cl.map(|c| c.static_labels.clone()).unwrap_or_default(),
        }
    }
}

/// Contents of `maps.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapsSummary {
    pub config_hash: String,
    pub windows: Vec<WindowSummary>,
    pub seams: Vec<SeamSummary>,
}

/// Contents of `global_map.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalMapFile {
    pub config_hash: String,
    #[serde(flatten)]
    pub map: GlobalMap,
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("artifact types serialize");
    s.push('\n');
    s
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        msg: e.to_string(),
    })
}
