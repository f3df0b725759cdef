//! SVG sketches of local maps, persistence diagrams and the global map.
//!
//! Point clouds are drawn on their first two embedding axes. Embeddings of
//! different windows share no coordinate frame, so the global sketch is a
//! schematic: one panel per window, one band per seam, one line per
//! connection cluster.

use super::maps::{DiagramRow, PointRow, WindowSummary};
use super::text::parse_f64;
use crate::error::{Error, Result};
use crate::mapping::{GlobalMap, LocalMap};
use std::collections::BTreeMap;
use std::fmt::Write as _;

const PANEL: f64 = 240.0;
const BAND: f64 = 80.0;
const MARGIN: f64 = 24.0;

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentSketch {
    pub label: usize,
    pub points: Vec<[f64; 2]>,
    /// One polygon per robust hole, from the simplex that kills it (or the
    /// edge that creates it when it never dies).
    pub holes: Vec<Vec<[f64; 2]>>,
    /// `(dimension, birth, death)`.
    pub bars: Vec<(usize, f64, f64)>,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindowSketch {
    pub window: usize,
    pub components: Vec<ComponentSketch>,
}

fn robust_hole(dim: usize, birth: f64, death: f64, threshold: f64) -> bool {
    dim == 1 && death - birth > threshold
}

impl WindowSketch {
    pub fn from_map(map: &LocalMap) -> Self {
        let components = map
            .components
            .iter()
            .map(|c| {
                let xy = |v: u32| {
                    let p = c.cloud.coords[v as usize];
                    [p[0], p[1]]
                };
                let threshold = c.report.threshold;
                ComponentSketch {
                    label: c.label,
                    points: c.cloud.coords.iter().map(|p| [p[0], p[1]]).collect(),
                    holes: c
                        .diagram
                        .bars
                        .iter()
                        .filter(|b| robust_hole(b.dim, b.birth, b.death, threshold))
                        .map(|b| {
                            b.death_simplex
                                .unwrap_or(b.birth_simplex)
                                .vertices()
                                .into_iter()
                                .map(xy)
                                .collect()
                        })
                        .collect(),
                    bars: c
                        .diagram
                        .bars
                        .iter()
                        .map(|b| (b.dim, b.birth, b.death))
                        .collect(),
                    threshold,
                }
            })
            .collect();
        Self {
            window: map.window,
            components,
        }
    }

    /// Rebuilds the sketch from the point, diagram and summary artifacts.
    pub fn from_rows(
        summary: &WindowSummary,
        points: &[PointRow],
        diagram: &[DiagramRow],
    ) -> Result<Self> {
        let mut components = Vec::new();
        for c in &summary.components {
            let threshold = parse_f64(&c.threshold).ok_or_else(|| {
                Error::InvalidArgument(format!("bad threshold {:?}", c.threshold))
            })?;
            let mine: Vec<&PointRow> = points.iter().filter(|p| p.component == c.label).collect();
            let coords: BTreeMap<usize, [f64; 2]> = mine
                .iter()
                .map(|p| (p.event_index, [p.coords[0], p.coords[1]]))
                .collect();
            let bars: Vec<&DiagramRow> =
                diagram.iter().filter(|b| b.component == c.label).collect();
            let mut holes = Vec::new();
            for b in bars
                .iter()
                .filter(|b| robust_hole(b.dim, b.birth, b.death, threshold))
            {
                let simplex = if b.death_simplex.is_empty() {
                    &b.birth_simplex
                } else {
                    &b.death_simplex
                };
                let poly = simplex
                    .iter()
                    .map(|e| {
                        coords.get(e).copied().ok_or_else(|| {
                            Error::InvalidArgument(format!(
                                "window {} component {}: diagram refers to event {e} missing from the points",
                                summary.window, c.label
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                holes.push(poly);
            }
            components.push(ComponentSketch {
                label: c.label,
                points: mine.iter().map(|p| [p.coords[0], p.coords[1]]).collect(),
                holes,
                bars: bars.iter().map(|b| (b.dim, b.birth, b.death)).collect(),
                threshold,
            });
        }
        Ok(Self {
            window: summary.window,
            components,
        })
    }
}

fn open(out: &mut String, width: f64, height: f64, config_hash: &str) {
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(out, "<!-- config_hash={config_hash} -->").unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="11">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
}

fn close(out: &mut String) {
    out.push_str("</svg>\n");
}

fn empty_frame(out: &mut String, x: f64, y: f64, w: f64, h: f64, message: &str) {
    writeln!(
        out,
        r##"<rect class="empty-frame" x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{h:.2}" fill="none" stroke="#999" stroke-dasharray="6 4"/>"##
    )
    .unwrap();
    writeln!(
        out,
        r##"<text class="empty-note" x="{:.2}" y="{:.2}" text-anchor="middle" fill="#666">{message}</text>"##,
        x + w / 2.0,
        y + h / 2.0
    )
    .unwrap();
}

/// Affine map of a data bounding box into a square panel, aspect preserved.
struct Fit {
    min: [f64; 2],
    scale: f64,
    offset: [f64; 2],
}

impl Fit {
    fn new(points: &[[f64; 2]], x: f64, y: f64, size: f64) -> Self {
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for p in points {
            for k in 0..2 {
                min[k] = min[k].min(p[k]);
                max[k] = max[k].max(p[k]);
            }
        }
        if points.is_empty() {
            min = [0.0; 2];
            max = [1.0; 2];
        }
        let span = (max[0] - min[0]).max(max[1] - min[1]);
        let inner = size - 2.0 * MARGIN;
        let scale = if span > 0.0 { inner / span } else { 1.0 };
        let offset = [
            x + MARGIN + (inner - (max[0] - min[0]) * scale) / 2.0,
            y + MARGIN + (inner - (max[1] - min[1]) * scale) / 2.0,
        ];
        Self { min, scale, offset }
    }

    /// SVG y grows downward, so the second axis is flipped.
    fn map(&self, p: [f64; 2], y0: f64, size: f64) -> (f64, f64) {
        let x = self.offset[0] + (p[0] - self.min[0]) * self.scale;
        let y = self.offset[1] + (p[1] - self.min[1]) * self.scale;
        (x, 2.0 * y0 + size - y)
    }
}

fn component_panel(out: &mut String, c: &ComponentSketch, x: f64, y: f64, size: f64, title: &str) {
    writeln!(
        out,
        r##"<rect class="panel" x="{x:.2}" y="{y:.2}" width="{size:.2}" height="{size:.2}" fill="none" stroke="#333"/>"##
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}">{title}</text>"#,
        x + 6.0,
        y + 14.0
    )
    .unwrap();
    let fit = Fit::new(&c.points, x, y, size);
    for (k, hole) in c.holes.iter().enumerate() {
        let pts: Vec<String> = hole
            .iter()
            .map(|&p| {
                let (px, py) = fit.map(p, y, size);
                format!("{px:.2},{py:.2}")
            })
            .collect();
        writeln!(
            out,
            r##"<polygon class="hole" points="{}" fill="#f0a030" fill-opacity="0.35" stroke="#d07000" stroke-width="2"/>"##,
            pts.join(" ")
        )
        .unwrap();
        let n = hole.len().max(1) as f64;
        let cx = hole.iter().map(|p| p[0]).sum::<f64>() / n;
        let cy = hole.iter().map(|p| p[1]).sum::<f64>() / n;
        let (tx, ty) = fit.map([cx, cy], y, size);
        writeln!(
            out,
            r##"<text class="hole-label" x="{tx:.2}" y="{ty:.2}" fill="#a04000">hole {}</text>"##,
            k + 1
        )
        .unwrap();
    }
    for &p in &c.points {
        let (px, py) = fit.map(p, y, size);
        writeln!(
            out,
            r##"<circle cx="{px:.2}" cy="{py:.2}" r="1.6" fill="#444"/>"##
        )
        .unwrap();
    }
}

/// Point clouds of one window, one panel per component.
pub fn local_map_svg(sketch: &WindowSketch, config_hash: &str) -> String {
    let mut out = String::new();
    let n = sketch.components.len().max(1) as f64;
    open(&mut out, n * PANEL, PANEL, config_hash);
    if sketch.components.is_empty() {
        empty_frame(
            &mut out,
            4.0,
            4.0,
            PANEL - 8.0,
            PANEL - 8.0,
            &format!("window {}: empty map", sketch.window),
        );
    }
    for (k, c) in sketch.components.iter().enumerate() {
        let title = format!("window {} component {}", sketch.window, c.label);
        component_panel(&mut out, c, k as f64 * PANEL, 0.0, PANEL, &title);
    }
    close(&mut out);
    out
}

/// Persistence diagrams of one window: dimension 0 in blue, dimension 1 in
/// red, the lifetime threshold dashed, infinite deaths on the top edge.
pub fn diagram_svg(sketch: &WindowSketch, config_hash: &str) -> String {
    let mut out = String::new();
    let n = sketch.components.len().max(1) as f64;
    open(&mut out, n * PANEL, PANEL, config_hash);
    if sketch.components.is_empty() {
        empty_frame(
            &mut out,
            4.0,
            4.0,
            PANEL - 8.0,
            PANEL - 8.0,
            &format!("window {}: empty diagram", sketch.window),
        );
    }
    for (k, c) in sketch.components.iter().enumerate() {
        let x0 = k as f64 * PANEL;
        let finite = c
            .bars
            .iter()
            .flat_map(|&(_, b, d)| [b, d])
            .filter(|v| v.is_finite());
        let top = finite.fold(c.threshold, f64::max).max(f64::MIN_POSITIVE) * 1.1;
        let inner = PANEL - 2.0 * MARGIN;
        let px = |v: f64| x0 + MARGIN + v / top * inner;
        let py = |v: f64| PANEL - MARGIN - v.min(top) / top * inner;
        writeln!(
            out,
            r##"<rect class="panel" x="{x0:.2}" y="0" width="{PANEL:.2}" height="{PANEL:.2}" fill="none" stroke="#333"/>"##
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{:.2}" y="14">window {} component {}</text>"#,
            x0 + 6.0,
            sketch.window,
            c.label
        )
        .unwrap();
        writeln!(
            out,
            r##"<line class="diagonal" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#888"/>"##,
            px(0.0),
            py(0.0),
            px(top),
            py(top)
        )
        .unwrap();
        if c.threshold < top {
            writeln!(
                out,
                r##"<line class="threshold" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#555" stroke-dasharray="5 4"/>"##,
                px(0.0),
                py(c.threshold),
                px(top - c.threshold),
                py(top)
            )
            .unwrap();
        }
        writeln!(
            out,
            r##"<line class="infinity" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#bbb" stroke-dasharray="1 3"/>"##,
            px(0.0),
            py(top),
            px(top),
            py(top)
        )
        .unwrap();
        for &(dim, b, d) in &c.bars {
            let (class, color) = if dim == 0 {
                ("h0", "blue")
            } else {
                ("h1", "red")
            };
            writeln!(
                out,
                r#"<circle class="{class}" cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                px(b),
                py(d)
            )
            .unwrap();
        }
    }
    close(&mut out);
    out
}

/// One panel per window and one band per seam. Each stitched edge is a line
/// between the component markers it joins; parallel edges are fanned out.
pub fn global_map_svg(windows: &[WindowSketch], global: &GlobalMap, config_hash: &str) -> String {
    let mut out = String::new();
    let n = windows.len();
    let rows = windows
        .iter()
        .map(|w| w.components.len())
        .max()
        .unwrap_or(0)
        .max(1) as f64;
    let width = (n.max(1) as f64) * PANEL + (n.saturating_sub(1) as f64) * BAND;
    let height = rows * PANEL + 30.0;
    open(&mut out, width, height, config_hash);
    writeln!(
        out,
        r#"<text x="6" y="{:.2}">components {} holes {} (cycles {}, local {})</text>"#,
        height - 10.0,
        global.betti0,
        global.betti1,
        global.cycle_rank,
        global.local_holes
    )
    .unwrap();
    if global.nodes.is_empty() {
        empty_frame(
            &mut out,
            4.0,
            4.0,
            width - 8.0,
            rows * PANEL - 8.0,
            "empty global map",
        );
    }
    let x_of = |k: usize| k as f64 * (PANEL + BAND);
    for (k, w) in windows.iter().enumerate() {
        if k + 1 < n {
            writeln!(
                out,
                r##"<rect class="seam-band" x="{:.2}" y="0" width="{BAND:.2}" height="{:.2}" fill="#eef3fb"/>"##,
                x_of(k) + PANEL,
                rows * PANEL
            )
            .unwrap();
        }
        if w.components.is_empty() {
            writeln!(
                out,
                r##"<rect class="panel" x="{:.2}" y="0" width="{PANEL:.2}" height="{PANEL:.2}" fill="none" stroke="#333"/>"##,
                x_of(k)
            )
            .unwrap();
            empty_frame(
                &mut out,
                x_of(k) + 8.0,
                8.0,
                PANEL - 16.0,
                PANEL - 16.0,
                &format!("window {}: empty", w.window),
            );
        }
        for (r, c) in w.components.iter().enumerate() {
            let title = format!("W{} c{}", w.window, c.label);
            component_panel(&mut out, c, x_of(k), r as f64 * PANEL, PANEL, &title);
        }
    }
    let slot: BTreeMap<usize, usize> = windows
        .iter()
        .enumerate()
        .map(|(k, w)| (w.window, k))
        .collect();
    let row_of = |window: usize, component: usize| {
        windows
            .iter()
            .find(|w| w.window == window)
            .and_then(|w| w.components.iter().position(|c| c.label == component))
    };
    let mut parallel: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for e in &global.edges {
        let (a, b) = (&global.nodes[e.from], &global.nodes[e.to]);
        let (Some(&ka), Some(&kb), Some(ra), Some(rb)) = (
            slot.get(&a.window),
            slot.get(&b.window),
            row_of(a.window, a.component),
            row_of(b.window, b.component),
        ) else {
            continue;
        };
        let fan = parallel.entry((e.from, e.to)).or_default();
        let dy = 14.0 * *fan as f64;
        *fan += 1;
        let (x1, y1) = (x_of(ka) + PANEL, ra as f64 * PANEL + PANEL / 2.0 + dy);
        let (x2, y2) = (x_of(kb), rb as f64 * PANEL + PANEL / 2.0 + dy);
        writeln!(
            out,
            r##"<line class="connection" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="#1060c0" stroke-width="2"/>"##
        )
        .unwrap();
        writeln!(
            out,
            r##"<text x="{:.2}" y="{:.2}" text-anchor="middle" fill="#1060c0">s{} k{}</text>"##,
            (x1 + x2) / 2.0,
            (y1 + y2) / 2.0 - 4.0,
            e.seam,
            e.cluster
        )
        .unwrap();
    }
    close(&mut out);
    out
}
