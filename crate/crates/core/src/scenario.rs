//! Environment geometry, leader sweep, coverage region and run parameters.
//!
//! Units: lengths in meters, times in seconds. The leader sweeps along one
//! coordinate axis; the coverage region `D(t)` is the rectangle of length
//! `coverage_length` centered on the leader along that axis and spanning the
//! full environment in the other axis.

use crate::error::{Error, Result};
use crate::geometry::{polygons_overlap, Point, Polygon, Rect};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Obstacle {
    pub vertices: Vec<[f64; 2]>,
}

impl Obstacle {
    pub fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Self {
            vertices: vec![[x0, y0], [x1, y0], [x1, y1], [x0, y1]],
        }
    }

    pub fn polygon(&self) -> Polygon {
        Polygon::new(
            self.vertices
                .iter()
                .map(|v| Point::new(v[0], v[1]))
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Environment {
    /// Extent along x.
    pub width: f64,
    /// Extent along y.
    pub height: f64,
    #[serde(default)]
    pub obstacles: Vec<Obstacle>,
}

impl Environment {
    pub fn bounds(&self) -> Rect {
        Rect::new(Point::new(0.0, 0.0), Point::new(self.width, self.height))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeaderPath {
    pub start: [f64; 2],
    /// m/s; must be axis aligned.
    pub velocity: [f64; 2],
    /// Length `l` of the coverage rectangle along the sweep axis.
    pub coverage_length: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    X,
    Y,
}

impl LeaderPath {
    pub fn start_point(&self) -> Point {
        Point::new(self.start[0], self.start[1])
    }

    pub fn velocity_vector(&self) -> Point {
        Point::new(self.velocity[0], self.velocity[1])
    }

    pub fn axis(&self) -> SweepAxis {
        if self.velocity[1].abs() > self.velocity[0].abs() {
            SweepAxis::Y
        } else {
            SweepAxis::X
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentParams {
    pub count: usize,
    pub landmark_fraction: f64,
    /// Mean random-walk speed `v_m`.
    pub speed: f64,
    /// Characteristic segment length `λ` of the exponential segment law.
    pub segment_length: f64,
    /// Encounter detection radius `r_d`.
    pub detection_radius: f64,
    #[serde(default = "default_stop_probability")]
    pub stop_probability: f64,
    #[serde(default = "default_stop_duration")]
    pub stop_duration_mean: f64,
    #[serde(default = "default_sim_dt")]
    pub sim_dt: f64,
    /// Dispersion time before landmarks are chosen and recording starts.
    #[serde(default)]
    pub burn_in: f64,
    /// Radius of the initial cluster around the leader start.
    #[serde(default = "default_initial_spread")]
    pub initial_spread: f64,
    /// Minimum clearance to walls and obstacles; defaults to `detection_radius`.
    #[serde(default)]
    pub obstacle_clearance: Option<f64>,
    /// Agent-agent collision distance; defaults to half the detection radius.
    #[serde(default)]
    pub agent_collision_radius: Option<f64>,
    /// Communication range of the landmark-selection adjacency graph; defaults to `detection_radius`.
    #[serde(default)]
    pub landmark_range: Option<f64>,
    /// Standard deviation (radians) of the heading noise of returning agents.
    #[serde(default)]
    pub return_noise: f64,
}

fn default_stop_probability() -> f64 {
    0.1
}
fn default_stop_duration() -> f64 {
    2.0
}
fn default_sim_dt() -> f64 {
    0.1
}
fn default_initial_spread() -> f64 {
    0.2
}

impl AgentParams {
    pub fn obstacle_clearance(&self) -> f64 {
        self.obstacle_clearance.unwrap_or(self.detection_radius)
    }

    pub fn agent_collision_radius(&self) -> f64 {
        self.agent_collision_radius
            .unwrap_or(self.detection_radius / 2.0)
    }

    pub fn landmark_range(&self) -> f64 {
        self.landmark_range.unwrap_or(self.detection_radius)
    }

    pub fn landmark_count(&self) -> usize {
        ((self.landmark_fraction * self.count as f64) - 1e-9)
            .ceil()
            .max(0.0) as usize
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowParams {
    /// Observation interval length `T`.
    pub total_time: f64,
    /// Number of windows `N`.
    pub count: usize,
    /// Total overlap `Δt` between consecutive windows.
    pub overlap: f64,
    #[serde(default = "default_knn")]
    pub knn_k: usize,
    /// Single-linkage cutoff, in seconds of encounter-graph path length.
    pub cluster_cutoff: f64,
}

fn default_knn() -> usize {
    3
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum StaticZeroing {
    /// Zero only when the two event intervals and a static interval share a point.
    Strict,
    /// Zero whenever both event intervals lie inside the same static interval.
    #[default]
    SameStaticInterval,
}

impl std::str::FromStr for StaticZeroing {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(Self::Strict),
            "same_static_interval" => Ok(Self::SameStaticInterval),
            other => Err(Error::InvalidArgument(format!(
                "unknown static zeroing mode `{other}`"
            ))),
        }
    }
}

impl std::fmt::Display for StaticZeroing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Strict => "strict",
            Self::SameStaticInterval => "same_static_interval",
        })
    }
}

/// Which distances feed the Rips filtration of a local map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FiltrationMetric {
    /// Shortest-path encounter metric restricted to the subsample.
    #[default]
    Encounter,
    /// Euclidean distances of the MDS embedding.
    Embedding,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TdaParams {
    /// Absolute lifetime threshold in seconds; overrides the fraction when set.
    #[serde(default)]
    pub persistence_threshold: Option<f64>,
    #[serde(default = "default_threshold_fraction")]
    pub persistence_threshold_fraction: f64,
    /// Rips scale cap in seconds; defaults to 1.05 × subsample diameter.
    #[serde(default)]
    pub max_epsilon: Option<f64>,
    #[serde(default = "default_subsample")]
    pub subsample_size: usize,
    /// Points passed to the embedding; defaults to `subsample_size`. When
    /// larger, the Rips complex is built on a MaxMin subsample of the
    /// embedded cloud.
    #[serde(default)]
    pub embedding_size: Option<usize>,
    #[serde(default = "default_density_quantile")]
    pub density_quantile: f64,
    /// Density cut applied when thinning a larger embedding.
    #[serde(default = "default_embedded_density_quantile")]
    pub embedded_density_quantile: f64,
    /// Percentile of positive embedded distances used as the neighbor
    /// radius of that cut.
    #[serde(default = "default_embedded_density_percentile")]
    pub embedded_density_percentile: f64,
    /// Neighbor radius of the density filter in seconds; defaults to the
    /// 5th percentile of positive encounter distances.
    #[serde(default)]
    pub density_radius: Option<f64>,
    #[serde(default = "default_min_component")]
    pub min_component_size: usize,
    #[serde(default)]
    pub static_zeroing: StaticZeroing,
    #[serde(default)]
    pub filtration: FiltrationMetric,
}

fn default_threshold_fraction() -> f64 {
    0.2
}
fn default_subsample() -> usize {
    150
}
fn default_density_quantile() -> f64 {
    0.1
}
fn default_embedded_density_quantile() -> f64 {
    0.05
}
fn default_embedded_density_percentile() -> f64 {
    0.1
}
fn default_min_component() -> usize {
    10
}

impl Default for TdaParams {
    fn default() -> Self {
        Self {
            persistence_threshold: None,
            persistence_threshold_fraction: default_threshold_fraction(),
            max_epsilon: None,
            subsample_size: default_subsample(),
            embedding_size: None,
            density_quantile: default_density_quantile(),
            embedded_density_quantile: default_embedded_density_quantile(),
            embedded_density_percentile: default_embedded_density_percentile(),
            density_radius: None,
            min_component_size: default_min_component(),
            static_zeroing: StaticZeroing::default(),
            filtration: FiltrationMetric::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub name: String,
    pub environment: Environment,
    pub leader: LeaderPath,
    pub agents: AgentParams,
    pub windows: WindowParams,
    #[serde(default)]
    pub tda: TdaParams,
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::ScenarioSyntax(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario config is always serializable")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        Self::from_toml(&text)
    }

    pub fn total_time(&self) -> f64 {
        self.windows.total_time
    }

    pub fn windows(&self) -> Windows {
        Windows::new(
            self.windows.total_time,
            self.windows.count,
            self.windows.overlap,
        )
    }

    pub fn obstacle_polygons(&self) -> Vec<Polygon> {
        self.environment
            .obstacles
            .iter()
            .map(Obstacle::polygon)
            .collect()
    }

    fn check_time(&self, t: f64) -> Result<()> {
        let total = self.total_time();
        if !(0.0..=total).contains(&t) {
            return Err(Error::TimeOutOfRange { t, total });
        }
        Ok(())
    }

    /// `x(t) = start + velocity·t`.
    pub fn leader_position(&self, t: f64) -> Result<Point> {
        self.check_time(t)?;
        Ok(self.leader_position_unchecked(t))
    }

    pub(crate) fn leader_position_unchecked(&self, t: f64) -> Point {
        self.leader.start_point() + self.leader.velocity_vector() * t
    }

    /// The coverage rectangle `D(t)`, clipped to the environment.
    pub fn coverage_rect(&self, t: f64) -> Result<Rect> {
        self.check_time(t)?;
        Ok(self.coverage_rect_unchecked(t))
    }

    pub(crate) fn coverage_rect_unchecked(&self, t: f64) -> Rect {
        let c = self.leader_position_unchecked(t);
        self.band(c, c)
    }

    /// Band spanned by leader centers between `a` and `b` along the sweep axis.
    fn band(&self, a: Point, b: Point) -> Rect {
        let half = self.leader.coverage_length / 2.0;
        let bounds = self.environment.bounds();
        let rect = match self.leader.axis() {
            SweepAxis::X => Rect::new(
                Point::new(a.x.min(b.x) - half, bounds.min.y),
                Point::new(a.x.max(b.x) + half, bounds.max.y),
            ),
            SweepAxis::Y => Rect::new(
                Point::new(bounds.min.x, a.y.min(b.y) - half),
                Point::new(bounds.max.x, a.y.max(b.y) + half),
            ),
        };
        rect.intersection(&bounds)
    }

    pub fn in_coverage(&self, p: Point, t: f64) -> Result<bool> {
        Ok(self.coverage_rect(t)?.contains(p))
    }

    /// `D_i`: union of `D(t)` over the window `W_i` (1-based).
    pub fn local_domain(&self, i: usize) -> Result<Rect> {
        let (a, b) = self.windows().bounds(i)?;
        Ok(self.band(
            self.leader_position_unchecked(a),
            self.leader_position_unchecked(b),
        ))
    }

    /// Returns every violated invariant; empty means the scenario may run.
    pub fn validate(&self) -> Vec<String> {
        let mut v = Vec::new();
        let env = &self.environment;
        if !(env.width > 0.0 && env.height > 0.0) {
            v.push(format!(
                "environment must have positive size, got {} × {}",
                env.width, env.height
            ));
        }
        let bounds = env.bounds();
        let polys = self.obstacle_polygons();
        for (k, poly) in polys.iter().enumerate() {
            if poly.vertices.len() < 3 {
                v.push(format!(
                    "obstacle {k}: needs at least 3 vertices, got {}",
                    poly.vertices.len()
                ));
                continue;
            }
            if poly.vertices.iter().any(|p| !p.is_finite()) {
                v.push(format!("obstacle {k}: non-finite vertex"));
                continue;
            }
            if poly.vertices.first() == poly.vertices.last() {
                v.push(format!(
                    "obstacle {k}: vertex ring must not repeat the first vertex"
                ));
            }
            if !poly.is_simple() {
                v.push(format!("obstacle {k}: edges self-intersect"));
            }
            if poly.area() <= 0.0 {
                v.push(format!("obstacle {k}: zero area"));
            }
            let strictly_inside = poly.vertices.iter().all(|p| {
                p.x > bounds.min.x && p.x < bounds.max.x && p.y > bounds.min.y && p.y < bounds.max.y
            });
            if !strictly_inside {
                v.push(format!("obstacle {k}: not strictly inside the environment"));
            }
        }
        for i in 0..polys.len() {
            for j in (i + 1)..polys.len() {
                if polys[i].vertices.len() >= 3
                    && polys[j].vertices.len() >= 3
                    && polygons_overlap(&polys[i], &polys[j])
                {
                    v.push(format!("obstacles {i} and {j} overlap"));
                }
            }
        }

        let vel = self.leader.velocity_vector();
        if !(vel.norm() > 0.0) {
            v.push("leader velocity must be non-zero".into());
        } else if vel.x != 0.0 && vel.y != 0.0 {
            v.push("leader velocity must be axis aligned".into());
        }
        if !(self.leader.coverage_length > 0.0) {
            v.push("coverage length must be positive".into());
        }
        let total = self.windows.total_time;
        if !(total >= 0.0) || !total.is_finite() {
            v.push(format!(
                "total time must be non-negative and finite, got {total}"
            ));
        } else {
            let start = self.leader_position_unchecked(0.0);
            let end = self.leader_position_unchecked(total);
            if !bounds.contains(start) || !bounds.contains(end) {
                v.push("leader path leaves the environment during [0, T]".into());
            }
            // A straight sweep covers exactly the band between the end positions.
            let swept = self.band(start, end);
            let tol = 1e-9 * (env.width.max(env.height)).max(1.0);
            let covered = swept.min.x <= bounds.min.x + tol
                && swept.min.y <= bounds.min.y + tol
                && swept.max.x >= bounds.max.x - tol
                && swept.max.y >= bounds.max.y - tol;
            if !covered {
                v.push(format!(
                    "coverage condition fails: sweep covers x∈[{:.3}, {:.3}], y∈[{:.3}, {:.3}] but the environment is {} × {}",
                    swept.min.x, swept.max.x, swept.min.y, swept.max.y, env.width, env.height
                ));
            }
        }

        let a = &self.agents;
        if a.count == 0 {
            v.push("agent count must be positive".into());
        }
        if !(a.landmark_fraction > 0.0 && a.landmark_fraction < 1.0) {
            v.push(format!(
                "landmark fraction must lie in (0, 1), got {}",
                a.landmark_fraction
            ));
        }
        if !(a.speed > 0.0) {
            v.push("agent speed must be positive".into());
        } else if !(a.speed > vel.norm()) {
            v.push(format!(
                "agent speed {} m/s must exceed the leader speed {} m/s",
                a.speed,
                vel.norm()
            ));
        }
        if !(a.segment_length > 0.0) {
            v.push("segment length must be positive".into());
        }
        if !(a.detection_radius > 0.0) {
            v.push("detection radius must be positive".into());
        }
        if !(0.0..=1.0).contains(&a.stop_probability) {
            v.push("stop probability must lie in [0, 1]".into());
        }
        if !(a.stop_duration_mean > 0.0) {
            v.push("stop duration mean must be positive".into());
        }
        if !(a.sim_dt > 0.0) {
            v.push("sim_dt must be positive".into());
        } else if total.is_finite() {
            let steps = total / a.sim_dt;
            if (steps - steps.round()).abs() > 1e-6 * steps.max(1.0) {
                v.push(format!(
                    "total time {total} s is not a whole number of sim_dt = {} s steps",
                    a.sim_dt
                ));
            }
        }
        if !(a.burn_in >= 0.0) {
            v.push("burn-in must be non-negative".into());
        }
        if !(a.initial_spread >= 0.0) {
            v.push("initial spread must be non-negative".into());
        }
        if !(a.obstacle_clearance() >= 0.0) || !(a.agent_collision_radius() >= 0.0) {
            v.push("collision radii must be non-negative".into());
        }
        if !(a.agent_collision_radius() < a.detection_radius) {
            v.push("agent collision radius must be below the detection radius".into());
        }
        if !(a.landmark_range() > 0.0) {
            v.push("landmark range must be positive".into());
        }

        let w = &self.windows;
        if w.count == 0 {
            v.push("window count must be positive".into());
        } else if !(w.overlap >= 0.0
            && (w.overlap < total / w.count as f64 || (total == 0.0 && w.overlap == 0.0)))
        {
            v.push(format!(
                "window overlap {} s must lie in [0, T/N) = [0, {})",
                w.overlap,
                total / w.count as f64
            ));
        }
        if !(w.cluster_cutoff >= 0.0) {
            v.push("cluster cutoff must be non-negative".into());
        }

        let t = &self.tda;
        if let Some(th) = t.persistence_threshold {
            if !(th >= 0.0) {
                v.push("persistence threshold must be non-negative".into());
            }
        }
        if !(t.persistence_threshold_fraction >= 0.0) {
            v.push("persistence threshold fraction must be non-negative".into());
        }
        if let Some(m) = t.max_epsilon {
            if !(m >= 0.0) {
                v.push("max epsilon must be non-negative".into());
            }
        }
        if t.subsample_size == 0 {
            v.push("subsample size must be positive".into());
        }
        if !(0.0..1.0).contains(&t.density_quantile)
            || !(0.0..1.0).contains(&t.embedded_density_quantile)
        {
            v.push("density quantiles must lie in [0, 1)".into());
        }
        if !(t.embedded_density_percentile > 0.0 && t.embedded_density_percentile <= 1.0) {
            v.push("embedded density percentile must lie in (0, 1]".into());
        }
        v
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidScenario(v))
        }
    }
}

/// Sliding windows `W_i = [t_{i-1} − Δt/2, t_i + Δt/2] ∩ [0, T]` with `t_i = i·T/N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Windows {
    pub total_time: f64,
    pub count: usize,
    pub overlap: f64,
}

impl Windows {
    pub fn new(total_time: f64, count: usize, overlap: f64) -> Self {
        Self {
            total_time,
            count,
            overlap,
        }
    }

    /// Grid point `t_i`, `0 ≤ i ≤ N`.
    pub fn grid(&self, i: usize) -> f64 {
        if i >= self.count {
            self.total_time
        } else {
            i as f64 * self.total_time / self.count as f64
        }
    }

    /// Clamped bounds of `W_i` (1-based).
    pub fn bounds(&self, i: usize) -> Result<(f64, f64)> {
        if i == 0 || i > self.count {
            return Err(Error::WindowOutOfRange {
                index: i,
                count: self.count,
            });
        }
        let a = (self.grid(i - 1) - self.overlap / 2.0).max(0.0);
        let b = (self.grid(i) + self.overlap / 2.0).min(self.total_time);
        Ok((a, b))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, (f64, f64))> + '_ {
        (1..=self.count).map(move |i| (i, self.bounds(i).expect("index in range")))
    }

    /// Closed-interval intersection test of `[t0, t1]` with `W_i`.
    pub fn intersects(&self, i: usize, t0: f64, t1: f64) -> bool {
        match self.bounds(i) {
            Ok((a, b)) => t0 <= b && t1 >= a,
            Err(_) => false,
        }
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::full_scale;
    use super::*;

    #[test]
    fn full_scale_layout_is_valid() {
        assert_eq!(full_scale().validate(), Vec::<String>::new());
    }

    #[test]
    fn no_obstacles_is_valid() {
        let mut c = full_scale();
        c.environment.obstacles.clear();
        assert!(c.validate().is_empty());
    }

    #[test]
    fn short_sweep_reports_one_coverage_violation() {
        let mut c = full_scale();
        // Leader stops 10 m short: swept band ends at 21.5 m < 30 m.
        c.windows.total_time = 4000.0;
        c.windows.overlap = 10.0;
        let v = c.validate();
        assert_eq!(v.len(), 1, "{v:?}");
        assert!(v[0].contains("coverage"));
    }

    #[test]
    fn malformed_geometry_is_reported_not_fatal() {
        let mut c = full_scale();
        c.environment.obstacles.push(Obstacle {
            vertices: vec![[1.0, 1.0], [2.0, 1.0], [3.0, 1.0]],
        });
        c.environment.obstacles.push(Obstacle {
            vertices: vec![[1.0, 1.0], [2.0, 1.0]],
        });
        c.environment
            .obstacles
            .push(Obstacle::rectangle(7.0, 4.0, 8.0, 5.0));
        let v = c.validate();
        assert!(v.iter().any(|m| m.contains("zero area")), "{v:?}");
        assert!(v.iter().any(|m| m.contains("at least 3")), "{v:?}");
        assert!(v.iter().any(|m| m.contains("overlap")), "{v:?}");
    }

    #[test]
    fn parameter_invariants() {
        let mut c = full_scale();
        c.agents.speed = 0.004;
        c.windows.overlap = 5000.0;
        c.agents.landmark_fraction = 1.0;
        let v = c.validate();
        assert!(v.iter().any(|m| m.contains("must exceed the leader speed")));
        assert!(v.iter().any(|m| m.contains("overlap")));
        assert!(v.iter().any(|m| m.contains("landmark fraction")));
    }

    #[test]
    fn leader_position_is_linear() {
        let c = full_scale();
        assert_eq!(c.leader_position(0.0).unwrap(), Point::new(1.5, 5.0));
        let p = c.leader_position(100.0).unwrap();
        assert!((p.x - 2.0).abs() < 1e-12 && p.y == 5.0);
        let step = c.leader_position(160.0).unwrap().x - c.leader_position(100.0).unwrap().x;
        assert!((step - 0.3).abs() < 1e-12);
        assert!(matches!(
            c.leader_position(-1.0),
            Err(Error::TimeOutOfRange { .. })
        ));
        assert!(c.leader_position(5400.1).is_err());
    }

    #[test]
    fn coverage_membership() {
        let c = full_scale();
        for t in [0.0, 10.0, 2000.0, 5400.0] {
            let x = c.leader_position(t).unwrap();
            assert!(c.in_coverage(x, t).unwrap());
        }
        let t = 1000.0;
        let x = c.leader_position(t).unwrap();
        assert!(!c.in_coverage(x + Point::new(1.5 + 1e-9, 0.0), t).unwrap());
        assert!(c.in_coverage(x + Point::new(1.4, 0.0), t).unwrap());
        assert!(c.in_coverage(Point::new(x.x, 9.9), t).unwrap());
    }

    #[test]
    fn window_arithmetic() {
        let w = Windows::new(60.0, 4, 4.0);
        assert_eq!(w.grid(1), 15.0);
        assert_eq!(w.grid(2), 30.0);
        assert_eq!(w.grid(3), 45.0);
        assert_eq!(w.bounds(1).unwrap(), (0.0, 17.0));
        assert_eq!(w.bounds(2).unwrap(), (13.0, 32.0));
        assert_eq!(w.bounds(4).unwrap(), (43.0, 60.0));
        assert!(w.intersects(1, 16.0, 16.5) && w.intersects(2, 16.0, 16.5));
        assert!(w.bounds(0).is_err() && w.bounds(5).is_err());
    }

    #[test]
    fn local_domain_length() {
        let c = full_scale();
        let (a, b) = c.windows().bounds(2).unwrap();
        let d = c.local_domain(2).unwrap();
        let expected = 3.0 + 0.005 * (b - a);
        assert!(
            (d.width() - expected).abs() < 1e-9,
            "{} vs {}",
            d.width(),
            expected
        );
        assert_eq!(d.height(), 10.0);
    }

    #[test]
    fn stationary_leader_domains_coincide() {
        let mut c = full_scale();
        c.leader.velocity = [0.0, 0.0];
        for i in 1..=4 {
            let (_, b) = c.windows().bounds(i).unwrap();
            assert_eq!(c.local_domain(i).unwrap(), c.coverage_rect(b).unwrap());
        }
    }

    #[test]
    fn local_domains_cover_environment() {
        let c = full_scale();
        let hull = (1..=4)
            .map(|i| c.local_domain(i).unwrap())
            .reduce(|a, b| a.union_hull(&b))
            .unwrap();
        assert!(hull.contains_rect(&c.environment.bounds()));
    }

    #[test]
    fn toml_round_trip() {
        let c = full_scale();
        let back = ScenarioConfig::from_toml(&c.to_toml()).unwrap();
        assert_eq!(c, back);
    }
}
