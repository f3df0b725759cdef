//! Leader-guided random-walk swarm.
//!
//! Agents walk piecewise-linear segments with exponential lengths and
//! isotropic turns, pause at random, bounce off walls, obstacles and each
//! other, and head back toward the leader whenever they drift out of the
//! coverage rectangle. A fraction of them is held static as landmarks. The
//! only outputs the mapping stages may consume are the encounter log and the
//! static-interval log; trajectories are kept for evaluation only.

pub mod encounters;
pub mod landmarks;
pub mod motion;

pub use encounters::{EncounterEvent, EncounterTracker};
pub use landmarks::select_landmarks;
pub use motion::{Arena, WalkSampler, MAX_REDRAWS};

use crate::error::{Error, Result};
use crate::geometry::{Point, Rect};
use crate::scenario::ScenarioConfig;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// Angular resolution of the returning-agent detour search, per half turn.
const DETOUR_STEPS: usize = 16;
const DETOUR_SLACK: usize = 8;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    RandomWalk,
    Static,
    Returning,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::RandomWalk => "random_walk",
            Mode::Static => "static",
            Mode::Returning => "returning",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random_walk" => Ok(Mode::RandomWalk),
            "static" => Ok(Mode::Static),
            "returning" => Ok(Mode::Returning),
            other => Err(Error::InvalidArgument(format!(
                "unknown agent mode `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentState {
    pub id: u32,
    pub position: Point,
    pub heading: f64,
    pub mode: Mode,
    pub segment_remaining: f64,
    pub stop_remaining: f64,
}

/// Closed interval `[begin, end]` (seconds) during which an agent was static.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StaticSpan {
    pub begin: f64,
    pub end: f64,
}

impl StaticSpan {
    pub fn contains_interval(&self, t0: f64, t1: f64) -> bool {
        self.begin <= t0 && t1 <= self.end
    }

    pub fn intersects(&self, t0: f64, t1: f64) -> bool {
        t0 <= self.end && t1 >= self.begin
    }
}

/// Per-agent ordered, disjoint static intervals `T^1(s), T^2(s), …`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StaticIntervalLog {
    spans: BTreeMap<u32, Vec<StaticSpan>>,
}

impl StaticIntervalLog {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends an interval; it must start after the agent's previous one ends.
    pub fn push(&mut self, agent: u32, begin: f64, end: f64) -> Result<()> {
        if !(begin <= end) {
            return Err(Error::InvalidArgument(format!(
                "static interval [{begin}, {end}] of agent {agent} is reversed"
            )));
        }
        let list = self.spans.entry(agent).or_default();
        if let Some(last) = list.last() {
            if !(begin > last.end) {
                return Err(Error::InvalidArgument(format!(
                    "static interval [{begin}, {end}] of agent {agent} overlaps or precedes [{}, {}]",
                    last.begin, last.end
                )));
            }
        }
        list.push(StaticSpan { begin, end });
        Ok(())
    }

    pub fn spans(&self, agent: u32) -> &[StaticSpan] {
        self.spans.get(&agent).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn agents(&self) -> impl Iterator<Item = u32> + '_ {
        self.spans.keys().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }

    /// Rows `(agent, k, begin, end)` with `k` starting at 1.
    pub fn rows(&self) -> impl Iterator<Item = (u32, usize, f64, f64)> + '_ {
        self.spans.iter().flat_map(|(&a, v)| {
            v.iter()
                .enumerate()
                .map(move |(k, s)| (a, k + 1, s.begin, s.end))
        })
    }

    /// Number of agents static at time `t`.
    pub fn static_count_at(&self, t: f64) -> usize {
        self.spans
            .values()
            .filter(|v| v.iter().any(|s| s.begin <= t && t <= s.end))
            .count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub t: f64,
    pub id: u32,
    pub x: f64,
    pub y: f64,
    pub mode: Mode,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SimStats {
    pub steps: u64,
    pub segment_draws: u64,
    pub segment_length_sum: f64,
    pub heading_redraws: u64,
    pub holds: u64,
    pub landmark_replacements: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimOutput {
    pub events: Vec<EncounterEvent>,
    pub statics: StaticIntervalLog,
    pub trajectories: Option<Vec<TrajectoryRow>>,
    pub stats: SimStats,
}

/// Stepping state of one simulation run. Owns the single RNG stream.
pub struct Simulator<'c> {
    config: &'c ScenarioConfig,
    arena: Arena,
    sampler: WalkSampler,
    return_noise: Option<Normal<f64>>,
    rng: ChaCha8Rng,
    agents: Vec<AgentState>,
    tick: u64,
    landmark_target: usize,
    static_since: Vec<Option<u64>>,
    /// Agents released this step; they stay put until the next step.
    released: Vec<bool>,
    /// Turning preference of returning agents, +1 or -1.
    detour_side: Vec<f64>,
    statics: Vec<(u32, u64, u64)>,
    tracker: Option<EncounterTracker>,
    trajectories: Option<Vec<TrajectoryRow>>,
    stats: SimStats,
}

impl<'c> Simulator<'c> {
    /// Places all agents in a cluster around the leader start.
    pub fn new(config: &'c ScenarioConfig, seed: u64) -> Result<Self> {
        let a = &config.agents;
        let arena = Arena::new(
            config.environment.bounds(),
            config.obstacle_polygons(),
            a.obstacle_clearance(),
        );
        let sampler = WalkSampler::new(a.segment_length, a.stop_probability, a.stop_duration_mean);
        let return_noise =
            (a.return_noise > 0.0).then(|| Normal::new(0.0, a.return_noise).expect("finite noise"));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cover = config.coverage_rect_unchecked(0.0);
        let center = config.leader.start_point();
        let mut agents = Vec::with_capacity(a.count);
        for id in 0..a.count as u32 {
            let position = place_near(&arena, &cover, center, a.initial_spread, &mut rng)?;
            agents.push(AgentState {
                id,
                position,
                heading: sampler.heading(&mut rng),
                mode: Mode::RandomWalk,
                segment_remaining: 0.0,
                stop_remaining: 0.0,
            });
        }
        Ok(Self {
            config,
            arena,
            sampler,
            return_noise,
            rng,
            agents,
            tick: 0,
            landmark_target: a.landmark_count(),
            static_since: vec![None; a.count],
            released: vec![false; a.count],
            detour_side: vec![1.0; a.count],
            statics: Vec::new(),
            tracker: None,
            trajectories: None,
            stats: SimStats::default(),
        })
    }

    pub fn agents(&self) -> &[AgentState] {
        &self.agents
    }

    pub fn time(&self) -> f64 {
        self.tick as f64 * self.config.agents.sim_dt
    }

    pub fn stats(&self) -> &SimStats {
        &self.stats
    }

    fn positions(&self) -> Vec<Point> {
        self.agents.iter().map(|a| a.position).collect()
    }

    /// Runs the walk model around `D(0)` for the configured burn-in time.
    pub fn disperse(&mut self) {
        let dt = self.config.agents.sim_dt;
        let steps = (self.config.agents.burn_in / dt).round() as u64;
        let cover = self.config.coverage_rect_unchecked(0.0);
        let leader = self.config.leader_position_unchecked(0.0);
        for _ in 0..steps {
            self.move_agents(&cover, leader);
        }
    }

    /// Initial MaxMin landmark selection; the chosen agents turn static now.
    pub fn select_initial_landmarks(&mut self) -> Result<Vec<u32>> {
        let a = &self.config.agents;
        let chosen = select_landmarks(
            &self.positions(),
            a.landmark_range(),
            a.landmark_fraction,
            &mut self.rng,
        )?;
        for &i in &chosen {
            self.make_static(i);
        }
        Ok(chosen.iter().map(|&i| self.agents[i].id).collect())
    }

    fn make_static(&mut self, i: usize) {
        let agent = &mut self.agents[i];
        agent.mode = Mode::Static;
        agent.stop_remaining = 0.0;
        agent.segment_remaining = 0.0;
        self.static_since[i] = Some(self.tick);
    }

    fn release_static(&mut self, i: usize, tick: u64) {
        let begin = self.static_since[i].take().expect("agent was static");
        self.statics.push((self.agents[i].id, begin, tick));
        self.released[i] = true;
        let agent = &mut self.agents[i];
        agent.mode = Mode::RandomWalk;
        agent.segment_remaining = 0.0;
    }

    fn static_count(&self) -> usize {
        self.static_since.iter().filter(|s| s.is_some()).count()
    }

    /// Tops the landmark set back up, picking in-domain walkers by MaxMin hops.
    fn refill_landmarks(&mut self, cover: &Rect) {
        let mut missing = self.landmark_target.saturating_sub(self.static_count());
        if missing == 0 {
            return;
        }
        let adj = landmarks::range_graph(&self.positions(), self.config.agents.landmark_range());
        while missing > 0 {
            let chosen: Vec<usize> = (0..self.agents.len())
                .filter(|&i| self.static_since[i].is_some())
                .collect();
            let candidates: Vec<usize> = (0..self.agents.len())
                .filter(|&i| {
                    self.agents[i].mode == Mode::RandomWalk
                        && cover.contains(self.agents[i].position)
                })
                .collect();
            let Some(pick) = landmarks::maxmin_step(&adj, &chosen, &candidates, &mut self.rng)
            else {
                break;
            };
            self.make_static(pick);
            self.stats.landmark_replacements += 1;
            missing -= 1;
        }
    }

    /// Advances the world by one `sim_dt`.
    pub fn step(&mut self) {
        let next = self.tick + 1;
        let t = next as f64 * self.config.agents.sim_dt;
        let cover = self.config.coverage_rect_unchecked(t);
        let leader = self.config.leader_position_unchecked(t);
        for i in 0..self.agents.len() {
            if self.agents[i].mode == Mode::Static && !cover.contains(self.agents[i].position) {
                self.release_static(i, next);
            }
        }
        self.tick = next;
        self.refill_landmarks(&cover);
        self.move_agents(&cover, leader);
        self.released.fill(false);
        self.stats.steps += 1;
        self.record();
        debug_assert!(self.static_count() <= self.landmark_target);
    }

    fn record(&mut self) {
        let tick = self.tick;
        let t = self.time();
        if self.tracker.is_some() {
            let positions = self.positions();
            let ids: Vec<u32> = self.agents.iter().map(|a| a.id).collect();
            self.tracker
                .as_mut()
                .unwrap()
                .observe(tick, &positions, &ids);
        }
        if let Some(rows) = self.trajectories.as_mut() {
            rows.extend(self.agents.iter().map(|a| TrajectoryRow {
                t,
                id: a.id,
                x: a.position.x,
                y: a.position.y,
                mode: a.mode,
            }));
        }
    }

    fn move_agents(&mut self, cover: &Rect, leader: Point) {
        let dt = self.config.agents.sim_dt;
        for i in 0..self.agents.len() {
            if self.released[i] {
                continue;
            }
            match self.agents[i].mode {
                Mode::Static => {}
                Mode::RandomWalk if !cover.contains(self.agents[i].position) => {
                    self.start_return(i);
                    self.return_step(i, cover, leader);
                }
                Mode::Returning => self.return_step(i, cover, leader),
                Mode::RandomWalk => {
                    if self.agents[i].stop_remaining > 0.0 {
                        self.agents[i].stop_remaining -= dt;
                        continue;
                    }
                    if self.agents[i].segment_remaining <= 0.0 {
                        let len = self.sampler.segment_length(&mut self.rng);
                        self.stats.segment_draws += 1;
                        self.stats.segment_length_sum += len;
                        self.agents[i].segment_remaining = len;
                        self.agents[i].heading = self.sampler.heading(&mut self.rng);
                        if let Some(pause) = self.sampler.stop(&mut self.rng) {
                            self.agents[i].stop_remaining = pause;
                            continue;
                        }
                    }
                    if self.try_move(i).is_some() {
                        self.agents[i].segment_remaining -= self.config.agents.speed * dt;
                    }
                    if !cover.contains(self.agents[i].position) {
                        self.start_return(i);
                    }
                }
            }
        }
    }

    /// Heads for the leader. When the direct step is blocked the agent takes
    /// the feasible heading closest to it, turning first to its detour side,
    /// so it slides along obstacles instead of bouncing off them. Returning
    /// agents pass through other agents, which keeps them from jamming.
    fn return_step(&mut self, i: usize, cover: &Rect, leader: Point) {
        let d = leader - self.agents[i].position;
        let mut heading = d.y.atan2(d.x);
        if let Some(noise) = &self.return_noise {
            heading += noise.sample(&mut self.rng);
        }
        let side = self.detour_side[i];
        let step = std::f64::consts::PI / DETOUR_STEPS as f64;
        // Detours keep to the last side taken unless the other side turns
        // less by more than DETOUR_SLACK steps; this stops dithering at the
        // point of a wall nearest the leader.
        let mut candidates: Vec<(usize, f64)> = vec![(0, side)];
        for k in 1..=DETOUR_STEPS {
            candidates.push((k, side));
            candidates.push((k + DETOUR_SLACK, -side));
        }
        candidates.sort_by_key(|&(cost, sign)| (cost, sign != side));
        let from = self.agents[i].position;
        let len = self.config.agents.speed * self.config.agents.sim_dt;
        let mut moved = false;
        for (cost, sign) in candidates {
            let k = if sign == side {
                cost
            } else {
                cost - DETOUR_SLACK
            };
            let h = heading + sign * k as f64 * step;
            let to = from + Point::from_angle(h) * len;
            if self.arena.step_allowed(from, to) {
                self.agents[i].heading = h;
                self.agents[i].position = to;
                if k > 0 {
                    self.detour_side[i] = sign;
                }
                moved = true;
                break;
            }
        }
        if !moved {
            self.stats.holds += 1;
        }
        if cover.contains(self.agents[i].position) {
            self.agents[i].mode = Mode::RandomWalk;
            self.agents[i].segment_remaining = 0.0;
        }
    }

    fn start_return(&mut self, i: usize) {
        self.agents[i].mode = Mode::Returning;
        self.agents[i].stop_remaining = 0.0;
        self.agents[i].segment_remaining = 0.0;
        self.detour_side[i] = if self.rng.random::<bool>() { 1.0 } else { -1.0 };
    }

    fn blocked_by_agent(&self, i: usize, from: Point, to: Point) -> bool {
        let r = self.config.agents.agent_collision_radius();
        if r <= 0.0 {
            return false;
        }
        let r2 = r * r;
        self.agents.iter().enumerate().any(|(j, other)| {
            j != i && {
                let d_to = to.dist2(other.position);
                d_to < r2 && d_to < from.dist2(other.position)
            }
        })
    }

    fn feasible(&self, i: usize, heading: f64) -> Option<Point> {
        let a = &self.config.agents;
        let from = self.agents[i].position;
        let to = from + Point::from_angle(heading) * (a.speed * a.sim_dt);
        (self.arena.step_allowed(from, to) && !self.blocked_by_agent(i, from, to)).then_some(to)
    }

    /// Moves agent `i` along its heading, redrawing the heading on collision.
    /// Returns whether the heading had to be redrawn, or `None` if the agent
    /// held position.
    fn try_move(&mut self, i: usize) -> Option<bool> {
        let mut heading = self.agents[i].heading;
        for attempt in 0..=MAX_REDRAWS {
            if attempt > 0 {
                heading = self.sampler.heading(&mut self.rng);
                self.stats.heading_redraws += 1;
            }
            if let Some(to) = self.feasible(i, heading) {
                self.agents[i].heading = heading;
                self.agents[i].position = to;
                return Some(attempt > 0);
            }
        }
        self.agents[i].heading = heading;
        self.stats.holds += 1;
        None
    }

    fn finish(mut self) -> SimOutput {
        let dt = self.config.agents.sim_dt;
        let final_tick = self.tick;
        for i in 0..self.agents.len() {
            if let Some(begin) = self.static_since[i].take() {
                self.statics.push((self.agents[i].id, begin, final_tick));
            }
        }
        let mut statics_sorted = self.statics.clone();
        statics_sorted.sort_unstable();
        let mut statics = StaticIntervalLog::new();
        for (id, b, e) in statics_sorted {
            statics
                .push(id, b as f64 * dt, e as f64 * dt)
                .expect("simulator emits disjoint spans");
        }
        let ids: Vec<u32> = self.agents.iter().map(|a| a.id).collect();
        let events = self
            .tracker
            .take()
            .map(|tr| tr.finish(final_tick, &ids))
            .unwrap_or_default()
            .into_iter()
            .enumerate()
            .map(|(k, (s, e, a, b))| EncounterEvent::new(k, s as f64 * dt, e as f64 * dt, a, b))
            .collect();
        SimOutput {
            events,
            statics,
            trajectories: self.trajectories,
            stats: self.stats,
        }
    }
}

fn place_near<R: Rng + ?Sized>(
    arena: &Arena,
    cover: &Rect,
    center: Point,
    spread: f64,
    rng: &mut R,
) -> Result<Point> {
    for _ in 0..10_000 {
        let r = spread * rng.random::<f64>().sqrt();
        let p = center + Point::from_angle(rng.random::<f64>() * std::f64::consts::TAU) * r;
        if arena.is_free(p) && arena.clearance_at(p) >= arena.clearance && cover.contains(p) {
            return Ok(p);
        }
    }
    Err(Error::InvalidArgument(format!(
        "cannot place agents within {spread} m of the leader start ({}, {})",
        center.x, center.y
    )))
}

/// Initial swarm state after the dispersion stage (no events are recorded).
pub fn disperse(config: &ScenarioConfig, seed: u64) -> Result<Vec<AgentState>> {
    let mut sim = Simulator::new(config, seed)?;
    sim.disperse();
    Ok(sim.agents)
}

/// Full simulation over `[0, T]`.
pub fn run(config: &ScenarioConfig, seed: u64, record_trajectories: bool) -> Result<SimOutput> {
    config.ensure_valid()?;
    let final_tick = (config.total_time() / config.agents.sim_dt).round() as u64;
    if final_tick == 0 {
        return Ok(SimOutput {
            events: Vec::new(),
            statics: StaticIntervalLog::new(),
            trajectories: record_trajectories.then(Vec::new),
            stats: SimStats::default(),
        });
    }
    let mut sim = Simulator::new(config, seed)?;
    sim.disperse();
    sim.select_initial_landmarks()?;
    sim.tracker = Some(EncounterTracker::new(
        config.agents.count,
        config.agents.detection_radius,
    ));
    if record_trajectories {
        sim.trajectories = Some(Vec::new());
    }
    sim.record();
    while sim.tick < final_tick {
        sim.step();
    }
    Ok(sim.finish())
}
