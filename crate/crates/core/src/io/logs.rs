//! Encounter, static-interval and trajectory logs as CSV.

use super::text::{fmt_f64, read_table, table};
use crate::error::Result;
use crate::sim::{EncounterEvent, Mode, StaticIntervalLog, TrajectoryRow};
use std::path::Path;

pub const EVENTS_HEADER: [&str; 5] = ["index", "t0", "t1", "id_a", "id_b"];
pub const STATIC_HEADER: [&str; 4] = ["agent", "k", "t_begin", "t_end"];
pub const TRAJECTORY_HEADER: [&str; 5] = ["t", "id", "x", "y", "mode"];

pub fn events_csv(config_hash: &str, events: &[EncounterEvent]) -> String {
    table(
        config_hash,
        &EVENTS_HEADER,
        events.iter().map(|e| {
            vec![
                e.index.to_string(),
                fmt_f64(e.t0),
                fmt_f64(e.t1),
                e.id_a.to_string(),
                e.id_b.to_string(),
            ]
        }),
    )
}

/// Reads an event log; row `k` must carry index `k`.
pub fn read_events(path: &Path) -> Result<(Vec<EncounterEvent>, Option<String>)> {
    let t = read_table(path, &EVENTS_HEADER)?;
    let mut events = Vec::with_capacity(t.rows.len());
    for (line, f) in &t.rows {
        let line = *line;
        let index: usize = t.int(line, &f[0])?;
        if index != events.len() {
            return Err(t.error(
                line,
                format!("expected index {}, found {index}", events.len()),
            ));
        }
        let (t0, t1) = (t.f64(line, &f[1])?, t.f64(line, &f[2])?);
        if !(t0.is_finite() && t1.is_finite() && t0 <= t1) {
            return Err(t.error(line, format!("bad event interval [{t0}, {t1}]")));
        }
        let (a, b): (u32, u32) = (t.int(line, &f[3])?, t.int(line, &f[4])?);
        if a == b {
            return Err(t.error(line, "event between an agent and itself"));
        }
        events.push(EncounterEvent::new(index, t0, t1, a, b));
    }
    Ok((events, t.config_hash.clone()))
}

pub fn statics_csv(config_hash: &str, statics: &StaticIntervalLog) -> String {
    table(
        config_hash,
        &STATIC_HEADER,
        statics
            .rows()
            .map(|(a, k, b, e)| vec![a.to_string(), k.to_string(), fmt_f64(b), fmt_f64(e)]),
    )
}

pub fn read_statics(path: &Path) -> Result<(StaticIntervalLog, Option<String>)> {
    let t = read_table(path, &STATIC_HEADER)?;
    let mut log = StaticIntervalLog::new();
    for (line, f) in &t.rows {
        let line = *line;
        let agent: u32 = t.int(line, &f[0])?;
        let k: usize = t.int(line, &f[1])?;
        let expected = log.spans(agent).len() + 1;
        if k != expected {
            return Err(t.error(
                line,
                format!("expected interval number {expected} for agent {agent}, found {k}"),
            ));
        }
        log.push(agent, t.f64(line, &f[2])?, t.f64(line, &f[3])?)
            .map_err(|e| t.error(line, e.to_string()))?;
    }
    Ok((log, t.config_hash.clone()))
}

pub fn trajectories_csv(config_hash: &str, rows: &[TrajectoryRow]) -> String {
    table(
        config_hash,
        &TRAJECTORY_HEADER,
        rows.iter().map(|r| {
            vec![
                fmt_f64(r.t),
                r.id.to_string(),
                fmt_f64(r.x),
                fmt_f64(r.y),
                r.mode.as_str().to_string(),
            ]
        }),
    )
}

pub fn read_trajectories(path: &Path) -> Result<Vec<TrajectoryRow>> {
    let t = read_table(path, &TRAJECTORY_HEADER)?;
    t.rows
        .iter()
        .map(|(line, f)| {
            let mode: Mode = f[4]
                .parse()
                .map_err(|_| t.error(*line, format!("unknown mode {:?}", f[4])))?;
            Ok(TrajectoryRow {
                t: t.f64(*line, &f[0])?,
                id: t.int(*line, &f[1])?,
                x: t.f64(*line, &f[2])?,
                y: t.f64(*line, &f[3])?,
                mode,
            })
        })
        .collect()
}
