//! Simulation followed by local mapping, seam clustering and stitching.

use crate::error::{Error, Result};
use crate::mapping::{
    cluster_connections, inter_domain_cloud, local_map, stitch, GlobalMap, LocalMap, MapParams,
    SeamResult,
};
use crate::scenario::ScenarioConfig;
use crate::sim::{self, EncounterEvent, SimOutput, StaticIntervalLog};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MappingOutput {
    pub local_maps: Vec<LocalMap>,
    pub seams: Vec<SeamResult>,
    pub global: GlobalMap,
}

fn check_indices(events: &[EncounterEvent]) -> Result<()> {
    match events.iter().enumerate().find(|(k, e)| e.index != *k) {
        Some((k, e)) => Err(Error::InvalidArgument(format!(
            "event at position {k} has index {}",
            e.index
        ))),
        None => Ok(()),
    }
}

/// Local maps of every window, in window order.
pub fn map_windows(
    events: &[EncounterEvent],
    statics: &StaticIntervalLog,
    params: &MapParams,
) -> Result<Vec<LocalMap>> {
    check_indices(events)?;
    (1..=params.windows.count)
        .into_par_iter()
        .map(|i| local_map(events, statics, i, params))
        .collect()
}

/// Clustered inter-domain clouds of every seam, in seam order.
pub fn map_seams(
    events: &[EncounterEvent],
    statics: &StaticIntervalLog,
    params: &MapParams,
) -> Result<Vec<SeamResult>> {
    check_indices(events)?;
    (1..params.windows.count)
        .into_par_iter()
        .map(|i| {
            let cloud = inter_domain_cloud(events, statics, i, params)?;
            let clustering = if cloud.is_empty() {
                None
            } else {
                Some(cluster_connections(&cloud, params.cluster_cutoff)?)
            };
            Ok(SeamResult {
                seam: i,
                cloud,
                clustering,
            })
        })
        .collect()
}

/// Maps an encounter log: every window and seam in parallel, then stitching.
pub fn map_events(
    events: &[EncounterEvent],
    statics: &StaticIntervalLog,
    params: &MapParams,
) -> Result<MappingOutput> {
    let local_maps = map_windows(events, statics, params)?;
    let seams = map_seams(events, statics, params)?;
    let global = stitch(&local_maps, &seams)?;
    Ok(MappingOutput {
        local_maps,
        seams,
        global,
    })
}

/// Simulates the scenario and maps the resulting logs.
pub fn run(
    config: &ScenarioConfig,
    seed: u64,
    record_trajectories: bool,
) -> Result<(SimOutput, MappingOutput)> {
    let out = sim::run(config, seed, record_trajectories)?;
    let maps = map_events(&out.events, &out.statics, &MapParams::from_config(config))?;
    Ok((out, maps))
}
