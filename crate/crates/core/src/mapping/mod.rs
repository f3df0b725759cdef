//! Local maps per window, inter-domain clouds per seam, and stitching.

pub mod linkage;
pub mod local;
pub mod seam;
pub mod stitch;

pub use linkage::{
    cluster_connections, cut_dendrogram, single_linkage, Clustering, Merge, StaticLabel,
};
pub use local::{local_map, window_events, LocalComponent, LocalMap};
pub use seam::{inter_domain_cloud, join_set, InterDomainCloud};
pub use stitch::{stitch, GlobalMap, MapEdge, MapNode, SeamResult};

use crate::scenario::{ScenarioConfig, StaticZeroing, TdaParams, Windows};
use serde::{Deserialize, Serialize};

/// Everything the mapping stages need from a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapParams {
    pub windows: Windows,
    /// Simulation step; encounter times are multiples of it.
    pub time_unit: f64,
    pub knn_k: usize,
    pub cluster_cutoff: f64,
    pub tda: TdaParams,
}

impl MapParams {
    pub fn from_config(config: &ScenarioConfig) -> Self {
        Self {
            windows: config.windows(),
            time_unit: config.agents.sim_dt,
            knn_k: config.windows.knn_k,
            cluster_cutoff: config.windows.cluster_cutoff,
            tda: config.tda.clone(),
        }
    }

    pub fn zeroing(&self) -> StaticZeroing {
        self.tda.static_zeroing
    }
}
