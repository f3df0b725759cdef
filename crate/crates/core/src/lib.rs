//! Topological mapping of an environment from the encounter log of a
//! leader-guided swarm.

pub mod error;
pub mod geometry;
pub mod io;
pub mod mapping;
pub mod metric;
pub mod pipeline;
pub mod scenario;
pub mod sim;
pub mod tda;

pub use error::{Error, Result};
pub use scenario::ScenarioConfig;
