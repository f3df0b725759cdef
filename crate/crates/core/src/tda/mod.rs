//! Vietoris–Rips persistence in dimensions 0 and 1.

pub mod diagram;
pub mod persistence;
pub mod rips;

pub use diagram::{betti_at, classify, Bar, FeatureReport, PersistenceDiagram};
pub use persistence::persistence;
pub use rips::{rips_filtration, FiltrationEntry, RipsFiltration, Simplex};
