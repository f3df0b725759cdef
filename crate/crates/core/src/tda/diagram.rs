use super::rips::Simplex;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// One persistence interval with the simplices that created and killed it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bar {
    pub dim: usize,
    pub birth: f64,
    /// `f64::INFINITY` for classes alive at the end of the filtration.
    pub death: f64,
    pub birth_simplex: Simplex,
    pub death_simplex: Option<Simplex>,
}

impl Bar {
    pub fn lifetime(&self) -> f64 {
        self.death - self.birth
    }

    pub fn is_infinite(&self) -> bool {
        self.death.is_infinite()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PersistenceDiagram {
    /// Bars sorted by dimension, birth, death.
    pub bars: Vec<Bar>,
}

impl PersistenceDiagram {
    pub fn new(mut bars: Vec<Bar>) -> Self {
        bars.sort_by(|a, b| {
            a.dim
                .cmp(&b.dim)
                .then(a.birth.total_cmp(&b.birth))
                .then(a.death.total_cmp(&b.death))
        });
        Self { bars }
    }

    pub fn dim(&self, dim: usize) -> impl Iterator<Item = &Bar> + '_ {
        self.bars.iter().filter(move |b| b.dim == dim)
    }

    /// `(birth, death)` pairs of one dimension, in diagram order.
    pub fn pairs(&self, dim: usize) -> Vec<(f64, f64)> {
        self.dim(dim).map(|b| (b.birth, b.death)).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FeatureReport {
    pub threshold: f64,
    pub robust_components: usize,
    pub robust_holes: usize,
    /// Lifetimes of the robust dimension-0 features, descending.
    pub component_lifetimes: Vec<f64>,
    /// Lifetimes of the robust dimension-1 features, descending.
    pub hole_lifetimes: Vec<f64>,
}

fn robust(bar: &Bar, threshold: f64) -> bool {
    (bar.dim == 0 && bar.is_infinite()) || bar.lifetime() > threshold
}

/// Counts features whose lifetime exceeds `threshold`; infinite
/// dimension-0 bars always count.
pub fn classify(diagram: &PersistenceDiagram, threshold: f64) -> Result<FeatureReport> {
    if !(threshold >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "persistence threshold must be non-negative, got {threshold}"
        )));
    }
    let lifetimes = |dim| {
        let mut v: Vec<f64> = diagram
            .dim(dim)
            .filter(|b| robust(b, threshold))
            .map(Bar::lifetime)
            .collect();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    };
    let component_lifetimes = lifetimes(0);
    let hole_lifetimes = lifetimes(1);
    Ok(FeatureReport {
        threshold,
        robust_components: component_lifetimes.len(),
        robust_holes: hole_lifetimes.len(),
        component_lifetimes,
        hole_lifetimes,
    })
}

/// `(β0, β1)` at scale `eps`: bars with `birth ≤ eps < death`.
pub fn betti_at(diagram: &PersistenceDiagram, eps: f64) -> (usize, usize) {
    let alive = |dim| {
        diagram
            .dim(dim)
            .filter(|b| b.birth <= eps && eps < b.death)
            .count()
    };
    (alive(0), alive(1))
}
