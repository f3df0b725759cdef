//! Random-walk draws and the feasibility test for a single motion step.

use crate::geometry::{segments_intersect, Point, Polygon, Rect};
use rand::Rng;
use rand_distr::{Distribution, Exp};
use std::f64::consts::TAU;

/// Maximum heading redraws before an agent holds position for one step.
pub const MAX_REDRAWS: usize = 16;

/// Segment-length and heading draws of the random-walk model.
#[derive(Debug, Clone, Copy)]
pub struct WalkSampler {
    segment: Exp<f64>,
    stop: Exp<f64>,
    stop_probability: f64,
}

impl WalkSampler {
    pub fn new(segment_length: f64, stop_probability: f64, stop_duration_mean: f64) -> Self {
        Self {
            segment: Exp::new(1.0 / segment_length).expect("positive segment length"),
            stop: Exp::new(1.0 / stop_duration_mean).expect("positive stop duration"),
            stop_probability,
        }
    }

    /// Segment length, exponential with mean `λ`.
    pub fn segment_length<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.segment.sample(rng)
    }

    /// Isotropic heading in `[0, 2π)`.
    pub fn heading<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        rng.random::<f64>() * TAU
    }

    /// Duration of a stop taken at the end of a segment, if one is taken.
    pub fn stop<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<f64> {
        if rng.random::<f64>() < self.stop_probability {
            Some(self.stop.sample(rng))
        } else {
            None
        }
    }
}

/// Static geometry an agent must respect: the outer walls and the obstacles.
#[derive(Debug, Clone)]
pub struct Arena {
    pub bounds: Rect,
    pub obstacles: Vec<Polygon>,
    pub clearance: f64,
    boxes: Vec<Rect>,
}

impl Arena {
    pub fn new(bounds: Rect, obstacles: Vec<Polygon>, clearance: f64) -> Self {
        let boxes = obstacles.iter().map(Polygon::bounding_box).collect();
        Self {
            bounds,
            obstacles,
            clearance,
            boxes,
        }
    }

    pub fn inside_obstacle(&self, p: Point) -> bool {
        self.obstacles
            .iter()
            .zip(&self.boxes)
            .any(|(poly, bb)| bb.contains(p) && poly.contains(p))
    }

    /// Distance to the nearest wall or obstacle boundary.
    pub fn clearance_at(&self, p: Point) -> f64 {
        let b = &self.bounds;
        let mut d = (p.x - b.min.x)
            .min(b.max.x - p.x)
            .min(p.y - b.min.y)
            .min(b.max.y - p.y);
        for (poly, bb) in self.obstacles.iter().zip(&self.boxes) {
            // Cheap reject: the box distance lower-bounds the polygon distance.
            let dx = (bb.min.x - p.x).max(p.x - bb.max.x).max(0.0);
            let dy = (bb.min.y - p.y).max(p.y - bb.max.y).max(0.0);
            if dx.hypot(dy) < d {
                d = d.min(poly.boundary_distance(p));
            }
        }
        d
    }

    /// Whether `p` is a legal agent position at all (inside the walls, outside obstacles).
    pub fn is_free(&self, p: Point) -> bool {
        p.is_finite()
            && p.x > self.bounds.min.x
            && p.x < self.bounds.max.x
            && p.y > self.bounds.min.y
            && p.y < self.bounds.max.y
            && !self.inside_obstacle(p)
    }

    /// A move `from → to` is allowed when it stays free, crosses no obstacle
    /// edge, and ends at least `clearance` from any boundary (or increases the
    /// clearance when the agent already sits closer than that).
    pub fn step_allowed(&self, from: Point, to: Point) -> bool {
        if !self.is_free(to) {
            return false;
        }
        for poly in &self.obstacles {
            if poly
                .edges()
                .any(|(a, b)| segments_intersect(from, to, a, b))
            {
                return false;
            }
        }
        let c = self.clearance_at(to);
        c >= self.clearance || c > self.clearance_at(from)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn arena() -> Arena {
        Arena::new(
            Rect::new(Point::new(0.0, 0.0), Point::new(4.0, 2.0)),
            vec![Polygon::rectangle(
                Point::new(1.0, 0.5),
                Point::new(2.0, 1.5),
            )],
            0.05,
        )
    }

    #[test]
    fn obstacle_blocks_steps() {
        let a = arena();
        assert!(!a.step_allowed(Point::new(0.9, 1.0), Point::new(1.1, 1.0)));
        assert!(
            !a.step_allowed(Point::new(0.9, 1.0), Point::new(0.97, 1.0)),
            "clearance"
        );
        assert!(a.step_allowed(Point::new(0.5, 1.0), Point::new(0.6, 1.0)));
        assert!(!a.step_allowed(Point::new(0.1, 1.0), Point::new(-0.1, 1.0)));
    }

    #[test]
    fn moving_away_is_allowed_inside_clearance() {
        let a = arena();
        assert!(a.step_allowed(Point::new(0.98, 1.0), Point::new(0.97, 1.0)));
        assert!(!a.step_allowed(Point::new(0.97, 1.0), Point::new(0.98, 1.0)));
    }

    #[test]
    fn draws_are_in_range() {
        let s = WalkSampler::new(0.5, 0.1, 2.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let h = s.heading(&mut rng);
            assert!((0.0..TAU).contains(&h));
            assert!(s.segment_length(&mut rng) >= 0.0);
        }
    }
}
