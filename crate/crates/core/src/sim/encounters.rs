use crate::geometry::Point;
use serde::{Deserialize, Serialize};

/// A maximal interval during which two agents stayed within the detection radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EncounterEvent {
    pub index: usize,
    pub t0: f64,
    pub t1: f64,
    /// Smaller of the two agent IDs.
    pub id_a: u32,
    pub id_b: u32,
}

impl EncounterEvent {
    pub fn new(index: usize, t0: f64, t1: f64, a: u32, b: u32) -> Self {
        let (id_a, id_b) = if a <= b { (a, b) } else { (b, a) };
        Self {
            index,
            t0,
            t1,
            id_a,
            id_b,
        }
    }

    pub fn involves(&self, id: u32) -> bool {
        self.id_a == id || self.id_b == id
    }

    /// The other agent of the pair, if `id` takes part.
    pub fn partner(&self, id: u32) -> Option<u32> {
        if self.id_a == id {
            Some(self.id_b)
        } else if self.id_b == id {
            Some(self.id_a)
        } else {
            None
        }
    }

    pub fn shared_ids(&self, other: &EncounterEvent) -> impl Iterator<Item = u32> + '_ {
        let o = *other;
        [self.id_a, self.id_b]
            .into_iter()
            .filter(move |&id| o.involves(id))
    }
}

/// Tracks open encounters on the step grid. Times are integer step counts.
#[derive(Debug, Clone)]
pub struct EncounterTracker {
    n: usize,
    radius2: f64,
    open: Vec<Option<u64>>,
    closed: Vec<(u64, u64, u32, u32)>,
}

impl EncounterTracker {
    pub fn new(agent_count: usize, radius: f64) -> Self {
        Self {
            n: agent_count,
            radius2: radius * radius,
            open: vec![None; agent_count * agent_count.saturating_sub(1) / 2],
            closed: Vec::new(),
        }
    }

    fn pair_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j);
        i * (2 * self.n - i - 1) / 2 + (j - i - 1)
    }

    /// Opens events for pairs newly within range at `tick` and closes those
    /// that left, with the end stamped at the last in-range step.
    pub fn observe(&mut self, tick: u64, positions: &[Point], ids: &[u32]) {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let k = self.pair_index(i, j);
                let within = positions[i].dist2(positions[j]) <= self.radius2;
                match (within, self.open[k]) {
                    (true, None) => self.open[k] = Some(tick),
                    (false, Some(start)) => {
                        self.closed.push((start, tick - 1, ids[i], ids[j]));
                        self.open[k] = None;
                    }
                    _ => {}
                }
            }
        }
    }

    pub fn open_count(&self) -> usize {
        self.open.iter().filter(|o| o.is_some()).count()
    }

    /// Closes every open event at `final_tick` and returns `(t0, t1, a, b)` tick tuples
    /// sorted by start, then pair.
    pub fn finish(mut self, final_tick: u64, ids: &[u32]) -> Vec<(u64, u64, u32, u32)> {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let k = self.pair_index(i, j);
                if let Some(start) = self.open[k].take() {
                    self.closed.push((start, final_tick, ids[i], ids[j]));
                }
            }
        }
        let mut out: Vec<_> = self
            .closed
            .into_iter()
            .map(|(s, e, a, b)| if a <= b { (s, e, a, b) } else { (s, e, b, a) })
            .collect();
        out.sort_unstable_by_key(|&(s, e, a, b)| (s, a, b, e));
        out
    }
}
