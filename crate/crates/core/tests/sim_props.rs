use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use std::collections::BTreeMap;
use swarmtopo::geometry::{Point, Polygon, Rect};
use swarmtopo::sim::{self, Arena, Mode, WalkSampler};
use swarmtopo::ScenarioConfig;

const TINY: &str = include_str!("fixtures/tiny.toml");

fn tiny() -> ScenarioConfig {
    ScenarioConfig::from_toml(TINY).unwrap()
}

/// Axis-aligned box test written out by hand, independent of the polygon code.
fn in_box(p: Point, b: &[f64; 4]) -> bool {
    p.x > b[0] && p.x < b[2] && p.y > b[1] && p.y < b[3]
}

fn boxes(c: &ScenarioConfig) -> Vec<[f64; 4]> {
    c.environment
        .obstacles
        .iter()
        .map(|o| {
            let xs = o.vertices.iter().map(|v| v[0]);
            let ys = o.vertices.iter().map(|v| v[1]);
            [
                xs.clone().fold(f64::INFINITY, f64::min),
                ys.clone().fold(f64::INFINITY, f64::min),
                xs.fold(f64::NEG_INFINITY, f64::max),
                ys.fold(f64::NEG_INFINITY, f64::max),
            ]
        })
        .collect()
}

fn segment_hits_box(a: Point, b: Point, bx: &[f64; 4]) -> bool {
    (0..=200).any(|k| {
        let s = k as f64 / 200.0;
        in_box(Point::new(a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)), bx)
    })
}

#[test]
fn segment_lengths_have_mean_lambda() {
    for (seed, lambda) in [(1u64, 1.0), (2, 0.25), (3, 7.5)] {
        let sampler = WalkSampler::new(lambda, 0.1, 2.0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 10_000;
        let mean = (0..n)
            .map(|_| sampler.segment_length(&mut rng))
            .sum::<f64>()
            / n as f64;
        assert!(
            (mean - lambda).abs() <= 0.05 * lambda,
            "λ={lambda} mean={mean}"
        );
    }
}

#[test]
fn headings_are_uniform_by_chi_square() {
    let bins = 36;
    let critical = ChiSquared::new((bins - 1) as f64)
        .unwrap()
        .inverse_cdf(0.95);
    let sampler = WalkSampler::new(1.0, 0.1, 2.0);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 10_000;
    let mut counts = vec![0usize; bins];
    for _ in 0..n {
        let h = sampler.heading(&mut rng);
        assert!((0.0..std::f64::consts::TAU).contains(&h));
        counts[((h / std::f64::consts::TAU) * bins as f64) as usize] += 1;
    }
    let expected = n as f64 / bins as f64;
    let stat: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    assert!(stat < critical, "chi-square {stat} >= {critical}");
}

#[test]
fn stop_probability_is_respected() {
    let sampler = WalkSampler::new(1.0, 0.3, 2.0);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 20_000;
    let stops: Vec<f64> = (0..n).filter_map(|_| sampler.stop(&mut rng)).collect();
    let frac = stops.len() as f64 / n as f64;
    assert!((frac - 0.3).abs() < 0.02, "{frac}");
    let mean = stops.iter().sum::<f64>() / stops.len() as f64;
    assert!((mean - 2.0).abs() < 0.1, "{mean}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn allowed_steps_avoid_obstacles(
        bx in (0.5..4.0f64, 0.5..4.0f64, 0.2..2.0f64, 0.2..2.0f64),
        from in (0.0..6.0f64, 0.0..6.0f64),
        heading in 0.0..std::f64::consts::TAU,
        len in 0.0..3.0f64,
        clearance in 0.0..0.2f64,
    ) {
        let b = [bx.0, bx.1, bx.0 + bx.2, bx.1 + bx.3];
        let poly = Polygon::rectangle(Point::new(b[0], b[1]), Point::new(b[2], b[3]));
        let arena = Arena::new(Rect::new(Point::new(0.0, 0.0), Point::new(6.0, 6.0)), vec![poly], clearance);
        let a = Point::new(from.0, from.1);
        let to = Point::new(a.x + len * heading.cos(), a.y + len * heading.sin());
        prop_assume!(!in_box(a, &b));
        if arena.step_allowed(a, to) {
            prop_assert!(!segment_hits_box(a, to, &b));
            prop_assert!(to.x > 0.0 && to.x < 6.0 && to.y > 0.0 && to.y < 6.0);
        }
    }
}

#[test]
fn simulated_paths_respect_obstacles_and_walls() {
    let c = tiny();
    let bx = boxes(&c);
    for seed in 1..=3 {
        let out = sim::run(&c, seed, true).unwrap();
        let traj = out.trajectories.unwrap();
        let mut last: BTreeMap<u32, Point> = BTreeMap::new();
        for r in &traj {
            let p = Point::new(r.x, r.y);
            assert!(
                p.x > 0.0 && p.x < c.environment.width && p.y > 0.0 && p.y < c.environment.height
            );
            for b in &bx {
                assert!(!in_box(p, b), "seed {seed}: {r:?} inside obstacle");
                if let Some(&q) = last.get(&r.id) {
                    assert!(
                        !segment_hits_box(q, p, b),
                        "seed {seed}: step {q:?} -> {r:?} crosses obstacle"
                    );
                }
            }
            last.insert(r.id, p);
        }
    }
}

/// Encounter events recomputed from ground-truth positions: maximal runs of
/// recorded steps with the pair within the detection radius.
#[test]
fn events_match_trajectory_proximity() {
    let c = tiny();
    let out = sim::run(&c, 4, true).unwrap();
    let traj = out.trajectories.unwrap();
    let dt = c.agents.sim_dt;
    let r2 = c.agents.detection_radius.powi(2);
    let mut by_tick: BTreeMap<u64, Vec<(u32, Point)>> = BTreeMap::new();
    for r in &traj {
        by_tick
            .entry((r.t / dt).round() as u64)
            .or_default()
            .push((r.id, Point::new(r.x, r.y)));
    }
    let last_tick = *by_tick.keys().last().unwrap();
    let mut open: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    let mut expected = Vec::new();
    for (&tick, agents) in &by_tick {
        for (i, &(a, p)) in agents.iter().enumerate() {
            for &(b, q) in &agents[i + 1..] {
                let key = (a.min(b), a.max(b));
                let near = (p.x - q.x).powi(2) + (p.y - q.y).powi(2) <= r2;
                match (near, open.get(&key).copied()) {
                    (true, None) => {
                        open.insert(key, tick);
                    }
                    (false, Some(s)) => {
                        expected.push((s, tick - 1, key.0, key.1));
                        open.remove(&key);
                    }
                    _ => {}
                }
            }
        }
    }
    for (key, s) in open {
        expected.push((s, last_tick, key.0, key.1));
    }
    expected.sort_unstable();
    let mut got: Vec<(u64, u64, u32, u32)> = out
        .events
        .iter()
        .map(|e| {
            (
                (e.t0 / dt).round() as u64,
                (e.t1 / dt).round() as u64,
                e.id_a.min(e.id_b),
                e.id_a.max(e.id_b),
            )
        })
        .collect();
    got.sort_unstable();
    assert!(!got.is_empty());
    assert_eq!(got, expected);
    for (k, e) in out.events.iter().enumerate() {
        assert_eq!(e.index, k);
    }
}

#[test]
fn static_agents_hold_still() {
    let c = tiny();
    let out = sim::run(&c, 5, true).unwrap();
    let traj = out.trajectories.unwrap();
    assert!(!out.statics.is_empty());
    for (agent, _, b, e) in out.statics.rows() {
        let rows: Vec<_> = traj
            .iter()
            .filter(|r| r.id == agent && r.t >= b - 1e-9 && r.t <= e + 1e-9)
            .collect();
        assert!(!rows.is_empty());
        // The span ends at the release step, where the agent has not moved yet.
        for r in &rows {
            if r.t < e - 1e-9 {
                assert_eq!(
                    r.mode,
                    Mode::Static,
                    "agent {agent} span [{b}, {e}] at {}",
                    r.t
                );
            }
            assert_eq!((r.x, r.y), (rows[0].x, rows[0].y));
        }
    }
}

#[test]
fn runs_are_reproducible_per_seed() {
    let c = tiny();
    let a = sim::run(&c, 9, false).unwrap();
    let b = sim::run(&c, 9, false).unwrap();
    let other = sim::run(&c, 10, false).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.events, other.events);
}
