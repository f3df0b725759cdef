mod common;

use common::{explicit_metric, random_log, Zero};
use proptest::prelude::*;
use swarmtopo::metric::{
    build_graph, mds_embed, shortest_paths, subsample, DistanceMatrix, UNREACHABLE,
};
use swarmtopo::scenario::StaticZeroing;
use swarmtopo::sim::{EncounterEvent, StaticIntervalLog};

fn steps(m: &swarmtopo::metric::MetricMatrix) -> Vec<Vec<Option<u64>>> {
    (0..m.len())
        .map(|i| {
            (0..m.len())
                .map(|j| Some(m.steps(i, j)).filter(|&d| d != UNREACHABLE))
                .collect()
        })
        .collect()
}

fn points(n: std::ops::RangeInclusive<usize>, dim: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    proptest::collection::vec(proptest::collection::vec(-10.0..10.0f64, dim), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sparse_paths_match_explicit_graph(log in random_log(24)) {
        let events = log.encounter_events();
        let statics = log.statics();
        for (mode, zero) in [
            (StaticZeroing::SameStaticInterval, Zero::Same),
            (StaticZeroing::Strict, Zero::Strict),
        ] {
            let g = build_graph(&events, &statics, mode, log.unit).unwrap();
            prop_assert_eq!(steps(&shortest_paths(&g)), explicit_metric(&log.events, &log.spans, zero));
        }
        let g = build_graph(&events, &StaticIntervalLog::new(), StaticZeroing::Strict, log.unit).unwrap();
        prop_assert_eq!(steps(&shortest_paths(&g)), explicit_metric(&log.events, &[], Zero::None));
    }

    #[test]
    fn explicit_edge_weights_agree(log in random_log(16)) {
        let events = log.encounter_events();
        let g = build_graph(&events, &log.statics(), StaticZeroing::SameStaticInterval, log.unit).unwrap();
        let oracle = explicit_metric(&log.events, &log.spans, Zero::Same);
        for i in 0..events.len() {
            for j in 0..events.len() {
                if let Some(w) = g.edge_weight(i, j) {
                    // A direct edge bounds the path length from above.
                    prop_assert!(oracle[i][j].unwrap() <= w);
                } else if i != j {
                    prop_assert!(events[i].shared_ids(&events[j]).next().is_none());
                }
            }
        }
    }

    #[test]
    fn metric_axioms_hold(log in random_log(30)) {
        let g = build_graph(&log.encounter_events(), &log.statics(), StaticZeroing::SameStaticInterval, log.unit).unwrap();
        let m = shortest_paths(&g);
        let n = m.len();
        for i in 0..n {
            prop_assert_eq!(m.steps(i, i), 0);
            for j in 0..n {
                prop_assert_eq!(m.steps(i, j), m.steps(j, i));
                for k in 0..n {
                    let (a, b) = (m.steps(i, k), m.steps(k, j));
                    if a != UNREACHABLE && b != UNREACHABLE {
                        prop_assert!(m.steps(i, j) <= a + b);
                    }
                }
            }
        }
        let secs = m.to_seconds();
        secs.check_basic().unwrap();
    }

    #[test]
    fn zeroing_never_lengthens_paths(log in random_log(30)) {
        let events = log.encounter_events();
        let plain = shortest_paths(&build_graph(&events, &StaticIntervalLog::new(), StaticZeroing::SameStaticInterval, log.unit).unwrap());
        let strict = shortest_paths(&build_graph(&events, &log.statics(), StaticZeroing::Strict, log.unit).unwrap());
        let same = shortest_paths(&build_graph(&events, &log.statics(), StaticZeroing::SameStaticInterval, log.unit).unwrap());
        for i in 0..events.len() {
            for j in 0..events.len() {
                prop_assert!(same.steps(i, j) <= strict.steps(i, j));
                prop_assert!(strict.steps(i, j) <= plain.steps(i, j));
            }
        }
    }

    #[test]
    fn components_follow_reachability(log in random_log(30)) {
        let g = build_graph(&log.encounter_events(), &log.statics(), StaticZeroing::SameStaticInterval, log.unit).unwrap();
        let m = shortest_paths(&g);
        let comps = g.components();
        let mut label = vec![usize::MAX; g.len()];
        for (c, members) in comps.iter().enumerate() {
            for &v in members {
                prop_assert_eq!(label[v], usize::MAX);
                label[v] = c;
            }
        }
        for i in 0..g.len() {
            for j in 0..g.len() {
                prop_assert_eq!(label[i] == label[j], m.steps(i, j) != UNREACHABLE);
            }
        }
    }

    #[test]
    fn maxmin_selections_are_nested(pts in points(2..=40, 2), seed_target in 1usize..40) {
        let dm = DistanceMatrix::euclidean(&pts);
        let n = pts.len();
        let mut last: Option<(Vec<usize>, f64)> = None;
        for target in 1..=n.min(seed_target + 3) {
            let s = subsample(&dm, target, 0.0, None).unwrap();
            prop_assert_eq!(s.indices.len(), target);
            // Independent covering radius.
            let cover = (0..n)
                .map(|i| s.indices.iter().map(|&p| dm.get(i, p)).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max);
            prop_assert_eq!(s.covering_radius, cover);
            prop_assert_eq!(&s.matrix, &dm.submatrix(&s.indices));
            if let Some((prev, r)) = &last {
                prop_assert!(prev.iter().all(|p| s.indices.contains(p)));
                prop_assert!(s.covering_radius <= *r);
            }
            last = Some((s.indices, s.covering_radius));
        }
    }

    #[test]
    fn density_filter_drops_the_sparsest(pts in points(5..=40, 2), q in 0.0..0.9f64, rho in 0.5..6.0f64) {
        let dm = DistanceMatrix::euclidean(&pts);
        let n = pts.len();
        let s = subsample(&dm, n, q, Some(rho)).unwrap();
        prop_assert_eq!(s.discarded.len(), (q * n as f64).floor() as usize);
        prop_assert_eq!(s.indices.len() + s.discarded.len(), n);
        let count = |i: usize| (0..n).filter(|&j| dm.get(i, j) <= rho).count();
        for &d in &s.discarded {
            for &k in &s.indices {
                prop_assert!(count(d) <= count(k));
            }
        }
    }

    #[test]
    fn mds_recovers_euclidean_configurations(pts in points(3..=50, 3), planar in any::<bool>()) {
        let pts: Vec<Vec<f64>> = pts.into_iter().map(|mut p| { if planar { p[2] = 0.0; } p }).collect();
        let dm = DistanceMatrix::euclidean(&pts);
        let e = mds_embed(&dm, 3, (0..pts.len()).collect()).unwrap();
        let r = e.distances();
        let scale = dm.diameter().max(1.0);
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                prop_assert!((r.get(i, j) - dm.get(i, j)).abs() <= 1e-6 * scale);
            }
        }
    }
}

#[test]
fn chained_encounters_add_gaps() {
    // A meets B, later B meets C: the gap along B is the distance.
    let events = vec![
        EncounterEvent::new(0, 0.0, 1.0, 0, 1),
        EncounterEvent::new(1, 3.0, 4.0, 1, 2),
        EncounterEvent::new(2, 6.0, 6.0, 2, 3),
        EncounterEvent::new(3, 0.0, 9.0, 4, 5),
    ];
    let g = build_graph(
        &events,
        &StaticIntervalLog::new(),
        StaticZeroing::SameStaticInterval,
        1.0,
    )
    .unwrap();
    let m = shortest_paths(&g);
    assert_eq!(m.seconds(0, 1), 2.0);
    assert_eq!(m.seconds(1, 2), 2.0);
    assert_eq!(m.seconds(0, 2), 4.0);
    assert!(m.seconds(0, 3).is_infinite());
}

#[test]
fn shared_static_span_zeroes_disjoint_events() {
    let events = vec![
        EncounterEvent::new(0, 1.0, 2.0, 7, 1),
        EncounterEvent::new(1, 8.0, 9.0, 7, 2),
    ];
    let mut statics = StaticIntervalLog::new();
    statics.push(7, 0.0, 10.0).unwrap();
    let same = build_graph(&events, &statics, StaticZeroing::SameStaticInterval, 1.0).unwrap();
    assert_eq!(shortest_paths(&same).seconds(0, 1), 0.0);
    let strict = build_graph(&events, &statics, StaticZeroing::Strict, 1.0).unwrap();
    assert_eq!(shortest_paths(&strict).seconds(0, 1), 6.0);
}

#[test]
fn off_grid_times_are_rejected() {
    let events = vec![EncounterEvent::new(0, 0.05, 1.0, 0, 1)];
    assert!(build_graph(
        &events,
        &StaticIntervalLog::new(),
        StaticZeroing::Strict,
        0.1
    )
    .is_err());
    assert!(build_graph(&[], &StaticIntervalLog::new(), StaticZeroing::Strict, 0.1).is_err());
}
