//! MaxMin landmark selection on the hop metric of the communication graph.

use crate::error::{Error, Result};
use crate::geometry::Point;
use rand::Rng;
use std::collections::VecDeque;

/// Hop distance used for unreachable nodes; compares above every finite hop count.
pub const UNREACHABLE: u32 = u32::MAX;

/// Unit-disk adjacency lists: `i ~ j` iff `|p_i − p_j| ≤ range`.
pub fn range_graph(positions: &[Point], range: f64) -> Vec<Vec<usize>> {
    let r2 = range * range;
    let n = positions.len();
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            if positions[i].dist2(positions[j]) <= r2 {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    adj
}

/// Multi-source BFS hop distances.
pub fn hop_distances(adj: &[Vec<usize>], sources: &[usize]) -> Vec<u32> {
    let mut dist = vec![UNREACHABLE; adj.len()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if dist[s] != 0 {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if dist[v] == UNREACHABLE {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

pub fn connected_components(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut label = vec![usize::MAX; adj.len()];
    let mut comps = Vec::new();
    for s in 0..adj.len() {
        if label[s] != usize::MAX {
            continue;
        }
        let c = comps.len();
        let mut members = vec![s];
        label[s] = c;
        let mut head = 0;
        while head < members.len() {
            let u = members[head];
            head += 1;
            for &v in &adj[u] {
                if label[v] == usize::MAX {
                    label[v] = c;
                    members.push(v);
                }
            }
        }
        members.sort_unstable();
        comps.push(members);
    }
    comps
}

/// Uniformly random element among the maximizers of `key` over `candidates`.
fn argmax_random<R: Rng + ?Sized>(
    candidates: &[usize],
    key: impl Fn(usize) -> u32,
    rng: &mut R,
) -> Option<usize> {
    let best = candidates.iter().map(|&c| key(c)).max()?;
    let ties: Vec<usize> = candidates
        .iter()
        .copied()
        .filter(|&c| key(c) == best)
        .collect();
    Some(ties[rng.random_range(0..ties.len())])
}

/// One MaxMin step: the candidate farthest (in hops) from every node in
/// `chosen`; with nothing chosen yet the pick is uniform.
pub fn maxmin_step<R: Rng + ?Sized>(
    adj: &[Vec<usize>],
    chosen: &[usize],
    candidates: &[usize],
    rng: &mut R,
) -> Option<usize> {
    if candidates.is_empty() {
        return None;
    }
    if chosen.is_empty() {
        return Some(candidates[rng.random_range(0..candidates.len())]);
    }
    let hops = hop_distances(adj, chosen);
    argmax_random(candidates, |c| hops[c], rng)
}

/// Extends `chosen` greedily within `pool` until it holds `count` nodes.
pub fn maxmin_extend<R: Rng + ?Sized>(
    adj: &[Vec<usize>],
    chosen: &mut Vec<usize>,
    pool: &[usize],
    count: usize,
    rng: &mut R,
) {
    let mut hops = hop_distances(adj, chosen);
    while chosen.len() < count {
        let free: Vec<usize> = pool.iter().copied().filter(|&c| hops[c] != 0).collect();
        let next = if chosen.is_empty() {
            free.get(rng.random_range(0..free.len().max(1))).copied()
        } else {
            argmax_random(&free, |c| hops[c], rng)
        };
        let Some(next) = next else { break };
        chosen.push(next);
        let from_new = hop_distances(adj, &[next]);
        for (h, n) in hops.iter_mut().zip(from_new) {
            *h = (*h).min(n);
        }
    }
}

/// Selects `⌈fraction·n⌉` landmarks by MaxMin hop distance on the range graph.
///
/// When the graph is disconnected each landmark is assigned to a component
/// drawn with probability proportional to its (remaining) size, and the
/// MaxMin rule is applied inside that component.
pub fn select_landmarks<R: Rng + ?Sized>(
    positions: &[Point],
    range: f64,
    fraction: f64,
    rng: &mut R,
) -> Result<Vec<usize>> {
    if positions.is_empty() {
        return Err(Error::Empty("agent set"));
    }
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "landmark fraction {fraction} not in (0, 1)"
        )));
    }
    let count = ((fraction * positions.len() as f64) - 1e-9).ceil() as usize;
    let adj = range_graph(positions, range);
    let comps = connected_components(&adj);
    let mut per_comp: Vec<Vec<usize>> = vec![Vec::new(); comps.len()];
    let mut chosen = Vec::with_capacity(count);
    while chosen.len() < count {
        let weights: Vec<usize> = comps
            .iter()
            .zip(&per_comp)
            .map(|(c, p)| c.len() - p.len())
            .collect();
        let total: usize = weights.iter().sum();
        if total == 0 {
            break;
        }
        let mut ticket = rng.random_range(0..total);
        let mut ci = 0;
        while ticket >= weights[ci] {
            ticket -= weights[ci];
            ci += 1;
        }
        let picked = maxmin_step(
            &adj,
            &per_comp[ci],
            &free_nodes(&comps[ci], &per_comp[ci]),
            rng,
        )
        .expect("component has free nodes");
        per_comp[ci].push(picked);
        chosen.push(picked);
    }
    chosen.sort_unstable();
    Ok(chosen)
}

fn free_nodes(comp: &[usize], taken: &[usize]) -> Vec<usize> {
    comp.iter()
        .copied()
        .filter(|c| !taken.contains(c))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn path(n: usize) -> Vec<Point> {
        (0..n).map(|i| Point::new(i as f64, 0.0)).collect()
    }

    #[test]
    fn path_graph_second_pick_is_far_endpoint() {
        // Hop distances from node 0 on a 5-path are 0,1,2,3,4: the argmax is node 4.
        let adj = range_graph(&path(5), 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut chosen = vec![0];
        maxmin_extend(&adj, &mut chosen, &[0, 1, 2, 3, 4], 2, &mut rng);
        assert_eq!(chosen, vec![0, 4]);
        let mut chosen = vec![4];
        maxmin_extend(&adj, &mut chosen, &[0, 1, 2, 3, 4], 2, &mut rng);
        assert_eq!(chosen, vec![4, 0]);
        // Third pick on the path is the midpoint (hops 2 from both ends).
        maxmin_extend(&adj, &mut chosen, &[0, 1, 2, 3, 4], 3, &mut rng);
        assert_eq!(chosen, vec![4, 0, 2]);
    }

    #[test]
    fn single_agent_is_forced() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(
            select_landmarks(&[Point::new(1.0, 1.0)], 0.1, 0.5, &mut rng).unwrap(),
            vec![0]
        );
    }

    #[test]
    fn count_is_ceiling_of_fraction() {
        let pts: Vec<Point> = (0..100)
            .map(|i| Point::new((i % 10) as f64 * 0.1, (i / 10) as f64 * 0.1))
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let l = select_landmarks(&pts, 0.15, 0.1, &mut rng).unwrap();
        assert_eq!(l.len(), 10);
        let mut dedup = l.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), 10);
        assert_eq!(
            select_landmarks(&pts[..7], 0.15, 0.1, &mut rng)
                .unwrap()
                .len(),
            1
        );
    }

    #[test]
    fn empty_set_is_an_error() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            select_landmarks(&[], 1.0, 0.5, &mut rng),
            Err(Error::Empty(_))
        ));
    }

    #[test]
    fn disconnected_clusters_get_landmarks_in_proportion() {
        // 80 agents in one tight cluster, 20 in another far away; 10% landmarks.
        let mut pts = Vec::new();
        for i in 0..80 {
            pts.push(Point::new((i % 9) as f64 * 0.01, (i / 9) as f64 * 0.01));
        }
        for i in 0..20 {
            pts.push(Point::new(
                10.0 + (i % 5) as f64 * 0.01,
                (i / 5) as f64 * 0.01,
            ));
        }
        let mut in_small = 0usize;
        let trials = 400;
        for seed in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let l = select_landmarks(&pts, 0.015, 0.1, &mut rng).unwrap();
            assert_eq!(l.len(), 10);
            in_small += l.iter().filter(|&&i| i >= 80).count();
        }
        let share = in_small as f64 / (10 * trials) as f64;
        assert!((share - 0.2).abs() < 0.03, "share {share}");
    }
}
