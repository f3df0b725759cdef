//! Boundary-matrix reduction over Z/2 for a Rips filtration capped at triangles.
//!
//! Dimension 0 is reduced with union-find under the elder rule, which yields
//! the same pairing as reducing the edge columns. Triangle columns are then
//! reduced against the edges that created cycles.

use super::diagram::{Bar, PersistenceDiagram};
use super::rips::{RipsFiltration, Simplex};
use std::collections::HashMap;

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Persistence pairs of the filtration; zero-length bars are dropped.
pub fn persistence(filtration: &RipsFiltration) -> PersistenceDiagram {
    let entries = &filtration.entries;
    let n = filtration.vertex_count;
    let mut bars = Vec::new();

    // Filtration position of each vertex (vertices may tie at 0 in label order).
    let mut vertex_pos = vec![0usize; n];
    let mut edge_pos: HashMap<(u32, u32), usize> = HashMap::new();
    for (k, e) in entries.iter().enumerate() {
        match e.simplex {
            Simplex::Vertex(v) => vertex_pos[v as usize] = k,
            Simplex::Edge(a, b) => {
                edge_pos.insert((a, b), k);
            }
            Simplex::Triangle(..) => {}
        }
    }

    // Union-find roots are the oldest vertex of each component.
    let mut parent: Vec<usize> = (0..n).collect();
    let mut positive_edge = vec![false; entries.len()];
    let mut positive_count = 0usize;
    for (k, e) in entries.iter().enumerate() {
        let Simplex::Edge(a, b) = e.simplex else {
            continue;
        };
        let (ra, rb) = (find(&mut parent, a as usize), find(&mut parent, b as usize));
        if ra == rb {
            positive_edge[k] = true;
            positive_count += 1;
            continue;
        }
        let (elder, younger) = if vertex_pos[ra] < vertex_pos[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        parent[younger] = elder;
        if e.value > 0.0 {
            bars.push(Bar {
                dim: 0,
                birth: 0.0,
                death: e.value,
                birth_simplex: Simplex::Vertex(younger as u32),
                death_simplex: Some(e.simplex),
            });
        }
    }
    for v in 0..n {
        if find(&mut parent, v) == v {
            bars.push(Bar {
                dim: 0,
                birth: 0.0,
                death: f64::INFINITY,
                birth_simplex: Simplex::Vertex(v as u32),
                death_simplex: None,
            });
        }
    }

    // Reduced triangle columns stored by pivot (their lowest edge position).
    let mut by_pivot: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut paired = 0usize;
    for e in entries {
        if paired == positive_count {
            break;
        }
        if e.simplex.dim() != 2 {
            continue;
        }
        let mut col: Vec<usize> = e
            .simplex
            .faces()
            .iter()
            .map(|f| match *f {
                Simplex::Edge(a, b) => edge_pos[&(a, b)],
                _ => unreachable!(),
            })
            .collect();
        col.sort_unstable();
        while let Some(&low) = col.last() {
            match by_pivot.get(&low) {
                Some(other) => col = symmetric_difference(&col, other),
                None => break,
            }
        }
        if let Some(&low) = col.last() {
            debug_assert!(positive_edge[low]);
            let birth = entries[low].value;
            if e.value > birth {
                bars.push(Bar {
                    dim: 1,
                    birth,
                    death: e.value,
                    birth_simplex: entries[low].simplex,
                    death_simplex: Some(e.simplex),
                });
            }
            positive_edge[low] = false;
            paired += 1;
            by_pivot.insert(low, col);
        }
    }
    for (k, e) in entries.iter().enumerate() {
        if positive_edge[k] {
            bars.push(Bar {
                dim: 1,
                birth: e.value,
                death: f64::INFINITY,
                birth_simplex: e.simplex,
                death_simplex: None,
            });
        }
    }
    PersistenceDiagram::new(bars)
}

/// Sum over Z/2 of two ascending index lists.
fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::DistanceMatrix;
    use crate::tda::{betti_at, classify, rips_filtration};

    fn square() -> PersistenceDiagram {
        let d = DistanceMatrix::euclidean(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
        persistence(&rips_filtration(&d, 2.0).unwrap())
    }

    #[test]
    fn unit_square_diagram() {
        let dgm = square();
        assert_eq!(dgm.pairs(1), vec![(1.0, 2f64.sqrt())]);
        assert_eq!(
            dgm.pairs(0),
            vec![(0.0, 1.0), (0.0, 1.0), (0.0, 1.0), (0.0, f64::INFINITY)]
        );
        let hole = dgm.dim(1).next().unwrap();
        assert!(matches!(hole.death_simplex, Some(Simplex::Triangle(..))));
    }

    #[test]
    fn equidistant_points_have_no_holes() {
        for n in 1..=5 {
            let d = DistanceMatrix::from_fn(n, |_, _| 2.5);
            let dgm = persistence(&rips_filtration(&d, 3.0).unwrap());
            assert_eq!(dgm.pairs(0).iter().filter(|p| p.1 == 2.5).count(), n - 1);
            assert_eq!(dgm.pairs(0).iter().filter(|p| p.1.is_infinite()).count(), 1);
            assert!(dgm.pairs(1).is_empty());
        }
    }

    #[test]
    fn classification_and_betti() {
        let dgm = square();
        let r = classify(&dgm, 0.2).unwrap();
        assert_eq!((r.robust_components, r.robust_holes), (4, 1));
        let r = classify(&dgm, 1.0).unwrap();
        assert_eq!((r.robust_components, r.robust_holes), (1, 0));
        let r = classify(&dgm, f64::INFINITY).unwrap();
        assert_eq!((r.robust_components, r.robust_holes), (1, 0));
        let r = classify(&PersistenceDiagram::default(), 0.1).unwrap();
        assert_eq!((r.robust_components, r.robust_holes), (0, 0));
        assert!(classify(&dgm, -1.0).is_err());

        assert_eq!(betti_at(&dgm, 1.2), (1, 1));
        assert_eq!(betti_at(&dgm, 0.0), (4, 0));
        assert_eq!(betti_at(&dgm, 10.0), (1, 0));
    }

    #[test]
    fn truncated_filtration_leaves_infinite_hole() {
        let d = DistanceMatrix::euclidean(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
        let dgm = persistence(&rips_filtration(&d, 1.2).unwrap());
        assert_eq!(dgm.pairs(1), vec![(1.0, f64::INFINITY)]);
    }
}
