//! Conversions between vertex and Z-representation.
//!
//! V to Z builds a binary tree of pairwise convex hulls over the vertex
//! list. Z to V evaluates the set at all `2^p` factor-hypercube vertices —
//! the polytope vertices are a subset of those images because every
//! coordinate is multilinear in the factors — and then strips duplicates
//! and redundant points. For inputs that are not polytopes the result is
//! the vertex representation of the set's convex hull.

use thiserror::Error;

use crate::lp::{self, LpError};
use crate::parallel;
use crate::setops;
use crate::vpoly::VPolytope;
use crate::zpoly::{ZPolytope, DEFAULT_ENUMERATION_CAP};

#[derive(Debug, Error)]
pub enum ConvertError {
    #[error("{factors} factors exceed the enumeration cap of {cap}")]
    EnumerationCap { factors: usize, cap: usize },
    #[error("linear program failed during redundancy removal: {0}")]
    Lp(#[from] LpError),
}

/// Vertex order fed to the pairwise-hull tree. The tree shape, and with it
/// the generator values of the result, depend on this order; the set does
/// not.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexOrdering {
    /// Use the vertices exactly as stored.
    InputOrder,
    /// Nearest-neighbor chain from the lexicographically smallest vertex,
    /// so that vertices close to each other are combined first.
    GreedyNearest,
}

/// Converts a vertex representation to Z-representation: each vertex starts
/// as a point set and adjacent pairs are repeatedly united by the convex
/// hull until a single set remains; an odd leftover passes through to the
/// next round unchanged.
pub fn v_to_z(p: &VPolytope, ordering: VertexOrdering) -> ZPolytope {
    let vertices = match ordering {
        VertexOrdering::InputOrder => p.vertices().to_vec(),
        VertexOrdering::GreedyNearest => greedy_nearest_order(p.vertices()),
    };
    let mut nodes: Vec<ZPolytope> = vertices.into_iter().map(ZPolytope::point).collect();
    while nodes.len() > 1 {
        let mut next = Vec::with_capacity(nodes.len().div_ceil(2));
        let mut iter = nodes.into_iter();
        while let Some(first) = iter.next() {
            match iter.next() {
                Some(second) => next.push(
                    setops::convex_hull(&first, &second)
                        .expect("tree nodes share the input dimension"),
                ),
                None => next.push(first),
            }
        }
        nodes = next;
    }
    nodes.pop().expect("vertex representations are nonempty")
}

fn greedy_nearest_order(vertices: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut remaining: Vec<&Vec<f64>> = vertices.iter().collect();
    let start = remaining
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| lex_cmp(a, b))
        .map(|(i, _)| i)
        .expect("nonempty");
    let mut ordered = vec![remaining.swap_remove(start).clone()];
    while !remaining.is_empty() {
        let last = ordered.last().unwrap();
        let nearest = remaining
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                dist2(last, a)
                    .total_cmp(&dist2(last, b))
                    .then_with(|| lex_cmp(a, b))
            })
            .map(|(i, _)| i)
            .unwrap();
        ordered.push(remaining.swap_remove(nearest).clone());
    }
    ordered
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

/// Converts a Z-representation to vertex representation with the default
/// enumeration cap. `tol` is the Euclidean deduplication tolerance.
pub fn z_to_v(p: &ZPolytope, tol: f64) -> Result<VPolytope, ConvertError> {
    z_to_v_capped(p, tol, DEFAULT_ENUMERATION_CAP)
}

pub fn z_to_v_capped(p: &ZPolytope, tol: f64, cap: usize) -> Result<VPolytope, ConvertError> {
    if p.num_factors() > cap {
        return Err(ConvertError::EnumerationCap { factors: p.num_factors(), cap });
    }
    let masks = p.generator_masks();
    let total = 1usize << p.num_factors();
    let chunks = parallel::map_chunks(total, |range| {
        range
            .map(|vertex| p.evaluate_at_vertex(vertex as u64, &masks))
            .collect::<Vec<_>>()
    });
    let mut points: Vec<Vec<f64>> = chunks.into_iter().flatten().collect();
    points.sort_by(|a, b| lex_cmp(a, b));
    let unique = dedup_points(&points, tol);

    let vertices = match p.dim() {
        1 => {
            // The extremes are the only candidates on a line.
            let lo = unique.first().unwrap().clone();
            let hi = unique.last().unwrap().clone();
            if unique.len() == 1 { vec![lo] } else { vec![lo, hi] }
        }
        2 => {
            let mut hull = hull_2d(&unique);
            hull.sort_by(|a, b| lex_cmp(a, b));
            hull
        }
        _ => remove_redundant_lp(unique)?,
    };
    Ok(VPolytope::new(vertices).expect("at least one candidate point survives"))
}

fn remove_redundant_lp(points: Vec<Vec<f64>>) -> Result<Vec<Vec<f64>>, ConvertError> {
    let mut kept: Vec<bool> = vec![true; points.len()];
    for i in 0..points.len() {
        let others: Vec<Vec<f64>> = points
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i && kept[*j])
            .map(|(_, p)| p.clone())
            .collect();
        if others.is_empty() {
            continue;
        }
        if lp::in_convex_hull(&points[i], &others)? {
            kept[i] = false;
        }
    }
    Ok(points
        .into_iter()
        .zip(kept)
        .filter(|(_, k)| *k)
        .map(|(p, _)| p)
        .collect())
}

/// Order-stable deduplication: a point is dropped when it lies within `tol`
/// (Euclidean) of an already kept point.
pub fn dedup_points(points: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let tol2 = tol * tol;
    let mut kept: Vec<Vec<f64>> = Vec::new();
    for p in points {
        if kept.iter().all(|q| dist2(p, q) > tol2) {
            kept.push(p.clone());
        }
    }
    kept
}

/// Monotone-chain convex hull of a 2D point cloud, counterclockwise,
/// starting at the lexicographically smallest vertex. Collinear interior
/// points are dropped.
pub fn hull_2d(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    assert!(!points.is_empty(), "hull of an empty point set");
    assert!(points.iter().all(|p| p.len() == 2), "hull_2d needs 2D points");
    let mut pts: Vec<(f64, f64)> = points.iter().map(|p| (p[0], p[1])).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup();
    if pts.len() <= 2 {
        return pts.into_iter().map(|(x, y)| vec![x, y]).collect();
    }

    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let build = |iter: &mut dyn Iterator<Item = (f64, f64)>| {
        let mut chain: Vec<(f64, f64)> = Vec::new();
        for p in iter {
            while chain.len() >= 2 && cross(chain[chain.len() - 2], chain[chain.len() - 1], p) <= 0.0
            {
                chain.pop();
            }
            chain.push(p);
        }
        chain.pop();
        chain
    };
    let mut hull = build(&mut pts.iter().copied());
    hull.extend(build(&mut pts.iter().rev().copied()));
    if hull.is_empty() {
        // Fully collinear: the two extremes remain.
        hull = vec![pts[0], *pts.last().unwrap()];
    }
    hull.into_iter().map(|(x, y)| vec![x, y]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{example_1, hexagon};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn vertex_set_eq(a: &[Vec<f64>], b: &[Vec<f64>], tol: f64) -> bool {
        a.len() == b.len()
            && a.iter().all(|p| b.iter().any(|q| dist2(p, q) <= tol * tol))
    }

    #[test]
    fn single_vertex_becomes_a_point() {
        let v = VPolytope::new(vec![vec![1.0, 2.0]]).unwrap();
        let z = v_to_z(&v, VertexOrdering::InputOrder);
        assert_eq!(z.center(), &[1.0, 2.0]);
        assert_eq!(z.num_factors(), 0);
        assert_eq!(z.num_generators(), 0);
    }

    #[test]
    fn two_vertices_become_a_segment() {
        let v = VPolytope::new(vec![vec![0.0, 0.0], vec![2.0, 2.0]]).unwrap();
        let z = v_to_z(&v, VertexOrdering::InputOrder);
        let s = z.size_stats();
        assert_eq!((s.p, s.h, s.mu), (1, 1, 1));
        assert_eq!(z.center(), &[1.0, 1.0]);
    }

    #[test]
    fn hexagon_sizes_follow_the_hull_tree() {
        let z = v_to_z(&hexagon(), VertexOrdering::InputOrder);
        let s = z.size_stats();
        assert_eq!((s.p, s.h, s.mu), (5, 13, 23));
    }

    #[test]
    fn power_of_two_counts_match_perfect_tree_growth() {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let expected = [(1usize, 1usize, 1usize), (3, 5, 7), (7, 21, 39), (15, 85, 199), (31, 341, 967)];
        for (k, want) in (1..=5).zip(expected) {
            let q = 1usize << k;
            let vertices: Vec<Vec<f64>> = (0..q)
                .map(|_| (0..2).map(|_| rng.gen_range(-5.0..=5.0)).collect())
                .collect();
            let v = VPolytope::new(vertices).unwrap();
            let s = v_to_z(&v, VertexOrdering::InputOrder).size_stats();
            assert_eq!((s.p, s.h, s.mu), want, "q = {q}");
        }
    }

    #[test]
    fn every_input_vertex_is_an_alpha_vertex_image() {
        let z = v_to_z(&hexagon(), VertexOrdering::InputOrder);
        let masks = z.generator_masks();
        for vertex in hexagon().vertices() {
            let hit = (0..1u64 << z.num_factors()).any(|bits| {
                let img = z.evaluate_at_vertex(bits, &masks);
                dist2(&img, vertex) <= 1e-18
            });
            assert!(hit, "vertex {vertex:?} not reproduced");
        }
    }

    #[test]
    fn z_to_v_of_example_set() {
        let v = z_to_v(&example_1(), 1e-9).unwrap();
        let want = vec![
            vec![-2.0, -2.0],
            vec![-2.0, 3.0],
            vec![0.0, -2.0],
            vec![2.0, 1.0],
        ];
        assert!(vertex_set_eq(v.vertices(), &want, 1e-9), "got {:?}", v.vertices());
    }

    #[test]
    fn z_to_v_of_a_point() {
        let v = z_to_v(&ZPolytope::point(vec![3.0, -1.0]), 1e-9).unwrap();
        assert_eq!(v.vertices(), &[vec![3.0, -1.0]]);
    }

    #[test]
    fn z_to_v_in_one_dimension() {
        let z = ZPolytope::zonotope(vec![1.0], vec![vec![2.0]]).unwrap();
        let v = z_to_v(&z, 1e-9).unwrap();
        assert_eq!(v.vertices(), &[vec![-1.0], vec![3.0]]);
    }

    #[test]
    fn z_to_v_respects_cap() {
        let z = v_to_z(&hexagon(), VertexOrdering::InputOrder);
        assert!(matches!(
            z_to_v_capped(&z, 1e-9, 3),
            Err(ConvertError::EnumerationCap { factors: 5, cap: 3 })
        ));
    }

    #[test]
    fn hexagon_round_trip_is_exact() {
        for ordering in [VertexOrdering::InputOrder, VertexOrdering::GreedyNearest] {
            let z = v_to_z(&hexagon(), ordering);
            let v = z_to_v(&z, 1e-9).unwrap();
            assert!(
                vertex_set_eq(v.vertices(), hexagon().vertices(), 1e-9),
                "{ordering:?} returned {:?}",
                v.vertices()
            );
        }
    }

    #[test]
    fn three_dimensional_round_trip_uses_lp_removal() {
        // A simplex plus its centroid; the centroid must be eliminated.
        let v = VPolytope::new(vec![
            vec![0.0, 0.0, 0.0],
            vec![2.0, 0.0, 0.0],
            vec![0.0, 2.0, 0.0],
            vec![0.5, 0.5, 0.5],
            vec![0.0, 0.0, 2.0],
        ])
        .unwrap();
        let z = v_to_z(&v, VertexOrdering::GreedyNearest);
        let back = z_to_v(&z, 1e-9).unwrap();
        let want = vec![
            vec![0.0, 0.0, 0.0],
            vec![2.0, 0.0, 0.0],
            vec![0.0, 2.0, 0.0],
            vec![0.0, 0.0, 2.0],
        ];
        assert!(vertex_set_eq(back.vertices(), &want, 1e-9), "got {:?}", back.vertices());
    }

    #[test]
    fn random_2d_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for trial in 0..40 {
            let raw: Vec<Vec<f64>> = (0..rng.gen_range(3..=10))
                .map(|_| (0..2).map(|_| rng.gen_range(-4.0..=4.0)).collect())
                .collect();
            let mut vertices = hull_2d(&raw);
            if vertices.len() < 3 {
                continue;
            }
            vertices.sort_by(|a, b| lex_cmp(a, b));
            let input = VPolytope::new(vertices.clone()).unwrap();
            for ordering in [VertexOrdering::InputOrder, VertexOrdering::GreedyNearest] {
                let z = v_to_z(&input, ordering);
                let back = z_to_v(&z, 1e-9).unwrap();
                assert!(
                    vertex_set_eq(back.vertices(), &vertices, 1e-9),
                    "trial {trial} {ordering:?}: {:?} vs {vertices:?}",
                    back.vertices()
                );
            }
        }
    }

    #[test]
    fn dedup_keeps_first_occurrence() {
        let a = vec![1.0, 1.0];
        let b = vec![2.0, 2.0];
        let out = dedup_points(&[a.clone(), a.clone(), b.clone()], 1e-9);
        assert_eq!(out, vec![a, b]);

        let spaced = vec![vec![0.0], vec![1.0], vec![2.0]];
        assert_eq!(dedup_points(&spaced, 0.5), spaced);

        let near = vec![vec![0.0], vec![1e-12], vec![1.0]];
        assert_eq!(dedup_points(&near, 1e-9), vec![vec![0.0], vec![1.0]]);
    }

    #[test]
    fn hull_2d_basics() {
        let tri = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        let hull = hull_2d(&tri);
        assert_eq!(hull.len(), 3);

        let square_plus_center = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
            vec![0.5, 0.5],
        ];
        let hull = hull_2d(&square_plus_center);
        assert_eq!(hull.len(), 4);
        assert!(!hull.contains(&vec![0.5, 0.5]));

        // Counterclockwise from the lexicographically smallest vertex.
        assert_eq!(hull[0], vec![0.0, 0.0]);
        let area2: f64 = (0..hull.len())
            .map(|i| {
                let a = &hull[i];
                let b = &hull[(i + 1) % hull.len()];
                a[0] * b[1] - b[0] * a[1]
            })
            .sum();
        assert!(area2 > 0.0, "hull is not counterclockwise");
    }

    #[test]
    fn hull_2d_degenerate_clouds() {
        assert_eq!(hull_2d(&[vec![1.0, 2.0]]), vec![vec![1.0, 2.0]]);
        let collinear = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0], vec![3.0, 3.0]];
        let hull = hull_2d(&collinear);
        assert_eq!(hull, vec![vec![0.0, 0.0], vec![3.0, 3.0]]);
        let duplicates = vec![vec![1.0, 1.0]; 5];
        assert_eq!(hull_2d(&duplicates).len(), 1);
    }

    // O(n^3) oracle: a point is redundant iff some segment or triangle of
    // the others contains it (Caratheodory in the plane).
    fn oracle_hull_vertices(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let inside_triangle = |p: &[f64], a: &[f64], b: &[f64], c: &[f64]| {
            let sign = |p1: &[f64], p2: &[f64], p3: &[f64]| {
                (p1[0] - p3[0]) * (p2[1] - p3[1]) - (p2[0] - p3[0]) * (p1[1] - p3[1])
            };
            let d1 = sign(p, a, b);
            let d2 = sign(p, b, c);
            let d3 = sign(p, c, a);
            let has_neg = d1 < 0.0 || d2 < 0.0 || d3 < 0.0;
            let has_pos = d1 > 0.0 || d2 > 0.0 || d3 > 0.0;
            !(has_neg && has_pos)
        };
        let on_segment = |p: &[f64], a: &[f64], b: &[f64]| {
            let cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
            if cross.abs() > 1e-9 {
                return false;
            }
            let dot = (p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1]);
            let len2 = dist2(a, b);
            (0.0..=len2).contains(&dot)
        };
        points
            .iter()
            .enumerate()
            .filter(|(i, p)| {
                let others: Vec<&Vec<f64>> = points
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| j != i)
                    .map(|(_, q)| q)
                    .collect();
                let mut redundant = false;
                'outer: for x in 0..others.len() {
                    for y in x + 1..others.len() {
                        if on_segment(p, others[x], others[y]) {
                            redundant = true;
                            break 'outer;
                        }
                        for z in y + 1..others.len() {
                            if inside_triangle(p, others[x], others[y], others[z]) {
                                redundant = true;
                                break 'outer;
                            }
                        }
                    }
                }
                !redundant
            })
            .map(|(_, p)| p.clone())
            .collect()
    }

    #[test]
    fn hull_2d_agrees_with_brute_force_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        for _ in 0..20 {
            let points: Vec<Vec<f64>> = (0..rng.gen_range(5..=24))
                .map(|_| (0..2).map(|_| rng.gen_range(-3.0..=3.0)).collect())
                .collect();
            let mut hull = hull_2d(&points);
            hull.sort_by(|a, b| lex_cmp(a, b));
            let mut want = oracle_hull_vertices(&points);
            want.sort_by(|a, b| lex_cmp(a, b));
            assert_eq!(hull, want, "points {points:?}");
        }
    }
}
