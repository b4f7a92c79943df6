//! Shared fixtures and assertions for the unit tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::vpoly::VPolytope;
use crate::zpoly::ZPolytope;

pub fn assert_close(want: f64, got: f64, tol: f64) {
    assert!(
        (want - got).abs() <= tol,
        "expected {want}, got {got} (tolerance {tol})"
    );
}

pub fn assert_vec_close(want: &[f64], got: &[f64], tol: f64) {
    assert_eq!(want.len(), got.len(), "length mismatch");
    for (w, g) in want.iter().zip(got) {
        assert_close(*w, *g, tol);
    }
}

/// The polytope `<[-0.5, 0], [[1.5, -0.5, -0.5], [-0.5, -2, 0.5]],
/// (<1>, <2>, <1,2>)>` used throughout the tests.
pub fn example_1() -> ZPolytope {
    ZPolytope::new(
        vec![-0.5, 0.0],
        2,
        vec![
            (vec![1.5, -0.5], vec![1]),
            (vec![-0.5, -2.0], vec![2]),
            (vec![-0.5, 0.5], vec![1, 2]),
        ],
    )
    .unwrap()
}

/// Same generators as [`example_1`] attached to different variable parts;
/// defines a non-convex set.
pub fn example_2() -> ZPolytope {
    ZPolytope::new(
        vec![-0.5, 0.0],
        2,
        vec![
            (vec![-0.5, 0.5], vec![1]),
            (vec![-0.5, -2.0], vec![2]),
            (vec![1.5, -0.5], vec![1, 2]),
        ],
    )
    .unwrap()
}

/// The hexagon with vertices (0,5), (3,6), (4,5), (5,1), (2,0), (0,2).
pub fn hexagon() -> VPolytope {
    VPolytope::new(vec![
        vec![0.0, 5.0],
        vec![3.0, 6.0],
        vec![4.0, 5.0],
        vec![5.0, 1.0],
        vec![2.0, 0.0],
        vec![0.0, 2.0],
    ])
    .unwrap()
}

/// The polytope `<[0, -0.5], [[1, 0, 1], [-0.5, 1.5, -0.5]],
/// (<1>, <2>, <1,2>)>` from the range-bounding tests.
pub fn example_4_set() -> ZPolytope {
    ZPolytope::new(
        vec![0.0, -0.5],
        2,
        vec![
            (vec![1.0, -0.5], vec![1]),
            (vec![0.0, 1.5], vec![2]),
            (vec![1.0, -0.5], vec![1, 2]),
        ],
    )
    .unwrap()
}

/// Random valid set: up to `max_h` generators over `num_factors` factors,
/// each with one to three distinct indices and coefficients in `[-2, 2]`.
pub fn random_zpoly<R: Rng>(
    rng: &mut R,
    dim: usize,
    num_factors: usize,
    max_h: usize,
) -> ZPolytope {
    let h = rng.gen_range(1..=max_h.max(1));
    let mut gens = Vec::with_capacity(h);
    let all: Vec<usize> = (1..=num_factors).collect();
    for _ in 0..h {
        let g: Vec<f64> = (0..dim).map(|_| rng.gen_range(-2.0..=2.0)).collect();
        let m = rng.gen_range(1..=num_factors.min(3).max(1));
        let indices: Vec<usize> = all
            .choose_multiple(rng, m)
            .copied()
            .collect();
        gens.push((g, indices));
    }
    let center: Vec<f64> = (0..dim).map(|_| rng.gen_range(-2.0..=2.0)).collect();
    ZPolytope::new(center, num_factors, gens).unwrap()
}
