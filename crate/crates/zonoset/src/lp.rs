//! Dense two-phase simplex for small equality-constrained problems.
//!
//! Standard form: minimize `c^T x` subject to `A x = b`, `x >= 0`. The
//! instances here are tiny (redundant-vertex tests build one problem per
//! candidate point), so the solver favours robustness: a dense tableau,
//! Dantzig pricing that falls back to Bland's rule after a fixed number of
//! pivots, and a hard pivot budget that turns cycling into an error.

use thiserror::Error;

const PIVOT_TOLERANCE: f64 = 1e-9;
const COST_TOLERANCE: f64 = 1e-9;

/// Absolute feasibility tolerance for phase-1 decisions and the final
/// constraint check.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum LpError {
    #[error("constraint matrix has {rows} rows but rhs has {rhs} entries")]
    ShapeRows { rows: usize, rhs: usize },
    #[error("constraint row {row} has length {got}, expected {expected}")]
    ShapeRow { row: usize, expected: usize, got: usize },
    #[error("pivot budget of {budget} exhausted; the instance is numerically pathological")]
    PivotBudget { budget: usize },
    #[error("numerical failure: {0}")]
    Numerical(String),
}

/// Minimization over nonnegative variables with equality constraints.
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub constraints: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
}

impl LpProblem {
    fn check(&self) -> Result<(), LpError> {
        if self.constraints.len() != self.rhs.len() {
            return Err(LpError::ShapeRows {
                rows: self.constraints.len(),
                rhs: self.rhs.len(),
            });
        }
        for (i, row) in self.constraints.iter().enumerate() {
            if row.len() != self.objective.len() {
                return Err(LpError::ShapeRow {
                    row: i + 1,
                    expected: self.objective.len(),
                    got: row.len(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpSolution {
    Optimal { x: Vec<f64>, objective: f64 },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: usize,
    num_vars: usize,
    cols: usize, // num_vars structural + rows artificial
    a: Vec<f64>,
    b: Vec<f64>,
    basis: Vec<usize>,
    cost: Vec<f64>,
    pivots: usize,
    bland_after: usize,
    budget: usize,
}

impl Tableau {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.cols + j]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = 1.0 / self.at(row, col);
        for j in 0..self.cols {
            self.a[row * self.cols + j] *= inv;
        }
        self.b[row] *= inv;
        for i in 0..self.rows {
            if i == row {
                continue;
            }
            let factor = self.at(i, col);
            if factor == 0.0 {
                continue;
            }
            for j in 0..self.cols {
                let v = self.at(row, j);
                self.a[i * self.cols + j] -= factor * v;
            }
            self.b[i] -= factor * self.b[row];
        }
        let factor = self.cost[col];
        if factor != 0.0 {
            for j in 0..self.cols {
                self.cost[j] -= factor * self.at(row, j);
            }
        }
        self.basis[row] = col;
        self.pivots += 1;
    }

    /// Pivots until the cost row is nonnegative over the allowed columns.
    /// Returns `Ok(true)` on optimality, `Ok(false)` when an improving
    /// column has no positive entry (unbounded).
    fn run(&mut self, allow_artificial: bool) -> Result<bool, LpError> {
        loop {
            let limit = if allow_artificial { self.cols } else { self.num_vars };
            let entering = if self.pivots < self.bland_after {
                // Dantzig: most negative reduced cost, smallest index on ties.
                let mut best: Option<(usize, f64)> = None;
                for j in 0..limit {
                    let c = self.cost[j];
                    if c < -COST_TOLERANCE && best.map_or(true, |(_, bc)| c < bc) {
                        best = Some((j, c));
                    }
                }
                best.map(|(j, _)| j)
            } else {
                (0..limit).find(|&j| self.cost[j] < -COST_TOLERANCE)
            };
            let Some(col) = entering else {
                return Ok(true);
            };

            let mut leaving: Option<(usize, f64)> = None;
            for i in 0..self.rows {
                let coeff = self.at(i, col);
                if coeff > PIVOT_TOLERANCE {
                    let ratio = self.b[i] / coeff;
                    let better = match leaving {
                        None => true,
                        Some((li, lr)) => {
                            ratio < lr - PIVOT_TOLERANCE
                                || (ratio < lr + PIVOT_TOLERANCE
                                    && self.basis[i] < self.basis[li])
                        }
                    };
                    if better {
                        leaving = Some((i, ratio));
                    }
                }
            }
            let Some((row, _)) = leaving else {
                return Ok(false);
            };
            if self.pivots >= self.budget {
                return Err(LpError::PivotBudget { budget: self.budget });
            }
            self.pivot(row, col);
        }
    }
}

pub fn solve(prob: &LpProblem) -> Result<LpSolution, LpError> {
    prob.check()?;
    let rows = prob.constraints.len();
    let num_vars = prob.objective.len();
    let cols = num_vars + rows;

    let mut a = vec![0.0; rows * cols];
    let mut b = vec![0.0; rows];
    for i in 0..rows {
        let flip = if prob.rhs[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..num_vars {
            a[i * cols + j] = flip * prob.constraints[i][j];
        }
        a[i * cols + num_vars + i] = 1.0;
        b[i] = flip * prob.rhs[i];
    }

    // Phase 1: minimize the sum of artificials; reduced costs for the
    // artificial basis are the negated column sums.
    let mut cost = vec![0.0; cols];
    for j in 0..num_vars {
        cost[j] = -(0..rows).map(|i| a[i * cols + j]).sum::<f64>();
    }
    let bland_after = 5 * (rows + num_vars);
    let mut tab = Tableau {
        rows,
        num_vars,
        cols,
        a,
        b,
        basis: (num_vars..num_vars + rows).collect(),
        cost,
        pivots: 0,
        bland_after,
        budget: 10_000 + 200 * (rows + num_vars),
    };
    if !tab.run(true)? {
        return Err(LpError::Numerical("phase 1 reported unbounded".into()));
    }
    let infeasibility: f64 = (0..rows)
        .filter(|&i| tab.basis[i] >= num_vars)
        .map(|i| tab.b[i])
        .sum();
    if infeasibility > FEASIBILITY_TOLERANCE {
        return Ok(LpSolution::Infeasible);
    }

    // Drive leftover artificials out of the basis where possible; rows that
    // have no structural pivot are redundant constraints.
    for i in 0..rows {
        if tab.basis[i] < num_vars {
            continue;
        }
        if let Some(col) = (0..num_vars).find(|&j| tab.at(i, j).abs() > PIVOT_TOLERANCE) {
            tab.pivot(i, col);
        }
    }

    // Phase 2: restore the real objective, eliminated over the basis.
    tab.cost = vec![0.0; cols];
    tab.cost[..num_vars].copy_from_slice(&prob.objective);
    for i in 0..rows {
        let basic = tab.basis[i];
        let c = tab.cost[basic];
        if c != 0.0 {
            for j in 0..cols {
                let v = tab.at(i, j);
                tab.cost[j] -= c * v;
            }
        }
    }
    if !tab.run(false)? {
        return Ok(LpSolution::Unbounded);
    }

    let mut x = vec![0.0; num_vars];
    for i in 0..rows {
        if tab.basis[i] < num_vars {
            x[tab.basis[i]] = tab.b[i];
        }
    }
    for (i, row) in prob.constraints.iter().enumerate() {
        let lhs: f64 = row.iter().zip(&x).map(|(a, b)| a * b).sum();
        if (lhs - prob.rhs[i]).abs() > FEASIBILITY_TOLERANCE {
            return Err(LpError::Numerical(format!(
                "optimal point violates constraint {} by {:e}",
                i + 1,
                (lhs - prob.rhs[i]).abs()
            )));
        }
    }
    let objective = prob.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpSolution::Optimal { x, objective })
}

/// Finds nonnegative weights summing to one that combine `points` into `v`,
/// if any exist: the feasibility problem behind redundant-vertex detection.
pub fn convex_combination(
    v: &[f64],
    points: &[Vec<f64>],
) -> Result<Option<Vec<f64>>, LpError> {
    let dim = v.len();
    let k = points.len();
    let mut constraints = Vec::with_capacity(dim + 1);
    for j in 0..dim {
        constraints.push(points.iter().map(|p| p[j]).collect());
    }
    constraints.push(vec![1.0; k]);
    let mut rhs: Vec<f64> = v.to_vec();
    rhs.push(1.0);
    let prob = LpProblem { objective: vec![0.0; k], constraints, rhs };
    match solve(&prob)? {
        LpSolution::Optimal { x, .. } => Ok(Some(x)),
        LpSolution::Infeasible => Ok(None),
        LpSolution::Unbounded => {
            Err(LpError::Numerical("feasibility problem reported unbounded".into()))
        }
    }
}

/// True iff `v` lies in the convex hull of `points`.
pub fn in_convex_hull(v: &[f64], points: &[Vec<f64>]) -> Result<bool, LpError> {
    Ok(convex_combination(v, points)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pinned_variable() {
        let prob = LpProblem {
            objective: vec![1.0],
            constraints: vec![vec![1.0]],
            rhs: vec![1.0],
        };
        match solve(&prob).unwrap() {
            LpSolution::Optimal { x, objective } => {
                assert!((x[0] - 1.0).abs() < 1e-10);
                assert!((objective - 1.0).abs() < 1e-10);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn contradictory_constraints_are_infeasible() {
        let prob = LpProblem {
            objective: vec![0.0],
            constraints: vec![vec![1.0], vec![1.0]],
            rhs: vec![1.0, 2.0],
        };
        assert_eq!(solve(&prob).unwrap(), LpSolution::Infeasible);
    }

    #[test]
    fn free_descent_is_unbounded() {
        let prob = LpProblem {
            objective: vec![-1.0],
            constraints: vec![],
            rhs: vec![],
        };
        assert_eq!(solve(&prob).unwrap(), LpSolution::Unbounded);
    }

    #[test]
    fn degenerate_instances_terminate() {
        let prob = LpProblem {
            objective: vec![-0.75, 150.0, -0.02, 6.0],
            constraints: vec![
                vec![0.25, -60.0, -0.04, 9.0],
                vec![0.5, -90.0, -0.02, 3.0],
                vec![0.0, 0.0, 1.0, 0.0],
            ],
            rhs: vec![0.0, 0.0, 1.0],
        };
        // Classic cycling example (Beale); Bland fallback must finish it.
        assert!(matches!(solve(&prob), Ok(LpSolution::Unbounded | LpSolution::Optimal { .. })));
    }

    #[test]
    fn midpoint_is_in_hull() {
        let points = vec![vec![0.0, 0.0], vec![2.0, 2.0]];
        assert!(in_convex_hull(&[1.0, 1.0], &points).unwrap());
        assert!(!in_convex_hull(&[3.0, 3.0], &points).unwrap());
        assert!(!in_convex_hull(&[1.0, 0.5], &points).unwrap());
    }

    #[test]
    fn no_points_means_no_hull() {
        assert!(!in_convex_hull(&[0.0], &[]).unwrap());
    }

    #[test]
    fn hexagon_vertices_are_not_redundant() {
        let hexagon = vec![
            vec![0.0, 5.0],
            vec![3.0, 6.0],
            vec![4.0, 5.0],
            vec![5.0, 1.0],
            vec![2.0, 0.0],
            vec![0.0, 2.0],
        ];
        for i in 0..hexagon.len() {
            let others: Vec<Vec<f64>> = hexagon
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, p)| p.clone())
                .collect();
            assert!(
                !in_convex_hull(&hexagon[i], &others).unwrap(),
                "vertex {i} wrongly reported redundant"
            );
        }
    }

    #[test]
    fn witness_reconstructs_the_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..50 {
            let k = rng.gen_range(3..=8);
            let points: Vec<Vec<f64>> = (0..k)
                .map(|_| (0..3).map(|_| rng.gen_range(-5.0..=5.0)).collect())
                .collect();
            // A genuine convex combination, so feasibility must hold.
            let mut weights: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..1.0)).collect();
            let total: f64 = weights.iter().sum();
            weights.iter_mut().for_each(|w| *w /= total);
            let v: Vec<f64> = (0..3)
                .map(|j| points.iter().zip(&weights).map(|(p, w)| p[j] * w).sum())
                .collect();
            let witness = convex_combination(&v, &points)
                .unwrap()
                .expect("point is a convex combination by construction");
            for j in 0..3 {
                let rebuilt: f64 =
                    points.iter().zip(&witness).map(|(p, w)| p[j] * w).sum();
                assert!(
                    (rebuilt - v[j]).abs() <= 1e-7,
                    "witness misses coordinate {j}: {rebuilt} vs {}",
                    v[j]
                );
            }
        }
    }

    // Independent 2D oracle via Caratheodory: a point lies in the hull iff
    // some vertex, segment, or triangle of the cloud contains it.
    fn oracle_in_hull(v: &[f64], points: &[Vec<f64>]) -> bool {
        let close = |a: &[f64], b: &[f64]| (a[0] - b[0]).abs() < 1e-9 && (a[1] - b[1]).abs() < 1e-9;
        let on_segment = |p: &[f64], a: &[f64], b: &[f64]| {
            let cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
            if cross.abs() > 1e-7 {
                return false;
            }
            let dot = (p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1]);
            let len2 = (b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2);
            (-1e-9..=len2 + 1e-9).contains(&dot)
        };
        let in_triangle = |p: &[f64], a: &[f64], b: &[f64], c: &[f64]| {
            let sign = |p1: &[f64], p2: &[f64], p3: &[f64]| {
                (p1[0] - p3[0]) * (p2[1] - p3[1]) - (p2[0] - p3[0]) * (p1[1] - p3[1])
            };
            let d1 = sign(p, a, b);
            let d2 = sign(p, b, c);
            let d3 = sign(p, c, a);
            let has_neg = d1 < -1e-12 || d2 < -1e-12 || d3 < -1e-12;
            let has_pos = d1 > 1e-12 || d2 > 1e-12 || d3 > 1e-12;
            !(has_neg && has_pos)
        };
        if points.iter().any(|p| close(v, p)) {
            return true;
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if on_segment(v, &points[i], &points[j]) {
                    return true;
                }
                for k in j + 1..points.len() {
                    if in_triangle(v, &points[i], &points[j], &points[k]) {
                        return true;
                    }
                }
            }
        }
        false
    }

    #[test]
    fn agrees_with_polygon_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let mut agreements = 0;
        for _ in 0..200 {
            let k = rng.gen_range(3..=10);
            let points: Vec<Vec<f64>> = (0..k)
                .map(|_| (0..2).map(|_| rng.gen_range(-3.0..=3.0)).collect())
                .collect();
            let v: Vec<f64> = (0..2).map(|_| rng.gen_range(-3.5..=3.5)).collect();
            let lp = in_convex_hull(&v, &points).unwrap();
            let oracle = oracle_in_hull(&v, &points);
            assert_eq!(lp, oracle, "disagreement at v={v:?} points={points:?}");
            agreements += 1;
        }
        assert_eq!(agreements, 200);
    }
}
