//! Closed-form set operations on the Z-representation.
//!
//! All three operations are concatenation constructions: they never merge
//! generators or renumber factors beyond the stated index shifts, so the
//! size bookkeeping of the convex hull holds with integer equality. Callers
//! that want a regular result invoke [`ZPolytope::regularize`] themselves.

use thiserror::Error;

use crate::matrix::Matrix;
use crate::zpoly::{IndexList, ZPolytope};

#[derive(Debug, Error)]
pub enum SetOpError {
    #[error("operands have dimensions {left} and {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix has {cols} columns but the set has dimension {dim}")]
    MatrixShape { cols: usize, dim: usize },
    #[error("generator blocks declare {left} and {right} factors; a common numbering is required")]
    FactorNumbering { left: usize, right: usize },
    #[error("block is malformed: {0}")]
    MalformedBlock(String),
}

/// A generator block `(G, E)` referring to an explicit factor numbering,
/// used by [`merge_concat`].
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorBlock {
    num_factors: usize,
    generators: Vec<Vec<f64>>,
    exponents: Vec<IndexList>,
}

impl GeneratorBlock {
    pub fn new(
        num_factors: usize,
        generators: Vec<Vec<f64>>,
        exponents: Vec<IndexList>,
    ) -> Result<Self, SetOpError> {
        if generators.len() != exponents.len() {
            return Err(SetOpError::MalformedBlock(format!(
                "{} generators but {} index lists",
                generators.len(),
                exponents.len()
            )));
        }
        for e in &exponents {
            if e.is_empty() || !e.is_strictly_increasing() || e.max_index() > num_factors {
                return Err(SetOpError::MalformedBlock(format!(
                    "index list {e} is not a valid variable part for {num_factors} factors"
                )));
            }
        }
        Ok(GeneratorBlock { num_factors, generators, exponents })
    }

    pub fn num_factors(&self) -> usize {
        self.num_factors
    }

    pub fn generators(&self) -> &[Vec<f64>] {
        &self.generators
    }

    pub fn exponents(&self) -> &[IndexList] {
        &self.exponents
    }
}

impl From<&ZPolytope> for GeneratorBlock {
    fn from(p: &ZPolytope) -> Self {
        GeneratorBlock {
            num_factors: p.num_factors(),
            generators: p.generators().to_vec(),
            exponents: p.exponents().to_vec(),
        }
    }
}

/// Concatenates two generator blocks over a common factor numbering into
/// `<c, [G1, G2], (E1, E2)>`.
pub fn merge_concat(
    center: Vec<f64>,
    first: &GeneratorBlock,
    second: &GeneratorBlock,
) -> Result<ZPolytope, SetOpError> {
    if first.num_factors != second.num_factors {
        return Err(SetOpError::FactorNumbering {
            left: first.num_factors,
            right: second.num_factors,
        });
    }
    let dim = center.len();
    for g in first.generators.iter().chain(&second.generators) {
        if g.len() != dim {
            return Err(SetOpError::DimensionMismatch { left: dim, right: g.len() });
        }
    }
    let mut generators = first.generators.clone();
    generators.extend(second.generators.iter().cloned());
    let mut exponents = first.exponents.clone();
    exponents.extend(second.exponents.iter().cloned());
    Ok(ZPolytope::from_raw(dim, first.num_factors, center, generators, exponents))
}

/// The linear transformation `M * P = <M c, M G, E>`.
pub fn linear_map(matrix: &Matrix, p: &ZPolytope) -> Result<ZPolytope, SetOpError> {
    if matrix.cols() != p.dim() {
        return Err(SetOpError::MatrixShape { cols: matrix.cols(), dim: p.dim() });
    }
    let center = matrix.mul_vec(p.center()).expect("shape checked");
    let generators = p
        .generators()
        .iter()
        .map(|g| matrix.mul_vec(g).expect("shape checked"))
        .collect();
    Ok(ZPolytope::from_raw(
        matrix.rows(),
        p.num_factors(),
        center,
        generators,
        p.exponents().to_vec(),
    ))
}

/// The Minkowski sum `<c1 + c2, [G1, G2], (E1, E2 + p1)>`: the second
/// operand's factors are shifted past the first operand's.
pub fn minkowski_sum(p1: &ZPolytope, p2: &ZPolytope) -> Result<ZPolytope, SetOpError> {
    if p1.dim() != p2.dim() {
        return Err(SetOpError::DimensionMismatch { left: p1.dim(), right: p2.dim() });
    }
    let center = p1
        .center()
        .iter()
        .zip(p2.center())
        .map(|(a, b)| a + b)
        .collect();
    let mut generators = p1.generators().to_vec();
    generators.extend(p2.generators().iter().cloned());
    let mut exponents = p1.exponents().to_vec();
    exponents.extend(p2.exponents().iter().map(|e| e.shifted(p1.num_factors())));
    Ok(ZPolytope::from_raw(
        p1.dim(),
        p1.num_factors() + p2.num_factors(),
        center,
        generators,
        exponents,
    ))
}

/// The convex hull
/// `<(c1+c2)/2, [(c1-c2)/2, G1/2, G1/2, G2/2, -G2/2], ((p), E1, E1^, E2_, E2^)>`
/// where `p = p1 + p2 + 1` is the fresh interpolation factor, `E2_` shifts
/// the second operand's indices by `p1`, and the hatted blocks append `p`.
/// The output sizes are exactly `p = p1 + p2 + 1`, `h = 2 h1 + 2 h2 + 1`,
/// `mu = 2 mu1 + 2 mu2 + h1 + h2 + 1`.
pub fn convex_hull(p1: &ZPolytope, p2: &ZPolytope) -> Result<ZPolytope, SetOpError> {
    if p1.dim() != p2.dim() {
        return Err(SetOpError::DimensionMismatch { left: p1.dim(), right: p2.dim() });
    }
    let dim = p1.dim();
    let new_factor = p1.num_factors() + p2.num_factors() + 1;
    let half = |v: &[f64]| -> Vec<f64> { v.iter().map(|x| 0.5 * x).collect() };
    let half_neg = |v: &[f64]| -> Vec<f64> { v.iter().map(|x| -0.5 * x).collect() };

    let center: Vec<f64> = p1
        .center()
        .iter()
        .zip(p2.center())
        .map(|(a, b)| 0.5 * (a + b))
        .collect();

    let h = 2 * p1.num_generators() + 2 * p2.num_generators() + 1;
    let mut generators = Vec::with_capacity(h);
    let mut exponents = Vec::with_capacity(h);

    generators.push(
        p1.center()
            .iter()
            .zip(p2.center())
            .map(|(a, b)| 0.5 * (a - b))
            .collect(),
    );
    exponents.push(IndexList::new(vec![new_factor]));

    for (g, e) in p1.generators().iter().zip(p1.exponents()) {
        generators.push(half(g));
        exponents.push(e.clone());
    }
    for (g, e) in p1.generators().iter().zip(p1.exponents()) {
        generators.push(half(g));
        exponents.push(e.appended(new_factor));
    }
    let shifted: Vec<IndexList> = p2
        .exponents()
        .iter()
        .map(|e| e.shifted(p1.num_factors()))
        .collect();
    for (g, e) in p2.generators().iter().zip(&shifted) {
        generators.push(half(g));
        exponents.push(e.clone());
    }
    for (g, e) in p2.generators().iter().zip(&shifted) {
        generators.push(half_neg(g));
        exponents.push(e.appended(new_factor));
    }

    Ok(ZPolytope::from_raw(dim, new_factor, center, generators, exponents))
}
