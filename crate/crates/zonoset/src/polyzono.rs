//! General sparse polynomial zonotopes: the closure of the Z-representation
//! under multiplication, with nonnegative integer exponents per factor.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::zpoly::ZPolytope;

#[derive(Debug, Error)]
pub enum PolyZonoError {
    #[error("term {term} has coefficient length {got}, expected dimension {expected}")]
    CoefficientLength { term: usize, expected: usize, got: usize },
    #[error("term {term} has exponent length {got}, expected {expected} factors")]
    ExponentLength { term: usize, expected: usize, got: usize },
    #[error("alpha has length {got}, expected {expected} factors")]
    AlphaLength { expected: usize, got: usize },
    #[error("alpha[{index}] = {value} lies outside [-1, 1]")]
    AlphaOutOfRange { index: usize, value: f64 },
}

/// One monomial: a vector coefficient and one exponent per factor.
#[derive(Debug, Clone, PartialEq)]
pub struct PzTerm {
    pub coefficient: Vec<f64>,
    pub exponents: Vec<u32>,
}

/// A polynomial zonotope in canonical form: exponent vectors are pairwise
/// distinct and never all zero (constant contributions live in the center).
#[derive(Debug, Clone, PartialEq)]
pub struct PolyZonotope {
    dim: usize,
    num_factors: usize,
    center: Vec<f64>,
    terms: Vec<PzTerm>,
}

impl PolyZonotope {
    /// Merges duplicate exponent vectors, folds all-zero exponents into the
    /// center and drops terms whose merged coefficient is exactly zero.
    /// Terms are stored sorted by exponent vector.
    pub fn new(
        center: Vec<f64>,
        num_factors: usize,
        terms: impl IntoIterator<Item = (Vec<f64>, Vec<u32>)>,
    ) -> Result<Self, PolyZonoError> {
        let dim = center.len();
        let mut folded_center = center;
        let mut merged: BTreeMap<Vec<u32>, Vec<f64>> = BTreeMap::new();
        for (i, (coeff, exps)) in terms.into_iter().enumerate() {
            if coeff.len() != dim {
                return Err(PolyZonoError::CoefficientLength {
                    term: i + 1,
                    expected: dim,
                    got: coeff.len(),
                });
            }
            if exps.len() != num_factors {
                return Err(PolyZonoError::ExponentLength {
                    term: i + 1,
                    expected: num_factors,
                    got: exps.len(),
                });
            }
            if exps.iter().all(|&e| e == 0) {
                for (c, v) in folded_center.iter_mut().zip(&coeff) {
                    *c += v;
                }
                continue;
            }
            match merged.entry(exps) {
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    for (acc, v) in e.get_mut().iter_mut().zip(&coeff) {
                        *acc += v;
                    }
                }
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(coeff);
                }
            }
        }
        let terms = merged
            .into_iter()
            .filter(|(_, coeff)| coeff.iter().any(|&v| v != 0.0))
            .map(|(exponents, coefficient)| PzTerm { coefficient, exponents })
            .collect();
        Ok(PolyZonotope { dim, num_factors, center: folded_center, terms })
    }

    pub fn constant(center: Vec<f64>, num_factors: usize) -> Self {
        PolyZonotope { dim: center.len(), num_factors, center, terms: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_factors(&self) -> usize {
        self.num_factors
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn terms(&self) -> &[PzTerm] {
        &self.terms
    }

    pub fn evaluate(&self, alpha: &[f64], allow_outside: bool) -> Result<Vec<f64>, PolyZonoError> {
        if alpha.len() != self.num_factors {
            return Err(PolyZonoError::AlphaLength {
                expected: self.num_factors,
                got: alpha.len(),
            });
        }
        if !allow_outside {
            for (i, &a) in alpha.iter().enumerate() {
                if !(-1.0..=1.0).contains(&a) {
                    return Err(PolyZonoError::AlphaOutOfRange { index: i + 1, value: a });
                }
            }
        }
        let mut point = self.center.clone();
        for term in &self.terms {
            let monomial: f64 = term
                .exponents
                .iter()
                .zip(alpha)
                .map(|(&e, &a)| a.powi(e as i32))
                .product();
            for (x, v) in point.iter_mut().zip(&term.coefficient) {
                *x += monomial * v;
            }
        }
        Ok(point)
    }
}

impl ZPolytope {
    /// Lifts to a general polynomial zonotope: each generator becomes one
    /// term with exponent 1 at every index of its variable part. Evaluation
    /// is preserved pointwise.
    pub fn to_poly_zonotope(&self) -> PolyZonotope {
        let p = self.num_factors();
        let terms = self.generators().iter().zip(self.exponents()).map(|(g, e)| {
            let mut exps = vec![0u32; p];
            for &idx in e.indices() {
                exps[idx - 1] = 1;
            }
            (g.clone(), exps)
        });
        PolyZonotope::new(self.center().to_vec(), p, terms)
            .expect("a valid Z-representation lifts cleanly")
    }
}
