//! Taylor forms: a scalar polynomial zonotope over factors in `[-1, 1]^p`
//! paired with an interval remainder that encloses all truncation error.
//!
//! Products merge equal exponent vectors; any product term whose total
//! degree exceeds the configured cap is absorbed into the remainder through
//! the monomial parity bound, as are all remainder cross terms.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::interval::Interval;
use crate::polyzono::PolyZonotope;

/// Relative widening applied per operation when epsilon inflation is on.
const INFLATION: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum TfError {
    #[error("operands carry {left} and {right} factors")]
    FactorMismatch { left: usize, right: usize },
    #[error("Taylor forms are scalar; got a polynomial zonotope of dimension {dim}")]
    NotScalar { dim: usize },
}

/// Knobs shared by all Taylor-form operations.
#[derive(Debug, Clone, Copy)]
pub struct TfContext {
    pub degree_cap: u32,
    pub inflate: bool,
}

impl TfContext {
    fn fix(&self, iv: Interval) -> Interval {
        if self.inflate {
            iv.inflate(INFLATION)
        } else {
            iv
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transcendental {
    Sin,
    Cos,
    Exp,
}

/// Range of one monomial over the factor box: `[0, 1]` when every exponent
/// is even (and at least one is positive), `[-1, 1]` otherwise.
fn monomial_range(exponents: &[u32]) -> Interval {
    if exponents.iter().all(|&e| e % 2 == 0) {
        Interval::new(0.0, 1.0)
    } else {
        Interval::new(-1.0, 1.0)
    }
}

#[derive(Debug, Clone)]
pub struct TaylorForm {
    poly: PolyZonotope,
    remainder: Interval,
}

impl TaylorForm {
    pub fn constant(value: f64, num_factors: usize) -> Self {
        TaylorForm {
            poly: PolyZonotope::constant(vec![value], num_factors),
            remainder: Interval::point(0.0),
        }
    }

    /// Wraps a scalar polynomial zonotope with a remainder.
    pub fn from_poly(poly: PolyZonotope, remainder: Interval) -> Result<Self, TfError> {
        if poly.dim() != 1 {
            return Err(TfError::NotScalar { dim: poly.dim() });
        }
        Ok(TaylorForm { poly, remainder })
    }

    /// Builds a form from a scalar center and exponent-keyed coefficients.
    pub(crate) fn from_map(
        center: f64,
        terms: BTreeMap<Vec<u32>, f64>,
        num_factors: usize,
        remainder: Interval,
    ) -> Self {
        let poly = PolyZonotope::new(
            vec![center],
            num_factors,
            terms.into_iter().map(|(e, c)| (vec![c], e)),
        )
        .expect("internally consistent term shapes");
        TaylorForm { poly, remainder }
    }

    pub fn num_factors(&self) -> usize {
        self.poly.num_factors()
    }

    pub fn poly(&self) -> &PolyZonotope {
        &self.poly
    }

    pub fn remainder(&self) -> Interval {
        self.remainder
    }

    fn center(&self) -> f64 {
        self.poly.center()[0]
    }

    fn term_items(&self) -> impl Iterator<Item = (&[u32], f64)> {
        self.poly
            .terms()
            .iter()
            .map(|t| (t.exponents.as_slice(), t.coefficient[0]))
    }

    /// Parity bound of the polynomial part alone.
    fn poly_range(&self) -> Interval {
        let mut range = Interval::point(self.center());
        for (exps, coeff) in self.term_items() {
            range = range.add(&monomial_range(exps).scale(coeff));
        }
        range
    }

    /// Enclosure of the form over the factor box: parity bound of the
    /// polynomial part plus the remainder.
    pub fn bound(&self) -> Interval {
        self.poly_range().add(&self.remainder)
    }

    fn check_factors(&self, other: &TaylorForm) -> Result<(), TfError> {
        if self.num_factors() != other.num_factors() {
            return Err(TfError::FactorMismatch {
                left: self.num_factors(),
                right: other.num_factors(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &TaylorForm, ctx: &TfContext) -> Result<TaylorForm, TfError> {
        self.check_factors(other)?;
        Ok(self.add_unchecked(other, ctx))
    }

    fn add_unchecked(&self, other: &TaylorForm, ctx: &TfContext) -> TaylorForm {
        let mut terms: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        for (e, c) in self.term_items().chain(other.term_items()) {
            *terms.entry(e.to_vec()).or_insert(0.0) += c;
        }
        TaylorForm::from_map(
            self.center() + other.center(),
            terms,
            self.num_factors(),
            ctx.fix(self.remainder.add(&other.remainder)),
        )
    }

    pub fn sub(&self, other: &TaylorForm, ctx: &TfContext) -> Result<TaylorForm, TfError> {
        self.add(&other.scale(-1.0, ctx), ctx)
    }

    pub fn scale(&self, k: f64, ctx: &TfContext) -> TaylorForm {
        let terms = self
            .term_items()
            .map(|(e, c)| (e.to_vec(), k * c))
            .collect();
        TaylorForm::from_map(
            k * self.center(),
            terms,
            self.num_factors(),
            ctx.fix(self.remainder.scale(k)),
        )
    }

    /// Shifts the center by `delta`.
    fn shifted(&self, delta: f64, ctx: &TfContext) -> TaylorForm {
        let terms = self.term_items().map(|(e, c)| (e.to_vec(), c)).collect();
        TaylorForm::from_map(
            self.center() + delta,
            terms,
            self.num_factors(),
            ctx.fix(self.remainder),
        )
    }

    pub fn mul(&self, other: &TaylorForm, ctx: &TfContext) -> Result<TaylorForm, TfError> {
        self.check_factors(other)?;
        Ok(self.mul_unchecked(other, ctx))
    }

    fn mul_unchecked(&self, other: &TaylorForm, ctx: &TfContext) -> TaylorForm {
        let zero: Vec<u32> = vec![0; self.num_factors()];
        let left: Vec<(Vec<u32>, f64)> = std::iter::once((zero.clone(), self.center()))
            .chain(self.term_items().map(|(e, c)| (e.to_vec(), c)))
            .collect();
        let right: Vec<(Vec<u32>, f64)> = std::iter::once((zero, other.center()))
            .chain(other.term_items().map(|(e, c)| (e.to_vec(), c)))
            .collect();

        let mut center = 0.0;
        let mut terms: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        let mut absorbed = Interval::point(0.0);
        for (e1, c1) in &left {
            if *c1 == 0.0 {
                continue;
            }
            for (e2, c2) in &right {
                let c = c1 * c2;
                if c == 0.0 {
                    continue;
                }
                let exps: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let degree: u32 = exps.iter().sum();
                if degree == 0 {
                    center += c;
                } else if degree > ctx.degree_cap {
                    absorbed = absorbed.add(&monomial_range(&exps).scale(c));
                } else {
                    *terms.entry(exps).or_insert(0.0) += c;
                }
            }
        }

        let cross = self
            .poly_range()
            .mul(&other.remainder)
            .add(&other.poly_range().mul(&self.remainder))
            .add(&self.remainder.mul(&other.remainder));
        TaylorForm::from_map(
            center,
            terms,
            self.num_factors(),
            ctx.fix(absorbed.add(&cross)),
        )
    }

    pub fn int_pow(&self, k: u32, ctx: &TfContext) -> TaylorForm {
        let mut acc = TaylorForm::constant(1.0, self.num_factors());
        for _ in 0..k {
            acc = acc.mul_unchecked(self, ctx);
        }
        acc
    }

    /// Taylor expansion of `sin`, `cos` or `exp` around the midpoint of the
    /// operand's bound, with a Lagrange remainder for the truncated tail.
    pub fn transcendental(
        kind: Transcendental,
        u: &TaylorForm,
        order: u32,
        ctx: &TfContext,
    ) -> TaylorForm {
        let range = u.bound();
        let m0 = range.midpoint();
        let r = range.radius();
        let w = u.shifted(-m0, ctx);

        let deriv = |j: u32| -> f64 {
            match kind {
                Transcendental::Sin => match j % 4 {
                    0 => m0.sin(),
                    1 => m0.cos(),
                    2 => -m0.sin(),
                    _ => -m0.cos(),
                },
                Transcendental::Cos => match j % 4 {
                    0 => m0.cos(),
                    1 => -m0.sin(),
                    2 => -m0.cos(),
                    _ => m0.sin(),
                },
                Transcendental::Exp => m0.exp(),
            }
        };

        let mut acc = TaylorForm::constant(deriv(0), u.num_factors());
        let mut w_pow = TaylorForm::constant(1.0, u.num_factors());
        let mut factorial = 1.0;
        for j in 1..=order {
            w_pow = w_pow.mul_unchecked(&w, ctx);
            factorial *= j as f64;
            let coeff = deriv(j) / factorial;
            if coeff != 0.0 {
                acc = acc.add_unchecked(&w_pow.scale(coeff, ctx), ctx);
            }
        }

        let magnitude = match kind {
            Transcendental::Sin | Transcendental::Cos => 1.0,
            Transcendental::Exp => range.hi().exp(),
        };
        let lagrange = magnitude * r.powi(order as i32 + 1) / (factorial * (order as f64 + 1.0));
        TaylorForm {
            poly: acc.poly,
            remainder: ctx.fix(acc.remainder.add(&Interval::symmetric(lagrange))),
        }
    }

    /// Splitting payoff of a factor (0-based): the coefficient mass of the
    /// terms that involve it nonlinearly, counting any term of total degree
    /// two or more. Purely linear terms are bounded exactly by the parity
    /// rule, so they gain nothing from bisection and are excluded.
    pub fn impact_score(&self, factor: usize) -> f64 {
        self.term_items()
            .filter(|(e, _)| e[factor] >= 1 && e.iter().sum::<u32>() >= 2)
            .map(|(_, c)| c.abs())
            .sum()
    }

    /// Factor with the largest impact score; `None` when every term is
    /// linear (the parity bound of the polynomial part is exact then).
    pub fn split_factor(&self) -> Option<usize> {
        (0..self.num_factors())
            .map(|k| (k, self.impact_score(k)))
            .filter(|(_, s)| *s > 0.0)
            .max_by(|(ka, sa), (kb, sb)| sa.total_cmp(sb).then(kb.cmp(ka)))
            .map(|(k, _)| k)
    }
}
