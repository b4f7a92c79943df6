//! Range bounding of nonlinear expressions over sets.
//!
//! Three methods share one contract — return an interval containing
//! `{f(x) : x in S}`:
//!
//! * `ia-box`: interval hull of the set, then natural interval evaluation.
//! * `tm-box`: Taylor-form evaluation over the interval hull, one fresh
//!   factor per coordinate.
//! * `pz`: Taylor-form evaluation of the set's own factor parameterization,
//!   skipping the box over-approximation entirely; shared factors keep the
//!   coordinate dependencies.
//!
//! `tm-box` is `pz` applied to the hull written as an axis-aligned zonotope,
//! so both run through the same composition and refinement code.

mod taylor;

pub use taylor::{TaylorForm, TfContext, TfError, Transcendental};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::interval::Interval;
use crate::zpoly::{ZPolyError, ZPolytope};

#[derive(Debug, Error)]
pub enum BoundError {
    #[error("expression uses x{var} but the set has dimension {dim}")]
    VarOutOfRange { var: usize, dim: usize },
    #[error("division by zero constant")]
    DivisionByZero,
    #[error("taylor_order must be at least 1")]
    ZeroOrder,
    #[error(transparent)]
    Hull(#[from] ZPolyError),
    #[error(transparent)]
    Taylor(#[from] TfError),
}

/// Expression tree over the coordinates `x1..xN` of a set.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    /// 0-based coordinate index (`x1` is `Var(0)`).
    Var(usize),
    Const(f64),
    Neg(Box<Expr>),
    Sum(Vec<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Prod(Vec<Expr>),
    /// Integer power with a nonnegative literal exponent.
    Pow(Box<Expr>, u32),
    /// Division by a nonzero constant.
    Div(Box<Expr>, f64),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Exp(Box<Expr>),
}

impl Expr {
    /// Largest 0-based variable index used, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Var(i) => Some(*i),
            Expr::Const(_) => None,
            Expr::Neg(e) | Expr::Pow(e, _) | Expr::Div(e, _) | Expr::Sin(e) | Expr::Cos(e)
            | Expr::Exp(e) => e.max_var(),
            Expr::Sum(v) | Expr::Prod(v) => v.iter().filter_map(Expr::max_var).max(),
            Expr::Sub(a, b) => a.max_var().max(b.max_var()),
        }
    }

    /// Plain floating-point evaluation at a point.
    pub fn eval(&self, x: &[f64]) -> Result<f64, BoundError> {
        Ok(match self {
            Expr::Var(i) => {
                *x.get(*i).ok_or(BoundError::VarOutOfRange { var: i + 1, dim: x.len() })?
            }
            Expr::Const(k) => *k,
            Expr::Neg(e) => -e.eval(x)?,
            Expr::Sum(v) => {
                let mut s = 0.0;
                for e in v {
                    s += e.eval(x)?;
                }
                s
            }
            Expr::Sub(a, b) => a.eval(x)? - b.eval(x)?,
            Expr::Prod(v) => {
                let mut s = 1.0;
                for e in v {
                    s *= e.eval(x)?;
                }
                s
            }
            Expr::Pow(e, k) => e.eval(x)?.powi(*k as i32),
            Expr::Div(e, k) => {
                if *k == 0.0 {
                    return Err(BoundError::DivisionByZero);
                }
                e.eval(x)? / k
            }
            Expr::Sin(e) => e.eval(x)?.sin(),
            Expr::Cos(e) => e.eval(x)?.cos(),
            Expr::Exp(e) => e.eval(x)?.exp(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    IaBox,
    TmBox,
    Pz,
}

#[derive(Debug, Clone, Copy)]
pub struct BoundConfig {
    pub taylor_order: u32,
    pub degree_cap: u32,
    pub split_depth: u32,
    pub method: Method,
    /// Relative widening of interval results, off by default.
    pub inflate: bool,
}

impl Default for BoundConfig {
    fn default() -> Self {
        BoundConfig {
            taylor_order: 6,
            degree_cap: 8,
            split_depth: 4,
            method: Method::Pz,
            inflate: false,
        }
    }
}

impl BoundConfig {
    fn tf_context(&self) -> TfContext {
        TfContext { degree_cap: self.degree_cap, inflate: self.inflate }
    }
}

/// Over-approximates the range of `f` over the set with the configured
/// method.
pub fn bound(f: &Expr, set: &ZPolytope, cfg: &BoundConfig) -> Result<Interval, BoundError> {
    if cfg.taylor_order == 0 {
        return Err(BoundError::ZeroOrder);
    }
    if let Some(var) = f.max_var() {
        if var >= set.dim() {
            return Err(BoundError::VarOutOfRange { var: var + 1, dim: set.dim() });
        }
    }
    match cfg.method {
        Method::IaBox => {
            let hull = set.interval_hull()?;
            eval_interval(f, &hull)
        }
        Method::Pz => bound_taylor(f, set, cfg),
        Method::TmBox => {
            let hull = set.interval_hull()?;
            let center: Vec<f64> = hull.iter().map(Interval::midpoint).collect();
            let generators: Vec<Vec<f64>> = hull
                .iter()
                .enumerate()
                .map(|(i, iv)| {
                    let mut g = vec![0.0; hull.len()];
                    g[i] = iv.radius();
                    g
                })
                .collect();
            let box_zono = ZPolytope::zonotope(center, generators)
                .expect("axis-aligned boxes are valid zonotopes");
            bound_taylor(f, &box_zono, cfg)
        }
    }
}

fn bound_taylor(f: &Expr, set: &ZPolytope, cfg: &BoundConfig) -> Result<Interval, BoundError> {
    let builder = |domains: &[Interval]| -> Result<TaylorForm, BoundError> {
        let coords = coordinate_forms(set, domains);
        compose(f, &coords, set.num_factors(), cfg)
    };
    // A second sound enclosure per node: natural interval evaluation over
    // the coordinate boxes of the sub-domain. Intersecting it with the
    // Taylor bound never loses soundness and usually trims the parity slack
    // of high-degree terms.
    let interval_route = |domains: &[Interval]| -> Result<Interval, BoundError> {
        let boxes: Vec<Interval> = coordinate_forms(set, domains)
            .iter()
            .map(TaylorForm::bound)
            .collect();
        eval_interval(f, &boxes)
    };
    refine(&builder, Some(&interval_route), &full_domains(set.num_factors()), cfg.split_depth, cfg)
}

fn full_domains(num_factors: usize) -> Vec<Interval> {
    vec![Interval::new(-1.0, 1.0); num_factors]
}

/// Branch-and-bound refinement: bounds the form the builder produces for
/// the full factor box, then repeatedly bisects the most profitable factor
/// and takes the union of the sub-bounds. Results at depth `d + 1` are
/// contained in results at depth `d`.
pub fn split_refine<F>(
    builder: &F,
    num_factors: usize,
    cfg: &BoundConfig,
) -> Result<Interval, BoundError>
where
    F: Fn(&[Interval]) -> Result<TaylorForm, BoundError>,
{
    refine(builder, None, &full_domains(num_factors), cfg.split_depth, cfg)
}

type IntervalRoute<'a> = &'a dyn Fn(&[Interval]) -> Result<Interval, BoundError>;

fn node_bound<F>(
    builder: &F,
    second_route: Option<IntervalRoute>,
    domains: &[Interval],
) -> Result<(TaylorForm, Interval), BoundError>
where
    F: Fn(&[Interval]) -> Result<TaylorForm, BoundError>,
{
    let form = builder(domains)?;
    let mut direct = form.bound();
    if let Some(route) = second_route {
        let other = route(domains)?;
        direct = direct.intersect(&other).unwrap_or(direct);
    }
    Ok((form, direct))
}

fn refine<F>(
    builder: &F,
    second_route: Option<IntervalRoute>,
    domains: &[Interval],
    depth: u32,
    cfg: &BoundConfig,
) -> Result<Interval, BoundError>
where
    F: Fn(&[Interval]) -> Result<TaylorForm, BoundError>,
{
    let (form, direct) = node_bound(builder, second_route, domains)?;
    if depth == 0 || domains.is_empty() {
        return Ok(direct);
    }
    let Some(factor) = pick_split_factor(builder, second_route, &form, domains)? else {
        return Ok(direct);
    };
    let (left, right) = bisect(domains, factor);
    let lo = refine(builder, second_route, &left, depth - 1, cfg)?;
    let hi = refine(builder, second_route, &right, depth - 1, cfg)?;
    // Both the children's union and the direct bound enclose the range, so
    // their intersection does too; intersecting keeps refinement monotone.
    Ok(lo.hull(&hi).intersect(&direct).unwrap_or(direct))
}

fn bisect(domains: &[Interval], factor: usize) -> (Vec<Interval>, Vec<Interval>) {
    let dk = domains[factor];
    let mid = dk.midpoint();
    let mut left = domains.to_vec();
    left[factor] = Interval::new(dk.lo(), mid);
    let mut right = domains.to_vec();
    right[factor] = Interval::new(mid, dk.hi());
    (left, right)
}

/// Chooses the bisection factor by one-step lookahead over the candidates
/// with nonlinear mass: the factor whose children's combined bound is
/// tightest wins. Ties fall back to the impact score, then to the smallest
/// index.
fn pick_split_factor<F>(
    builder: &F,
    second_route: Option<IntervalRoute>,
    form: &TaylorForm,
    domains: &[Interval],
) -> Result<Option<usize>, BoundError>
where
    F: Fn(&[Interval]) -> Result<TaylorForm, BoundError>,
{
    let candidates: Vec<usize> = (0..domains.len())
        .filter(|&k| form.impact_score(k) > 0.0)
        .collect();
    match candidates.len() {
        0 => Ok(None),
        1 => Ok(Some(candidates[0])),
        _ => {
            let mut best: Option<(usize, f64)> = None;
            for &k in &candidates {
                let (left, right) = bisect(domains, k);
                let (_, bl) = node_bound(builder, second_route, &left)?;
                let (_, br) = node_bound(builder, second_route, &right)?;
                let width = bl.hull(&br).width();
                if best.map_or(true, |(_, w)| width < w) {
                    best = Some((k, width));
                }
            }
            Ok(best.map(|(k, _)| k))
        }
    }
}

/// One Taylor form per coordinate of the set, after substituting the affine
/// domain maps `alpha_k = mid_k + rad_k * beta_k` and expanding the
/// monomials binomially. With full `[-1, 1]` domains this is exactly the
/// polynomial-zonotope lift.
fn coordinate_forms(set: &ZPolytope, domains: &[Interval]) -> Vec<TaylorForm> {
    let p = set.num_factors();
    let mids: Vec<f64> = domains.iter().map(Interval::midpoint).collect();
    let rads: Vec<f64> = domains.iter().map(Interval::radius).collect();
    (0..set.dim())
        .map(|coord| {
            let mut center = set.center()[coord];
            let mut terms: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
            for (g, e) in set.generators().iter().zip(set.exponents()) {
                let coeff = g[coord];
                if coeff == 0.0 {
                    continue;
                }
                // Factors with a zero midpoint contribute only their beta
                // part, so the binomial expansion runs over the others.
                let mut base = coeff;
                let mut base_exps = vec![0u32; p];
                let mut split: Vec<usize> = Vec::new();
                for &idx in e.indices() {
                    if mids[idx - 1] == 0.0 {
                        base *= rads[idx - 1];
                        base_exps[idx - 1] = 1;
                    } else {
                        split.push(idx - 1);
                    }
                }
                for subset in 0..(1u64 << split.len()) {
                    let mut c = base;
                    let mut exps = base_exps.clone();
                    for (bit, &k) in split.iter().enumerate() {
                        if subset & (1 << bit) != 0 {
                            c *= rads[k];
                            exps[k] = 1;
                        } else {
                            c *= mids[k];
                        }
                    }
                    if c == 0.0 {
                        continue;
                    }
                    if exps.iter().all(|&x| x == 0) {
                        center += c;
                    } else {
                        *terms.entry(exps).or_insert(0.0) += c;
                    }
                }
            }
            TaylorForm::from_map(center, terms, p, Interval::point(0.0))
        })
        .collect()
}

fn compose(
    f: &Expr,
    coords: &[TaylorForm],
    num_factors: usize,
    cfg: &BoundConfig,
) -> Result<TaylorForm, BoundError> {
    let ctx = cfg.tf_context();
    Ok(match f {
        Expr::Var(i) => coords
            .get(*i)
            .ok_or(BoundError::VarOutOfRange { var: i + 1, dim: coords.len() })?
            .clone(),
        Expr::Const(k) => TaylorForm::constant(*k, num_factors),
        Expr::Neg(e) => compose(e, coords, num_factors, cfg)?.scale(-1.0, &ctx),
        Expr::Sum(v) => {
            let mut acc = TaylorForm::constant(0.0, num_factors);
            for e in v {
                acc = acc.add(&compose(e, coords, num_factors, cfg)?, &ctx)?;
            }
            acc
        }
        Expr::Sub(a, b) => compose(a, coords, num_factors, cfg)?
            .sub(&compose(b, coords, num_factors, cfg)?, &ctx)?,
        Expr::Prod(v) => {
            let mut acc = TaylorForm::constant(1.0, num_factors);
            for e in v {
                acc = acc.mul(&compose(e, coords, num_factors, cfg)?, &ctx)?;
            }
            acc
        }
        Expr::Pow(e, k) => compose(e, coords, num_factors, cfg)?.int_pow(*k, &ctx),
        Expr::Div(e, k) => {
            if *k == 0.0 {
                return Err(BoundError::DivisionByZero);
            }
            compose(e, coords, num_factors, cfg)?.scale(1.0 / k, &ctx)
        }
        Expr::Sin(e) => TaylorForm::transcendental(
            Transcendental::Sin,
            &compose(e, coords, num_factors, cfg)?,
            cfg.taylor_order,
            &ctx,
        ),
        Expr::Cos(e) => TaylorForm::transcendental(
            Transcendental::Cos,
            &compose(e, coords, num_factors, cfg)?,
            cfg.taylor_order,
            &ctx,
        ),
        Expr::Exp(e) => TaylorForm::transcendental(
            Transcendental::Exp,
            &compose(e, coords, num_factors, cfg)?,
            cfg.taylor_order,
            &ctx,
        ),
    })
}

/// Natural interval extension over a coordinate box; sine and cosine ranges
/// come from critical-point analysis of the argument interval, not from
/// `[-1, 1]` padding.
pub fn eval_interval(f: &Expr, coords: &[Interval]) -> Result<Interval, BoundError> {
    Ok(match f {
        Expr::Var(i) => *coords
            .get(*i)
            .ok_or(BoundError::VarOutOfRange { var: i + 1, dim: coords.len() })?,
        Expr::Const(k) => Interval::point(*k),
        Expr::Neg(e) => eval_interval(e, coords)?.neg(),
        Expr::Sum(v) => {
            let mut acc = Interval::point(0.0);
            for e in v {
                acc = acc.add(&eval_interval(e, coords)?);
            }
            acc
        }
        Expr::Sub(a, b) => eval_interval(a, coords)?.sub(&eval_interval(b, coords)?),
        Expr::Prod(v) => {
            let mut acc = Interval::point(1.0);
            for e in v {
                acc = acc.mul(&eval_interval(e, coords)?);
            }
            acc
        }
        Expr::Pow(e, k) => eval_interval(e, coords)?.pow_i(*k),
        Expr::Div(e, k) => {
            if *k == 0.0 {
                return Err(BoundError::DivisionByZero);
            }
            eval_interval(e, coords)?.scale(1.0 / k)
        }
        Expr::Sin(e) => sin_range(&eval_interval(e, coords)?),
        Expr::Cos(e) => cos_range(&eval_interval(e, coords)?),
        Expr::Exp(e) => {
            let u = eval_interval(e, coords)?;
            Interval::new(u.lo().exp(), u.hi().exp())
        }
    })
}

/// Whether some `c + 2 pi k` lies in `[lo, hi]`.
fn contains_critical(lo: f64, hi: f64, c: f64) -> bool {
    let tau = std::f64::consts::TAU;
    let k = ((lo - c) / tau).ceil();
    c + k * tau <= hi
}

/// Exact range of `sin` over an interval.
pub fn sin_range(iv: &Interval) -> Interval {
    let (lo, hi) = (iv.lo(), iv.hi());
    if hi - lo >= std::f64::consts::TAU {
        return Interval::new(-1.0, 1.0);
    }
    let (slo, shi) = (lo.sin(), hi.sin());
    let max = if contains_critical(lo, hi, std::f64::consts::FRAC_PI_2) {
        1.0
    } else {
        slo.max(shi)
    };
    let min = if contains_critical(lo, hi, -std::f64::consts::FRAC_PI_2) {
        -1.0
    } else {
        slo.min(shi)
    };
    Interval::new(min, max)
}

/// Exact range of `cos` over an interval, via `cos x = sin(x + pi/2)`.
pub fn cos_range(iv: &Interval) -> Interval {
    sin_range(&iv.shift(std::f64::consts::FRAC_PI_2))
}
