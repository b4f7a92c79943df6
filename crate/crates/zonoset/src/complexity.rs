//! Representation-complexity calculators: value counts of the V-, H-, and
//! Z-representation for the two polytope families where closed forms exist
//! (convex hull of a zonotope with a point, and of two zonotopes), plus the
//! size predictor for the pairwise-hull conversion tree.

use std::fmt;

use thiserror::Error;

use crate::zpoly::SizeStats;

#[derive(Debug, Error)]
pub enum ComplexityError {
    #[error("{what} requires {name} >= {min}, got {got}")]
    Domain { what: &'static str, name: &'static str, min: usize, got: usize },
    #[error("count overflows 64-bit integers ({what})")]
    Overflow { what: &'static str },
}

/// Whether the V/H counts of a row are exact values or one-sided bounds.
/// The Z count is always exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Exact,
    Upper,
    Lower,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundKind::Exact => write!(f, "exact"),
            BoundKind::Upper => write!(f, "upper"),
            BoundKind::Lower => write!(f, "lower"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComplexityCase {
    ZonoPoint,
    ZonoZono,
}

impl fmt::Display for ComplexityCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexityCase::ZonoPoint => write!(f, "zono-point"),
            ComplexityCase::ZonoZono => write!(f, "zono-zono"),
        }
    }
}

/// One comparison row: dimension, generator count(s), and the three
/// representation sizes. `bound_kind` qualifies `n_v` and `n_h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexityRow {
    pub case: ComplexityCase,
    pub n: usize,
    pub m1: usize,
    pub m2: Option<usize>,
    pub n_v: u64,
    pub n_h: u64,
    pub n_z: u64,
    pub bound_kind: BoundKind,
}

fn checked_mul(a: u64, b: u64, what: &'static str) -> Result<u64, ComplexityError> {
    a.checked_mul(b).ok_or(ComplexityError::Overflow { what })
}

fn checked_add(a: u64, b: u64, what: &'static str) -> Result<u64, ComplexityError> {
    a.checked_add(b).ok_or(ComplexityError::Overflow { what })
}

/// Binomial coefficient with overflow detection.
pub fn binomial(n: usize, k: usize) -> Result<u64, ComplexityError> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut c: u64 = 1;
    for i in 1..=k {
        c = checked_mul(c, (n - k + i) as u64, "binomial")?;
        c /= i as u64;
    }
    Ok(c)
}

/// Values stored by a V-representation with `q` vertices in dimension `n`:
/// `n * q`.
pub fn rep_size_v(n: usize, q: usize) -> Result<u64, ComplexityError> {
    require(n, 1, "rep_size_v", "n")?;
    require(q, 1, "rep_size_v", "q")?;
    checked_mul(n as u64, q as u64, "rep_size_v")
}

/// Values stored by an H-representation with the given facet count:
/// `(n + 1) * facets`.
pub fn rep_size_h(n: usize, facets: usize) -> Result<u64, ComplexityError> {
    require(n, 1, "rep_size_h", "n")?;
    require(facets, 1, "rep_size_h", "facets")?;
    checked_mul(n as u64 + 1, facets as u64, "rep_size_h")
}

fn require(
    value: usize,
    min: usize,
    what: &'static str,
    name: &'static str,
) -> Result<(), ComplexityError> {
    if value < min {
        Err(ComplexityError::Domain { what, name, min, got: value })
    } else {
        Ok(())
    }
}

/// Number of vertices of an `n`-dimensional zonotope with `m` generators in
/// general position: `2 * sum_{i=0}^{min(n,m)-1} C(m-1, i)`.
pub fn zonotope_vertex_count(n: usize, m: usize) -> Result<u64, ComplexityError> {
    require(n, 1, "zonotope_vertex_count", "n")?;
    require(m, 1, "zonotope_vertex_count", "m")?;
    let mut sum: u64 = 0;
    for i in 0..n.min(m) {
        sum = checked_add(sum, binomial(m - 1, i)?, "zonotope_vertex_count")?;
    }
    checked_mul(2, sum, "zonotope_vertex_count")
}

/// Representation sizes for the convex hull of an `n`-dimensional zonotope
/// with `m` generators and a single point: V and H are upper bounds, Z is
/// exact (`2n + 2mn + 3m + 1`).
pub fn zono_point_complexity(n: usize, m: usize) -> Result<ComplexityRow, ComplexityError> {
    require(n, 2, "zono_point_complexity", "n")?;
    require(m, 1, "zono_point_complexity", "m")?;
    let q = zonotope_vertex_count(n, m)?;
    let n_v = checked_mul(n as u64, checked_add(q, 1, "n_v")?, "n_v")?;
    // The facet bound 2 C(m, n-1) - 1 + 2 C(m, n-2) assumes a
    // full-dimensional zonotope; below that regime it degenerates and is
    // clamped at zero.
    let facets_signed = 2 * binomial(m, n - 1)? as i128 - 1 + 2 * binomial(m, n - 2)? as i128;
    let facets = u64::try_from(facets_signed.max(0))
        .map_err(|_| ComplexityError::Overflow { what: "n_h" })?;
    let n_h = checked_mul(n as u64 + 1, facets, "n_h")?;
    let (n64, m64) = (n as u64, m as u64);
    let n_z = 2 * n64 + 2 * m64 * n64 + 3 * m64 + 1;
    Ok(ComplexityRow {
        case: ComplexityCase::ZonoPoint,
        n,
        m1: m,
        m2: None,
        n_v,
        n_h,
        n_z,
        bound_kind: BoundKind::Upper,
    })
}

/// Representation sizes for the convex hull of two full-dimensional
/// zonotopes with `m1` and `m2` generators: V and H are lower bounds
/// (attained when the smaller zonotope dominates), Z is exact
/// (`2n(m1 + m2 + 1) + 3 m1 + 3 m2 + 1`).
pub fn zono_zono_complexity(
    n: usize,
    m1: usize,
    m2: usize,
) -> Result<ComplexityRow, ComplexityError> {
    require(n, 2, "zono_zono_complexity", "n")?;
    require(m1, 1, "zono_zono_complexity", "m1")?;
    require(m2, 1, "zono_zono_complexity", "m2")?;
    let m = m1.min(m2);
    let n_v = checked_mul(n as u64, zonotope_vertex_count(n, m)?, "n_v")?;
    let n_h = checked_mul(
        checked_mul(2, binomial(m, n - 1)?, "n_h")?,
        n as u64 + 1,
        "n_h",
    )?;
    let (n64, m1_64, m2_64) = (n as u64, m1 as u64, m2 as u64);
    let n_z = 2 * n64 * (m1_64 + m2_64 + 1) + 3 * m1_64 + 3 * m2_64 + 1;
    Ok(ComplexityRow {
        case: ComplexityCase::ZonoZono,
        n,
        m1,
        m2: Some(m2),
        n_v,
        n_h,
        n_z,
        bound_kind: BoundKind::Lower,
    })
}

/// Sizes produced by the pairwise-hull conversion of `q` vertices when the
/// hull tree is perfect, with tree depth `ceil(log2 q)`: an upper bound on
/// the actual sizes, exact when `q` is a power of two. `dim` only enters
/// the stored-value count.
pub fn alg1_size_predictor(dim: usize, q: usize) -> Result<SizeStats, ComplexityError> {
    require(dim, 1, "alg1_size_predictor", "dim")?;
    require(q, 1, "alg1_size_predictor", "q")?;
    let k = (usize::BITS - (q - 1).leading_zeros()) as u32; // ceil(log2 q)
    let pow4 = 4u64
        .checked_pow(k)
        .ok_or(ComplexityError::Overflow { what: "alg1_size_predictor" })?;
    let p = 2u64.pow(k) - 1;
    let h = (pow4 - 1) / 3;
    // mu = 4^k (k/6 + 1/9) - 1/9 = (4^k (3k + 2) - 2) / 18, always integral.
    let mu_num = checked_mul(pow4, 3 * k as u64 + 2, "alg1_size_predictor")? - 2;
    debug_assert_eq!(mu_num % 18, 0);
    let mu = mu_num / 18;
    Ok(SizeStats::for_dim(dim, p as usize, h as usize, mu as usize))
}

/// Parameter grid for [`emit_table`].
#[derive(Debug, Clone)]
pub enum TableSpec {
    ZonoPoint { n: Vec<usize>, m: Vec<usize> },
    ZonoZono { n: Vec<usize>, m1: Vec<usize>, m2: Vec<usize> },
}

/// Rows for every parameter combination, in the declared nesting order.
pub fn emit_table(spec: &TableSpec) -> Result<Vec<ComplexityRow>, ComplexityError> {
    let mut rows = Vec::new();
    match spec {
        TableSpec::ZonoPoint { n, m } => {
            for &nv in n {
                for &mv in m {
                    rows.push(zono_point_complexity(nv, mv)?);
                }
            }
        }
        TableSpec::ZonoZono { n, m1, m2 } => {
            for &nv in n {
                for &m1v in m1 {
                    for &m2v in m2 {
                        rows.push(zono_zono_complexity(nv, m1v, m2v)?);
                    }
                }
            }
        }
    }
    Ok(rows)
}

/// CSV with the column order `case, n, m[, m2], n_v, n_h, n_z, bound_kind`.
pub fn rows_to_csv(rows: &[ComplexityRow]) -> String {
    let mut out = String::new();
    let two_m = rows.iter().any(|r| r.m2.is_some());
    if two_m {
        out.push_str("case,n,m1,m2,n_v,n_h,n_z,bound_kind\n");
    } else {
        out.push_str("case,n,m,n_v,n_h,n_z,bound_kind\n");
    }
    for r in rows {
        match r.m2 {
            Some(m2) => out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.case, r.n, r.m1, m2, r.n_v, r.n_h, r.n_z, r.bound_kind
            )),
            None => out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.case, r.n, r.m1, r.n_v, r.n_h, r.n_z, r.bound_kind
            )),
        }
    }
    out
}
