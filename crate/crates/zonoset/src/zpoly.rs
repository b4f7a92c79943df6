//! The Z-representation of bounded polytopes.
//!
//! A set is stored as a center `c`, a generator matrix `G` (kept as columns)
//! and, per generator, a list of distinct 1-based factor indices. Each
//! generator contributes the monomial `prod(alpha[e]) * g` with every factor
//! `alpha[e]` ranging over `[-1, 1]`, so exponents are restricted to 0 and 1
//! and the map from factors to points is multilinear.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::interval::Interval;
use crate::parallel;

/// Entries with magnitude at or below this threshold count as zero when
/// `regularize` drops merged generators.
pub const ZERO_GENERATOR_TOLERANCE: f64 = 1e-12;

/// Default cap on the factor count for the `2^p` vertex enumerations.
pub const DEFAULT_ENUMERATION_CAP: usize = 20;

/// Strictly increasing list of 1-based factor indices: the variable part of
/// one monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexList(Vec<usize>);

impl IndexList {
    /// Builds the canonical ascending form. Duplicates are kept so that
    /// [`ZPolytope::validate`] can report them.
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        IndexList(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] < w[1])
    }

    pub fn max_index(&self) -> usize {
        self.0.last().copied().unwrap_or(0)
    }

    /// Shifts every index by `offset`.
    pub fn shifted(&self, offset: usize) -> IndexList {
        IndexList(self.0.iter().map(|i| i + offset).collect())
    }

    /// Appends `index`, which must exceed every present index.
    pub fn appended(&self, index: usize) -> IndexList {
        debug_assert!(index > self.max_index());
        let mut v = self.0.clone();
        v.push(index);
        IndexList(v)
    }
}

impl fmt::Display for IndexList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, idx) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{idx}")?;
        }
        write!(f, ">")
    }
}

/// One violated structural invariant; returned by [`ZPolytope::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    ZeroDimension,
    CenterLength { expected: usize, got: usize },
    BlockLengthMismatch { generators: usize, exponents: usize },
    GeneratorLength { generator: usize, expected: usize, got: usize },
    EmptyIndexList { generator: usize },
    RepeatedIndex { generator: usize, index: usize },
    IndexOutOfRange { generator: usize, index: usize, num_factors: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZeroDimension => write!(f, "dimension must be positive"),
            Violation::CenterLength { expected, got } => {
                write!(f, "center has length {got}, expected dimension {expected}")
            }
            Violation::BlockLengthMismatch { generators, exponents } => write!(
                f,
                "{generators} generators but {exponents} factor index lists"
            ),
            Violation::GeneratorLength { generator, expected, got } => write!(
                f,
                "generator {generator} has length {got}, expected dimension {expected}"
            ),
            Violation::EmptyIndexList { generator } => {
                write!(f, "generator {generator} has an empty factor index list")
            }
            Violation::RepeatedIndex { generator, index } => {
                write!(f, "generator {generator} repeats factor index {index}")
            }
            Violation::IndexOutOfRange { generator, index, num_factors } => write!(
                f,
                "generator {generator} uses factor index {index}, valid range is 1..={num_factors}"
            ),
        }
    }
}

#[derive(Debug, Error)]
pub enum ZPolyError {
    #[error("invalid Z-representation: {}", format_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("alpha has length {got}, expected {expected} factors")]
    AlphaLength { expected: usize, got: usize },
    #[error("alpha[{index}] = {value} lies outside [-1, 1]")]
    AlphaOutOfRange { index: usize, value: f64 },
    #[error("{factors} factors exceed the enumeration cap of {cap}")]
    EnumerationCap { factors: usize, cap: usize },
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Representation-size summary: factor count `p`, generator count `h`, total
/// index count `mu`, and the value count `n_z = n(h+1) + mu`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeStats {
    pub p: usize,
    pub h: usize,
    pub mu: usize,
    pub n_z: usize,
}

impl SizeStats {
    pub fn for_dim(dim: usize, p: usize, h: usize, mu: usize) -> Self {
        SizeStats { p, h, mu, n_z: dim * (h + 1) + mu }
    }
}

impl fmt::Display for SizeStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} h={} mu={} Nz={}", self.p, self.h, self.mu, self.n_z)
    }
}

/// Order-preserving factor renumbering produced by [`ZPolytope::regularize`]:
/// `kept[new - 1]` is the old 1-based index of the factor now numbered `new`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorRenumbering {
    kept: Vec<usize>,
}

impl FactorRenumbering {
    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    /// New 1-based index of old factor `old`, if it survived.
    pub fn new_index(&self, old: usize) -> Option<usize> {
        self.kept.binary_search(&old).ok().map(|pos| pos + 1)
    }

    /// Projects a factor assignment for the input set onto the output set's
    /// factors.
    pub fn apply(&self, alpha: &[f64]) -> Vec<f64> {
        self.kept.iter().map(|&old| alpha[old - 1]).collect()
    }

    pub fn is_identity(&self, old_num_factors: usize) -> bool {
        self.kept.len() == old_num_factors
            && self.kept.iter().enumerate().all(|(i, &old)| old == i + 1)
    }
}

/// A bounded set in Z-representation `<c, G, E>`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZPolytope {
    dim: usize,
    num_factors: usize,
    center: Vec<f64>,
    generators: Vec<Vec<f64>>,
    exponents: Vec<IndexList>,
}

impl ZPolytope {
    /// Canonicalizing constructor. Index lists are sorted ascending and
    /// generators with an empty index list are folded into the center.
    /// Rejects input that [`validate`](Self::validate) would flag.
    pub fn new(
        center: Vec<f64>,
        num_factors: usize,
        generators: impl IntoIterator<Item = (Vec<f64>, Vec<usize>)>,
    ) -> Result<Self, ZPolyError> {
        let dim = center.len();
        let mut folded_center = center;
        let mut gens = Vec::new();
        let mut exps = Vec::new();
        for (g, indices) in generators {
            if indices.is_empty() {
                if g.len() != dim {
                    return Err(ZPolyError::Invalid(vec![Violation::GeneratorLength {
                        generator: gens.len() + 1,
                        expected: dim,
                        got: g.len(),
                    }]));
                }
                for (c, v) in folded_center.iter_mut().zip(&g) {
                    *c += v;
                }
                continue;
            }
            gens.push(g);
            exps.push(IndexList::new(indices));
        }
        let set = ZPolytope {
            dim,
            num_factors,
            center: folded_center,
            generators: gens,
            exponents: exps,
        };
        let violations = set.validate();
        if violations.is_empty() {
            Ok(set)
        } else {
            Err(ZPolyError::Invalid(violations))
        }
    }

    /// The single point `<v, [], {}>` with no factors.
    pub fn point(center: Vec<f64>) -> Self {
        ZPolytope {
            dim: center.len(),
            num_factors: 0,
            center,
            generators: Vec::new(),
            exponents: Vec::new(),
        }
    }

    /// A zonotope `<c, G, (<1>, ..., <m>)>`: one fresh factor per generator.
    pub fn zonotope(center: Vec<f64>, generators: Vec<Vec<f64>>) -> Result<Self, ZPolyError> {
        let m = generators.len();
        ZPolytope::new(
            center,
            m,
            generators
                .into_iter()
                .enumerate()
                .map(|(i, g)| (g, vec![i + 1])),
        )
    }

    /// Builds the structure exactly as given, without canonicalization or
    /// checks; pair with [`validate`](Self::validate).
    pub fn from_raw(
        dim: usize,
        num_factors: usize,
        center: Vec<f64>,
        generators: Vec<Vec<f64>>,
        exponents: Vec<IndexList>,
    ) -> Self {
        ZPolytope { dim, num_factors, center, generators, exponents }
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

    pub fn generators(&self) -> &[Vec<f64>] {
        &self.generators
    }

    pub fn exponents(&self) -> &[IndexList] {
        &self.exponents
    }

    /// Number of generators `h`.
    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    /// Total number of stored factor indices `mu`.
    pub fn index_count(&self) -> usize {
        self.exponents.iter().map(IndexList::len).sum()
    }

    /// Checks every structural invariant and returns the violations found.
    /// An empty result means the set is well-formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.dim == 0 {
            out.push(Violation::ZeroDimension);
        }
        if self.center.len() != self.dim {
            out.push(Violation::CenterLength { expected: self.dim, got: self.center.len() });
        }
        if self.generators.len() != self.exponents.len() {
            out.push(Violation::BlockLengthMismatch {
                generators: self.generators.len(),
                exponents: self.exponents.len(),
            });
        }
        for (i, g) in self.generators.iter().enumerate() {
            if g.len() != self.dim {
                out.push(Violation::GeneratorLength {
                    generator: i + 1,
                    expected: self.dim,
                    got: g.len(),
                });
            }
        }
        for (i, e) in self.exponents.iter().enumerate() {
            if e.is_empty() {
                out.push(Violation::EmptyIndexList { generator: i + 1 });
                continue;
            }
            for w in e.indices().windows(2) {
                if w[0] == w[1] {
                    out.push(Violation::RepeatedIndex { generator: i + 1, index: w[0] });
                }
            }
            for &idx in e.indices() {
                if idx == 0 || idx > self.num_factors {
                    out.push(Violation::IndexOutOfRange {
                        generator: i + 1,
                        index: idx,
                        num_factors: self.num_factors,
                    });
                }
            }
        }
        out
    }

    /// Evaluates the defining map at one factor assignment. Entries outside
    /// `[-1, 1]` are rejected unless `allow_outside` is set.
    pub fn evaluate(&self, alpha: &[f64], allow_outside: bool) -> Result<Vec<f64>, ZPolyError> {
        if alpha.len() != self.num_factors {
            return Err(ZPolyError::AlphaLength {
                expected: self.num_factors,
                got: alpha.len(),
            });
        }
        if !allow_outside {
            for (i, &a) in alpha.iter().enumerate() {
                if !(-1.0..=1.0).contains(&a) {
                    return Err(ZPolyError::AlphaOutOfRange { index: i + 1, value: a });
                }
            }
        }
        let mut point = self.center.clone();
        for (g, e) in self.generators.iter().zip(&self.exponents) {
            let monomial: f64 = e.indices().iter().map(|&k| alpha[k - 1]).product();
            for (x, v) in point.iter_mut().zip(g) {
                *x += monomial * v;
            }
        }
        Ok(point)
    }

    /// Sums generators that share a variable part, drops merged generators
    /// that vanished, removes unused factors and renumbers the rest
    /// order-preservingly. Returns the regular set together with the factor
    /// renumbering; evaluation is preserved under
    /// [`FactorRenumbering::apply`].
    pub fn regularize(&self) -> (ZPolytope, FactorRenumbering) {
        let mut order: Vec<&IndexList> = Vec::new();
        let mut merged: Vec<Vec<f64>> = Vec::new();
        for (g, e) in self.generators.iter().zip(&self.exponents) {
            match order.iter().position(|&k| k == e) {
                Some(pos) => {
                    for (acc, v) in merged[pos].iter_mut().zip(g) {
                        *acc += v;
                    }
                }
                None => {
                    order.push(e);
                    merged.push(g.clone());
                }
            }
        }

        let mut kept_gens = Vec::new();
        let mut kept_exps: Vec<&IndexList> = Vec::new();
        for (g, e) in merged.into_iter().zip(order) {
            if g.iter().all(|v| v.abs() <= ZERO_GENERATOR_TOLERANCE) {
                continue;
            }
            kept_gens.push(g);
            kept_exps.push(e);
        }

        let used: BTreeSet<usize> = kept_exps
            .iter()
            .flat_map(|e| e.indices().iter().copied())
            .collect();
        let kept: Vec<usize> = used.into_iter().collect();
        let renumber = |old: usize| kept.binary_search(&old).unwrap() + 1;
        let exponents = kept_exps
            .iter()
            .map(|e| IndexList(e.indices().iter().map(|&i| renumber(i)).collect()))
            .collect();

        let set = ZPolytope {
            dim: self.dim,
            num_factors: kept.len(),
            center: self.center.clone(),
            generators: kept_gens,
            exponents,
        };
        (set, FactorRenumbering { kept })
    }

    /// Exact componentwise range over the factor hypercube, computed from
    /// the `2^p` hypercube vertices; each coordinate is multilinear in the
    /// factors, so its extrema are attained there.
    pub fn interval_hull(&self) -> Result<Vec<Interval>, ZPolyError> {
        self.interval_hull_capped(DEFAULT_ENUMERATION_CAP)
    }

    pub fn interval_hull_capped(&self, cap: usize) -> Result<Vec<Interval>, ZPolyError> {
        if self.num_factors > cap {
            return Err(ZPolyError::EnumerationCap { factors: self.num_factors, cap });
        }
        let masks = self.generator_masks();
        let total = 1usize << self.num_factors;
        let chunks = parallel::map_chunks(total, |range| {
            let mut lo = self.center.clone();
            let mut hi = self.center.clone();
            let mut point = vec![0.0; self.dim];
            let mut first = true;
            for vertex in range {
                point.copy_from_slice(&self.center);
                for (g, &mask) in self.generators.iter().zip(&masks) {
                    let sign = if (vertex as u64 & mask).count_ones() % 2 == 0 {
                        1.0
                    } else {
                        -1.0
                    };
                    for (x, v) in point.iter_mut().zip(g) {
                        *x += sign * v;
                    }
                }
                if first {
                    lo.copy_from_slice(&point);
                    hi.copy_from_slice(&point);
                    first = false;
                } else {
                    for i in 0..self.dim {
                        lo[i] = lo[i].min(point[i]);
                        hi[i] = hi[i].max(point[i]);
                    }
                }
            }
            (lo, hi)
        });
        let (mut lo, mut hi) = chunks[0].clone();
        for (clo, chi) in &chunks[1..] {
            for i in 0..self.dim {
                lo[i] = lo[i].min(clo[i]);
                hi[i] = hi[i].max(chi[i]);
            }
        }
        Ok(lo.into_iter().zip(hi).map(|(l, h)| Interval::new(l, h)).collect())
    }

    pub fn size_stats(&self) -> SizeStats {
        SizeStats::for_dim(
            self.dim,
            self.num_factors,
            self.num_generators(),
            self.index_count(),
        )
    }

    /// Per-generator bitmasks over the factors; bit `k` set means factor
    /// `k + 1` participates in the monomial. Requires `num_factors <= 64`.
    pub(crate) fn generator_masks(&self) -> Vec<u64> {
        self.exponents
            .iter()
            .map(|e| {
                e.indices()
                    .iter()
                    .fold(0u64, |m, &idx| m | (1u64 << (idx - 1)))
            })
            .collect()
    }

    /// Evaluates at the hypercube vertex addressed by `vertex`: bit `k` set
    /// means factor `k + 1` takes the value `-1`, otherwise `+1`.
    pub(crate) fn evaluate_at_vertex(&self, vertex: u64, masks: &[u64]) -> Vec<f64> {
        let mut point = self.center.clone();
        for (g, &mask) in self.generators.iter().zip(masks) {
            let sign = if (vertex & mask).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            for (x, v) in point.iter_mut().zip(g) {
                *x += sign * v;
            }
        }
        point
    }
}
