//! Bounded polytopes as sparse polynomial zonotopes with 0/1 exponents.
//!
//! A set is written `<c, G, E>`: a center, generator vectors, and one list
//! of distinct factor indices per generator. Every bounded polytope has
//! such a representation, and linear maps, Minkowski sums, and convex hulls
//! are closed-form concatenations on it — no vertex or facet enumeration
//! involved. The crate provides:
//!
//! * the core types with evaluation, validation, regularization, exact
//!   interval hulls, and representation-size stats ([`ZPolytope`],
//!   [`PolyZonotope`], [`VPolytope`]);
//! * the closed-form set operations ([`setops`]);
//! * conversions between vertex and Z-representation ([`convert`]);
//! * representation-complexity calculators ([`complexity`]);
//! * range bounding of nonlinear expressions over sets ([`rangebound`]);
//! * text formats for sets, matrices, and expressions ([`io`]);
//! * a small LP feasibility kernel for redundancy removal ([`lp`]).
//!
//! The `examples/` directory walks through each capability; the `zonoset`
//! binary exposes the same pipelines as subcommands.

mod interval;
mod matrix;
mod parallel;
mod polyzono;
mod vpoly;
mod zpoly;

pub mod cli;
pub mod complexity;
pub mod convert;
pub mod io;
pub mod lp;
pub mod rangebound;
pub mod setops;

#[cfg(test)]
pub(crate) mod testutil;

pub use interval::Interval;
pub use matrix::{Matrix, MatrixError};
pub use polyzono::{PolyZonoError, PolyZonotope, PzTerm};
pub use vpoly::{VPolyError, VPolytope};
pub use zpoly::{
    FactorRenumbering, IndexList, SizeStats, Violation, ZPolyError, ZPolytope,
    DEFAULT_ENUMERATION_CAP, ZERO_GENERATOR_TOLERANCE,
};
