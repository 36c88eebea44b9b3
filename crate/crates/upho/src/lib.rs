//! Finite truncations of upho posets (upper homogeneous posets of finite
//! type), their constructions, and the machinery to verify their defining
//! properties and algebraic signatures with exact integer arithmetic.
//!
//! The crate is organized around a handful of subsystems:
//!
//! - [`poset`]: the graded-poset data model ([`RankedPoset`]), order filters,
//!   products, meets, and rank-preserving isomorphism testing.
//! - [`series`]: exact power-series and rational-function arithmetic over
//!   unbounded integers; rank-generating functions.
//! - [`constructions`]: grid posets, the recursive b-construction, and their
//!   products realizing rational rank-generating functions with integer
//!   zeros and poles.
//! - [`planar`]: the merge-schedule construction of planar upho posets,
//!   level-planarity checks, and the bifurcation recurrence.
//! - [`symfunc`]: truncated Ehrenborg symmetric functions, Schur expansion
//!   via Kostka numbers, and the exact Davydov total-positivity test.
//! - [`monoid`]: posets from homogeneous monoid presentations via congruence
//!   closure on words, including the Stern presentation and the t_n family.
//!
//! All public values are immutable after construction and safe to share
//! across threads.

pub mod constructions;
pub mod monoid;
pub mod planar;
pub mod poset;
pub mod series;
pub mod symfunc;

pub use poset::{IsoReport, MeetResult, PosetError, RankedPoset, UphoReport, Vertex};
pub use series::{IntPolynomial, IntSeries, RationalFunction, SeriesError};
