//! Minimum-cardinality and minimum-weight arc sets whose removal destroys
//! every k-union-arborescence (or k-union-r-arborescence) of a directed
//! multigraph, together with the cut, in-solid-set and subpartition machinery
//! the solvers are built from, and brute-force oracles to check them.
//!
//! Everything is generic over an exact [`Scalar`]; the aliases below fix the
//! common choices.

pub mod blocking;
pub mod cli;
pub mod digraph;
pub mod error;
pub mod flownet;
pub mod insolid;
pub mod matching;
pub mod oracle;
pub mod scalar;
pub mod subpart;

pub use digraph::{ArcRecord, ArcSelection, Digraph, Mode, NodeSet, Subpartition};
pub use error::{Error, Result};
pub use scalar::Scalar;

/// Arbitrary-precision rational, the scalar used by the command-line tool.
pub type Rational = num_rational::BigRational;

pub type RationalDigraph = Digraph<Rational>;

/// Integer-weighted digraph; the fast path for cardinality problems.
pub type IntDigraph = Digraph<i64>;

pub type RationalBlocking = blocking::BlockingResult<Rational>;
pub type IntBlocking = blocking::BlockingResult<i64>;
