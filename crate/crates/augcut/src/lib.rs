//! Sparse directed-graph reductions for generalized hypergraph cut problems.
//!
//! A hyperedge with a concave cardinality-based splitting penalty can be
//! replaced by a small directed gadget on auxiliary nodes whose minimum-cut
//! behaviour reproduces the penalty exactly, or to within a `(1+eps)` factor
//! with far fewer edges. This crate implements the whole pipeline:
//!
//! * [`splitting`] — cardinality-based splitting functions (symmetric and
//!   generalized) and a catalog of named families.
//! * [`plcover`] — minimum-size piecewise-linear covers of concave penalty
//!   sequences and their conversion to gadget weight vectors.
//! * [`gadget`] — expansion of weight vectors into concrete graph fragments.
//! * [`flownet`] — a directed flow network with an exact blocking-flow
//!   max-flow/min-cut solver.
//! * [`reduce`] — assembly of whole hypergraphs into augmented sparsifiers
//!   and s-t flow networks.
//! * [`cooc`] — implicit sparsification of co-occurrence (clique expansion)
//!   graphs, plus a power-law instance generator.
//! * [`dsfm`] — approximate minimization of cardinality-based decomposable
//!   submodular functions via one min-cut.
//! * [`oracle`] — independent brute-force references used by the test suite.

pub mod cooc;
pub mod dsfm;
pub mod flownet;
pub mod gadget;
pub mod oracle;
pub mod plcover;
pub mod reduce;
pub mod splitting;

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside an operation's domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// A splitting spec was malformed (bad parameter, wrong list length).
    #[error("invalid splitting spec: {0}")]
    Spec(String),
    /// A penalty sequence failed validation; `index` is the first offender.
    #[error("validation failed at index {index}: {reason}")]
    Validation { index: usize, reason: String },
    /// A piecewise-linear cover was structurally unusable.
    #[error("malformed cover: {0}")]
    Cover(String),
    /// A text input could not be parsed.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    /// A brute-force oracle refused an input that is too large.
    #[error("oracle refusal: {0}")]
    TooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Relative tolerance for validating concavity/monotonicity of penalty
/// sequences. Irrational penalties (sqrt, power families) carry float noise.
pub(crate) const REL_VALIDATE: f64 = 1e-9;

/// Relative tolerance for `g(i) <= (1+eps)w(i)` cover comparisons, so that
/// exact-arithmetic ties (collinear points at eps = 0) are accepted.
pub(crate) const REL_COVER: f64 = 1e-12;

/// `a <= b` up to `REL_COVER` relative slack.
pub(crate) fn le_cover(a: f64, b: f64) -> bool {
    a <= b + REL_COVER * a.abs().max(b.abs())
}
