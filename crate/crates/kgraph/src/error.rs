//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("colour letter c{letter} out of range for k = {k}")]
    MalformedWord { letter: usize, k: usize },

    #[error("interval [{lower}, {upper}] is empty: lower must be coordinatewise <= upper")]
    BadInterval { lower: String, upper: String },

    #[error("degree length {got} does not match k = {expected}")]
    DegreeLength { got: usize, expected: usize },

    #[error("duplicate id {id:?}")]
    DuplicateId { id: String },

    #[error("unknown vertex {id:?}")]
    UnknownVertex { id: String },

    #[error("unknown edge {id:?}")]
    UnknownEdge { id: String },

    #[error("edge {edge:?} has colour {colour}, outside 1..={k}")]
    ColourOutOfRange { edge: String, colour: usize, k: usize },

    #[error("edges at positions {index} and {} are not composable: source {source_id:?} != range {range_id:?}", index + 1)]
    Composition {
        index: usize,
        source_id: String,
        range_id: String,
    },

    #[error("malformed square ({i},{j}): {reason}")]
    MalformedSquare { i: usize, j: usize, reason: String },

    #[error("no square in the collection owns the 2-path {first:?} {second:?}")]
    MissingSquare { first: String, second: String },

    #[error("{count} squares own the 2-path {first:?} {second:?}; the collection is not complete")]
    AmbiguousSquare {
        first: String,
        second: String,
        count: usize,
    },

    #[error("2-path {first:?} {second:?} is not mixed-colour")]
    NotMixedColour { first: String, second: String },

    #[error("collection is not associative: cube condition fails on the path {f:?} {g:?} {h:?}")]
    NonAssociative { f: String, g: String, h: String },

    #[error("collection is not complete ({violations} unowned or multiply-owned 2-paths)")]
    IncompleteCollection { violations: usize },

    #[error("cube of degree {degree} has {cells} grid points, over the budget of {budget}")]
    CellBudget {
        degree: String,
        cells: usize,
        budget: usize,
    },

    #[error("enumeration exceeded the budget of {budget} morphisms")]
    EnumerationLimit { budget: usize },

    #[error("cannot compose: source {source_id:?} does not match range {range_id:?}")]
    ComposeMismatch { source_id: String, range_id: String },

    #[error("degree {m} is not coordinatewise <= {n}")]
    DegreeNotBelow { m: String, n: String },

    #[error("paths are not equivalent: they normalize to different morphisms")]
    NotEquivalent,

    #[error("colour words have different abelianizations: {left} vs {right}")]
    UnequalAbelianization { left: String, right: String },

    #[error("the three edges must have pairwise distinct colours")]
    ColoursNotDistinct,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(
        "aperiodicity search exhausted at vertex {vertex:?} for pair ({m}, {n}) within bound {bound}"
    )]
    SearchExhausted {
        vertex: String,
        m: String,
        n: String,
        bound: String,
    },

    #[error("no cofinality-failure certificate for ({v:?}, {w:?}): downstream sets intersect")]
    NoCofinalityCertificate { v: String, w: String },

    #[error("{check} verification failed: {detail}")]
    CheckFailed { check: String, detail: String },

    #[error("schema error at {path}: {reason}")]
    Schema { path: String, reason: String },

    #[error("generation budget exhausted: {0}")]
    GenerationBudget(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
