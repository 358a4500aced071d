//! Error type shared by the whole crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building or operating on chains.
///
/// Construction errors name the first offending row/entry so that file
/// parsers can surface precise messages. Index values in messages are
/// 0-based, matching the in-memory layout.
#[derive(Debug, Error)]
pub enum Error {
    #[error("state space must contain at least one state")]
    EmptySpace,

    #[error("expected {expected} labels, got {got}")]
    LabelCountMismatch { expected: usize, got: usize },

    #[error("duplicate state label {label:?}")]
    DuplicateLabel { label: String },

    #[error("mass entry {index} is {value}, expected a finite value >= 0")]
    InvalidMassEntry { index: usize, value: f64 },

    #[error("mass sums to {sum}, expected 1 within {tol}")]
    MassNotNormalized { sum: f64, tol: f64 },

    #[error("weight entry {index} is {value}, expected a finite value >= 0")]
    InvalidWeightEntry { index: usize, value: f64 },

    #[error("all weights are zero, at least one must be positive")]
    AllWeightsZero,

    #[error("matrix row {row} has {len} entries, expected {expected}")]
    RaggedMatrix {
        row: usize,
        len: usize,
        expected: usize,
    },

    #[error("kernel entry ({row},{col}) is {value}, expected a finite value >= 0")]
    InvalidKernelEntry { row: usize, col: usize, value: f64 },

    #[error("kernel row {row} sums to {sum}, expected 1 within {tol}")]
    RowNotStochastic { row: usize, sum: f64, tol: f64 },

    #[error("state spaces do not match: {left} vs {right} states")]
    SpaceMismatch { left: usize, right: usize },

    #[error("kernel is not irreducible")]
    NotIrreducible,

    #[error("kernel is not aperiodic")]
    NotAperiodic,

    #[error("linear solve degenerated: {detail}")]
    SingularSystem { detail: String },

    #[error("vector is not a left 1-eigenvector: residual {residual} exceeds tolerance {tol}")]
    NotAnEigenvector { residual: f64, tol: f64 },

    #[error("coordinate {coord} out of range for a product space with {coords} coordinates")]
    CoordinateOutOfRange { coord: usize, coords: usize },

    #[error("site {site} out of range for a grid with {sites} sites")]
    SiteOutOfRange { site: usize, sites: usize },

    #[error("state {state} out of range for a space with {size} states")]
    StateOutOfRange { state: usize, size: usize },

    #[error("burn-in {burn_in} leaves no samples in a trace of length {len}")]
    EmptyAfterBurnIn { burn_in: usize, len: usize },

    #[error("grid has {sites} sites, exceeding the exact-enumeration cap of {cap}")]
    GridTooLarge { sites: usize, cap: usize },

    #[error("product space {values}^{coords} overflows the addressable index range")]
    ProductSpaceTooLarge { coords: usize, values: usize },

    #[error("tolerance {value} is out of range: {requirement}")]
    InvalidTolerance {
        value: f64,
        requirement: &'static str,
    },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("invalid function spec {spec:?}: expected `identity` or `indicator:<state>`")]
    InvalidFunctionSpec { spec: String },

    #[error("invalid grid spec {spec:?}: expected `<width>x<height>` with positive integers")]
    InvalidGridSpec { spec: String },

    #[error("JSON parse error: {0}")]
    Json(#[from] serde_json::Error),
}
