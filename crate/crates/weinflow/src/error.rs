use thiserror::Error;

/// Crate-wide error type. Variants are grouped by how callers are expected to
/// react: `Argument`/`Config`/`Validation` are caller mistakes (CLI exit 2),
/// the rest are runtime outcomes.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-contract argument (wrong dimension, empty input, bad range).
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A curvature vector left the admissible cone; carries the (non-positive) margin.
    #[error("inadmissible curvature data: cone margin {margin:.3e} ({detail})")]
    Admissibility { margin: f64, detail: String },

    /// A radius left the configured ambient domain.
    #[error("radius {r} outside ambient domain [{lo}, {hi}]")]
    Domain { r: f64, lo: f64, hi: f64 },

    /// Degenerate linear-algebra input (non-SPD metric, singular pair).
    #[error("degenerate tensor data: {0}")]
    Degenerate(String),

    /// Root finding / solve found no admissible solution.
    #[error("no solution: {0}")]
    NoSolution(String),

    /// Non-finite value produced where a finite one is required.
    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    /// Scenario or flow precondition violated; message names the precondition.
    #[error("validation failed: {0}")]
    Validation(String),

    /// Scenario file syntax / unknown key / missing key.
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
