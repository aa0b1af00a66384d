use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Physical parameters violate a model validity condition (weak coupling,
    /// frequency cutoff, time step).
    #[error("validity error: {0}")]
    Validity(String),

    /// Malformed input such as a non-power-of-two series length.
    #[error("input error: {0}")]
    Input(String),

    /// A symbolic or combinatorial size bound was exceeded.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// A truncated sum could not reach its tolerance within the term budget.
    #[error("convergence error: {0}")]
    Convergence(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// Simulation or sampling configuration rejected before any work was done.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
