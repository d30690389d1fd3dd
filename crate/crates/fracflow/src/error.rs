//! Error type shared across the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid order: {0}")]
    InvalidOrder(String),

    /// The alpha = 1 subordinator is the point mass at `t`; it has no
    /// density on (0, inf) and callers must special-case it.
    #[error("degenerate stable law (alpha = 1): handle the point mass at t directly")]
    DegenerateLaw,

    #[error("domain error: {0}")]
    Domain(String),

    /// A transport symbol with negative rate grows exponentially in k.
    #[error("unstable solve: u . theta_{index} = {value} is negative")]
    Instability { index: usize, value: f64 },

    #[error("unsupported direction: {0}")]
    UnsupportedDirection(String),

    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),

    #[error("truncation: {0}")]
    Truncation(String),

    #[error("coverage: {outside_fraction:.4} of ensemble points fall outside the box")]
    Coverage { outside_fraction: f64 },

    #[error("unknown validation case `{0}`")]
    UnknownCase(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
