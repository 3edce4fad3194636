use thiserror::Error;

/// Errors produced by the property model, the solvers and the diagnostics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate coefficient: {0}")]
    DegenerateCoefficient(String),

    /// A diagonal block of the block-LU recurrence could not be inverted.
    /// `index` is the zero-based block row.
    #[error("singular 5x5 block at block row {index}")]
    SingularBlock { index: usize },

    #[error("Newton matrix singular at iteration {iteration} (block row {block})")]
    SolverFailure { iteration: usize, block: usize },

    #[error("integration blew up at eta = {eta:.6}")]
    BlowUp { eta: f64 },

    #[error("shooting failed: every integration blew up (tried eta_max = {tried:?}); try a smaller eta_max or a better initial guess")]
    ShootingBlowUp { tried: Vec<f64> },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
