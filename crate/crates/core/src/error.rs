use thiserror::Error;

/// Errors raised by the library.
///
/// The CLI maps [`Error::Parse`] to a configuration error and every other
/// variant to a precondition violation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
    #[error("duplicate abscissa {0} in interpolation data")]
    DuplicateAbscissa(String),
    #[error("degenerate spectral parameters: {0}")]
    DegenerateSpectral(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),
    #[error("no admissible sample after {0} attempts")]
    RetryBudget(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
