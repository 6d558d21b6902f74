use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// Arguments are individually valid but inconsistent with each other.
    #[error("argument error: {0}")]
    Argument(String),

    /// Both fringe extrema vanish, so no contrast can be defined.
    #[error("undefined fringe: {0}")]
    UndefinedFringe(String),

    /// The balance condition would need an infinitely strong absorber.
    #[error("unbounded absorption: {0}")]
    UnboundedAbsorption(String),

    /// Quadrature settings too coarse to be meaningful.
    #[error("quadrature config error: {0}")]
    Config(String),
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
