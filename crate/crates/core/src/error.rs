use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of a mathematical function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid problem or discretization parameters.
    #[error("configuration error: {0}")]
    Config(String),

    /// Mismatched dimensions or out-of-range indices supplied by the caller.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("matrix is singular (zero pivot in column {pivot})")]
    Singular { pivot: usize },

    #[error("collocation nodes {first} and {second} coincide")]
    DuplicateNodes { first: usize, second: usize },
}

impl Error {
    /// True for failures of the numerical kernels rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Singular { .. } | Error::DuplicateNodes { .. })
    }
}
