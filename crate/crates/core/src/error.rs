use thiserror::Error;

use crate::report::Report;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not composable: {0}")]
    NotComposable(String),

    #[error("not a subgroup: {0}")]
    NotASubgroup(String),

    #[error("base mismatch: {0}")]
    BaseMismatch(String),

    #[error("edges do not match: {0}")]
    NotMatching(String),

    #[error("the double groupoid does not satisfy the filling condition: {0}")]
    NoFilling(String),

    #[error("the double groupoid is not slim: {0}")]
    NotSlim(String),

    #[error("the diagram is not a factorization: {0}")]
    NotFactorization(String),

    #[error("kernel fiber is not abelian: {0}")]
    NotAbelian(String),

    #[error("could not solve for a kernel element: {0}")]
    SolveFailed(String),

    #[error("extension data fails the cocycle equations:\n{0}")]
    CocycleInvalid(Box<Report>),

    #[error("path is not chained: {0}")]
    NotChained(String),

    #[error("search bound exceeded: {0}")]
    BoundExceeded(String),

    /// A table passed structural checks but failed an axiom.
    #[error("invalid structure:\n{0}")]
    Invalid(Box<Report>),

    /// An internal consistency trap fired: a structural property that must hold did not.
    #[error("inconsistent: {0}")]
    Inconsistent(String),

    #[error("format error at {context}: {message}")]
    Format { context: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn format(context: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Format {
            context: context.into(),
            message: message.into(),
        }
    }
}
