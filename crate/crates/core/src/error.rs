use thiserror::Error;

use crate::chain::SphereFailure;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failure modes shared by every construction in the crate.
///
/// The variants line up with the CLI exit codes: size violations,
/// degeneracies, verification mismatches and falsification alerts are kept
/// apart so callers can react to each differently.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("size bound violated: {what} needs at least {required}, got {actual}")]
    Size {
        what: String,
        required: u64,
        actual: u64,
    },

    #[error("orientation error: {0}")]
    Orientation(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("not a link: {0}")]
    NotALink(String),

    #[error("input rejected on recomputation: {0}")]
    Input(String),

    #[error("search exhausted: {0}")]
    SearchFailure(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("sphere check failed: {0}")]
    Sphere(#[from] SphereFailure),

    /// A theorem-guaranteed object was not found. This indicates a bug.
    #[error("FALSIFICATION ALERT: {0}")]
    Falsification(String),

    #[error("schema error: {0}")]
    Schema(String),
}

impl Error {
    pub(crate) fn size(what: impl Into<String>, required: u64, actual: u64) -> Self {
        Error::Size {
            what: what.into(),
            required,
            actual,
        }
    }
}
