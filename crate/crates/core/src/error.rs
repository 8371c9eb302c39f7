use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Failure classes shared by every operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument violates the operation's domain (bad law, malformed
    /// sign matrix, coordinate outside the sample space, ...).
    Domain(String),
    /// The request exceeds an enumeration or work cap.
    Resource(String),
    /// The statistic or kernel lacks the data this route needs.
    Unsupported(String),
    /// A finite-difference or Monte Carlo evaluation produced a non-finite value.
    Numeric(String),
    /// Numeric-estimate constants were offered for bound assembly without override.
    Refused(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Resource(m) => write!(f, "resource limit: {m}"),
            Error::Unsupported(m) => write!(f, "unsupported: {m}"),
            Error::Numeric(m) => write!(f, "numeric failure: {m}"),
            Error::Refused(m) => write!(f, "refused: {m}"),
        }
    }
}

impl core::error::Error for Error {}
