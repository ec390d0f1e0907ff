use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An input is outside the domain of the operation. `field` names the
    /// offending parameter.
    Domain { field: &'static str, reason: String },
    /// The secular-equation root for mode index `m` could not be bracketed.
    /// Valid input never triggers this.
    RootNotBracketed { n: usize, m: f64 },
    /// The dense eigensolver ran out of iterations.
    EigenNoConvergence { n: usize, index: usize },
    /// The dense path was asked for a chain longer than its guard allows.
    TooLarge { n: usize, limit: usize },
}

impl Error {
    pub fn domain(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            field,
            reason: reason.into(),
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { field, reason } => write!(f, "invalid `{field}`: {reason}"),
            Error::RootNotBracketed { n, m } => {
                write!(f, "secular root not bracketed for N={n}, m={m}")
            }
            Error::EigenNoConvergence { n, index } => write!(
                f,
                "tridiagonal eigensolver did not converge (N={n}, eigenvalue {index})"
            ),
            Error::TooLarge { n, limit } => write!(
                f,
                "N={n} exceeds the dense-path limit of {limit}; use the spectral \
                 end-to-end amplitude instead"
            ),
        }
    }
}

impl core::error::Error for Error {}
