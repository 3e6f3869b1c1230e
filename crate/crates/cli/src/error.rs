use std::fmt;

use bordered_gue::Error;

/// Failure classes and their process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad or missing parameter (exit 2).
    Param(String),
    /// Parameters outside the domain where the quantity exists (exit 3).
    Domain(String),
    /// A computation did not converge (exit 4).
    Numerical(String),
    /// Output could not be written (exit 1).
    Io(String),
    /// The verification suite ran and at least one check failed (exit 1).
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Param(_) => 2,
            Self::Domain(_) => 3,
            Self::Numerical(_) => 4,
            Self::Io(_) | Self::Failed(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Param(m) => write!(f, "parameter error: {m}"),
            Self::Domain(m) => write!(f, "domain error: {m}"),
            Self::Numerical(m) => write!(f, "numerical failure: {m}"),
            Self::Io(m) => write!(f, "i/o error: {m}"),
            Self::Failed(m) => write!(f, "{m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(m) => Self::Param(m),
            Error::UnsupportedParameter(m) => Self::Domain(m),
            Error::DivergenceDetected(m) => {
                Self::Domain(format!("{m}; the bordered kernel exists only for sigma^2 < 2"))
            }
            Error::NumericalFailure(m) => Self::Numerical(m),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::Io(e.to_string())
    }
}
