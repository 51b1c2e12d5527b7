use alloc::string::String;
use core::fmt;

use crate::cohomology::ClassCoordinates;
use crate::complex::Simplex;

/// Failure modes shared by every operation in the crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Malformed or inconsistent input data.
    Validation(String),
    /// A degree outside the range the operation accepts.
    Degree(String),
    /// A simplex that is not part of the complex.
    MissingSimplex(Simplex),
    /// A cochain expected to be closed has nonzero coboundary here.
    NotClosed(Simplex),
    /// A cohomological obstruction: the class with these coordinates is
    /// nonzero, so the requested object does not exist.
    Obstruction { coords: ClassCoordinates, reason: String },
    /// Inputs outside the supported (monomial) fragment.
    Unsupported(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Validation(m) => write!(f, "validation error: {m}"),
            Error::Degree(m) => write!(f, "degree error: {m}"),
            Error::MissingSimplex(s) => write!(f, "simplex {s:?} is not in the complex"),
            Error::NotClosed(s) => write!(f, "cochain is not closed at {s:?}"),
            Error::Obstruction { coords, reason } => {
                write!(f, "obstruction: {reason} (class {coords})")
            }
            Error::Unsupported(m) => write!(f, "unsupported: {m}"),
        }
    }
}

pub(crate) fn validation<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Validation(msg.into()))
}

pub(crate) fn degree<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Degree(msg.into()))
}
