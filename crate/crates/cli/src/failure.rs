//! Errors carrying the process exit code.

use weighted_radius::io::MatrixParseError;
use weighted_radius::Error;

pub const EXIT_CHAIN_FAILURE: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_MALFORMED: u8 = 3;
pub const EXIT_DIMENSION: u8 = 4;
pub const EXIT_NOT_MEMBER: u8 = 5;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    pub fn config(message: impl Into<String>) -> Self {
        Self::new(EXIT_CONFIG, message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DimensionMismatch { .. } => EXIT_DIMENSION,
            Error::NotMember { .. } => EXIT_NOT_MEMBER,
            Error::NonSquare { .. } | Error::NonFinite => EXIT_MALFORMED,
            _ => EXIT_CONFIG,
        };
        Self::new(code, e.to_string())
    }
}

impl From<MatrixParseError> for Failure {
    fn from(e: MatrixParseError) -> Self {
        Self::new(EXIT_MALFORMED, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::config(e.to_string())
    }
}
