use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("CNF parse error at line {line}: {message}")]
    Cnf { line: usize, message: String },

    #[error("proof parse error at byte {offset}: {message}")]
    Proof { offset: u64, message: String },

    #[error("0 is a clause terminator, not a literal")]
    ZeroLiteral,

    #[error("variable {0} is out of range")]
    VariableOutOfRange(u64),

    #[error("proof file changed under the checker: step at byte {offset} {message}")]
    Integrity { offset: u64, message: String },

    #[error("formula has {0} variables, exhaustive enumeration supports at most 24")]
    TooManyVariables(u32),

    #[error("internal error: {0}")]
    Internal(&'static str),
}

impl Error {
    pub(crate) fn cnf(line: usize, message: impl Into<String>) -> Error {
        Error::Cnf {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn proof(offset: u64, message: impl Into<String>) -> Error {
        Error::Proof {
            offset,
            message: message.into(),
        }
    }
}
