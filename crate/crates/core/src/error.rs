use thiserror::Error;

/// Errors raised by the library.
///
/// Parameter and budget violations are separated from data-invariant
/// violations so that front ends can map them to distinct exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("shape mismatch: expected {expected} coordinates, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },

    #[error("coordinate {value} out of range for factor {modulus}")]
    CoordinateOutOfRange { value: u64, modulus: u64 },

    #[error("connection set contains the identity")]
    IdentityInConnectionSet,

    #[error("connection set is not symmetric: {0} has no inverse in the set")]
    AsymmetricConnectionSet(String),

    #[error("connection set is empty")]
    EmptyConnectionSet,

    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },

    #[error("not a partition of the vertex set: {0}")]
    NotAPartition(String),

    #[error("size budget exceeded: {0}")]
    Budget(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("division by zero in GF(2^{m})")]
    ZeroInverse { m: u32 },

    #[error("element {element:#x} does not lie in the subfield GF(2^{sub_degree})")]
    NotInSubfield { element: u64, sub_degree: u32 },

    #[error("polynomial {0:#x} is not irreducible")]
    Reducible(u64),

    #[error("closed form disagrees with enumeration: {0}")]
    FormulaMismatch(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for violations of a data invariant (as opposed to bad parameters
    /// or budgets).
    pub fn is_invariant_violation(&self) -> bool {
        matches!(
            self,
            Error::IdentityInConnectionSet
                | Error::AsymmetricConnectionSet(_)
                | Error::EmptyConnectionSet
                | Error::CoordinateOutOfRange { .. }
                | Error::ShapeMismatch { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Malformed(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Malformed(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
