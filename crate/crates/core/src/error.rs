use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("q = {0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {q}^{m} exceeds the table limit of 2^20 elements")]
    FieldTooLarge { q: u32, m: usize },
    #[error("modulus is not a monic irreducible polynomial over F_{0}")]
    InvalidModulus(u32),
    #[error("element {value} out of range for a field of order {order}")]
    ElementOutOfRange { value: u64, order: u32 },
    #[error("evaluation points are linearly dependent over the base field")]
    DependentPoints,
    #[error("q-degree {degree} exceeds the allowed bound {bound}")]
    DegreeTooLarge { degree: usize, bound: usize },
    #[error("composition division left a nonzero remainder")]
    NonzeroRemainder,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid code parameters: {0}")]
    InvalidParameters(String),
    #[error("decoding radius infeasible: {0}")]
    RadiusInfeasible(String),
    #[error("invalid erasure information: {0}")]
    InvalidErasures(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
