use thiserror::Error;

/// Errors shared across the field, curve and pairing layers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("operands belong to different field parameters")]
    ParamMismatch,
    #[error("division by zero field element")]
    DivisionByZero,
    #[error("gcd of two zero polynomials is undefined")]
    UndefinedGcd,
    #[error("unsupported modulus: {0}")]
    UnsupportedModulus(String),
    #[error("chain order must be positive")]
    InvalidOrder,
    #[error("no line through two points at infinity")]
    DegenerateLine,
    #[error("cannot evaluate a line at the point at infinity")]
    InfinityEvaluation,
    #[error("divisor roots live in a degree-{0} extension of the requested field")]
    NeedsFieldExtension(usize),
    #[error("evaluation divisor collides with chain divisor at step {0}")]
    DivisorCollision(usize),
    #[error("second argument is a multiple of the base point")]
    MultipleOfBasePoint,
    #[error("first argument is not annihilated by the pairing order")]
    NotTorsion,
    #[error("auxiliary point sampling exhausted the retry budget")]
    RandomnessExhausted,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable process exit code for each error class (documented in the README).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidInput(_) => 2,
            Error::DivisorCollision(_) => 3,
            Error::MultipleOfBasePoint => 4,
            Error::NotTorsion => 5,
            Error::RandomnessExhausted => 6,
            _ => 1,
        }
    }
}
