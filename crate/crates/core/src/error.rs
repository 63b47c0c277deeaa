use thiserror::Error;

/// Errors raised by the library operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error in morphism text: {0}")]
    Syntax(String),
    #[error("image of letter '{0}' is empty (erasing morphisms are not supported)")]
    ErasingImage(char),
    #[error("symbol '{0}' is not a letter of the alphabet {{a, b}}")]
    BadLetter(char),
    #[error("morphism is not prolongable on a (image of a must start with a and have length at least 2)")]
    NotProlongable,
    #[error("incidence matrix is not primitive")]
    NotPrimitive,
    #[error("incidence matrix is not rank one (determinant {0})")]
    NotRankOne(i128),
    #[error("rank-one matrix has a zero entry; no decomposition with positive A, B exists")]
    ZeroEntry,
    #[error("trace {0} is below 2; the uniform lift needs block length at least 2")]
    DegenerateTrace(u64),
    #[error("prefix of length {have} is too short; at least {need} letters are required")]
    HorizonTooShort { need: usize, have: usize },
    #[error("position {position} is outside a word of length {length}")]
    OutOfRange { position: String, length: String },
    #[error("progression start {start} lies beyond the prefix of length {length}")]
    EmptySelection { start: usize, length: usize },
    #[error("operation requires theta2 = 1, found a different spectral case")]
    WrongSpectralCase,
    #[error("modulus {modulus} is not coprime with the trace {trace}")]
    NotCoprime { modulus: u64, trace: u64 },
    #[error("scan of {needed} offsets exceeds the budget of {budget}")]
    ScanBudgetExceeded { needed: String, budget: u64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
