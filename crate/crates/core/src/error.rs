use thiserror::Error;

use crate::field::Exponent;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    /// Every known term vanished; the sign or valuation lies beyond the tracked precision.
    #[error("precision exhausted: element is O(eps^{0})")]
    PrecisionExhausted(Exponent),
    #[error("square root of a negative element")]
    NegativeElement,
    #[error("leading coefficient {0} is not the square of a rational")]
    NonSquareLeadingCoefficient(String),
    #[error("element has negative valuation {0}")]
    NotIntegral(Exponent),
    #[error("exponent denominator {denominator} exceeds cap {cap}")]
    ExponentBlowup { denominator: i64, cap: i64 },
    #[error("gauss valuation undefined: zero denominator")]
    UndefinedGauss,
    #[error("not infinitesimal-definite: gauss valuation {0} is not positive")]
    NotInfinitesimalDefinite(String),
    #[error("polynomial coefficients are not all integral")]
    CoefficientsNotIntegral,
    #[error("arity mismatch: expected {expected} coordinates, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("unsupported set: {0}")]
    UnsupportedSet(String),
    #[error("parse error at offset {offset}: expected {}", expected.join(" | "))]
    Parse { offset: usize, expected: Vec<String> },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
