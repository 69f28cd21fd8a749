use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("cannot parse scalar {text:?} over {field}")]
    ScalarParse { text: String, field: String },
    #[error("unsupported automorphism: {0}")]
    UnsupportedAutomorphism(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("not a complex: d^{degree} followed by d^{next} is nonzero", next = .degree + 1)]
    NotAComplex { degree: i32 },
    #[error("not a chain map: square at degree {degree} does not commute")]
    NotAChainMap { degree: i32 },
    #[error("operators {0} and {1} do not commute")]
    NotCommuting(String, String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not a cocycle: {0}")]
    CocycleViolation(String),
    #[error("incompatible hosts: {0}")]
    IncompatibleHosts(String),
    #[error("too large: {0}")]
    TooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;
