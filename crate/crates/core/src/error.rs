use thiserror::Error;

/// Errors raised by the library. CLI maps these to exit code 2 (input or
/// resource problems); failed mathematical checks are reported in certificates
/// instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("conductor {0} exceeds the configured maximum {1}")]
    ConductorOverflow(u64, u32),
    #[error("value not realizable in the target field: {0}")]
    NotRealizable(String),
    #[error("parameter `{0}` has no assigned value")]
    Unassigned(String),
    #[error("sum is not representable as a unit: {0}")]
    NotAUnit(String),
    #[error("exponent denominator {0} exceeds the configured cap {1}")]
    ExponentBound(String, u64),
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("element is not homogeneous")]
    Inhomogeneous,
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("no diagonal twist exists: {0}")]
    NoDiagonalTwist(String),
    #[error("cyclic derivatives are linearly dependent")]
    DependentDerivatives,
    #[error("intersection (V⊗R)∩(R⊗V) has dimension {0}, expected 1")]
    IntersectionDimension(usize),
    #[error("not an eigenvector: monomials {0} and {1} scale differently")]
    NotEigenvector(String, String),
    #[error("omitted slot must carry the twist entry: p_k = {found}, q_k = {expected}")]
    OmittedSlot { found: String, expected: String },
    #[error("internal identity check failed: {0}")]
    Defect(String),
    #[error("degree {0} exceeds the truncation bound {1}")]
    BeyondBound(usize, usize),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("engines disagree at degree {degree}: linear algebra {la}, rewriting {gb}")]
    EngineDisagreement { degree: usize, la: usize, gb: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
