use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field of order {p}^{k} exceeds the size cap {cap}")]
    FieldTooLarge { p: u64, k: u32, cap: u64 },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("cannot embed F_{{{src_p}^{src_k}}} into F_{{{dst_p}^{dst_k}}}")]
    NoEmbedding {
        src_p: u32,
        src_k: u32,
        dst_p: u32,
        dst_k: u32,
    },
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
    #[error("division by zero")]
    DivisionByZero,
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("unsupported center: {0}")]
    MultiBranch(String),
    #[error("point is not on the curve: {0}")]
    NotOnCurve(String),
    #[error("precision cap {0} reached without a stable answer")]
    Precision(usize),
    #[error("constant function has no extension degree")]
    ConstantFunction,
    #[error("extension degree methods disagree: eliminant {eliminant}, fiber count {fiber}")]
    MethodDisagreement { eliminant: usize, fiber: usize },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("extension degree cap {0} exceeded")]
    ExtensionCap(u32),
    #[error("internal fault: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
