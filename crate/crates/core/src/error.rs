use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("extension is not etale: {0}")]
    NotEtale(String),
    #[error("zero parameter: {0}")]
    ZeroParameter(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("linear system has no solution")]
    NoSolution,
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("form is not isotropic")]
    NotIsotropic,
    #[error("isotropy oracle is incomplete here: {0}")]
    OracleIncomplete(String),
    #[error("operation not supported over this field: {0}")]
    Unsupported(String),
    #[error("transfer along a split algebra is not defined")]
    SplitK,
    #[error("internal contradiction: {0}")]
    InternalContradiction(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("value does not lie in the base field: {0}")]
    ValueNotInF(String),
    #[error("identity f(xi)^2 = phi(xi) fails: {0}")]
    IdentityFails(String),
    #[error("Clifford relation violated: {0}")]
    RelationViolation(String),
    #[error("rank deficient: expected {expected}, got {got}")]
    RankDeficient { expected: usize, got: usize },
    #[error("Clifford algebra dimension cap exceeded (dim {0} > 6)")]
    DimensionCap(usize),
    #[error("unknown instance family: {0}")]
    UnknownFamily(String),
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
