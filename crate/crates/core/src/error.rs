use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("rational arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid rational literal `{0}`")]
    ParseRational(String),
    #[error("matrix is not unitary (defect {defect:.3e} > tol {tol:.1e})")]
    NotUnitary { defect: f64, tol: f64 },
    #[error("matrix is not orthogonal (defect {defect:.3e} > tol {tol:.1e})")]
    NotOrthogonal { defect: f64, tol: f64 },
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("coin parameters violate the family constraint: {0}")]
    ConstraintViolated(String),
    #[error("coin parameters outside the real range: {0}")]
    RangeViolated(String),
    #[error("no real solution: {0}")]
    OutOfRange(String),
    #[error("matrix is orthogonal but not a linear sum of permutation matrices")]
    NotPermutative,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),
    #[error("phase condition e^(ika) = 1 violated for n = {n}, a = {a}, l = {l}")]
    PhaseConditionViolated { n: usize, a: usize, l: usize },
    #[error("dense guard exceeded: n = {n} > {limit}")]
    GuardExceeded { n: usize, limit: usize },
    #[error("analytic period not applicable: {0}")]
    NotApplicable(String),
    #[error("eigenvalue modulus {0} is not 1")]
    NotUnitModulus(f64),
    #[error("invalid walk: {0}")]
    InvalidWalk(String),
    #[error("invalid coin document: {0}")]
    InvalidDocument(String),
}
