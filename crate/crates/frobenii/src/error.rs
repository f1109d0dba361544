use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("quadratic fields do not match: sqrt({0}) vs sqrt({1})")]
    FieldMismatch(i64, i64),
    #[error("discriminant {0} is not square-free")]
    NotSquareFree(i64),
    #[error("variable count mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("singular matrix")]
    Singular,
    #[error("eigenvalue iteration did not converge")]
    NoConvergence,
    #[error("expression has no closed-form antiderivative: {0}")]
    NotClosedForm(String),
    #[error("one-form is not closed: {0}")]
    NotClosed(String),
    #[error("metric is not constant")]
    NonConstantMetric,
    #[error("metric is degenerate")]
    DegenerateMetric,
    #[error("eigenvalues coalesce (gap {0:e})")]
    Coalescing(f64),
    #[error("normalized idempotent has zero length")]
    ZeroPsi,
    #[error("canonical coordinates collide (gap {0:e})")]
    Collision(f64),
    #[error("step size underflow at s = {0}")]
    StepUnderflow(f64),
    #[error("trajectory approaches a singular locus: {0}")]
    SingularApproach(String),
    #[error("unknown name: {0}")]
    UnknownName(String),
    #[error("unsupported Coxeter label m = {0}")]
    UnsupportedLabel(u32),
    #[error("non-integral invariant at k = {0}")]
    NonIntegral(usize),
    #[error("flat-coordinate ansatz has no solution for n = {0}")]
    AnsatzExhausted(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
