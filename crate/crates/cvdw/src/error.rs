use thiserror::Error;

/// Errors raised by kernel evaluation, class construction and the
/// verification drivers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("kernel order must be at least 1 (got {0})")]
    KernelOrder(u32),

    #[error("kernel order {0} exceeds the supported maximum {1}")]
    KernelOrderTooLarge(u32, u32),

    #[error("analytic kernel width must be positive and finite (got {0})")]
    KernelWidth(f64),

    #[error("series tolerance must be positive (got {0})")]
    Tolerance(f64),

    #[error("link argument {0} lies outside [-1, 1] beyond the clamp tolerance")]
    LinkDomain(f64),

    #[error("knot vector invalid: {0}")]
    Knots(String),

    #[error("grid length {0} must be a power of two, at least 4")]
    GridSize(usize),

    #[error("grids have mismatched lengths ({0} vs {1})")]
    GridMismatch(usize, usize),

    #[error("periodic integral requires zero mean (|mean| = {0:.3e})")]
    NonzeroMean(f64),

    #[error("norm exponent must satisfy q >= 1 (got {0})")]
    NormExponent(f64),

    #[error("all-zero vector has no sign-change count")]
    TrivialVector,

    #[error("mean constraint could not be enforced after {0} bisection steps")]
    ConstraintEnforcement(usize),

    #[error("candidate is not orthogonal to the low trigonometric block (defect {0:.3e})")]
    InformationDefect(f64),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
