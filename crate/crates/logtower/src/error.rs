use thiserror::Error;

/// Errors from exact operations on tower germs and differential polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("fractional powers require a single-term operand")]
    NonMonomialPower,
    #[error("coefficient has no exact rational power")]
    IrrationalCoefficientPower,
    #[error("logarithm requires a pure monomial with coefficient 1")]
    NonMonomialLog,
    #[error("germ involves the base variable and cannot be shifted down the tower")]
    NotShiftable,
    #[error("operand is not eventually positive")]
    NotEventuallyPositive,
    #[error("operand is not eventually of one sign")]
    NotEventuallySigned,
    #[error("iterated logarithmic derivative of order {order} is undefined for this germ")]
    UndefinedIterLogDeriv { order: usize },
    #[error("the zero polynomial has no dominant term")]
    ZeroPolynomial,
}

/// Errors from the floating-point cross-validation lab.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("tower depth {depth} exceeds the floating-point range (max {max})")]
    DepthTooLargeForNumerics { depth: usize, max: usize },
    #[error("step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },
    #[error("numeric domain error: {0}")]
    DomainError(String),
    #[error("solution has a zero inside the integration range at t = {t}")]
    ZeroInRange { t: f64 },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
}
