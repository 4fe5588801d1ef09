use thiserror::Error;

/// Errors raised by the numerical routines and parameter validation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),
    #[error("series lost precision: {0}")]
    PrecisionLoss(String),
    #[error("time grid must be sorted ascending and start at t >= 0")]
    UnsortedGrid,
    #[error("empty grid")]
    EmptyGrid,
    #[error("step size underflow at t = {t:e}")]
    StepSizeUnderflow { t: f64 },
    #[error("step budget of {0} exhausted")]
    StepBudget(usize),
    #[error("quadrature did not converge: {0}")]
    QuadratureNonConvergence(String),
    #[error("degenerate scan: {0}")]
    DegenerateScan(String),
    #[error("normalization undefined: {0}")]
    ZeroDenominator(String),
    #[error("parameter file: {0}")]
    ParamFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
