use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(&'static str),

    #[error("invalid configuration: {0}")]
    Config(String),

    /// A dimension constraint of the precoder design does not hold.
    #[error("constraint violated: {inequality} ({detail})")]
    Constraint {
        inequality: &'static str,
        detail: String,
    },

    #[error("quadrature did not converge: estimated error {achieved:e} > requested {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),
}
