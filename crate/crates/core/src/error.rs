use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("position {x} outside the well [0, {width}]")]
    Domain { x: f64, width: f64 },

    #[error("quadrature did not converge after {subdivisions} subdivisions (estimate {estimate}, error {error})")]
    Quadrature {
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("least-squares t² fit residual {residual:.3e} exceeds {limit:.0e} (best C = {coefficient})")]
    FitResidual {
        coefficient: f64,
        residual: f64,
        limit: f64,
    },

    #[error("likelihood is -inf on the whole search interval")]
    FlatLikelihood,

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
