//! Errors raised by the symbolic oracle.

use lightcone::TransitionError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("polynomial is not biharmonic in block {block}")]
    NotBiharmonic { block: String },
    #[error("polynomial is not homogeneous in block {block}")]
    NotHomogeneous { block: String },
    #[error("polynomial is not divisible by r² in block {block}")]
    NotDivisible { block: String },
    #[error("harmonic projection is singular in block {block}")]
    SingularProjection { block: String },
    #[error("operator {op} is not defined on {cone}")]
    InvalidOperator { op: String, cone: String },
    #[error("odd radial shift needs a polynomial radial coordinate")]
    OddRadialShift,
    #[error("cone functions have different radial bases")]
    BaseMismatch,
    #[error("engine coefficient is not affine in the spectral parameter")]
    NonAffineCoefficient,
    #[error("invalid verification input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Engine(#[from] TransitionError),
}
