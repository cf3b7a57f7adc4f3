use thiserror::Error;

use crate::domain::{DomainSpec, Point2C};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point {point} is not inside {spec}")]
    OutsideDomain { spec: DomainSpec, point: Point2C },

    #[error("operation not defined for {spec}: {reason}")]
    UnsupportedDomain { spec: DomainSpec, reason: &'static str },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("kernel evaluation near its singular set ({context})")]
    SingularEvaluation { context: String },

    #[error("series truncation does not converge: tail estimate {tail:e} exceeds tolerance {tolerance:e}")]
    NonconvergentTruncation { tail: f64, tolerance: f64 },

    #[error("rejection sampler exceeded {0} draws for a single point")]
    SamplerExhausted(usize),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
