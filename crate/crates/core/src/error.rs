use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("order {order} exceeds the supported maximum {max}")]
    OrderTooHigh { order: u32, max: u32 },

    #[error("quadrature did not converge: estimate {estimate:e}, error {error:e} after {intervals} intervals")]
    QuadratureNonConvergence {
        estimate: f64,
        error: f64,
        intervals: usize,
    },

    #[error("beam degenerated (w^2 <= 0) after {element}")]
    DegenerateBeam { element: String },

    #[error("path position {z} m outside the beamline [0, {total}] m")]
    OutOfRange { z: f64, total: f64 },

    #[error("imprecision divergent at amplitude quadrature (theta = {theta} rad)")]
    AmplitudeQuadrature { theta: f64 },

    #[error("ring-down data does not decay (fitted rate {slope:e} 1/s)")]
    NoDecay { slope: f64 },

    #[error("not enough samples: need at least {need}, got {got}")]
    TooFewSamples { need: usize, got: usize },

    #[error("empty grid `{name}`")]
    EmptyGrid { name: &'static str },
}

pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be finite and > 0, got {value}"),
        })
    }
}

pub(crate) fn ensure_non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be finite and >= 0, got {value}"),
        })
    }
}
