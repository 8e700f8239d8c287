use thiserror::Error;

/// Errors raised by the geometry, kinematics and invariance routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("component {index} = {value} is not in the up-sector (must be finite and > {floor:e})")]
    NotUpSector { index: usize, value: f64, floor: f64 },

    #[error("non-finite result while computing {context}")]
    Overflow { context: &'static str },

    #[error("chord is not timelike: squared interval {interval_sq} <= 0")]
    Spacelike { interval_sq: f64 },

    #[error("direction is not timelike: squared norm {norm_sq}")]
    NonTimelikeDirection { norm_sq: f64 },

    #[error("direction is past-pointing: b = {b} < a = {a}")]
    PastDirected { a: f64, b: f64 },

    #[error("velocity ({}, {}, {}) is not admissible: bracket J{index} = {value} <= 0", .s[0], .s[1], .s[2])]
    InadmissibleVelocity { s: [f64; 3], index: usize, value: f64 },

    #[error("degenerate {what}: {value}")]
    Degenerate { what: &'static str, value: f64 },

    #[error("kinematic length undefined: combination {index} = {value} <= 0")]
    NotFuturePointing { index: usize, value: f64 },

    #[error("arc parameter {s} outside [0, {length}]")]
    OutOfRange { s: f64, length: f64 },

    #[error("invalid constants matrix: {0}")]
    InvalidConstants(String),

    #[error("invalid exponent matrix: {0}")]
    InvalidExponents(String),

    #[error("dilatation is not unimodular: product of factors = {product}")]
    NotUnimodular { product: f64 },

    #[error("step must be positive and finite, got {0}")]
    InvalidStep(f64),

    #[error("integration length must be non-negative and finite, got {0}")]
    InvalidLength(f64),

    #[error("non-finite state at s = {s}")]
    NonFiniteState { s: f64 },
}

impl Error {
    /// Short machine-readable name of the violated precondition.
    pub fn precondition(&self) -> &'static str {
        match self {
            Error::NotUpSector { .. } => "up_sector",
            Error::Overflow { .. } => "finite_result",
            Error::Spacelike { .. } => "timelike_chord",
            Error::NonTimelikeDirection { .. } => "timelike_direction",
            Error::PastDirected { .. } => "future_directed",
            Error::InadmissibleVelocity { .. } => "admissible_velocity",
            Error::Degenerate { .. } => "non_degenerate",
            Error::NotFuturePointing { .. } => "future_pointing",
            Error::OutOfRange { .. } => "arc_range",
            Error::InvalidConstants(_) => "constants_invariants",
            Error::InvalidExponents(_) => "exponent_invariants",
            Error::NotUnimodular { .. } => "unimodular",
            Error::InvalidStep(_) => "positive_step",
            Error::InvalidLength(_) => "non_negative_length",
            Error::NonFiniteState { .. } => "finite_state",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
