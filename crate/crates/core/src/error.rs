use thiserror::Error;

/// Errors raised across the laboratory.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point {point} is not an interior point of {domain}")]
    NotInterior { domain: String, point: String },

    #[error("invalid domain descriptor: {0}")]
    InvalidDomain(String),

    #[error("coordinate {index} is zero")]
    ZeroCoordinate { index: usize },

    #[error("pole of the scaling automorphism at {0}")]
    Pole(String),

    #[error("sandwich gap {gap:.3e} exceeds tolerance {tol:.3e}")]
    SandwichGap { gap: f64, tol: f64 },

    #[error("deck search not certified within |nu| <= {bound}: certificate gap {gap:.3e}")]
    DeckNotCertified { bound: u32, gap: f64 },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("curve leaves the domain at parameter {0}")]
    CurveLeftDomain(f64),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("singular matrix (det = 0)")]
    SingularMatrix,

    #[error("invalid antipodal pair: {0}")]
    InvalidAntipodal(String),

    #[error("lift failed: {0}")]
    Lift(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("image of {point} leaves the target domain")]
    ImageOutsideTarget { point: String },

    #[error("no admissible disc found: {0}")]
    NoAdmissibleDisc(String),
}

pub type Result<T> = std::result::Result<T, Error>;
