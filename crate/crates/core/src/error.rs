use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// The massless k = 0 mode was referenced where its 1/ω weight is needed.
    #[error("singular massless k = 0 mode")]
    SingularMode,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("operands live on different momentum supports")]
    SupportMismatch,

    #[error("sample count mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("operation requires a Cartesian momentum grid")]
    RequiresGrid,

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("momentum lies on the polar axis (sin θ = {sin_theta:e})")]
    PolarAxis { sin_theta: f64 },

    #[error("zero momentum vector has no helicity frame")]
    ZeroVector,

    #[error("amplitude not negligible at the grid boundary (edge fraction {fraction:e} exceeds {limit:e})")]
    EdgeMass { fraction: f64, limit: f64 },

    #[error("negative time {0} not allowed")]
    NegativeTime(f64),

    #[error("quadrature window [{lo}, {hi}] does not cover the resonance {center}")]
    WindowMisplaced { lo: f64, hi: f64, center: f64 },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serialization(String),
}

impl Error {
    /// Guards that reflect the numerical state rather than bad input.
    pub fn is_numerical_guard(&self) -> bool {
        matches!(
            self,
            Error::SingularMode
                | Error::ZeroNorm
                | Error::PolarAxis { .. }
                | Error::ZeroVector
                | Error::EdgeMass { .. }
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}
