use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("CFL ratio r = {ratio} exceeds 1; the explicit scheme is unstable")]
    CflViolation { ratio: f64 },

    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {what} has length {found}, expected {expected}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("boundary data incompatible with initial displacement at x = {at}: |{boundary} - {initial}| > 1e-12")]
    IncompatibleData { at: f64, boundary: f64, initial: f64 },

    #[error("source model has unresolved unknowns: {0}")]
    UnresolvedSource(&'static str),

    #[error("underdetermined system: {rows} observations for {cols} unknowns")]
    UnderdeterminedSystem { rows: usize, cols: usize },

    #[error("matrix is rank deficient: numerical rank {rank} < {cols} columns")]
    RankDeficient { rank: usize, cols: usize },

    #[error("regularized system is singular")]
    SingularSystem,

    #[error("matrix is identically zero")]
    ZeroMatrix,

    #[error("L-curve is degenerate: {0}")]
    DegenerateCurve(&'static str),

    #[error("unknown example id {0}; expected 1..=5")]
    UnknownExample(u8),
}

impl Error {
    /// Stable machine-readable code, used by the CLI on failure.
    pub fn code(&self) -> &'static str {
        match self {
            Error::CflViolation { .. } => "CFL_VIOLATION",
            Error::InvalidDimension(_) => "INVALID_DIMENSION",
            Error::InvalidParameter(_) => "INVALID_PARAMETER",
            Error::DimensionMismatch { .. } => "DIMENSION_MISMATCH",
            Error::IncompatibleData { .. } => "INCOMPATIBLE_DATA",
            Error::UnresolvedSource(_) => "UNRESOLVED_SOURCE",
            Error::UnderdeterminedSystem { .. } => "UNDERDETERMINED_SYSTEM",
            Error::RankDeficient { .. } => "RANK_DEFICIENT",
            Error::SingularSystem => "SINGULAR_SYSTEM",
            Error::ZeroMatrix => "ZERO_MATRIX",
            Error::DegenerateCurve(_) => "DEGENERATE_CURVE",
            Error::UnknownExample(_) => "UNKNOWN_EXAMPLE",
        }
    }
}
