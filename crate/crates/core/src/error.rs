use thiserror::Error;

/// Errors raised by the geometry, low-rank and critical-point routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GrassError {
    #[error("matrix is rank deficient: smallest singular value {smallest:e} <= {tol:e}")]
    RankDeficient { smallest: f64, tol: f64 },

    #[error("dimension error: {0}")]
    DimensionError(String),

    #[error("tangent matrix is attached to a different frame")]
    FrameMismatch,

    #[error("target lies on the cut locus (largest principal angle {largest} within {tol:e} of pi/2)")]
    OnCutLocus { largest: f64, tol: f64 },

    #[error("finite-difference step {step:e} is not small against the scale {scale:e}")]
    StepTooSmall { step: f64, scale: f64 },

    #[error("index {index} out of range for {len} singular values")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("degenerate spectrum: singular values {i} and {j} coincide or vanish within {tol:e}")]
    DegenerateSpectrum { i: usize, j: usize, tol: f64 },

    #[error("truncated matrix has numerical rank {found}, expected {expected}")]
    RankCollapse { found: usize, expected: usize },

    #[error("point is not on the cut locus; the minimizing geodesic is unique")]
    NotOnCut,

    #[error("need at least {needed} generators, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("point is not in the smooth stratum: {0}")]
    NotSmoothPoint(String),

    #[error("chart out of range: largest singular value {sigma_max} too close to pi/2")]
    ChartOutOfRange { sigma_max: f64 },

    #[error("non-generic external plane: {0}")]
    NonGenericL(String),

    #[error("auxiliary space has dimension {found}, expected {expected}")]
    DegenerateAuxSpace { found: usize, expected: usize },

    #[error("chart point at the boundary: mu[{index}] = {value}")]
    ChartBoundary { index: usize, value: f64 },

    #[error("solver did not converge: {0}")]
    NoConvergence(String),

    #[error("vector is not unit length (norm {norm})")]
    NotUnit { norm: f64 },

    #[error("argument {value} outside the open interval (-1, 1)")]
    DomainError { value: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("not a hypersurface: {0}")]
    NotHypersurface(String),

    #[error("polynomial is not homogeneous: {0}")]
    NotHomogeneous(String),
}

impl GrassError {
    /// Stable machine-readable code, used in CLI error reports.
    pub fn code(&self) -> &'static str {
        match self {
            GrassError::RankDeficient { .. } => "RankDeficient",
            GrassError::DimensionError(_) => "DimensionError",
            GrassError::FrameMismatch => "FrameMismatch",
            GrassError::OnCutLocus { .. } => "OnCutLocus",
            GrassError::StepTooSmall { .. } => "StepTooSmall",
            GrassError::IndexOutOfRange { .. } => "IndexOutOfRange",
            GrassError::DegenerateSpectrum { .. } => "DegenerateSpectrum",
            GrassError::RankCollapse { .. } => "RankCollapse",
            GrassError::NotOnCut => "NotOnCut",
            GrassError::InsufficientSamples { .. } => "InsufficientSamples",
            GrassError::DimensionMismatch(_) => "DimensionMismatch",
            GrassError::NotSmoothPoint(_) => "NotSmoothPoint",
            GrassError::ChartOutOfRange { .. } => "ChartOutOfRange",
            GrassError::NonGenericL(_) => "NonGenericL",
            GrassError::DegenerateAuxSpace { .. } => "DegenerateAuxSpace",
            GrassError::ChartBoundary { .. } => "ChartBoundary",
            GrassError::NoConvergence(_) => "NoConvergence",
            GrassError::NotUnit { .. } => "NotUnit",
            GrassError::DomainError { .. } => "DomainError",
            GrassError::InvalidArgument(_) => "InvalidArgument",
            GrassError::NotHypersurface(_) => "NotHypersurface",
            GrassError::NotHomogeneous(_) => "NotHomogeneous",
        }
    }
}

pub type Result<T> = std::result::Result<T, GrassError>;
