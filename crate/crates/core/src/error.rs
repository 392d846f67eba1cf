use thiserror::Error;

/// Failures reported by the geometry operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("dimension {0} is not supported (need n >= 2)")]
    UnsupportedDimension(usize),
    #[error("vectors are linearly dependent")]
    LinearlyDependent,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("weights sum to {0}, expected 1")]
    WeightSum(f64),
    #[error("singular basis")]
    SingularBasis,
    #[error("empty input")]
    Empty,
    #[error("axis is lightlike or zero")]
    NullAxis,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not a Lorentz matrix (residual {0:e})")]
    NotLorentz(f64),
    #[error("lightlike probe {index} not mapped to a lightlike vector (image square {image_square:e})")]
    ProbeViolation { index: usize, probe: Vec<f64>, image_square: f64 },
    #[error("map is not a bijection on the sample set")]
    NotBijective,
    #[error("velocity {v} outside the domain of the branch")]
    VelocityDomain { v: f64 },
    #[error("event too close to the singular hyperplane (denominator {0:e})")]
    NearSingular(f64),
    #[error("event lies on the worldline")]
    OnWorldline,
    #[error("line base lies on the light cone of the event")]
    BaseOnCone,
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, GeometryError>;
