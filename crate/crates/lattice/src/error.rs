use thiserror::Error;

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("grids must be 2- or 3-dimensional, got {0}")]
    UnsupportedDimension(usize),
    #[error("invalid grid extents: {0}")]
    BadExtents(String),
    #[error("regions live on different grids")]
    GridMismatch,
    #[error("event {0:?} is outside the grid")]
    OutOfGrid(Vec<i64>),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("grid too small: need half-extent at least {needed} on every axis, got {got}")]
    GridTooSmall { needed: i64, got: i64 },
    #[error("malformed region export: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, LatticeError>;
