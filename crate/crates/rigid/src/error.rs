use thiserror::Error;

#[derive(Debug, Error)]
pub enum RigidError {
    #[error("finite-difference step must be positive, got {0}")]
    BadStep(f64),
    #[error("event {0:?} lies outside the field's domain")]
    OutsideDomain([f64; 4]),
    #[error("event {at:?} is closer than {margin} to the domain boundary")]
    NearBoundary { at: [f64; 4], margin: f64 },
    #[error("velocity is not normalised: |u^2 - c^2| / c^2 = {0:e}")]
    NotNormalized(f64),
    #[error("generator is not timelike at {0:?}")]
    NotTimelike([f64; 4]),
    #[error("no hyperplane of the worldline passes through {0:?} inside the parameter window")]
    RootNotFound([f64; 4]),
    #[error("too close to the caustic of the worldline's hyperplanes: N = {0:e}")]
    Caustic(f64),
    #[error("event (ct, x) = ({ct}, {x}) is outside the right wedge x > |ct|")]
    WedgeViolation { ct: f64, x: f64 },
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("csv export failed: {0}")]
    Csv(String),
}

pub type Result<T> = std::result::Result<T, RigidError>;
