//! Minkowski-space geometry: vectors and events, isometries, the boost
//! family, projective and Fock-Lorentz maps, and simultaneity.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod affine;
pub mod error;
pub mod isometry;
pub mod kinematics;
pub mod projective;
pub mod sampling;
pub mod simultaneity;
pub mod space;

pub use error::{GeometryError, Result};
pub use space::{classify, inner, Causality, Event, Metric, MinkVector, TimeOrientation};
