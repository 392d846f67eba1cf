//! Born-rigid motions in four-dimensional Minkowski space: the kinematic
//! split of a velocity field by central differences, the boost and rotation
//! Killing motions, and the rigid motions induced by a single worldline.
//!
//! Coordinates are (ct, x, y, z) with metric diag(1, -1, -1, -1); velocity
//! fields are normalised to u^2 = c^2.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod comoving;
pub mod error;
pub mod export;
pub mod field;
pub mod herglotz;
pub mod kinematics;
pub mod metric;
pub mod rindler;

pub use error::{Result, RigidError};
pub use field::{Provenance, VelocityField};
pub use kinematics::{kinematic_decomposition, KinematicDecomposition, CURVATURE_TOL, FD_STEP, FD_TOL};
pub use metric::{spatial_metric, Mat4, Vec4};
