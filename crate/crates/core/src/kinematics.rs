//! The one-parameter boost family A(v; k) acting on (t, x).
//!
//! k < 0 gives Lorentz boosts with c = 1/sqrt(-k), k = 0 Galilei boosts and
//! k > 0 Euclidean rotations.

use nalgebra::{Matrix2, Matrix3, Matrix4, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Branch {
    /// k > 0; the group generated is SO(4) and there is no invariant time orientation.
    Euclidean,
    /// k = 0; invariant speed is infinite.
    Galilei,
    /// k < 0 with invariant speed c.
    Lorentz { c: f64 },
}

impl Branch {
    /// Invariant speed, infinite for Galilei and absent for Euclidean.
    pub fn invariant_speed(self) -> Option<f64> {
        match self {
            Branch::Euclidean => None,
            Branch::Galilei => Some(f64::INFINITY),
            Branch::Lorentz { c } => Some(c),
        }
    }
}

pub fn classify_branch(k: f64) -> Branch {
    if k > 0.0 {
        Branch::Euclidean
    } else if k == 0.0 {
        Branch::Galilei
    } else {
        Branch::Lorentz { c: 1.0 / (-k).sqrt() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoostFamily {
    pub k: f64,
}

impl BoostFamily {
    pub fn new(k: f64) -> Self {
        Self { k }
    }

    /// Lorentz family with invariant speed c.
    pub fn lorentz(c: f64) -> Self {
        Self { k: -1.0 / (c * c) }
    }

    pub fn branch(&self) -> Branch {
        classify_branch(self.k)
    }

    pub fn boost(&self, v: f64) -> Result<Boost1D> {
        Boost1D::new(*self, v)
    }
}

/// A validated member A(v) of a boost family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Boost1D {
    family: BoostFamily,
    v: f64,
}

impl Boost1D {
    pub fn new(family: BoostFamily, v: f64) -> Result<Self> {
        a_of_v(family.k, v)?;
        Ok(Self { family, v })
    }

    pub fn velocity(&self) -> f64 {
        self.v
    }

    pub fn family(&self) -> BoostFamily {
        self.family
    }

    pub fn matrix(&self) -> Matrix2<f64> {
        boost_matrix_1d(self.family.k, self.v).expect("validated at construction")
    }
}

/// a(v) = 1/sqrt(1 + k v^2).
pub fn a_of_v(k: f64, v: f64) -> Result<f64> {
    let s = 1.0 + k * v * v;
    if !(s > 0.0) || !v.is_finite() {
        return Err(GeometryError::VelocityDomain { v });
    }
    Ok(1.0 / s.sqrt())
}

/// Off-diagonal function b(v) = k v a(v).
pub fn b_of_v(k: f64, v: f64) -> Result<f64> {
    Ok(k * v * a_of_v(k, v)?)
}

/// A(v) = [[a, k v a], [-v a, a]] acting on (t, x).
pub fn boost_matrix_1d(k: f64, v: f64) -> Result<Matrix2<f64>> {
    let a = a_of_v(k, v)?;
    Ok(Matrix2::new(a, k * v * a, -v * a, a))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Composed {
    Finite(f64),
    /// The denominator 1 - k v v' vanished.
    Infinite,
}

impl Composed {
    pub fn finite(self) -> Option<f64> {
        match self {
            Composed::Finite(v) => Some(v),
            Composed::Infinite => None,
        }
    }
}

/// v'' = (v + v') / (1 - k v v').
pub fn compose_velocities(k: f64, v: f64, w: f64) -> Result<Composed> {
    a_of_v(k, v)?;
    a_of_v(k, w)?;
    let den = 1.0 - k * v * w;
    if den.abs() <= 4.0 * f64::EPSILON * (1.0 + (k * v * w).abs()) {
        return Ok(Composed::Infinite);
    }
    Ok(Composed::Finite((v + w) / den))
}

pub fn rapidity(v: f64, c: f64) -> Result<f64> {
    if !(c > 0.0) || !(v.abs() < c) {
        return Err(GeometryError::VelocityDomain { v });
    }
    Ok((v / c).atanh())
}

pub fn rapidity_inverse(rho: f64, c: f64) -> f64 {
    c * rho.tanh()
}

/// Minimal rotation taking e_x to the unit vector n.
pub fn rotation_taking_ex_to(n: &Vector3<f64>) -> Matrix3<f64> {
    let ex = Vector3::x();
    let axis = ex.cross(n);
    let s = axis.norm();
    let cth = ex.dot(n);
    if s < 1e-15 {
        if cth > 0.0 {
            return Matrix3::identity();
        }
        // Half turn about e_y.
        return Matrix3::new(-1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -1.0);
    }
    let k = axis / s;
    let kx = Matrix3::new(0.0, -k.z, k.y, k.z, 0.0, -k.x, -k.y, k.x, 0.0);
    Matrix3::identity() + kx * s + kx * kx * (1.0 - cth)
}

/// Rotation D acting on the spatial block of (t, x, y, z).
pub fn spatial_rotation(d: &Matrix3<f64>) -> Matrix4<f64> {
    let mut m = Matrix4::identity();
    m.fixed_view_mut::<3, 3>(1, 1).copy_from(d);
    m
}

fn check_subluminal(v: &Vector3<f64>, c: f64) -> Result<()> {
    if !(c > 0.0) || !(v.norm() < c) {
        return Err(GeometryError::VelocityDomain { v: v.norm() });
    }
    Ok(())
}

/// Boost with velocity v in (t, x, y, z) coordinates, built as R(D) B(|v| e_x) R(D^-1).
pub fn boost_3d(v: &Vector3<f64>, c: f64) -> Result<Matrix4<f64>> {
    check_subluminal(v, c)?;
    let speed = v.norm();
    if speed == 0.0 {
        return Ok(Matrix4::identity());
    }
    let a = boost_matrix_1d(-1.0 / (c * c), speed)?;
    let mut bx = Matrix4::identity();
    bx.fixed_view_mut::<2, 2>(0, 0).copy_from(&a);
    let d = rotation_taking_ex_to(&(v / speed));
    Ok(spatial_rotation(&d) * bx * spatial_rotation(&d.transpose()))
}

/// Closed-form Lorentz boost of an event (t, x).
pub fn lorentz_boost_event(v: &Vector3<f64>, c: f64, t: f64, x: &Vector3<f64>) -> Result<(f64, Vector3<f64>)> {
    check_subluminal(v, c)?;
    let v2 = v.norm_squared();
    let gamma = 1.0 / (1.0 - v2 / (c * c)).sqrt();
    let t2 = gamma * (t - v.dot(x) / (c * c));
    let x2 = if v2 == 0.0 { *x } else { x + v * ((gamma - 1.0) * v.dot(x) / v2) - v * (gamma * t) };
    Ok((t2, x2))
}

/// Converts a matrix on (t, x, y, z) to (ct, x, y, z) coordinates.
pub fn to_ct_coordinates(m: &Matrix4<f64>, c: f64) -> Matrix4<f64> {
    let s = Matrix4::from_diagonal(&nalgebra::Vector4::new(c, 1.0, 1.0, 1.0));
    let si = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0 / c, 1.0, 1.0, 1.0));
    s * m * si
}
