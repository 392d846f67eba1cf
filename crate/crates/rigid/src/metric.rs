//! The fixed metric diag(1, -1, -1, -1) on coordinates (ct, x, y, z).

use nalgebra::{Matrix4, Vector4};

use crate::error::{Result, RigidError};

pub type Vec4 = Vector4<f64>;
pub type Mat4 = Matrix4<f64>;

/// Relative tolerance on u^2 = c^2.
pub const NORMALIZATION_TOL: f64 = 1e-10;

pub fn gram() -> Mat4 {
    Mat4::from_diagonal(&Vec4::new(1.0, -1.0, -1.0, -1.0))
}

pub fn dot(v: &Vec4, w: &Vec4) -> f64 {
    v[0] * w[0] - v[1] * w[1] - v[2] * w[2] - v[3] * w[3]
}

pub fn square(v: &Vec4) -> f64 {
    dot(v, v)
}

/// Index lowering, v^flat = g(v, .).
pub fn lower(v: &Vec4) -> Vec4 {
    Vec4::new(v[0], -v[1], -v[2], -v[3])
}

/// Scales a timelike vector to u^2 = c^2.
pub fn normalize(v: &Vec4, c: f64) -> Option<Vec4> {
    let s = square(v);
    (s > 0.0).then(|| v * (c / s.sqrt()))
}

pub fn check_normalized(u: &Vec4, c: f64) -> Result<()> {
    let dev = (square(u) - c * c).abs() / (c * c);
    if dev < NORMALIZATION_TOL {
        Ok(())
    } else {
        Err(RigidError::NotNormalized(dev))
    }
}

/// P[a][c] = delta_a^c - u_a u^c / c^2; a covariant tensor T projects to P T P^T.
pub fn projector(u: &Vec4, c: f64) -> Mat4 {
    Mat4::identity() - lower(u) * u.transpose() / (c * c)
}

pub fn project(t: &Mat4, u: &Vec4, c: f64) -> Mat4 {
    let p = projector(u, c);
    p * t * p.transpose()
}

/// h = c^-2 u^flat (x) u^flat - g, with all indices down.
pub fn spatial_metric(u: &Vec4, c: f64) -> Result<Mat4> {
    check_normalized(u, c)?;
    let uf = lower(u);
    Ok(uf * uf.transpose() / (c * c) - gram())
}

pub fn max_abs(m: &Mat4) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rest_frame_metric() {
        let h = spatial_metric(&Vec4::new(2.0, 0.0, 0.0, 0.0), 2.0).unwrap();
        assert_eq!(h, Mat4::from_diagonal(&Vec4::new(0.0, 1.0, 1.0, 1.0)));
    }

    #[test]
    fn boosted_metric_annihilates_u() {
        let u = normalize(&Vec4::new(1.0, 0.6, -0.2, 0.3), 1.0).unwrap();
        let h = spatial_metric(&u, 1.0).unwrap();
        assert!((h * u).norm() < 1e-12);
        assert!(spatial_metric(&Vec4::new(1.0, 0.5, 0.0, 0.0), 1.0).is_err());
    }

    #[test]
    fn projector_is_idempotent() {
        let u = normalize(&Vec4::new(3.0, 1.0, 1.0, 0.0), 1.5).unwrap();
        let p = projector(&u, 1.5);
        assert!(max_abs(&(p * p - p)) < 1e-12);
        assert!((p.transpose() * u).norm() < 1e-12);
    }
}
