//! Finite-difference kinematics of a velocity field: the split
//! grad u^flat = theta + omega + c^-2 u^flat (x) a^flat and the Lie derivatives
//! built from it.
//!
//! Index conventions: in a covariant 2-tensor `t[(a, b)]` the first index is
//! the derivative direction, so `grad[(a, b)] = d_a u_b`. Jacobians of vector
//! fields are stored as `jac[(a, b)] = d_a V^b`.

use rayon::prelude::*;

use crate::error::{Result, RigidError};
use crate::field::VelocityField;
use crate::metric::{gram, lower, max_abs, project, Mat4, Vec4};

pub const FD_STEP: f64 = 1e-3;
/// First-derivative checks at [`FD_STEP`].
pub const FD_TOL: f64 = 1e-5;
/// Second-derivative (curvature) checks.
pub const CURVATURE_TOL: f64 = 1e-4;

fn axis(a: usize, h: f64) -> Vec4 {
    let mut e = Vec4::zeros();
    e[a] = h;
    e
}

fn check_step(step: f64) -> Result<()> {
    if step > 0.0 && step.is_finite() {
        Ok(())
    } else {
        Err(RigidError::BadStep(step))
    }
}

fn check_interior(f: &VelocityField, p: &Vec4, step: f64) -> Result<()> {
    check_step(step)?;
    if !f.contains(p) {
        return Err(RigidError::OutsideDomain((*p).into()));
    }
    if !f.interior(p, 2.0 * step) {
        return Err(RigidError::NearBoundary { at: (*p).into(), margin: 2.0 * step });
    }
    Ok(())
}

/// Central-difference Jacobian `jac[(a, b)] = d_a V^b`.
pub fn vector_gradient(v: impl Fn(&Vec4) -> Result<Vec4>, p: &Vec4, step: f64) -> Result<Mat4> {
    check_step(step)?;
    let mut jac = Mat4::zeros();
    for a in 0..4 {
        let e = axis(a, step);
        let d = (v(&(p + e))? - v(&(p - e))?) / (2.0 * step);
        jac.set_row(a, &d.transpose());
    }
    Ok(jac)
}

/// Central differences of a 2-tensor field, one matrix per direction.
pub fn tensor_gradient(t: impl Fn(&Vec4) -> Result<Mat4>, p: &Vec4, step: f64) -> Result<[Mat4; 4]> {
    check_step(step)?;
    let mut out = [Mat4::zeros(); 4];
    for (a, slot) in out.iter_mut().enumerate() {
        let e = axis(a, step);
        *slot = (t(&(p + e))? - t(&(p - e))?) / (2.0 * step);
    }
    Ok(out)
}

/// (L_X T)_ab = X^c d_c T_ab + T_cb d_a X^c + T_ac d_b X^c.
pub fn lie_covariant2(x: &Vec4, jac: &Mat4, t: &Mat4, dt: &[Mat4; 4]) -> Mat4 {
    let transport = (0..4).fold(Mat4::zeros(), |acc, c| acc + dt[c] * x[c]);
    transport + jac * t + t * jac.transpose()
}

/// (L_X w)_b = X^c d_c w_b + w_c d_b X^c, with `dw[(c, b)] = d_c w_b`.
pub fn lie_one_form(x: &Vec4, jac: &Mat4, w: &Vec4, dw: &Mat4) -> Vec4 {
    dw.transpose() * x + jac * w
}

#[derive(Debug, Clone, PartialEq)]
pub struct KinematicDecomposition {
    pub at: Vec4,
    pub fd_step: f64,
    pub c: f64,
    pub u: Vec4,
    /// d_a u_b.
    pub grad: Mat4,
    pub theta: Mat4,
    pub omega: Mat4,
    /// a = grad_u u, contravariant.
    pub accel: Vec4,
    pub accel_flat: Vec4,
}

impl KinematicDecomposition {
    pub fn theta_norm(&self) -> f64 {
        max_abs(&self.theta)
    }

    pub fn omega_norm(&self) -> f64 {
        max_abs(&self.omega)
    }

    /// sqrt|a^2|.
    pub fn accel_norm(&self) -> f64 {
        self.accel.dot(&self.accel_flat).abs().sqrt()
    }

    /// Trace of theta, g^ab theta_ab = div u for the horizontal part.
    pub fn expansion(&self) -> f64 {
        (gram() * self.theta).trace()
    }

    /// Largest contraction of theta or omega with u in either slot.
    pub fn horizontality_residual(&self) -> f64 {
        [self.theta * self.u, self.theta.transpose() * self.u, self.omega * self.u, self.omega.transpose() * self.u]
            .iter()
            .map(|v| v.amax())
            .fold(0.0, f64::max)
    }

    /// ||theta + omega + c^-2 u^flat (x) a^flat - grad u^flat||_inf.
    pub fn reconstruction_residual(&self) -> f64 {
        let rebuilt = self.theta + self.omega + lower(&self.u) * self.accel_flat.transpose() / (self.c * self.c);
        max_abs(&(rebuilt - self.grad))
    }
}

fn decompose(f: &VelocityField, p: &Vec4, step: f64) -> Result<KinematicDecomposition> {
    let c = f.c();
    let u = f.velocity(p)?;
    let jac = vector_gradient(|q| f.velocity(q), p, step)?;
    let g = gram();
    let grad = jac * g;
    let accel = jac.transpose() * u;
    let accel_flat = lower(&accel);
    let theta = project(&((grad + grad.transpose()) * 0.5), &u, c);
    let omega = project(&((grad - grad.transpose()) * 0.5), &u, c);
    Ok(KinematicDecomposition { at: *p, fd_step: step, c, u, grad, theta, omega, accel, accel_flat })
}

pub fn kinematic_decomposition(f: &VelocityField, p: &Vec4, step: f64) -> Result<KinematicDecomposition> {
    check_interior(f, p, step)?;
    decompose(f, p, step)
}

/// L_X h where h is built from the normalised u and X is either u or the raw generator.
pub fn lie_derivative_spatial_metric(f: &VelocityField, p: &Vec4, step: f64, along_generator: bool) -> Result<Mat4> {
    check_interior(f, p, step)?;
    let c = f.c();
    let h_at = |q: &Vec4| -> Result<Mat4> {
        let uf = lower(&f.velocity(q)?);
        Ok(uf * uf.transpose() / (c * c) - gram())
    };
    let (x, jac) = if along_generator {
        (f.generator(p)?, vector_gradient(|q| f.generator(q), p, step)?)
    } else {
        (f.velocity(p)?, vector_gradient(|q| f.velocity(q), p, step)?)
    };
    Ok(lie_covariant2(&x, &jac, &h_at(p)?, &tensor_gradient(h_at, p, step)?))
}

/// L_X g = grad X^flat symmetrised; X is u or the raw generator.
pub fn lie_derivative_metric(f: &VelocityField, p: &Vec4, step: f64, along_generator: bool) -> Result<Mat4> {
    check_interior(f, p, step)?;
    let jac = if along_generator {
        vector_gradient(|q| f.generator(q), p, step)?
    } else {
        vector_gradient(|q| f.velocity(q), p, step)?
    };
    let g = gram();
    Ok(jac * g + g * jac.transpose())
}

/// L_u omega with omega re-estimated at neighbouring events.
pub fn lie_derivative_vorticity(f: &VelocityField, p: &Vec4, step: f64) -> Result<Mat4> {
    let here = kinematic_decomposition(f, p, step)?;
    let jac = here.grad * gram();
    let d_omega = tensor_gradient(|q| Ok(decompose(f, q, step)?.omega), p, step)?;
    Ok(lie_covariant2(&here.u, &jac, &here.omega, &d_omega))
}

fn accel_flat_gradient(f: &VelocityField, p: &Vec4, step: f64) -> Result<Mat4> {
    let mut d = Mat4::zeros();
    for a in 0..4 {
        let e = axis(a, step);
        let diff = (decompose(f, &(p + e), step)?.accel_flat - decompose(f, &(p - e), step)?.accel_flat) / (2.0 * step);
        d.set_row(a, &diff.transpose());
    }
    Ok(d)
}

/// (d a^flat)_ab = d_a a_b - d_b a_a.
pub fn accel_curl(f: &VelocityField, p: &Vec4, step: f64) -> Result<Mat4> {
    check_interior(f, p, step)?;
    let d = accel_flat_gradient(f, p, step)?;
    Ok(d - d.transpose())
}

/// L_u a^flat.
pub fn lie_derivative_accel(f: &VelocityField, p: &Vec4, step: f64) -> Result<Vec4> {
    let here = kinematic_decomposition(f, p, step)?;
    let jac = here.grad * gram();
    Ok(lie_one_form(&here.u, &jac, &here.accel_flat, &accel_flat_gradient(f, p, step)?))
}

/// L_u u^flat, which should reproduce a^flat.
pub fn lie_derivative_velocity_form(f: &VelocityField, p: &Vec4, step: f64) -> Result<Vec4> {
    check_interior(f, p, step)?;
    let u = f.velocity(p)?;
    let jac = vector_gradient(|q| f.velocity(q), p, step)?;
    let du_flat = jac * gram();
    Ok(lie_one_form(&u, &jac, &lower(&u), &du_flat))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidityVerdict {
    pub rigid: bool,
    pub max_theta: f64,
}

/// Rigid iff max ||theta||_inf over the probes is below `tol`.
pub fn is_rigid(f: &VelocityField, probes: &[Vec4], step: f64, tol: f64) -> Result<RigidityVerdict> {
    let thetas: Vec<f64> =
        probes.par_iter().map(|p| Ok(kinematic_decomposition(f, p, step)?.theta_norm())).collect::<Result<_>>()?;
    let max_theta = thetas.into_iter().fold(0.0, f64::max);
    Ok(RigidityVerdict { rigid: max_theta < tol, max_theta })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KillingVerdict {
    pub is_killing: bool,
    pub rigid: bool,
    pub max_theta: f64,
    /// Largest |d a^flat| entry over the probes.
    pub closedness_residual: f64,
}

/// Killing iff rigid with closed acceleration form; closed implies exact on
/// the simply connected domains of the built-in provenances.
pub fn killing_test(f: &VelocityField, probes: &[Vec4], step: f64, tol: f64) -> Result<KillingVerdict> {
    if !f.provenance().simply_connected() {
        return Err(RigidError::BadParameter("killing_test needs a field with a simply connected domain".into()));
    }
    let rigidity = is_rigid(f, probes, step, tol)?;
    let curls: Vec<f64> =
        probes.par_iter().map(|p| Ok(max_abs(&accel_curl(f, p, step)?))).collect::<Result<_>>()?;
    let closedness_residual = curls.into_iter().fold(0.0, f64::max);
    Ok(KillingVerdict {
        is_killing: rigidity.rigid && closedness_residual < tol,
        rigid: rigidity.rigid,
        max_theta: rigidity.max_theta,
        closedness_residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReparameterizationReport {
    pub original: RigidityVerdict,
    pub rescaled: RigidityVerdict,
    /// max ||L_u h||_inf.
    pub lie_h_normalized: f64,
    /// max ||L_X h||_inf for the rescaled raw generator X.
    pub lie_h_rescaled: f64,
    /// max ||L_X h - (sqrt(X^2)/c) L_u h||_inf.
    pub identity_residual: f64,
}

impl ReparameterizationReport {
    pub fn verdict_unchanged(&self) -> bool {
        self.original.rigid == self.rescaled.rigid
    }
}

/// Compares rigidity of `f` with the field whose generator is multiplied by `scale`.
pub fn reparameterization_invariance_check(
    f: &VelocityField,
    scale: impl Fn(&Vec4) -> f64 + Send + Sync + 'static,
    probes: &[Vec4],
    step: f64,
    tol: f64,
) -> Result<ReparameterizationReport> {
    let g = f.rescaled(scale);
    let c = f.c();
    let rows: Vec<(f64, f64, f64)> = probes
        .par_iter()
        .map(|p| {
            let lu = lie_derivative_spatial_metric(f, p, step, false)?;
            let lx = lie_derivative_spatial_metric(&g, p, step, true)?;
            let x = g.generator(p)?;
            let factor = crate::metric::square(&x).sqrt() / c;
            Ok((max_abs(&lu), max_abs(&lx), max_abs(&(lx - lu * factor))))
        })
        .collect::<Result<_>>()?;
    let fold = |k: fn(&(f64, f64, f64)) -> f64| rows.iter().map(k).fold(0.0, f64::max);
    Ok(ReparameterizationReport {
        original: is_rigid(f, probes, step, tol)?,
        rescaled: is_rigid(&g, probes, step, tol)?,
        lie_h_normalized: fold(|r| r.0),
        lie_h_rescaled: fold(|r| r.1),
        identity_residual: fold(|r| r.2),
    })
}

/// Error ratio of the velocity Jacobian at `step` and `step / 2`. With an
/// exact Jacobian the errors are measured against it; without one the
/// Richardson differences D(h) - D(h/2) and D(h/2) - D(h/4) are compared.
/// Second-order differences give about 4.
pub fn convergence_ratio(f: &VelocityField, p: &Vec4, step: f64, exact: Option<&Mat4>) -> Result<f64> {
    check_interior(f, p, step)?;
    let jac = |h: f64| vector_gradient(|q| f.velocity(q), p, h);
    let (j1, j2) = (jac(step)?, jac(step / 2.0)?);
    let (e1, e2) = match exact {
        Some(x) => (max_abs(&(j1 - x)), max_abs(&(j2 - x))),
        None => (max_abs(&(j1 - j2)), max_abs(&(j2 - jac(step / 4.0)?))),
    };
    Ok(e1 / e2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{boost_killing_field, constant_field, radial_expansion_field, rotation_killing_field};

    #[test]
    fn constant_field_is_inert() {
        let f = constant_field(3.0).unwrap();
        let d = kinematic_decomposition(&f, &Vec4::new(0.1, 0.2, 0.3, 0.4), FD_STEP).unwrap();
        assert_eq!(d.theta_norm(), 0.0);
        assert_eq!(d.omega_norm(), 0.0);
        assert_eq!(d.accel_norm(), 0.0);
        assert_eq!(d.u, Vec4::new(3.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn boost_field_acceleration() {
        let f = boost_killing_field(1.0).unwrap();
        let d = kinematic_decomposition(&f, &Vec4::new(0.0, 2.0, 0.0, 0.0), FD_STEP).unwrap();
        assert!(d.theta_norm() < FD_TOL && d.omega_norm() < FD_TOL);
        assert!((d.accel_norm() - 0.5).abs() < 1e-6);
        assert!(d.reconstruction_residual() < FD_TOL);
    }

    #[test]
    fn expansion_of_hubble_field() {
        let f = radial_expansion_field(0.1, 1.0).unwrap();
        let d = kinematic_decomposition(&f, &Vec4::zeros(), FD_STEP).unwrap();
        assert!((d.expansion() - 0.3).abs() < 1e-6);
        assert!(!is_rigid(&f, &[Vec4::zeros()], FD_STEP, FD_TOL).unwrap().rigid);
    }

    #[test]
    fn rotation_is_rigid_with_vorticity() {
        let f = rotation_killing_field(1.0, 1.0).unwrap();
        let d = kinematic_decomposition(&f, &Vec4::new(0.0, 0.3, 0.0, 0.0), FD_STEP).unwrap();
        assert!(d.theta_norm() < FD_TOL);
        assert!(d.omega_norm() > 0.1);
        assert!(d.horizontality_residual() < FD_TOL);
    }

    #[test]
    fn step_and_boundary_errors() {
        let f = boost_killing_field(1.0).unwrap();
        let p = Vec4::new(0.0, 1.0, 0.0, 0.0);
        assert!(matches!(kinematic_decomposition(&f, &p, 0.0), Err(RigidError::BadStep(_))));
        let edge = Vec4::new(0.999, 1.0, 0.0, 0.0);
        assert!(matches!(kinematic_decomposition(&f, &edge, FD_STEP), Err(RigidError::NearBoundary { .. })));
        assert!(matches!(
            kinematic_decomposition(&f, &Vec4::new(0.0, -1.0, 0.0, 0.0), FD_STEP),
            Err(RigidError::OutsideDomain(_))
        ));
    }

    #[test]
    fn lie_helpers_on_linear_fields() {
        // X = (0, y, -x, 0) is a Killing rotation: L_X g = 0 exactly.
        let x = Vec4::new(0.0, 2.0, -1.0, 0.0);
        let jac = Mat4::new(0., 0., 0., 0., 0., 0., -1., 0., 0., 1., 0., 0., 0., 0., 0., 0.);
        let g = gram();
        assert_eq!(lie_covariant2(&x, &jac, &g, &[Mat4::zeros(); 4]), Mat4::zeros());
        let w = Vec4::new(0.0, 1.0, 0.0, 0.0);
        assert_eq!(lie_one_form(&x, &jac, &w, &Mat4::zeros()), Vec4::new(0.0, 0.0, 1.0, 0.0));
    }
}
