//! Hyperbolic motion of a rod along the boost Killing flow and the comoving
//! (Rindler) chart of the right wedge.

use crate::error::{Result, RigidError};
use crate::metric::{dot, Mat4, Vec4};

/// Comoving label x0 with Killing time lambda = c tau / x0 and eigentime tau.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RindlerChart {
    pub x0: f64,
    pub lambda: f64,
    pub tau: f64,
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(RigidError::BadParameter(format!("{name} = {v}")))
    }
}

/// Event (ct, x, 0, 0) reached after eigentime `tau` by the element starting at x0.
pub fn boost_killing_flow(x0: f64, tau: f64, c: f64) -> Result<Vec4> {
    check_positive("x0", x0)?;
    check_positive("c", c)?;
    let lambda = c * tau / x0;
    Ok(Vec4::new(x0 * lambda.sinh(), x0 * lambda.cosh(), 0.0, 0.0))
}

pub fn rindler_from_event(ct: f64, x: f64, c: f64) -> Result<RindlerChart> {
    check_positive("c", c)?;
    if !(x > ct.abs()) {
        return Err(RigidError::WedgeViolation { ct, x });
    }
    let x0 = ((x - ct) * (x + ct)).sqrt();
    let lambda = (ct / x).atanh();
    Ok(RindlerChart { x0, lambda, tau: x0 / c * lambda })
}

/// Eigentime the element at x0 needs to reach speed v from rest.
pub fn eigentime_to_speed(x0: f64, v: f64, c: f64) -> Result<f64> {
    check_positive("x0", x0)?;
    check_positive("c", c)?;
    if v.abs() >= c {
        return Err(RigidError::BadParameter(format!("|v| = {} is not below c", v.abs())));
    }
    Ok(x0 / c * (v / c).atanh())
}

/// Metric components in comoving coordinates obtained from finite-difference
/// tangents of the flow: `(tau_x0, lambda_x0)` are the Gram matrices of
/// (d_tau, d_x0) and (d_lambda, d_x0) in the upper-left 2x2 block.
pub fn comoving_metric_fd(x0: f64, tau: f64, c: f64, step: f64) -> Result<(Mat4, Mat4)> {
    if !(step > 0.0) {
        return Err(RigidError::BadStep(step));
    }
    let by_tau = |t: f64, r: f64| boost_killing_flow(r, t, c);
    let by_lambda = |l: f64, r: f64| boost_killing_flow(r, l * r / c, c);
    let gram2 = |a: Vec4, b: Vec4| {
        let mut m = Mat4::zeros();
        m[(0, 0)] = dot(&a, &a);
        m[(0, 1)] = dot(&a, &b);
        m[(1, 0)] = m[(0, 1)];
        m[(1, 1)] = dot(&b, &b);
        m
    };
    let d = 2.0 * step;
    let t_tau = (by_tau(tau + step, x0)? - by_tau(tau - step, x0)?) / d;
    let t_x0 = (by_tau(tau, x0 + step)? - by_tau(tau, x0 - step)?) / d;
    let lambda = c * tau / x0;
    let l_lambda = (by_lambda(lambda + step, x0)? - by_lambda(lambda - step, x0)?) / d;
    let l_x0 = (by_lambda(lambda, x0 + step)? - by_lambda(lambda, x0 - step)?) / d;
    Ok((gram2(t_tau, t_x0), gram2(l_lambda, l_x0)))
}

/// The comoving metrics in closed form, same layout as [`comoving_metric_fd`].
pub fn comoving_metric_exact(x0: f64, tau: f64, c: f64) -> (Mat4, Mat4) {
    let mut by_tau = Mat4::zeros();
    by_tau[(0, 0)] = c * c;
    by_tau[(0, 1)] = -c * c * tau / x0;
    by_tau[(1, 0)] = by_tau[(0, 1)];
    by_tau[(1, 1)] = c * c * tau * tau / (x0 * x0) - 1.0;
    let mut by_lambda = Mat4::zeros();
    by_lambda[(0, 0)] = x0 * x0;
    by_lambda[(1, 1)] = -1.0;
    (by_tau, by_lambda)
}
