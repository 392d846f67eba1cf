//! Irrotational rigid motions generated by a single worldline: every event is
//! assigned the parameter sigma of the orthogonal hyperplane through it and
//! moves with the worldline's velocity there.

use std::sync::Arc;

use crate::error::{Result, RigidError};
use crate::field::{Provenance, VelocityField};
use crate::metric::{dot, lower, Mat4, Vec4};

/// Caustic guard: events with N below this are rejected.
pub const CAUSTIC_GUARD: f64 = 1e-3;
const MAX_ITER: usize = 200;

/// A timelike curve parametrised by eigentime, with derivatives up to third order.
pub trait WorldLineCurve: Send + Sync {
    fn c(&self) -> f64;
    fn position(&self, tau: f64) -> Vec4;
    fn velocity(&self, tau: f64) -> Vec4;
    fn acceleration(&self, tau: f64) -> Vec4;
    fn jerk(&self, tau: f64) -> Vec4;
    /// Parameter range searched for hyperplanes.
    fn window(&self) -> (f64, f64);
}

/// z(tau) = (c tau, 0, 0, 0).
#[derive(Debug, Clone, Copy)]
pub struct StraightWorldline {
    pub c: f64,
}

impl WorldLineCurve for StraightWorldline {
    fn c(&self) -> f64 {
        self.c
    }
    fn position(&self, tau: f64) -> Vec4 {
        Vec4::new(self.c * tau, 0.0, 0.0, 0.0)
    }
    fn velocity(&self, _: f64) -> Vec4 {
        Vec4::new(self.c, 0.0, 0.0, 0.0)
    }
    fn acceleration(&self, _: f64) -> Vec4 {
        Vec4::zeros()
    }
    fn jerk(&self, _: f64) -> Vec4 {
        Vec4::zeros()
    }
    fn window(&self) -> (f64, f64) {
        (-1e6, 1e6)
    }
}

/// z(tau) = (x0 sinh(c tau / x0), x0 cosh(c tau / x0), 0, 0): constant proper acceleration c^2 / x0.
#[derive(Debug, Clone, Copy)]
pub struct HyperbolicWorldline {
    pub x0: f64,
    pub c: f64,
}

impl HyperbolicWorldline {
    fn lam(&self, tau: f64) -> (f64, f64) {
        let l = self.c * tau / self.x0;
        (l.sinh(), l.cosh())
    }
}

impl WorldLineCurve for HyperbolicWorldline {
    fn c(&self) -> f64 {
        self.c
    }
    fn position(&self, tau: f64) -> Vec4 {
        let (s, ch) = self.lam(tau);
        Vec4::new(self.x0 * s, self.x0 * ch, 0.0, 0.0)
    }
    fn velocity(&self, tau: f64) -> Vec4 {
        let (s, ch) = self.lam(tau);
        Vec4::new(self.c * ch, self.c * s, 0.0, 0.0)
    }
    fn acceleration(&self, tau: f64) -> Vec4 {
        let (s, ch) = self.lam(tau);
        Vec4::new(s, ch, 0.0, 0.0) * (self.c * self.c / self.x0)
    }
    fn jerk(&self, tau: f64) -> Vec4 {
        let (s, ch) = self.lam(tau);
        Vec4::new(ch, s, 0.0, 0.0) * (self.c.powi(3) / (self.x0 * self.x0))
    }
    fn window(&self) -> (f64, f64) {
        let span = 20.0 * self.x0 / self.c;
        (-span, span)
    }
}

/// Rapidity eta = 2 ln(1 + a tau) along x, starting at the origin at rest.
/// The proper acceleration c eta' = 2 a c / (1 + a tau) decays, so the
/// projected jerk is nonzero everywhere.
#[derive(Debug, Clone, Copy)]
pub struct RampWorldline {
    pub a: f64,
    pub c: f64,
}

impl RampWorldline {
    fn s(&self, tau: f64) -> f64 {
        1.0 + self.a * tau
    }
    /// (sinh eta, cosh eta) with e^eta = s^2.
    fn hyp(&self, tau: f64) -> (f64, f64) {
        let e = self.s(tau).powi(2);
        ((e - 1.0 / e) / 2.0, (e + 1.0 / e) / 2.0)
    }
}

impl WorldLineCurve for RampWorldline {
    fn c(&self) -> f64 {
        self.c
    }
    fn position(&self, tau: f64) -> Vec4 {
        let (a, c, s) = (self.a, self.c, self.s(tau));
        let cube = s.powi(3) / (3.0 * a);
        let inv = 1.0 / (a * s);
        Vec4::new(c / 2.0 * (cube - inv) + c / (3.0 * a), c / 2.0 * (cube + inv) - 2.0 * c / (3.0 * a), 0.0, 0.0)
    }
    fn velocity(&self, tau: f64) -> Vec4 {
        let (sh, ch) = self.hyp(tau);
        Vec4::new(ch, sh, 0.0, 0.0) * self.c
    }
    fn acceleration(&self, tau: f64) -> Vec4 {
        let (sh, ch) = self.hyp(tau);
        let eta_dot = 2.0 * self.a / self.s(tau);
        Vec4::new(sh, ch, 0.0, 0.0) * (self.c * eta_dot)
    }
    fn jerk(&self, tau: f64) -> Vec4 {
        let (sh, ch) = self.hyp(tau);
        let s = self.s(tau);
        let eta_dot = 2.0 * self.a / s;
        let eta_ddot = -2.0 * self.a * self.a / (s * s);
        (Vec4::new(sh, ch, 0.0, 0.0) * eta_ddot + Vec4::new(ch, sh, 0.0, 0.0) * eta_dot * eta_dot) * self.c
    }
    fn window(&self) -> (f64, f64) {
        (-0.5 / self.a, 5.0 / self.a)
    }
}

/// Largest |z'^2 - c^2| / c^2 and |z' . z''| / c^2 over the sampled parameters.
pub fn worldline_residuals(z: &dyn WorldLineCurve, taus: &[f64]) -> (f64, f64) {
    let c2 = z.c() * z.c();
    taus.iter().fold((0.0, 0.0), |(n, o), &t| {
        let v = z.velocity(t);
        let a = z.acceleration(t);
        (f64::max(n, (dot(&v, &v) - c2).abs() / c2), f64::max(o, dot(&v, &a).abs() / c2))
    })
}

/// N = 1 - z''(tau) . (x - z(tau)) / c^2.
pub fn n_factor(z: &dyn WorldLineCurve, tau: f64, x: &Vec4) -> f64 {
    1.0 - dot(&z.acceleration(tau), &(x - z.position(tau))) / (z.c() * z.c())
}

/// The parameter of the hyperplane through x: root of z'(tau) . (x - z(tau))
/// by Newton's method safeguarded with bisection on the curve's window.
pub fn sigma(z: &dyn WorldLineCurve, x: &Vec4) -> Result<f64> {
    let f = |t: f64| dot(&z.velocity(t), &(x - z.position(t)));
    let fail = || RigidError::RootNotFound((*x).into());
    let (mut lo, mut hi) = z.window();
    let (flo, fhi) = (f(lo), f(hi));
    if !(flo.is_finite() && fhi.is_finite()) || flo.signum() == fhi.signum() {
        return Err(fail());
    }
    // Orient so that f(lo) > 0.
    let rising = flo < 0.0;
    let mut t = 0.5 * (lo + hi);
    for _ in 0..MAX_ITER {
        let ft = f(t);
        if ft == 0.0 {
            return Ok(t);
        }
        if (ft > 0.0) != rising {
            lo = t;
        } else {
            hi = t;
        }
        let slope = dot(&z.acceleration(t), &(x - z.position(t))) - z.c() * z.c();
        let newton = t - ft / slope;
        let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - t).abs() <= 4.0 * f64::EPSILON * t.abs().max(1.0) {
            return Ok(next);
        }
        t = next;
    }
    Err(fail())
}

/// sigma together with N, rejecting events near the caustic.
pub fn sigma_checked(z: &dyn WorldLineCurve, x: &Vec4) -> Result<(f64, f64)> {
    let t = sigma(z, x)?;
    let n = n_factor(z, t, x);
    if n <= CAUSTIC_GUARD {
        return Err(RigidError::Caustic(n));
    }
    Ok((t, n))
}

/// u = z' o sigma on the events where the hyperplanes are unique.
pub fn herglotz_field(z: Arc<dyn WorldLineCurve>) -> Result<VelocityField> {
    let (gen, dom) = (z.clone(), z.clone());
    VelocityField::new(
        z.c(),
        Provenance::WorldlineInduced,
        move |x| {
            let (t, _) = sigma_checked(gen.as_ref(), x)?;
            Ok(gen.velocity(t))
        },
        move |x| sigma_checked(dom.as_ref(), x).is_ok(),
    )
}

fn projected_jerk(z: &dyn WorldLineCurve, t: f64) -> Vec4 {
    let v = z.velocity(t);
    let j = z.jerk(t);
    j - v * (dot(&v, &j) / (z.c() * z.c()))
}

/// a^flat = z''^flat / N.
pub fn herglotz_accel_flat(z: &dyn WorldLineCurve, x: &Vec4) -> Result<Vec4> {
    let (t, n) = sigma_checked(z, x)?;
    Ok(lower(&z.acceleration(t)) / n)
}

/// The bracket B with d a^flat = z'^flat ^ B:
/// B = { (P z''')^flat + z''^flat (P z''') . (x - z) / (N c^2) } / (N^2 c^2).
fn curl_bracket(z: &dyn WorldLineCurve, x: &Vec4) -> Result<(f64, Vec4)> {
    let (t, n) = sigma_checked(z, x)?;
    let c2 = z.c() * z.c();
    let pj = projected_jerk(z, t);
    let offset = x - z.position(t);
    let b = (lower(&pj) + lower(&z.acceleration(t)) * (dot(&pj, &offset) / (n * c2))) / (n * n * c2);
    Ok((t, b))
}

/// Closed-form d a^flat, antisymmetric with `(a, b)` entry d_a a_b - d_b a_a.
pub fn herglotz_accel_curl(z: &dyn WorldLineCurve, x: &Vec4) -> Result<Mat4> {
    let (t, b) = curl_bracket(z, x)?;
    let v = lower(&z.velocity(t));
    Ok(v * b.transpose() - b * v.transpose())
}

/// Closed-form L_u a^flat = i_u d a^flat = c^2 B.
pub fn herglotz_lie_accel(z: &dyn WorldLineCurve, x: &Vec4) -> Result<Vec4> {
    let (_, b) = curl_bracket(z, x)?;
    Ok(b * (z.c() * z.c()))
}

/// (P z''')^flat / N^2, the projected-jerk term alone. It agrees with
/// [`herglotz_lie_accel`] on the worldline, where N = 1 and x - z = 0.
pub fn projected_jerk_term(z: &dyn WorldLineCurve, x: &Vec4) -> Result<Vec4> {
    let (t, n) = sigma_checked(z, x)?;
    Ok(lower(&projected_jerk(z, t)) / (n * n))
}

/// Samples events z(tau) + s e on the hyperplane at tau and returns the
/// largest |sigma - tau| and |u - z'(tau)|; both vanish when the orthogonal
/// hypersurfaces are flat.
pub fn hyperplane_flatness(z: &dyn WorldLineCurve, tau: f64, offsets: &[Vec4]) -> Result<(f64, f64)> {
    let v = z.velocity(tau);
    let c2 = z.c() * z.c();
    let mut worst = (0.0f64, 0.0f64);
    for e in offsets {
        let e_perp = e - v * (dot(&v, e) / c2);
        let x = z.position(tau) + e_perp;
        let (t, _) = sigma_checked(z, &x)?;
        worst.0 = worst.0.max((t - tau).abs());
        worst.1 = worst.1.max((z.velocity(t) - v).amax());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curves_are_normalized() {
        let taus: Vec<f64> = (-4..=20).map(|i| i as f64 * 0.1).collect();
        for z in [
            &HyperbolicWorldline { x0: 0.7, c: 2.0 } as &dyn WorldLineCurve,
            &RampWorldline { a: 0.8, c: 1.5 },
            &StraightWorldline { c: 3.0 },
        ] {
            let (n, o) = worldline_residuals(z, &taus);
            assert!(n < 1e-10 && o < 1e-10, "{n} {o}");
        }
    }

    #[test]
    fn ramp_derivatives_match_differences() {
        let z = RampWorldline { a: 0.6, c: 1.3 };
        let h = 1e-5;
        for t in [-0.3, 0.0, 0.9, 2.0] {
            let d1 = (z.position(t + h) - z.position(t - h)) / (2.0 * h);
            let d2 = (z.velocity(t + h) - z.velocity(t - h)) / (2.0 * h);
            let d3 = (z.acceleration(t + h) - z.acceleration(t - h)) / (2.0 * h);
            assert!((d1 - z.velocity(t)).amax() < 1e-8);
            assert!((d2 - z.acceleration(t)).amax() < 1e-8);
            assert!((d3 - z.jerk(t)).amax() < 1e-8);
        }
        assert_eq!(z.position(0.0), Vec4::zeros());
    }

    #[test]
    fn straight_line_sigma_is_time() {
        let z = StraightWorldline { c: 2.0 };
        let x = Vec4::new(3.0, 1.0, -4.0, 0.5);
        assert!((sigma(&z, &x).unwrap() - 1.5).abs() < 1e-12);
        let u = herglotz_field(Arc::new(z)).unwrap().velocity(&x).unwrap();
        assert_eq!(u, Vec4::new(2.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn hyperbolic_sigma_matches_rindler_time() {
        let z = HyperbolicWorldline { x0: 1.0, c: 1.0 };
        let x = Vec4::new(0.4, 1.3, 0.2, -0.1);
        let expected = (0.4f64 / 1.3).atanh();
        assert!((sigma(&z, &x).unwrap() - expected).abs() < 1e-13);
        // Near the origin all hyperplanes meet.
        assert!(matches!(sigma_checked(&z, &Vec4::new(0.0, 1e-4, 0.0, 0.0)), Err(RigidError::Caustic(_))));
        // Across the caustic the hyperplane exists but N < 0.
        assert!(matches!(sigma_checked(&z, &Vec4::new(0.0, -1.0, 0.0, 0.0)), Err(RigidError::Caustic(n)) if n < 0.0));
    }

    #[test]
    fn constant_acceleration_has_closed_acceleration_form() {
        let z = HyperbolicWorldline { x0: 1.0, c: 1.0 };
        let x = Vec4::new(0.2, 1.5, 0.0, 0.3);
        assert!(herglotz_accel_curl(&z, &x).unwrap().amax() < 1e-14);
        assert!(herglotz_lie_accel(&z, &x).unwrap().amax() < 1e-14);
    }
}
