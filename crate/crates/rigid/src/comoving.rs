//! Comoving charts, the rotating-disk checks and the curvature of the space
//! of flow lines.

use nalgebra::Matrix3;
use rayon::prelude::*;

use crate::error::{Result, RigidError};
use crate::field::{rotation_killing_field, VelocityField};
use crate::kinematics::{kinematic_decomposition, lie_derivative_vorticity};
use crate::metric::{dot, max_abs, Vec4};
use crate::rindler::rindler_from_event;

pub type Mat3 = Matrix3<f64>;

/// Coordinates (time, q) in which the flow lines are q = const.
pub trait ComovingChart: Send + Sync {
    fn event(&self, time: f64, q: &[f64; 3]) -> Vec4;
    fn coords(&self, p: &Vec4) -> Result<(f64, [f64; 3])>;
}

/// (t; z, rho, psi) with psi = phi - kappa t.
#[derive(Debug, Clone, Copy)]
pub struct RotatingChart {
    pub kappa: f64,
    pub c: f64,
}

impl ComovingChart for RotatingChart {
    fn event(&self, t: f64, q: &[f64; 3]) -> Vec4 {
        let phi = q[2] + self.kappa * t;
        Vec4::new(self.c * t, q[1] * phi.cos(), q[1] * phi.sin(), q[0])
    }

    fn coords(&self, p: &Vec4) -> Result<(f64, [f64; 3])> {
        let rho = p[1].hypot(p[2]);
        if rho < 1e-6 {
            return Err(RigidError::BadParameter("the rotating chart is singular on the axis".into()));
        }
        let t = p[0] / self.c;
        Ok((t, [p[3], rho, p[2].atan2(p[1]) - self.kappa * t]))
    }
}

/// (lambda; x0, y, z) on the right wedge.
#[derive(Debug, Clone, Copy)]
pub struct WedgeChart {
    pub c: f64,
}

impl ComovingChart for WedgeChart {
    fn event(&self, lambda: f64, q: &[f64; 3]) -> Vec4 {
        Vec4::new(q[0] * lambda.sinh(), q[0] * lambda.cosh(), q[1], q[2])
    }

    fn coords(&self, p: &Vec4) -> Result<(f64, [f64; 3])> {
        let r = rindler_from_event(p[0], p[1], self.c)?;
        Ok((r.lambda, [r.x0, p[2], p[3]]))
    }
}

fn shifted(q: &[f64; 3], i: usize, d: f64) -> [f64; 3] {
    let mut out = *q;
    out[i] += d;
    out
}

fn tangents(chart: &dyn ComovingChart, time: f64, q: &[f64; 3], step: f64) -> [Vec4; 3] {
    std::array::from_fn(|i| {
        (chart.event(time, &shifted(q, i, step)) - chart.event(time, &shifted(q, i, -step))) / (2.0 * step)
    })
}

/// Pull-back of h = c^-2 u^flat (x) u^flat - g to the slice `time` of the chart.
pub fn comoving_spatial_metric(
    f: &VelocityField,
    chart: &dyn ComovingChart,
    time: f64,
    q: &[f64; 3],
    step: f64,
) -> Result<Mat3> {
    let u = f.velocity(&chart.event(time, q))?;
    let t = tangents(chart, time, q, step);
    let c2 = f.c() * f.c();
    Ok(Mat3::from_fn(|i, j| dot(&u, &t[i]) * dot(&u, &t[j]) / c2 - dot(&t[i], &t[j])))
}

type Christoffel = [Mat3; 3];

fn christoffel(
    f: &VelocityField,
    chart: &dyn ComovingChart,
    time: f64,
    q: &[f64; 3],
    step: f64,
) -> Result<Christoffel> {
    let h = comoving_spatial_metric(f, chart, time, q, step)?;
    let inv = h.try_inverse().ok_or_else(|| RigidError::BadParameter("degenerate comoving metric".into()))?;
    let mut dh = [Mat3::zeros(); 3];
    for (k, slot) in dh.iter_mut().enumerate() {
        *slot = (comoving_spatial_metric(f, chart, time, &shifted(q, k, step), step)?
            - comoving_spatial_metric(f, chart, time, &shifted(q, k, -step), step)?)
            / (2.0 * step);
    }
    // gamma[k][(i, j)] = Gamma^k_ij.
    let mut gamma = [Mat3::zeros(); 3];
    for (k, g) in gamma.iter_mut().enumerate() {
        *g = Mat3::from_fn(|i, j| {
            0.5 * (0..3).map(|l| inv[(k, l)] * (dh[i][(l, j)] + dh[j][(l, i)] - dh[l][(i, j)])).sum::<f64>()
        });
    }
    Ok(gamma)
}

/// Riemann tensor of the comoving metric, all indices down, by nested central
/// differences; entry [a][b][c][d] under R^a_bcd = d_c G^a_db - d_d G^a_cb + ...
pub fn comoving_curvature(
    f: &VelocityField,
    chart: &dyn ComovingChart,
    time: f64,
    q: &[f64; 3],
    step: f64,
) -> Result<[[[[f64; 3]; 3]; 3]; 3]> {
    let h = comoving_spatial_metric(f, chart, time, q, step)?;
    let gamma = christoffel(f, chart, time, q, step)?;
    let mut dgamma = [[Mat3::zeros(); 3]; 3];
    for (m, slot) in dgamma.iter_mut().enumerate() {
        let plus = christoffel(f, chart, time, &shifted(q, m, step), step)?;
        let minus = christoffel(f, chart, time, &shifted(q, m, -step), step)?;
        for k in 0..3 {
            slot[k] = (plus[k] - minus[k]) / (2.0 * step);
        }
    }
    let mut up = [[[[0.0; 3]; 3]; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                for d in 0..3 {
                    let mut r = dgamma[c][a][(d, b)] - dgamma[d][a][(c, b)];
                    for e in 0..3 {
                        r += gamma[a][(c, e)] * gamma[e][(d, b)] - gamma[a][(d, e)] * gamma[e][(c, b)];
                    }
                    up[a][b][c][d] = r;
                }
            }
        }
    }
    let mut down = [[[[0.0; 3]; 3]; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                for d in 0..3 {
                    down[a][b][c][d] = (0..3).map(|e| h[(a, e)] * up[e][b][c][d]).sum();
                }
            }
        }
    }
    Ok(down)
}

/// Vorticity pulled back to the comoving coordinates at the event.
pub fn comoving_vorticity(
    f: &VelocityField,
    chart: &dyn ComovingChart,
    time: f64,
    q: &[f64; 3],
    step: f64,
) -> Result<Mat3> {
    let omega = kinematic_decomposition(f, &chart.event(time, q), step)?.omega;
    let t = tangents(chart, time, q, step);
    Ok(Mat3::from_fn(|i, j| (t[i].transpose() * omega * t[j])[(0, 0)]))
}

/// Total antisymmetrisation of omega (x) omega over its four slots.
pub fn antisymmetrized_square(w: &Mat3) -> f64 {
    let perms = permutations4();
    let mut worst = 0.0f64;
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                for d in 0..3 {
                    let idx = [a, b, c, d];
                    let s: f64 = perms
                        .iter()
                        .map(|(p, sign)| sign * w[(idx[p[0]], idx[p[1]])] * w[(idx[p[2]], idx[p[3]])])
                        .sum();
                    worst = worst.max((s / 24.0).abs());
                }
            }
        }
    }
    worst
}

fn permutations4() -> Vec<([usize; 4], f64)> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|i| (0..i).all(|j| p[i] != p[j])) {
                        let inversions = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
                        out.push((p, if inversions % 2 == 0 { 1.0 } else { -1.0 }));
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureProbe {
    pub at: Vec4,
    /// max |R_abcd + 3 c^-2 omega_ab omega_cd|.
    pub residual: f64,
    pub curvature_norm: f64,
    pub omega_norm: f64,
    /// Totally antisymmetric part of omega (x) omega; zero below five dimensions.
    pub antisymmetric_part: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureReport {
    pub probes: Vec<CurvatureProbe>,
    pub max_residual: f64,
}

/// Checks that the curvature of the space of flow lines equals
/// -3 c^-2 omega (x) omega in flat spacetime of dimension four.
///
/// Curvature and vorticity are Richardson-combined from `step` and `step / 2`
/// so the nested differences stay accurate close to the axis, where the
/// error of a single step grows like (step / rho)^2.
pub fn projected_curvature_check(
    f: &VelocityField,
    chart: &dyn ComovingChart,
    probes: &[Vec4],
    step: f64,
) -> Result<CurvatureReport> {
    let c2 = f.c() * f.c();
    let rows: Vec<CurvatureProbe> = probes
        .par_iter()
        .map(|p| {
            if !f.contains(p) {
                return Err(RigidError::OutsideDomain((*p).into()));
            }
            let (time, q) = chart.coords(p)?;
            let coarse = comoving_curvature(f, chart, time, &q, step)?;
            let fine = comoving_curvature(f, chart, time, &q, step / 2.0)?;
            let w = (comoving_vorticity(f, chart, time, &q, step / 2.0)? * 4.0
                - comoving_vorticity(f, chart, time, &q, step)?)
                / 3.0;
            let (mut residual, mut curvature_norm) = (0.0f64, 0.0f64);
            for a in 0..3 {
                for b in 0..3 {
                    for c in 0..3 {
                        for d in 0..3 {
                            let rabcd = (4.0 * fine[a][b][c][d] - coarse[a][b][c][d]) / 3.0;
                            curvature_norm = curvature_norm.max(rabcd.abs());
                            residual = residual.max((rabcd + 3.0 * w[(a, b)] * w[(c, d)] / c2).abs());
                        }
                    }
                }
            }
            Ok(CurvatureProbe {
                at: *p,
                residual,
                curvature_norm,
                omega_norm: w.amax(),
                antisymmetric_part: antisymmetrized_square(&w),
            })
        })
        .collect::<Result<_>>()?;
    let max_residual = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
    Ok(CurvatureReport { probes: rows, max_residual })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RotationProbe {
    pub at: Vec4,
    pub rho: f64,
    pub theta_norm: f64,
    pub omega_norm: f64,
    pub lie_omega_norm: f64,
    pub h_psi_psi: f64,
    /// rho^2 / (1 - (kappa rho / c)^2).
    pub h_psi_psi_exact: f64,
    /// Largest deviation of u^flat(d_t), u^flat(d_psi) and the remaining h components from closed form.
    pub split_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RotationReport {
    pub probes: Vec<RotationProbe>,
    pub max_theta: f64,
    pub min_omega: f64,
    pub max_lie_omega: f64,
    pub max_split_residual: f64,
}

/// Rigid rotation about the z axis: theta, omega and L_u omega by finite
/// differences, and the comoving split of u^flat and h against closed form.
pub fn rotation_killing_checks(kappa: f64, c: f64, probes: &[Vec4], step: f64) -> Result<RotationReport> {
    let f = rotation_killing_field(kappa, c)?;
    let chart = RotatingChart { kappa, c };
    let rows: Vec<RotationProbe> = probes
        .par_iter()
        .map(|p| {
            if !f.contains(p) {
                return Err(RigidError::OutsideDomain((*p).into()));
            }
            let d = kinematic_decomposition(&f, p, step)?;
            let lie = lie_derivative_vorticity(&f, p, step)?;
            let (t, q) = chart.coords(p)?;
            let rho = q[1];
            let beta2 = (kappa * rho / c).powi(2);
            let h = comoving_spatial_metric(&f, &chart, t, &q, step)?;
            let mut h_exact = Mat3::identity();
            h_exact[(2, 2)] = rho * rho / (1.0 - beta2);
            let u = d.u;
            let dt = (chart.event(t + step, &q) - chart.event(t - step, &q)) / (2.0 * step);
            let dpsi = tangents(&chart, t, &q, step)[2];
            let ut_exact = c * c * (1.0 - beta2).sqrt();
            let upsi_exact = -c * (kappa * rho / c) * rho / (1.0 - beta2).sqrt();
            let split_residual = (h - h_exact)
                .amax()
                .max((dot(&u, &dt) - ut_exact).abs())
                .max((dot(&u, &dpsi) - upsi_exact).abs());
            Ok(RotationProbe {
                at: *p,
                rho,
                theta_norm: d.theta_norm(),
                omega_norm: d.omega_norm(),
                lie_omega_norm: max_abs(&lie),
                h_psi_psi: h[(2, 2)],
                h_psi_psi_exact: h_exact[(2, 2)],
                split_residual,
            })
        })
        .collect::<Result<_>>()?;
    let fold = |k: fn(&RotationProbe) -> f64, init: f64, op: fn(f64, f64) -> f64| rows.iter().map(k).fold(init, op);
    Ok(RotationReport {
        max_theta: fold(|r| r.theta_norm, 0.0, f64::max),
        min_omega: fold(|r| r.omega_norm, f64::INFINITY, f64::min),
        max_lie_omega: fold(|r| r.lie_omega_norm, 0.0, f64::max),
        max_split_residual: fold(|r| r.split_residual, 0.0, f64::max),
        probes: rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::boost_killing_field;
    use crate::kinematics::{CURVATURE_TOL, FD_STEP, FD_TOL};

    #[test]
    fn chart_round_trips() {
        let rot = RotatingChart { kappa: 1.3, c: 2.0 };
        let p = rot.event(0.4, &[0.2, 0.5, 1.0]);
        let (t, q) = rot.coords(&p).unwrap();
        assert!((t - 0.4).abs() < 1e-15 && (q[1] - 0.5).abs() < 1e-15 && (q[2] - 1.0).abs() < 1e-12);
        let wedge = WedgeChart { c: 1.0 };
        let p = wedge.event(0.3, &[1.5, -0.2, 0.1]);
        let (l, q) = wedge.coords(&p).unwrap();
        assert!((l - 0.3).abs() < 1e-12 && (q[0] - 1.5).abs() < 1e-12);
    }

    #[test]
    fn disk_metric_factor() {
        let r = rotation_killing_checks(1.0, 1.0, &[Vec4::new(0.0, 0.5, 0.0, 0.0)], FD_STEP).unwrap();
        assert!((r.probes[0].h_psi_psi_exact - 0.25 / 0.75).abs() < 1e-15);
        assert!((r.probes[0].h_psi_psi - r.probes[0].h_psi_psi_exact).abs() < 1e-6);
        assert!(r.max_theta < FD_TOL && r.min_omega > 0.1 && r.max_lie_omega < FD_TOL);
        assert!(rotation_killing_checks(1.0, 1.0, &[Vec4::new(0.0, 1.2, 0.0, 0.0)], FD_STEP).is_err());
    }

    #[test]
    fn boost_flow_lines_form_flat_space() {
        let f = boost_killing_field(1.0).unwrap();
        let probes = [Vec4::new(0.2, 1.1, 0.3, -0.4)];
        let r = projected_curvature_check(&f, &WedgeChart { c: 1.0 }, &probes, FD_STEP).unwrap();
        assert!(r.probes[0].curvature_norm < CURVATURE_TOL);
        assert!(r.probes[0].omega_norm < FD_TOL);
    }

    #[test]
    fn antisymmetrization_vanishes_in_three_dimensions() {
        let w = Mat3::new(0.0, 1.0, -2.0, -1.0, 0.0, 0.5, 2.0, -0.5, 0.0);
        assert!(antisymmetrized_square(&w) < 1e-15);
        assert_eq!(permutations4().len(), 24);
    }
}
