//! Projective maps x -> (A x + a)/(p.x + q) and Fock-Lorentz boosts.

use nalgebra::{DMatrix, DVector, Vector3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::kinematics::lorentz_boost_event;
use crate::space::Event;

/// Default guard on denominator magnitudes near singular hyperplanes.
pub const EPS_SINGULAR: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectiveMap {
    a_mat: DMatrix<f64>,
    a_vec: DVector<f64>,
    p: DVector<f64>,
    q: f64,
    eps: f64,
}

impl ProjectiveMap {
    pub fn new(a_mat: DMatrix<f64>, a_vec: DVector<f64>, p: DVector<f64>, q: f64) -> Result<Self> {
        let n = a_mat.nrows();
        if a_mat.ncols() != n {
            return Err(GeometryError::NotSquare { rows: n, cols: a_mat.ncols() });
        }
        for len in [a_vec.len(), p.len()] {
            if len != n {
                return Err(GeometryError::DimensionMismatch { expected: n, got: len });
            }
        }
        Ok(Self { a_mat, a_vec, p, q, eps: EPS_SINGULAR })
    }

    /// The map x -> x / (1 - x^0).
    pub fn demo(n: usize) -> Self {
        let mut p = DVector::zeros(n);
        p[0] = -1.0;
        Self::new(DMatrix::identity(n, n), DVector::zeros(n), p, 1.0).expect("square by construction")
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn dim(&self) -> usize {
        self.a_mat.nrows()
    }

    /// Proper projective iff the covector p is nonzero.
    pub fn is_proper(&self) -> bool {
        self.p.iter().any(|&x| x != 0.0)
    }

    /// p.x + q, the denominator vanishing on the singular hyperplane.
    pub fn denominator(&self, x: &Event) -> f64 {
        self.p.dot(&x.to_dvector()) + self.q
    }

    fn checked_den(&self, x: &Event) -> Result<f64> {
        if x.dim() != self.dim() {
            return Err(GeometryError::DimensionMismatch { expected: self.dim(), got: x.dim() });
        }
        let den = self.denominator(x);
        if den.abs() <= self.eps {
            return Err(GeometryError::NearSingular(den));
        }
        Ok(den)
    }

    pub fn apply(&self, x: &Event) -> Result<Event> {
        let den = self.checked_den(x)?;
        let num = &self.a_mat * x.to_dvector() + &self.a_vec;
        Ok(Event::from_dvector(&(num / den)))
    }

    /// Derivative (A - f(x) p^T)/(p.x + q).
    pub fn jacobian(&self, x: &Event) -> Result<DMatrix<f64>> {
        let den = self.checked_den(x)?;
        let fx = self.apply(x)?.to_dvector();
        Ok((&self.a_mat - fx * self.p.transpose()) / den)
    }
}

pub fn proj_apply(m: &ProjectiveMap, x: &Event) -> Result<Event> {
    m.apply(x)
}

/// Ratio of the second to the first singular value of the centered point cloud.
///
/// Zero exactly for collinear points; fewer than three points give 0.
pub fn collinearity_residual(points: &[Event]) -> Result<f64> {
    let n = points.first().ok_or(GeometryError::Empty)?.dim();
    for i in 0..points.len() {
        if points[i].dim() != n {
            return Err(GeometryError::DimensionMismatch { expected: n, got: points[i].dim() });
        }
        for j in i + 1..points.len() {
            if points[i] == points[j] {
                return Err(GeometryError::Precondition(format!("duplicate points {i} and {j}")));
            }
        }
    }
    if points.len() < 3 {
        return Ok(0.0);
    }
    let m = points.len() as f64;
    let mut centroid = DVector::zeros(n);
    for p in points {
        centroid += p.to_dvector();
    }
    centroid /= m;
    let cols = DMatrix::from_fn(n, points.len(), |i, j| points[j][i] - centroid[i]);
    let mut sv: Vec<f64> = cols.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(if sv[0] == 0.0 { 0.0 } else { sv[1] / sv[0] })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageLine {
    pub sigma: f64,
    /// Unit direction of the image of s -> s e0 + sigma e1.
    pub direction: [f64; 2],
    /// Largest angle between directions sampled at different s.
    pub s_spread: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParallelismReport {
    pub lines: Vec<ImageLine>,
    /// (i, j, angle in radians) for every pair of lines.
    pub angles: Vec<(usize, usize, f64)>,
}

fn angle(a: [f64; 2], b: [f64; 2]) -> f64 {
    let cross = a[0] * b[1] - a[1] * b[0];
    let dot = a[0] * b[0] + a[1] * b[1];
    cross.abs().atan2(dot.abs())
}

/// Images of the parallel lines s e0 + sigma e1 under x -> x/(1 - x^0).
pub fn parallelism_breaking_demo(sigmas: &[f64]) -> Result<ParallelismReport> {
    let f = ProjectiveMap::demo(2);
    let mut lines = Vec::with_capacity(sigmas.len());
    for &sigma in sigmas {
        let mut dirs = Vec::new();
        for s in [-0.5, 0.0, 0.5] {
            let x = Event::new(vec![s, sigma]);
            let j = f.jacobian(&x)?;
            let d = &j * DVector::from_vec(vec![1.0, 0.0]);
            let norm = d.norm();
            dirs.push([d[0] / norm, d[1] / norm]);
        }
        let s_spread = dirs.iter().map(|d| angle(*d, dirs[1])).fold(0.0, f64::max);
        lines.push(ImageLine { sigma, direction: dirs[1], s_spread });
    }
    let mut angles = Vec::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            angles.push((i, j, angle(lines[i].direction, lines[j].direction)));
        }
    }
    Ok(ParallelismReport { lines, angles })
}

/// Deformation map (t, x) -> (t, x)/(1 - ct/R).
pub fn deformation_phi(r: f64, c: f64, t: f64, x: &Vector3<f64>) -> Result<(f64, Vector3<f64>)> {
    let den = 1.0 - c * t / r;
    if den.abs() <= EPS_SINGULAR {
        return Err(GeometryError::NearSingular(den));
    }
    Ok((t / den, x / den))
}

/// Inverse deformation (t, x) -> (t, x)/(1 + ct/R).
pub fn deformation_phi_inverse(r: f64, c: f64, t: f64, x: &Vector3<f64>) -> Result<(f64, Vector3<f64>)> {
    deformation_phi(-r, c, t, x)
}

/// Time ranges separated by t = 0 and t = +-R/c.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TimeSlab {
    /// 0 <= t < R/c
    Inner,
    /// R/c < t
    Beyond,
    /// t <= 0
    NonPositive,
}

pub fn slab_of(t: f64, r: f64, c: f64) -> Option<TimeSlab> {
    let edge = r / c;
    if t == edge {
        None
    } else if t > edge {
        Some(TimeSlab::Beyond)
    } else if t >= 0.0 {
        Some(TimeSlab::Inner)
    } else {
        Some(TimeSlab::NonPositive)
    }
}

/// Whether an image time lies in the range the deformation assigns to a slab:
/// Inner -> [0, inf), Beyond -> (-inf, -R/c), NonPositive -> (-R/c, 0].
pub fn slab_image_contains(slab: TimeSlab, t_image: f64, r: f64, c: f64) -> bool {
    let edge = r / c;
    match slab {
        TimeSlab::Inner => t_image >= 0.0,
        TimeSlab::Beyond => t_image < -edge,
        TimeSlab::NonPositive => t_image > -edge && t_image <= 0.0,
    }
}

/// Fock-Lorentz boost with velocity v, invariant speed c and length scale R.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FLBoost {
    velocity: Vector3<f64>,
    c: f64,
    r: f64,
}

impl FLBoost {
    pub fn new(velocity: Vector3<f64>, c: f64, r: f64) -> Result<Self> {
        if !(c > 0.0) || !(r > 0.0) {
            return Err(GeometryError::Precondition("c and R must be positive".into()));
        }
        if !(velocity.norm() < c) {
            return Err(GeometryError::VelocityDomain { v: velocity.norm() });
        }
        Ok(Self { velocity, c, r })
    }

    pub fn velocity(&self) -> Vector3<f64> {
        self.velocity
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn gamma(&self) -> f64 {
        1.0 / (1.0 - self.velocity.norm_squared() / (self.c * self.c)).sqrt()
    }

    pub fn denominator(&self, t: f64, x: &Vector3<f64>) -> f64 {
        let g = self.gamma();
        1.0 - (g - 1.0) * self.c * t / self.r + g * self.velocity.dot(x) / (self.r * self.c)
    }

    pub fn apply(&self, t: f64, x: &Vector3<f64>) -> Result<(f64, Vector3<f64>)> {
        let den = self.denominator(t, x);
        if den.abs() <= EPS_SINGULAR {
            return Err(GeometryError::NearSingular(den));
        }
        let g = self.gamma();
        let v = self.velocity;
        let c2 = self.c * self.c;
        let t2 = g * (t - v.dot(x) / c2) / den;
        let v2 = v.norm_squared();
        let (par, perp) = if v2 == 0.0 {
            (Vector3::zeros(), *x)
        } else {
            let par = v * (v.dot(x) / v2);
            (par, x - par)
        };
        let x2 = ((par - v * t) * g + perp) / den;
        Ok((t2, x2))
    }

    /// phi o L(v) o phi^-1 evaluated step by step.
    pub fn conjugated(&self, t: f64, x: &Vector3<f64>) -> Result<(f64, Vector3<f64>)> {
        let (t1, x1) = deformation_phi_inverse(self.r, self.c, t, x)?;
        let (t2, x2) = lorentz_boost_event(&self.velocity, self.c, t1, &x1)?;
        deformation_phi(self.r, self.c, t2, &x2)
    }
}

pub fn fl_boost_apply(b: &FLBoost, t: f64, x: &Vector3<f64>) -> Result<(f64, Vector3<f64>)> {
    b.apply(t, x)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConjugationReport {
    /// Largest difference between the two evaluations, relative to max(1, |image|).
    pub max_residual: f64,
    pub evaluated: usize,
    /// Samples within the singular guard of either path.
    pub skipped: usize,
}

pub fn conjugation_check(b: &FLBoost, samples: &[(f64, Vector3<f64>)]) -> ConjugationReport {
    let results: Vec<Option<f64>> = samples
        .par_iter()
        .map(|(t, x)| {
            let direct = b.apply(*t, x).ok()?;
            let conj = b.conjugated(*t, x).ok()?;
            let scale = direct.0.abs().max(direct.1.amax()).max(1.0);
            let diff = (direct.0 - conj.0).abs().max((direct.1 - conj.1).amax());
            Some(diff / scale)
        })
        .collect();
    let mut report = ConjugationReport { max_residual: 0.0, evaluated: 0, skipped: 0 };
    for r in results {
        match r {
            Some(d) => {
                report.evaluated += 1;
                report.max_residual = report.max_residual.max(d);
            }
            None => report.skipped += 1,
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_special_case() {
        let a = DMatrix::from_row_slice(2, 2, &[2., 1., 0., 3.]);
        let m = ProjectiveMap::new(a, DVector::from_vec(vec![1., -1.]), DVector::zeros(2), 1.0).unwrap();
        assert!(!m.is_proper());
        let y = m.apply(&Event::new(vec![1., 2.])).unwrap();
        assert_eq!(y, Event::new(vec![5., 5.]));
    }

    #[test]
    fn demo_map_values() {
        let f = ProjectiveMap::demo(2);
        assert!(f.is_proper());
        let y = f.apply(&Event::new(vec![0.5, 0.3])).unwrap();
        assert!(y.max_abs_diff(&Event::new(vec![1.0, 0.6])) < 1e-15);
        assert!(matches!(f.apply(&Event::new(vec![1.0, 4.0])), Err(GeometryError::NearSingular(_))));
    }

    #[test]
    fn jacobian_matches_finite_difference() {
        let f = ProjectiveMap::new(
            DMatrix::from_row_slice(3, 3, &[1., 0.2, 0., 0., 1., 0.3, 0.1, 0., 2.]),
            DVector::from_vec(vec![0.1, 0.2, 0.3]),
            DVector::from_vec(vec![0.2, -0.1, 0.05]),
            1.5,
        )
        .unwrap();
        let x = Event::new(vec![0.3, -0.7, 1.1]);
        let j = f.jacobian(&x).unwrap();
        let h = 1e-6;
        for k in 0..3 {
            let mut plus = x.as_slice().to_vec();
            let mut minus = plus.clone();
            plus[k] += h;
            minus[k] -= h;
            let d = (f.apply(&Event::new(plus)).unwrap().to_dvector() - f.apply(&Event::new(minus)).unwrap().to_dvector())
                / (2.0 * h);
            assert!((d - j.column(k)).amax() < 1e-8);
        }
    }

    #[test]
    fn collinearity_examples() {
        let line: Vec<Event> = (0..5).map(|i| Event::new(vec![1.0 + i as f64, 2.0 - 0.5 * i as f64, 0.3])).collect();
        assert!(collinearity_residual(&line).unwrap() < 1e-15);
        let tri = [Event::new(vec![0., 0.]), Event::new(vec![1., 0.]), Event::new(vec![0., 1.])];
        assert!(collinearity_residual(&tri).unwrap() > 0.1);
        assert_eq!(collinearity_residual(&tri[..2]).unwrap(), 0.0);
        assert!(collinearity_residual(&[tri[0].clone(), tri[0].clone(), tri[1].clone()]).is_err());
    }

    #[test]
    fn image_lines() {
        let r = parallelism_breaking_demo(&[0.0, 1.0]).unwrap();
        let d0 = r.lines[0].direction;
        let d1 = r.lines[1].direction;
        assert!((d0[0] - 1.0).abs() < 1e-15 && d0[1].abs() < 1e-15);
        let h = 0.5f64.sqrt();
        assert!((d1[0] - h).abs() < 1e-14 && (d1[1] - h).abs() < 1e-14);
        assert!(r.lines.iter().all(|l| l.s_spread < 1e-14));
        let single = parallelism_breaking_demo(&[2.0]).unwrap();
        assert!(single.angles.is_empty());
        let three = parallelism_breaking_demo(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(three.angles.len(), 3);
        assert!(three.angles.iter().all(|a| a.2 > 0.05));
    }

    #[test]
    fn deformation_examples() {
        let (r, c) = (10.0, 2.0);
        let x = Vector3::new(1.0, -2.0, 3.0);
        assert_eq!(deformation_phi(r, c, 0.0, &x).unwrap(), (0.0, x));
        let (t1, x1) = deformation_phi(r, c, r / (2.0 * c), &Vector3::zeros()).unwrap();
        assert!((t1 - r / c).abs() < 1e-14 && x1 == Vector3::zeros());
        assert!(deformation_phi(r, c, r / c, &x).is_err());
        assert!(deformation_phi_inverse(r, c, -r / c, &x).is_err());
        let (t2, x2) = deformation_phi(r, c, 1.3, &x).unwrap();
        let (t3, x3) = deformation_phi_inverse(r, c, t2, &x2).unwrap();
        assert!((t3 - 1.3).abs() < 1e-12 && (x3 - x).amax() < 1e-12);
    }

    #[test]
    fn slab_table_edges() {
        let (r, c) = (4.0, 2.0);
        assert_eq!(slab_of(0.0, r, c), Some(TimeSlab::Inner));
        assert_eq!(slab_of(-0.1, r, c), Some(TimeSlab::NonPositive));
        assert_eq!(slab_of(2.0, r, c), None);
        assert_eq!(slab_of(2.5, r, c), Some(TimeSlab::Beyond));
        for t in [0.0, 0.5, 1.9, 2.1, 7.0, -0.5, -30.0] {
            let slab = slab_of(t, r, c).unwrap();
            let (ti, _) = deformation_phi(r, c, t, &Vector3::zeros()).unwrap();
            assert!(slab_image_contains(slab, ti, r, c), "t={t}");
        }
    }

    #[test]
    fn fl_trivial_cases() {
        let b = FLBoost::new(Vector3::zeros(), 1.0, 5.0).unwrap();
        let x = Vector3::new(0.3, 0.1, -0.2);
        assert_eq!(b.apply(0.7, &x).unwrap(), (0.7, x));
        let b = FLBoost::new(Vector3::new(0.3, 0.4, 0.0), 1.0, 5.0).unwrap();
        assert_eq!(b.apply(0.0, &Vector3::zeros()).unwrap(), (0.0, Vector3::zeros()));
        assert!(FLBoost::new(Vector3::new(1.0, 0.0, 0.0), 1.0, 5.0).is_err());
    }

    #[test]
    fn conjugation_skips_singular_samples() {
        let b = FLBoost::new(Vector3::new(0.5, 0.0, 0.0), 1.0, 10.0).unwrap();
        let samples = vec![(1.0, Vector3::new(0.1, 0.0, 0.0)), (-10.0, Vector3::zeros())];
        let r = conjugation_check(&b, &samples);
        assert_eq!((r.evaluated, r.skipped), (1, 1));
        assert!(r.max_residual < 1e-12);
    }
}
