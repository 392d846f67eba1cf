//! Vectors, events and the Minkowski form diag(1, -1, ..., -1).
//!
//! Coordinates use x^0 = ct, so the form itself carries no factor of c.

use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub, SubAssign};

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};

/// Default relative tolerance for causal classification.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Element of the vector space underlying Minkowski space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinkVector(Vec<f64>);

/// Point of the affine space. Only differences of events are vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event(Vec<f64>);

macro_rules! tuple_common {
    ($t:ident) => {
        impl $t {
            pub fn new(components: Vec<f64>) -> Self {
                Self(components)
            }

            pub fn zeros(n: usize) -> Self {
                Self(vec![0.0; n])
            }

            pub fn dim(&self) -> usize {
                self.0.len()
            }

            pub fn as_slice(&self) -> &[f64] {
                &self.0
            }

            pub fn to_dvector(&self) -> DVector<f64> {
                DVector::from_column_slice(&self.0)
            }

            pub fn from_dvector(v: &DVector<f64>) -> Self {
                Self(v.iter().copied().collect())
            }

            /// Largest absolute coordinate difference.
            pub fn max_abs_diff(&self, other: &Self) -> f64 {
                self.0
                    .iter()
                    .zip(&other.0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            }
        }

        impl Index<usize> for $t {
            type Output = f64;
            fn index(&self, i: usize) -> &f64 {
                &self.0[i]
            }
        }

        impl From<Vec<f64>> for $t {
            fn from(v: Vec<f64>) -> Self {
                Self(v)
            }
        }
    };
}

tuple_common!(MinkVector);
tuple_common!(Event);

impl MinkVector {
    /// Standard basis vector e_a.
    pub fn basis(n: usize, a: usize) -> Self {
        let mut v = vec![0.0; n];
        v[a] = 1.0;
        Self(v)
    }

    pub fn euclid_norm_sq(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum()
    }

    pub fn euclid_dot(&self, other: &Self) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0.0)
    }

    /// Minkowski square g(v, v).
    pub fn square(&self) -> f64 {
        form(&self.0, &self.0)
    }

    /// Minkowski product without a dimension check; panics on mismatch.
    pub fn dot(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        form(&self.0, &other.0)
    }

    /// Index-lowered components g_ab v^b.
    pub fn lowered(&self) -> Vec<f64> {
        self.0
            .iter()
            .enumerate()
            .map(|(a, x)| if a == 0 { *x } else { -x })
            .collect()
    }
}

impl Event {
    pub fn origin(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    /// Position vector relative to the coordinate origin.
    pub fn to_vector(&self) -> MinkVector {
        MinkVector(self.0.clone())
    }
}

fn form(a: &[f64], b: &[f64]) -> f64 {
    let mut s = a[0] * b[0];
    for i in 1..a.len() {
        s -= a[i] * b[i];
    }
    s
}

fn zip_with(a: &[f64], b: &[f64], f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    assert_eq!(a.len(), b.len(), "dimension mismatch");
    a.iter().zip(b).map(|(x, y)| f(*x, *y)).collect()
}

impl Add for &MinkVector {
    type Output = MinkVector;
    fn add(self, rhs: &MinkVector) -> MinkVector {
        MinkVector(zip_with(&self.0, &rhs.0, |x, y| x + y))
    }
}

impl Add for MinkVector {
    type Output = MinkVector;
    fn add(self, rhs: MinkVector) -> MinkVector {
        &self + &rhs
    }
}

impl Sub for &MinkVector {
    type Output = MinkVector;
    fn sub(self, rhs: &MinkVector) -> MinkVector {
        MinkVector(zip_with(&self.0, &rhs.0, |x, y| x - y))
    }
}

impl Sub for MinkVector {
    type Output = MinkVector;
    fn sub(self, rhs: MinkVector) -> MinkVector {
        &self - &rhs
    }
}

impl AddAssign<&MinkVector> for MinkVector {
    fn add_assign(&mut self, rhs: &MinkVector) {
        for (x, y) in self.0.iter_mut().zip(&rhs.0) {
            *x += y;
        }
    }
}

impl SubAssign<&MinkVector> for MinkVector {
    fn sub_assign(&mut self, rhs: &MinkVector) {
        for (x, y) in self.0.iter_mut().zip(&rhs.0) {
            *x -= y;
        }
    }
}

impl Neg for &MinkVector {
    type Output = MinkVector;
    fn neg(self) -> MinkVector {
        MinkVector(self.0.iter().map(|x| -x).collect())
    }
}

impl Neg for MinkVector {
    type Output = MinkVector;
    fn neg(self) -> MinkVector {
        -&self
    }
}

impl Mul<f64> for &MinkVector {
    type Output = MinkVector;
    fn mul(self, s: f64) -> MinkVector {
        MinkVector(self.0.iter().map(|x| x * s).collect())
    }
}

impl Mul<f64> for MinkVector {
    type Output = MinkVector;
    fn mul(self, s: f64) -> MinkVector {
        &self * s
    }
}

impl Mul<&MinkVector> for f64 {
    type Output = MinkVector;
    fn mul(self, v: &MinkVector) -> MinkVector {
        v * self
    }
}

impl Mul<MinkVector> for f64 {
    type Output = MinkVector;
    fn mul(self, v: MinkVector) -> MinkVector {
        &v * self
    }
}

impl Sub for &Event {
    type Output = MinkVector;
    fn sub(self, rhs: &Event) -> MinkVector {
        MinkVector(zip_with(&self.0, &rhs.0, |x, y| x - y))
    }
}

impl Sub for Event {
    type Output = MinkVector;
    fn sub(self, rhs: Event) -> MinkVector {
        &self - &rhs
    }
}

impl Add<&MinkVector> for &Event {
    type Output = Event;
    fn add(self, rhs: &MinkVector) -> Event {
        Event(zip_with(&self.0, &rhs.0, |x, y| x + y))
    }
}

impl Add<MinkVector> for Event {
    type Output = Event;
    fn add(self, rhs: MinkVector) -> Event {
        &self + &rhs
    }
}

impl Add<&MinkVector> for Event {
    type Output = Event;
    fn add(self, rhs: &MinkVector) -> Event {
        &self + rhs
    }
}

impl Sub<&MinkVector> for &Event {
    type Output = Event;
    fn sub(self, rhs: &MinkVector) -> Event {
        Event(zip_with(&self.0, &rhs.0, |x, y| x - y))
    }
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(GeometryError::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// Minkowski product g(v, w) = v^0 w^0 - sum_i v^i w^i.
pub fn inner(v: &MinkVector, w: &MinkVector) -> Result<f64> {
    check_dim(v.dim(), w.dim())?;
    Ok(form(&v.0, &w.0))
}

/// Dimension, time orientation and tolerance of a Minkowski space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    dim: usize,
    future_ref: MinkVector,
    tol: f64,
}

impl Metric {
    /// Metric with future reference e_0 and the default tolerance.
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(GeometryError::UnsupportedDimension(dim));
        }
        Ok(Self { dim, future_ref: MinkVector::basis(dim, 0), tol: DEFAULT_TOL })
    }

    pub fn with_future_ref(mut self, v: MinkVector) -> Result<Self> {
        check_dim(self.dim, v.dim())?;
        if v.square() <= self.tol * v.euclid_norm_sq() {
            return Err(GeometryError::Precondition("future reference must be timelike".into()));
        }
        self.future_ref = v;
        Ok(self)
    }

    pub fn with_tol(mut self, tol: f64) -> Result<Self> {
        if !(0.0..1e-6).contains(&tol) {
            return Err(GeometryError::Precondition(format!("tolerance {tol} not in [0, 1e-6)")));
        }
        self.tol = tol;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn future_ref(&self) -> &MinkVector {
        &self.future_ref
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// The Gram matrix G = diag(1, -1, ..., -1).
    pub fn gram(&self) -> nalgebra::DMatrix<f64> {
        gram_matrix(self.dim)
    }
}

pub fn gram_matrix(n: usize) -> nalgebra::DMatrix<f64> {
    nalgebra::DMatrix::from_fn(n, n, |i, j| match (i, j) {
        (0, 0) => 1.0,
        (i, j) if i == j => -1.0,
        _ => 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TimeOrientation {
    Future,
    Past,
}

/// Causal character of a vector. The zero vector has its own case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Causality {
    Zero,
    Timelike(TimeOrientation),
    Lightlike(TimeOrientation),
    Spacelike,
}

impl Causality {
    pub fn is_timelike(self) -> bool {
        matches!(self, Causality::Timelike(_))
    }

    pub fn is_lightlike(self) -> bool {
        matches!(self, Causality::Lightlike(_))
    }

    pub fn is_spacelike(self) -> bool {
        matches!(self, Causality::Spacelike)
    }

    pub fn orientation(self) -> Option<TimeOrientation> {
        match self {
            Causality::Timelike(o) | Causality::Lightlike(o) => Some(o),
            _ => None,
        }
    }
}

pub fn classify(v: &MinkVector, m: &Metric) -> Result<Causality> {
    check_dim(m.dim, v.dim())?;
    if v.is_zero() {
        return Ok(Causality::Zero);
    }
    let sq = v.square();
    let bound = m.tol * v.euclid_norm_sq();
    let orient = || {
        if form(&v.0, &m.future_ref.0) > 0.0 {
            TimeOrientation::Future
        } else {
            TimeOrientation::Past
        }
    };
    Ok(if sq > bound {
        Causality::Timelike(orient())
    } else if sq >= -bound {
        Causality::Lightlike(orient())
    } else {
        Causality::Spacelike
    })
}

/// Causal character of a two-dimensional span.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpanCharacter {
    /// v^2 w^2 < (v.w)^2
    Timelike,
    /// v^2 w^2 = (v.w)^2
    Lightlike,
    /// v^2 w^2 > (v.w)^2
    Spacelike,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CauchySchwarz {
    pub case: SpanCharacter,
    /// v^2 w^2
    pub lhs: f64,
    /// (v.w)^2
    pub rhs: f64,
}

fn euclid_gram_det_rel(v: &MinkVector, w: &MinkVector) -> f64 {
    let vv = v.euclid_norm_sq();
    let ww = w.euclid_norm_sq();
    let vw = v.euclid_dot(w);
    if vv == 0.0 || ww == 0.0 {
        return 0.0;
    }
    (vv * ww - vw * vw) / (vv * ww)
}

/// Compares v^2 w^2 with (v.w)^2; the sign classifies span{v, w}.
pub fn cauchy_schwarz_case(v: &MinkVector, w: &MinkVector) -> Result<CauchySchwarz> {
    check_dim(v.dim(), w.dim())?;
    if euclid_gram_det_rel(v, w) <= 1e-12 {
        return Err(GeometryError::LinearlyDependent);
    }
    let vw = v.dot(w);
    let lhs = v.square() * w.square();
    let rhs = vw * vw;
    let scale = v.euclid_norm_sq() * w.euclid_norm_sq();
    let diff = lhs - rhs;
    let case = if diff < -DEFAULT_TOL * scale {
        SpanCharacter::Timelike
    } else if diff > DEFAULT_TOL * scale {
        SpanCharacter::Spacelike
    } else {
        SpanCharacter::Lightlike
    };
    Ok(CauchySchwarz { case, lhs, rhs })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrictCsReport {
    pub holds: bool,
    pub samples: usize,
    /// A sampled w with v^2 w^2 >= (v.w)^2, if any.
    pub witness: Option<MinkVector>,
}

/// Samples w and tests the strict inequality v^2 w^2 < (v.w)^2.
///
/// Every other probe is projected into the orthogonal complement of v, since
/// the failing directions for lightlike v form a null set for plain sampling.
pub fn strict_inverted_cs_holds(v: &MinkVector, sample_count: usize, seed: u64) -> StrictCsReport {
    let n = v.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // A vector with nonzero product against v, used to project onto v-perp.
    let k = if v.is_zero() {
        None
    } else if v.dot(&MinkVector::basis(n, 0)).abs() > 1e-12 * v.euclid_norm_sq().sqrt() {
        Some(MinkVector::basis(n, 0))
    } else {
        (1..n).map(|a| MinkVector::basis(n, a)).find(|e| v.dot(e).abs() > 1e-12)
    };
    for i in 0..sample_count {
        let mut w = MinkVector((0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect());
        if i % 2 == 1 {
            if let Some(k) = &k {
                let s = w.dot(v) / k.dot(v);
                w -= &(k * s);
            }
        }
        if euclid_gram_det_rel(v, &w) <= 1e-6 {
            continue;
        }
        let vw = v.dot(&w);
        let gap = vw * vw - v.square() * w.square();
        if gap <= DEFAULT_TOL * v.euclid_norm_sq() * w.euclid_norm_sq() {
            return StrictCsReport { holds: false, samples: i + 1, witness: Some(w) };
        }
    }
    StrictCsReport { holds: true, samples: sample_count, witness: None }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangleCheck {
    pub holds: bool,
    /// ||v+w|| - ||v|| - ||w||
    pub slack: f64,
    pub parallel: bool,
}

/// Minkowski length sqrt(|v^2|).
pub fn g_norm(v: &MinkVector) -> f64 {
    v.square().abs().sqrt()
}

/// Reversed triangle inequality for co-oriented timelike vectors.
pub fn reversed_triangle_check(v: &MinkVector, w: &MinkVector, m: &Metric) -> Result<TriangleCheck> {
    let cv = classify(v, m)?;
    let cw = classify(w, m)?;
    match (cv, cw) {
        (Causality::Timelike(a), Causality::Timelike(b)) if a == b => {}
        _ => {
            return Err(GeometryError::Precondition(
                "both vectors must be timelike with the same time orientation".into(),
            ))
        }
    }
    let slack = g_norm(&(v + w)) - g_norm(v) - g_norm(w);
    let scale = g_norm(v) + g_norm(w);
    let tol = 1e-12 * scale;
    Ok(TriangleCheck { holds: slack >= -tol, slack, parallel: slack.abs() <= tol })
}

/// The function d(p, q) = ||p - q||_g, which is not a metric.
pub fn interval_distance(p: &Event, q: &Event) -> Result<f64> {
    check_dim(p.dim(), q.dim())?;
    Ok(g_norm(&(p - q)))
}

/// Affine hyperplane {x : (x - base).normal = 0}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hyperplane {
    normal: MinkVector,
    base: Event,
}

impl Hyperplane {
    pub fn new(normal: MinkVector, base: Event) -> Result<Self> {
        check_dim(normal.dim(), base.dim())?;
        if normal.is_zero() {
            return Err(GeometryError::Precondition("hyperplane normal must be nonzero".into()));
        }
        Ok(Self { normal, base })
    }

    pub fn normal(&self) -> &MinkVector {
        &self.normal
    }

    pub fn base(&self) -> &Event {
        &self.base
    }

    /// Degenerate iff the normal is lightlike.
    pub fn is_degenerate(&self, m: &Metric) -> Result<bool> {
        Ok(classify(&self.normal, m)?.is_lightlike())
    }

    /// Signed offset (x - base).normal.
    pub fn offset(&self, x: &Event) -> f64 {
        (x - &self.base).dot(&self.normal)
    }

    /// Membership with a tolerance relative to the Euclidean sizes involved.
    pub fn contains(&self, x: &Event, tol: f64) -> bool {
        let d = x - &self.base;
        let scale = (d.euclid_norm_sq() * self.normal.euclid_norm_sq()).sqrt().max(1.0);
        self.offset(x).abs() <= tol * scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> MinkVector {
        MinkVector::new(c.to_vec())
    }

    #[test]
    fn basis_products() {
        let e0 = MinkVector::basis(4, 0);
        let e1 = MinkVector::basis(4, 1);
        assert_eq!(inner(&e0, &e0).unwrap(), 1.0);
        assert_eq!(inner(&e1, &e1).unwrap(), -1.0);
        assert_eq!(inner(&(&e0 + &e1), &(&e0 + &e1)).unwrap(), 0.0);
        assert!(matches!(
            inner(&e0, &MinkVector::basis(3, 0)),
            Err(GeometryError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn classification_examples() {
        let m = Metric::new(4).unwrap();
        use Causality::*;
        use TimeOrientation::*;
        assert_eq!(classify(&v(&[1., 0., 0., 0.]), &m).unwrap(), Timelike(Future));
        assert_eq!(classify(&v(&[1., 1., 0., 0.]), &m).unwrap(), Lightlike(Future));
        assert_eq!(classify(&v(&[-1., 0., 1., 0.]), &m).unwrap(), Lightlike(Past));
        assert_eq!(classify(&v(&[0.5, 1., 0., 0.]), &m).unwrap(), Spacelike);
        assert_eq!(classify(&MinkVector::zeros(4), &m).unwrap(), Zero);
    }

    #[test]
    fn tolerance_is_relative() {
        let m = Metric::new(2).unwrap();
        let big = v(&[1e8, 1e8 + 1e-3]);
        assert!(classify(&big, &m).unwrap().is_lightlike());
        let small = v(&[1e-8, 0.0]);
        assert!(classify(&small, &m).unwrap().is_timelike());
    }

    #[test]
    fn metric_rejects_bad_reference() {
        assert!(Metric::new(3).unwrap().with_future_ref(v(&[1., 1., 0.])).is_err());
        assert!(Metric::new(1).is_err());
        assert!(Metric::new(3).unwrap().with_tol(1e-3).is_err());
    }

    #[test]
    fn cauchy_schwarz_cases() {
        let e = |a| MinkVector::basis(4, a);
        let r = cauchy_schwarz_case(&e(0), &e(1)).unwrap();
        assert_eq!((r.case, r.lhs, r.rhs), (SpanCharacter::Timelike, -1.0, 0.0));
        let r = cauchy_schwarz_case(&e(1), &e(2)).unwrap();
        assert_eq!((r.case, r.lhs, r.rhs), (SpanCharacter::Spacelike, 1.0, 0.0));
        // Two independent null vectors span a timelike plane.
        let r = cauchy_schwarz_case(&(&e(0) + &e(1)), &(&e(0) - &e(1))).unwrap();
        assert_eq!(r.case, SpanCharacter::Timelike);
        assert_eq!((r.lhs, r.rhs), (0.0, 4.0));
        // Null vector plus an orthogonal spacelike one: a lightlike plane.
        let r = cauchy_schwarz_case(&(&e(0) + &e(1)), &e(2)).unwrap();
        assert_eq!(r.case, SpanCharacter::Lightlike);
        assert_eq!(r.lhs, r.rhs);
        assert_eq!(cauchy_schwarz_case(&e(0), &(e(0) * 3.0)), Err(GeometryError::LinearlyDependent));
    }

    #[test]
    fn strict_inverted_cs() {
        let t = v(&[2., 0.3, -0.5, 0.1]);
        assert!(strict_inverted_cs_holds(&t, 1000, 1).holds);
        let s = v(&[0.1, 1., 0., 0.]);
        let r = strict_inverted_cs_holds(&s, 1000, 2);
        assert!(!r.holds && r.witness.is_some());
        let l = v(&[1., 0., 1., 0.]);
        let r = strict_inverted_cs_holds(&l, 1000, 3);
        assert!(!r.holds);
        let w = r.witness.unwrap();
        assert!(l.dot(&w).abs() < 1e-9 * w.euclid_norm_sq().sqrt());
        assert!(euclid_gram_det_rel(&l, &w) > 1e-6);
    }

    #[test]
    fn reversed_triangle() {
        let m = Metric::new(4).unwrap();
        let e0 = MinkVector::basis(4, 0);
        let r = reversed_triangle_check(&e0, &e0, &m).unwrap();
        assert!(r.holds && r.parallel && r.slack.abs() < 1e-15);
        let a = v(&[2., 1., 0., 0.]);
        let b = v(&[2., -1., 0., 0.]);
        let r = reversed_triangle_check(&a, &b, &m).unwrap();
        assert!(r.holds && !r.parallel);
        assert!((r.slack - (4.0 - 2.0 * 3f64.sqrt())).abs() < 1e-14);
        assert!(reversed_triangle_check(&e0, &-&e0, &m).is_err());
        assert!(reversed_triangle_check(&e0, &MinkVector::basis(4, 1), &m).is_err());
    }

    #[test]
    fn interval_distance_is_not_a_metric() {
        let p = Event::origin(2);
        let q = Event::new(vec![1., 1.]);
        assert_eq!(interval_distance(&p, &q).unwrap(), 0.0);
        // Path through w is shorter than the direct timelike interval.
        let q = Event::new(vec![2., 0.]);
        let w = Event::new(vec![1., 1.]);
        let via = interval_distance(&p, &w).unwrap() + interval_distance(&w, &q).unwrap();
        assert!(via < interval_distance(&p, &q).unwrap());
    }

    #[test]
    fn affine_identity_exact_on_integers() {
        let p = Event::new(vec![3., -1., 4.]);
        let q = Event::new(vec![1., 5., -9.]);
        let r = Event::new(vec![2., 6., 5.]);
        assert_eq!(&p + &(&q - &r), &q + &(&p - &r));
    }

    #[test]
    fn hyperplane_degeneracy() {
        let m = Metric::new(3).unwrap();
        let h = Hyperplane::new(v(&[1., 1., 0.]), Event::origin(3)).unwrap();
        assert!(h.is_degenerate(&m).unwrap());
        let h = Hyperplane::new(v(&[1., 0., 0.]), Event::origin(3)).unwrap();
        assert!(!h.is_degenerate(&m).unwrap());
        assert!(h.contains(&Event::new(vec![0., 5., -2.]), 1e-12));
        assert!(Hyperplane::new(MinkVector::zeros(3), Event::origin(3)).is_err());
    }
}
