//! Lorentz and Poincaré maps, reflections, dilations and sample harnesses.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::space::{classify, gram_matrix, Causality, Event, Metric, MinkVector, TimeOrientation};

/// Entrywise tolerance for comparing reconstructed matrices.
pub const MATRIX_TOL: f64 = 1e-9;

/// Reflection axes whose square is below this fraction of their Euclidean
/// square are treated as null in the decomposition.
const NEAR_NULL: f64 = 1e-3;

fn square_dim(l: &DMatrix<f64>) -> Result<usize> {
    if l.nrows() != l.ncols() {
        return Err(GeometryError::NotSquare { rows: l.nrows(), cols: l.ncols() });
    }
    if l.nrows() < 2 {
        return Err(GeometryError::UnsupportedDimension(l.nrows()));
    }
    Ok(l.nrows())
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.abs()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LorentzCheck {
    pub is_lorentz: bool,
    /// max |(L^T G L - G)_ij|
    pub residual: f64,
}

pub fn is_lorentz(l: &DMatrix<f64>, tol: f64) -> Result<LorentzCheck> {
    let n = square_dim(l)?;
    let g = gram_matrix(n);
    let residual = max_abs(&(l.transpose() * &g * l - &g));
    Ok(LorentzCheck { is_lorentz: residual < tol, residual })
}

/// x -> L x + a with L a Lorentz matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineIsometry {
    linear: DMatrix<f64>,
    translation: MinkVector,
    proper: bool,
    orthochronous: bool,
}

impl AffineIsometry {
    pub fn new(linear: DMatrix<f64>, translation: MinkVector) -> Result<Self> {
        let n = square_dim(&linear)?;
        if translation.dim() != n {
            return Err(GeometryError::DimensionMismatch { expected: n, got: translation.dim() });
        }
        let check = is_lorentz(&linear, 1e-10 * max_abs(&linear).powi(2).max(1.0))?;
        if !check.is_lorentz {
            return Err(GeometryError::NotLorentz(check.residual));
        }
        let proper = linear.determinant() > 0.0;
        let orthochronous = linear[(0, 0)] > 0.0;
        Ok(Self { linear, translation, proper, orthochronous })
    }

    pub fn linear(&self) -> &DMatrix<f64> {
        &self.linear
    }

    pub fn translation(&self) -> &MinkVector {
        &self.translation
    }

    pub fn is_proper(&self) -> bool {
        self.proper
    }

    pub fn is_orthochronous(&self) -> bool {
        self.orthochronous
    }

    pub fn apply(&self, p: &Event) -> Event {
        let x = &self.linear * p.to_dvector();
        &Event::from_dvector(&x) + &self.translation
    }

    pub fn apply_vector(&self, v: &MinkVector) -> MinkVector {
        MinkVector::from_dvector(&(&self.linear * v.to_dvector()))
    }

    /// self after other: x -> self(other(x)).
    pub fn compose(&self, other: &AffineIsometry) -> Result<AffineIsometry> {
        let linear = &self.linear * &other.linear;
        let translation = &self.apply_vector(&other.translation) + &self.translation;
        AffineIsometry::new(linear, translation)
    }
}

/// Reflection at the hyperplane orthogonal to a non-null axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reflection {
    axis: MinkVector,
}

impl Reflection {
    pub fn new(axis: MinkVector) -> Result<Self> {
        let sq = axis.square();
        if axis.is_zero() || sq.abs() <= 1e-12 * axis.euclid_norm_sq() {
            return Err(GeometryError::NullAxis);
        }
        Ok(Self { axis })
    }

    pub fn axis(&self) -> &MinkVector {
        &self.axis
    }

    pub fn apply(&self, x: &MinkVector) -> MinkVector {
        let v = &self.axis;
        x - &(v * (2.0 * x.dot(v) / v.square()))
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        let n = self.axis.dim();
        let v = &self.axis;
        let low = v.lowered();
        let vv = v.square();
        DMatrix::from_fn(n, n, |i, j| {
            let id = if i == j { 1.0 } else { 0.0 };
            id - 2.0 * v[i] * low[j] / vv
        })
    }
}

pub fn reflect(v: &MinkVector, x: &MinkVector) -> Result<MinkVector> {
    if v.dim() != x.dim() {
        return Err(GeometryError::DimensionMismatch { expected: v.dim(), got: x.dim() });
    }
    Ok(Reflection::new(v.clone())?.apply(x))
}

/// Product of reflection matrices in list order, r_1 r_2 ... r_m.
pub fn compose_reflections(list: &[Reflection], n: usize) -> DMatrix<f64> {
    list.iter().fold(DMatrix::identity(n, n), |acc, r| acc * r.matrix())
}

/// Writes a Lorentz matrix as a product of at most 2n - 1 reflections.
///
/// The returned list satisfies L = r_1 r_2 ... r_m. Each stage maps the basis
/// vector e_k back onto itself while fixing e_0..e_{k-1}; a non-null v - w
/// needs one reflection, a null one needs two.
pub fn cartan_dieudonne(l: &DMatrix<f64>) -> Result<Vec<Reflection>> {
    let n = square_dim(l)?;
    let check = is_lorentz(l, 1e-9 * max_abs(l).powi(2).max(1.0))?;
    if !check.is_lorentz {
        return Err(GeometryError::NotLorentz(check.residual));
    }
    let skip = 1e-11 * max_abs(l).max(1.0);
    // phi = (applied reflections) * L; driven to the identity.
    let mut phi = l.clone();
    let mut applied: Vec<Reflection> = Vec::new();
    for k in 0..n {
        let v = MinkVector::basis(n, k);
        if v.square() == 0.0 {
            return Err(GeometryError::Internal("basis vector with zero square".into()));
        }
        // Columns of phi are unit vectors; renormalise to shed accumulated drift.
        let raw = MinkVector::from_dvector(&phi.column(k).into_owned());
        let w = &raw * (1.0 / raw.square().abs().sqrt());
        let mut dc: Vec<f64> = (&v - &w).as_slice().to_vec();
        if w[k] > 0.0 {
            // 1 - w_k without cancellation, using w^2 = v^2.
            let rest: f64 = (0..n).filter(|&j| j != k).map(|j| w[j] * w[j]).sum();
            let sign = if k == 0 { -1.0 } else { 1.0 };
            dc[k] = sign * rest / (1.0 + w[k]);
        }
        let d = MinkVector::new(dc);
        // A noise-sized v - w would give an arbitrary, O(1) reflection.
        if d.euclid_norm_sq().sqrt() > skip {
            let stage = if d.square().abs() > NEAR_NULL * d.euclid_norm_sq() {
                vec![Reflection::new(d)?]
            } else {
                // rho_v rho_{v+w} maps w to v.
                vec![Reflection::new(&v + &w)?, Reflection::new(v.clone())?]
            };
            for r in stage {
                phi = r.matrix() * phi;
                applied.push(r);
            }
        }
        // phi now fixes e_k exactly in exact arithmetic; drop the rounding
        // noise so it cannot masquerade as a reflection axis later.
        for j in 0..n {
            let id = if j == k { 1.0 } else { 0.0 };
            phi[(j, k)] = id;
            phi[(k, j)] = id;
        }
    }
    if applied.len() > 2 * n - 1 {
        return Err(GeometryError::Internal(format!("{} reflections exceed 2n-1", applied.len())));
    }
    // applied_m ... applied_1 L = I, so L = applied_1 ... applied_m.
    Ok(applied)
}

/// Homothety p -> factor (p - center) + center.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dilation {
    factor: f64,
    center: Event,
}

impl Dilation {
    pub fn new(factor: f64, center: Event) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(GeometryError::Precondition(format!("dilation factor {factor} must be positive")));
        }
        Ok(Self { factor, center })
    }

    pub fn factor(&self) -> f64 {
        self.factor
    }

    pub fn center(&self) -> &Event {
        &self.center
    }

    pub fn apply(&self, p: &Event) -> Event {
        &self.center + &((p - &self.center) * self.factor)
    }
}

pub fn dilation_apply(d: &Dilation, p: &Event) -> Event {
    d.apply(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConformalFactor {
    pub alpha: f64,
    /// max |h_ij - alpha G_ij| with h = f^T G f
    pub residual: f64,
}

/// Null probes e0 +- e_a and sqrt(2) e0 + e_a + e_b (a < b).
pub fn lightlike_probes(n: usize) -> Vec<MinkVector> {
    let mut out = Vec::new();
    let e = |a| MinkVector::basis(n, a);
    for a in 1..n {
        out.push(&e(0) + &e(a));
        out.push(&e(0) - &e(a));
    }
    for a in 1..n {
        for b in a + 1..n {
            out.push(&(&(e(0) * 2f64.sqrt()) + &e(a)) + &e(b));
        }
    }
    out
}

/// Recovers alpha in g(fv, fw) = alpha g(v, w) for a lightcone-preserving f.
pub fn conformal_factor(f: &DMatrix<f64>) -> Result<ConformalFactor> {
    let n = square_dim(f)?;
    for (index, p) in lightlike_probes(n).into_iter().enumerate() {
        let img = MinkVector::from_dvector(&(f * p.to_dvector()));
        let sq = img.square();
        if sq.abs() > 1e-9 * img.euclid_norm_sq().max(f64::MIN_POSITIVE) {
            return Err(GeometryError::ProbeViolation {
                index,
                probe: p.as_slice().to_vec(),
                image_square: sq,
            });
        }
    }
    let g = gram_matrix(n);
    let h = f.transpose() * &g * f;
    let alpha = h[(0, 0)];
    let residual = max_abs(&(&h - &g * alpha));
    Ok(ConformalFactor { alpha, residual })
}

/// Order and interval relations between events, read as p R q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    /// p - q future-directed causal, or p = q.
    CausalFuture,
    /// p - q future-directed timelike.
    ChronoFuture,
    /// p - q future-directed lightlike.
    LightFuture,
    CausalPast,
    ChronoPast,
    LightPast,
    /// Same sign class of (p - q)^2 (timelike, lightlike or spacelike).
    IntervalSign,
}

impl Relation {
    pub const CONE_FAMILIES: [Relation; 6] = [
        Relation::CausalFuture,
        Relation::ChronoFuture,
        Relation::LightFuture,
        Relation::CausalPast,
        Relation::ChronoPast,
        Relation::LightPast,
    ];

    pub fn holds(self, p: &Event, q: &Event, m: &Metric) -> Result<bool> {
        use Causality::*;
        use TimeOrientation::*;
        let c = classify(&(p - q), m)?;
        Ok(match self {
            Relation::CausalFuture => matches!(c, Zero | Timelike(Future) | Lightlike(Future)),
            Relation::ChronoFuture => matches!(c, Timelike(Future)),
            Relation::LightFuture => matches!(c, Lightlike(Future)),
            Relation::CausalPast => matches!(c, Zero | Timelike(Past) | Lightlike(Past)),
            Relation::ChronoPast => matches!(c, Timelike(Past)),
            Relation::LightPast => matches!(c, Lightlike(Past)),
            Relation::IntervalSign => unreachable!("IntervalSign compares two pairs"),
        })
    }
}

fn sign_class(c: Causality) -> u8 {
    match c {
        Causality::Zero => 0,
        Causality::Timelike(_) => 1,
        Causality::Lightlike(_) => 2,
        Causality::Spacelike => 3,
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationReport {
    /// (i, j) with p_i R p_j but not F(p_i) R F(p_j).
    pub forward: Vec<(usize, usize)>,
    /// (i, j) with F(p_i) R F(p_j) but not p_i R p_j.
    pub inverse: Vec<(usize, usize)>,
}

impl RelationReport {
    pub fn is_empty(&self) -> bool {
        self.forward.is_empty() && self.inverse.is_empty()
    }
}

/// Checks that a map given as (p, F(p)) pairs preserves a relation both ways.
pub fn relation_preservation_harness(
    pairs: &[(Event, Event)],
    relation: Relation,
    m: &Metric,
) -> Result<RelationReport> {
    let n = pairs.len();
    for (p, q) in pairs {
        if p.dim() != m.dim() || q.dim() != m.dim() {
            return Err(GeometryError::DimensionMismatch { expected: m.dim(), got: p.dim().min(q.dim()) });
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if pairs[i].0.max_abs_diff(&pairs[j].0) == 0.0 || pairs[i].1.max_abs_diff(&pairs[j].1) == 0.0 {
                return Err(GeometryError::NotBijective);
            }
        }
    }
    type Row = (Vec<(usize, usize)>, Vec<(usize, usize)>);
    let rows: Vec<Result<Row>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut fwd = Vec::new();
            let mut inv = Vec::new();
            for j in 0..n {
                if i == j {
                    continue;
                }
                let (p, fp) = &pairs[i];
                let (q, fq) = &pairs[j];
                let (before, after) = if relation == Relation::IntervalSign {
                    let a = sign_class(classify(&(p - q), m)?);
                    let b = sign_class(classify(&(fp - fq), m)?);
                    (a != b, a != b)
                } else {
                    let a = relation.holds(p, q, m)?;
                    let b = relation.holds(fp, fq, m)?;
                    (a && !b, b && !a)
                };
                if before {
                    fwd.push((i, j));
                }
                if after {
                    inv.push((i, j));
                }
            }
            Ok((fwd, inv))
        })
        .collect();
    let mut report = RelationReport::default();
    for r in rows {
        let (f, i) = r?;
        report.forward.extend(f);
        report.inverse.extend(i);
    }
    report.forward.sort_unstable();
    report.inverse.sort_unstable();
    Ok(report)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct UnitDistanceReport {
    pub checked: usize,
    /// (pair index, |f(x) - f(y)|) for pairs whose image distance differs from delta.
    pub violations: Vec<(usize, f64)>,
}

/// Samples Euclidean pairs at distance delta and checks the image distance.
pub fn unit_distance_harness<F>(map: F, dim: usize, delta: f64, samples: usize, seed: u64) -> Result<UnitDistanceReport>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    if dim < 2 {
        return Err(GeometryError::UnsupportedDimension(dim));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = UnitDistanceReport { checked: samples, violations: Vec::new() };
    for s in 0..samples {
        let x: Vec<f64> = (0..dim).map(|_| rng.random_range(-5.0..5.0)).collect();
        let mut d: Vec<f64> = (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let norm = d.iter().map(|a| a * a).sum::<f64>().sqrt();
        d.iter_mut().for_each(|a| *a *= delta / norm);
        let y: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + b).collect();
        let fx = map(&x);
        let fy = map(&y);
        let dist = fx.iter().zip(&fy).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        if (dist - delta).abs() > 1e-9 * delta.max(1.0) {
            report.violations.push((s, dist));
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearityProbe {
    /// max |g(f v, f w) - g(v, w)| over probe pairs.
    pub product_residual: f64,
    /// max ||f(a u + b w) - a f(u) - b f(w)|| over probe pairs.
    pub nonlinearity_residual: f64,
}

/// Measures how far a map is from preserving products and from linearity.
pub fn linearity_probe<F>(f: F, probes: &[MinkVector]) -> LinearityProbe
where
    F: Fn(&MinkVector) -> MinkVector,
{
    let mut product_residual = 0.0f64;
    let mut nonlinearity_residual = 0.0f64;
    let images: Vec<MinkVector> = probes.iter().map(&f).collect();
    for i in 0..probes.len() {
        for j in 0..probes.len() {
            let d = (images[i].dot(&images[j]) - probes[i].dot(&probes[j])).abs();
            product_residual = product_residual.max(d);
            let (a, b) = (0.7, -1.3);
            let lhs = f(&(&(&probes[i] * a) + &(&probes[j] * b)));
            let rhs = &(&images[i] * a) + &(&images[j] * b);
            nonlinearity_residual = nonlinearity_residual.max((&lhs - &rhs).euclid_norm_sq().sqrt());
        }
    }
    LinearityProbe { product_residual, nonlinearity_residual }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_lorentz, random_rotation};

    fn boost2(rho: f64) -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &[rho.cosh(), -rho.sinh(), -rho.sinh(), rho.cosh()])
    }

    #[test]
    fn lorentz_check_examples() {
        let id = DMatrix::<f64>::identity(4, 4);
        assert_eq!(is_lorentz(&id, 1e-12).unwrap(), LorentzCheck { is_lorentz: true, residual: 0.0 });
        let mut b = DMatrix::<f64>::identity(4, 4);
        b.view_mut((0, 0), (2, 2)).copy_from(&boost2(0.3));
        let r = is_lorentz(&b, 1e-12).unwrap();
        assert!(r.is_lorentz, "residual {}", r.residual);
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![2., 1., 1., 1.]));
        assert!(!is_lorentz(&d, 1e-10).unwrap().is_lorentz);
        assert!(matches!(is_lorentz(&DMatrix::zeros(2, 3), 1e-10), Err(GeometryError::NotSquare { .. })));
    }

    #[test]
    fn reflection_examples() {
        let v = MinkVector::new(vec![1., 0.]);
        let x = MinkVector::new(vec![2., 3.]);
        let y = reflect(&v, &x).unwrap();
        assert_eq!(y, MinkVector::new(vec![-2., 3.]));
        assert_eq!(x.square(), -5.0);
        assert_eq!(y.square(), -5.0);
        let a = MinkVector::new(vec![0.3, 1.2, -0.4]);
        assert!(reflect(&a, &a).unwrap().max_abs_diff(&-&a) < 1e-15);
        let w = MinkVector::new(vec![0.0, 0.4, 1.2]);
        assert!(a.dot(&w).abs() < 1e-15);
        assert!(reflect(&a, &w).unwrap().max_abs_diff(&w) < 1e-15);
        assert_eq!(reflect(&MinkVector::new(vec![1., 1., 0.]), &a), Err(GeometryError::NullAxis));
        assert_eq!(reflect(&MinkVector::zeros(3), &a), Err(GeometryError::NullAxis));
    }

    #[test]
    fn reflection_is_involutive_isometry() {
        let r = Reflection::new(MinkVector::new(vec![0.5, 2., -1., 0.3])).unwrap();
        let m = r.matrix();
        assert!(max_abs(&(&m * &m - DMatrix::identity(4, 4))) < 1e-12);
        assert!(is_lorentz(&m, 1e-12).unwrap().is_lorentz);
        let x = MinkVector::new(vec![1., 2., 3., 4.]);
        let via_matrix = MinkVector::from_dvector(&(&m * x.to_dvector()));
        assert!(via_matrix.max_abs_diff(&r.apply(&x)) < 1e-12);
    }

    #[test]
    fn decomposition_of_identity_is_empty() {
        for n in 2..6 {
            assert!(cartan_dieudonne(&DMatrix::identity(n, n)).unwrap().is_empty());
        }
    }

    #[test]
    fn decomposition_of_single_reflection() {
        for axis in [vec![1., 0.2, 0.3, -0.1], vec![0.1, 1., 0., 0.5], vec![0., 0., 0., 1.]] {
            let r = Reflection::new(MinkVector::new(axis)).unwrap();
            let list = cartan_dieudonne(&r.matrix()).unwrap();
            assert!(list.len() <= 7);
            assert!(max_abs(&(compose_reflections(&list, 4) - r.matrix())) < MATRIX_TOL);
        }
    }

    #[test]
    fn decomposition_with_null_branch() {
        // A null rotation: v - w is lightlike for v = e0.
        let s = 0.7;
        let l = DMatrix::from_row_slice(
            3,
            3,
            &[1. + s * s / 2., s, -s * s / 2., s, 1., -s, s * s / 2., s, 1. - s * s / 2.],
        );
        assert!(is_lorentz(&l, 1e-12).unwrap().is_lorentz);
        let list = cartan_dieudonne(&l).unwrap();
        assert!(list.len() <= 5);
        assert!(max_abs(&(compose_reflections(&list, 3) - &l)) < MATRIX_TOL);
    }

    #[test]
    fn decomposition_rejects_non_isometry() {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![2., 1., 1.]));
        assert!(matches!(cartan_dieudonne(&d), Err(GeometryError::NotLorentz(_))));
    }

    #[test]
    fn decomposition_random_all_components() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 2..=5 {
            for _ in 0..50 {
                let mut l = random_lorentz(n, &mut rng);
                // Mix in parity and time reversal.
                if rng.random_bool(0.5) {
                    l.row_mut(0).neg_mut();
                }
                if rng.random_bool(0.5) {
                    l.row_mut(n - 1).neg_mut();
                }
                let list = cartan_dieudonne(&l).unwrap();
                assert!(list.len() < 2 * n);
                let res = max_abs(&(compose_reflections(&list, n) - &l));
                assert!(res < MATRIX_TOL, "n={n} residual {res:e} len {} L={l}", list.len());
            }
        }
    }

    #[test]
    fn affine_isometry_flags_and_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let l = random_lorentz(4, &mut rng);
        let a = AffineIsometry::new(l.clone(), MinkVector::new(vec![1., 2., 3., 4.])).unwrap();
        assert!(a.is_proper() && a.is_orthochronous());
        let mut t = DMatrix::identity(4, 4);
        t[(0, 0)] = -1.0;
        let b = AffineIsometry::new(t, MinkVector::zeros(4)).unwrap();
        assert!(!b.is_proper() && !b.is_orthochronous());
        let ab = a.compose(&b).unwrap();
        assert!(!ab.is_proper());
        let p = Event::new(vec![0.5, -1., 2., 0.]);
        assert!(ab.apply(&p).max_abs_diff(&a.apply(&b.apply(&p))) < 1e-12);
        assert!(AffineIsometry::new(DMatrix::identity(3, 3) * 2.0, MinkVector::zeros(3)).is_err());
    }

    #[test]
    fn dilation_examples() {
        let m = Event::new(vec![1., 2., 3., 4.]);
        let d = Dilation::new(3.0, m.clone()).unwrap();
        assert_eq!(dilation_apply(&d, &m), m);
        let d2 = Dilation::new(2.0, Event::origin(4)).unwrap();
        assert_eq!(d2.apply(&Event::new(vec![1., 1., 0., 0.])), Event::new(vec![2., 2., 0., 0.]));
        let p = Event::new(vec![0.3, 0.1, -2., 1.]);
        let q = Event::new(vec![-1., 4., 0.5, 0.]);
        let lhs = (d.apply(&p) - d.apply(&q)).square();
        assert!((lhs - 9.0 * (&p - &q).square()).abs() < 1e-12 * lhs.abs().max(1.0));
        assert!(Dilation::new(0.0, m.clone()).is_err());
        assert!(Dilation::new(-1.0, m).is_err());
    }

    #[test]
    fn conformal_factor_examples() {
        let id = DMatrix::<f64>::identity(4, 4);
        assert_eq!(conformal_factor(&id).unwrap(), ConformalFactor { alpha: 1.0, residual: 0.0 });
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let l = random_lorentz(4, &mut rng) * 1.7;
        let cf = conformal_factor(&l).unwrap();
        assert!((cf.alpha - 1.7 * 1.7).abs() < 1e-9 && cf.residual < 1e-9);
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1., 1., 2., 2.]));
        assert!(matches!(conformal_factor(&d), Err(GeometryError::ProbeViolation { .. })));
    }

    #[test]
    fn conformal_factor_catches_mixed_probe_only() {
        // Sends every e0 +- e_a to a null vector, but e1 and e2 to
        // non-orthogonal images, so only sqrt(2) e0 + e1 + e2 fails.
        let f = DMatrix::from_row_slice(3, 3, &[1., 0., 0., 0., 1., 0.6, 0., 0., 0.8]);
        match conformal_factor(&f) {
            Err(GeometryError::ProbeViolation { index, .. }) => assert_eq!(index, 4),
            other => panic!("expected a probe violation, got {other:?}"),
        }
    }

    fn random_events(n: usize, count: usize, seed: u64) -> Vec<Event> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| Event::new((0..n).map(|_| rng.random_range(-3.0..3.0)).collect()))
            .collect()
    }

    #[test]
    fn harness_poincare_dilation_preserves_cones() {
        let m = Metric::new(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let iso = AffineIsometry::new(random_lorentz(4, &mut rng), MinkVector::new(vec![1., -2., 0.5, 3.])).unwrap();
        let dil = Dilation::new(1.8, Event::new(vec![0.2, 0.1, 0., -0.3])).unwrap();
        let pairs: Vec<(Event, Event)> =
            random_events(4, 50, 9).into_iter().map(|p| (p.clone(), iso.apply(&dil.apply(&p)))).collect();
        for r in Relation::CONE_FAMILIES.into_iter().chain([Relation::IntervalSign]) {
            assert!(relation_preservation_harness(&pairs, r, &m).unwrap().is_empty(), "{r:?}");
        }
    }

    #[test]
    fn harness_time_reflection_and_permutation() {
        let m = Metric::new(3).unwrap();
        let events = random_events(3, 40, 10);
        let pairs: Vec<(Event, Event)> = events
            .iter()
            .map(|p| {
                let mut c = p.as_slice().to_vec();
                c[0] = -c[0];
                (p.clone(), Event::new(c))
            })
            .collect();
        assert!(!relation_preservation_harness(&pairs, Relation::ChronoFuture, &m).unwrap().is_empty());
        assert!(relation_preservation_harness(&pairs, Relation::IntervalSign, &m).unwrap().is_empty());
        let mut shuffled: Vec<(Event, Event)> =
            events.iter().cloned().zip(events.iter().cloned().rev()).collect();
        shuffled.rotate_left(0);
        assert!(!relation_preservation_harness(&shuffled, Relation::CausalFuture, &m).unwrap().is_empty());
        let dup = vec![(events[0].clone(), events[1].clone()), (events[1].clone(), events[1].clone())];
        assert_eq!(relation_preservation_harness(&dup, Relation::CausalFuture, &m), Err(GeometryError::NotBijective));
    }

    #[test]
    fn unit_distance_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let r = random_rotation(3, &mut rng);
        let motion = |x: &[f64]| {
            let v = &r * nalgebra::DVector::from_column_slice(x);
            vec![v[0] + 1.0, v[1] - 2.0, v[2] + 0.5]
        };
        assert!(unit_distance_harness(motion, 3, 1.0, 500, 1).unwrap().violations.is_empty());
        let scale = |x: &[f64]| x.iter().map(|a| 2.0 * a).collect();
        assert!(!unit_distance_harness(scale, 3, 1.0, 100, 1).unwrap().violations.is_empty());
        let n1 = nalgebra::DVector::from_vec(vec![0.3, -0.4, 0.866]).normalize();
        let n2 = nalgebra::DVector::from_vec(vec![1.0, 0.2, 0.0]).normalize();
        let refl = |x: &[f64]| {
            let mut v = nalgebra::DVector::from_column_slice(x);
            for nn in [&n1, &n2] {
                let s = 2.0 * v.dot(nn);
                v -= nn * s;
            }
            v.iter().copied().collect()
        };
        assert!(unit_distance_harness(refl, 3, 1.0, 500, 2).unwrap().violations.is_empty());
    }

    #[test]
    fn perturbed_lorentz_fails_product_preservation() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let l = random_lorentz(3, &mut rng);
        let probes: Vec<MinkVector> = (0..6)
            .map(|_| MinkVector::new((0..3).map(|_| rng.random_range(-1.0..1.0)).collect()))
            .collect();
        for eps in [0.0, 1e-7, 1e-4, 1e-2] {
            let f = |v: &MinkVector| {
                let mut w = MinkVector::from_dvector(&(&l * v.to_dvector()));
                let bump = eps * v[0] * v[0];
                w = &w + &MinkVector::new(vec![0.0, bump, 0.0]);
                w
            };
            let p = linearity_probe(f, &probes);
            let both_small = p.product_residual < 1e-6 && p.nonlinearity_residual < 1e-6;
            assert!(!both_small || eps < 1e-6, "eps {eps}: {p:?}");
        }
    }
}
