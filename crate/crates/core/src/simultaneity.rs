//! Worldlines, light-cone intersections and radar simultaneity.

use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::space::{classify, g_norm, Causality, Event, Hyperplane, Metric, MinkVector};

/// The straight line {base + lambda direction}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldLine {
    base: Event,
    direction: MinkVector,
}

impl WorldLine {
    pub fn new(base: Event, direction: MinkVector) -> Result<Self> {
        if base.dim() != direction.dim() {
            return Err(GeometryError::DimensionMismatch { expected: base.dim(), got: direction.dim() });
        }
        if direction.is_zero() {
            return Err(GeometryError::Precondition("worldline direction must be nonzero".into()));
        }
        Ok(Self { base, direction })
    }

    pub fn base(&self) -> &Event {
        &self.base
    }

    pub fn direction(&self) -> &MinkVector {
        &self.direction
    }

    pub fn point(&self, lambda: f64) -> Event {
        &self.base + &(&self.direction * lambda)
    }

    /// Same line with future-pointing direction scaled to v^2 = c^2 (timelike),
    /// v^0 = 1 (lightlike) or unit Euclidean length (spacelike), and base at the
    /// point of least Euclidean norm.
    pub fn canonical(&self, c: f64) -> WorldLine {
        let v = &self.direction;
        let sq = v.square();
        let en = v.euclid_norm_sq();
        let mut d = if sq > 1e-12 * en {
            v * (c / sq.sqrt())
        } else if sq >= -1e-12 * en && v[0] != 0.0 {
            v * (1.0 / v[0].abs())
        } else {
            v * (1.0 / en.sqrt())
        };
        let first = d.as_slice().iter().copied().find(|x| x.abs() > 1e-15).unwrap_or(1.0);
        if first < 0.0 {
            d = -d;
        }
        let r = self.base.to_vector();
        let s = r.euclid_dot(&d) / d.euclid_norm_sq();
        let base = &self.base - &(&d * s);
        WorldLine { base, direction: d }
    }

    /// Euclidean distance from an event to the line.
    pub fn distance_to(&self, x: &Event) -> f64 {
        let d = x - &self.base;
        let v = &self.direction;
        let s = d.euclid_dot(v) / v.euclid_norm_sq();
        (&d - &(v * s)).euclid_norm_sq().sqrt()
    }

    /// Line equality as point sets, within `tol` relative to coordinate size.
    pub fn same_line(&self, other: &WorldLine, tol: f64) -> bool {
        let a = self.canonical(1.0);
        let b = other.canonical(1.0);
        let scale = 1.0 + a.base.to_vector().euclid_norm_sq().sqrt();
        a.direction.max_abs_diff(&b.direction) <= tol && a.base.max_abs_diff(&b.base) <= tol * scale
    }
}

/// Intersections of a line with the light cone of an event.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ConeIntersection {
    Empty,
    One(Event),
    /// Timelike lines: the later and the earlier intersection.
    Two { future: Event, past: Event },
}

impl ConeIntersection {
    pub fn len(&self) -> usize {
        match self {
            ConeIntersection::Empty => 0,
            ConeIntersection::One(_) => 1,
            ConeIntersection::Two { .. } => 2,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Solves lambda^2 v^2 + 2 lambda v.(r - p) + (r - p)^2 = 0.
pub fn line_cone_intersect(l: &WorldLine, p: &Event, m: &Metric) -> Result<ConeIntersection> {
    if p.dim() != l.base.dim() || m.dim() != p.dim() {
        return Err(GeometryError::DimensionMismatch { expected: l.base.dim(), got: p.dim() });
    }
    let v = &l.direction;
    let d = &l.base - p;
    let dd = d.square();
    if dd.abs() <= m.tol() * d.euclid_norm_sq() {
        return Err(GeometryError::BaseOnCone);
    }
    let vd = v.dot(&d);
    match classify(v, m)? {
        Causality::Spacelike | Causality::Zero => {
            Err(GeometryError::Precondition("line direction must be timelike or lightlike".into()))
        }
        Causality::Lightlike(_) => {
            if vd.abs() <= m.tol() * (v.euclid_norm_sq() * d.euclid_norm_sq()).sqrt() {
                Ok(ConeIntersection::Empty)
            } else {
                Ok(ConeIntersection::One(l.point(-dd / (2.0 * vd))))
            }
        }
        Causality::Timelike(_) => {
            let vv = v.square();
            let disc = vd * vd - vv * dd;
            if disc <= 1e-14 * vd.abs().max(vv * d.euclid_norm_sq()).powi(2).sqrt().max(f64::MIN_POSITIVE) {
                return Err(GeometryError::OnWorldline);
            }
            let root = disc.sqrt();
            // Cancellation-free roots of the quadratic.
            let qv = -(vd + vd.signum() * root);
            let (l1, l2) = if qv == 0.0 { (root / vv, -root / vv) } else { (qv / vv, dd / qv) };
            let (a, b) = (l.point(l1), l.point(l2));
            let future_a = (&a - p).dot(m.future_ref()) > 0.0;
            Ok(if future_a {
                ConeIntersection::Two { future: a, past: b }
            } else {
                ConeIntersection::Two { future: b, past: a }
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Radar {
    /// Midpoint of the two light-cone intersections.
    pub q: Event,
    pub q_plus: Event,
    pub q_minus: Event,
}

/// Radar-simultaneous event on a timelike line for an event off the line.
pub fn radar_simultaneous_event(l: &WorldLine, p: &Event, m: &Metric) -> Result<Radar> {
    if !classify(l.direction(), m)?.is_timelike() {
        return Err(GeometryError::Precondition("radar simultaneity needs a timelike line".into()));
    }
    // Move the base off the cone if needed; the line is unchanged.
    let mut line = l.clone();
    for shift in [1.0, -2.0, 3.5] {
        match line_cone_intersect(&line, p, m) {
            Err(GeometryError::BaseOnCone) => {
                line = WorldLine::new(line.point(shift), line.direction.clone())?;
            }
            Err(e) => return Err(e),
            Ok(ConeIntersection::Two { future, past }) => {
                let q = &past + &((&future - &past) * 0.5);
                return Ok(Radar { q, q_plus: future, q_minus: past });
            }
            Ok(_) => return Err(GeometryError::Internal("timelike line met the cone once".into())),
        }
    }
    Err(GeometryError::Internal("could not move base off the cone".into()))
}

/// |‖q - p‖^2 - ‖q+ - q‖ ‖q - q-‖| for an event q on the segment.
pub fn radar_product_residual(radar: &Radar, p: &Event, q: &Event) -> f64 {
    let lhs = g_norm(&(q - p)).powi(2);
    let rhs = g_norm(&(&radar.q_plus - q)) * g_norm(&(q - &radar.q_minus));
    (lhs - rhs).abs()
}

/// Whether q lies between q- and q+, via the Euclidean product.
pub fn is_between(radar: &Radar, q: &Event) -> bool {
    (&radar.q_plus - q).euclid_dot(&(q - &radar.q_minus)) >= 0.0
}

/// The unique events q on l and q' on l' with q - q' orthogonal to both directions.
pub fn mutual_simultaneity(l: &WorldLine, l2: &WorldLine, m: &Metric) -> Result<(Event, Event)> {
    for line in [l, l2] {
        if !classify(line.direction(), m)?.is_timelike() {
            return Err(GeometryError::Precondition("both lines must be timelike".into()));
        }
    }
    let (v, w) = (l.direction(), l2.direction());
    let vw = v.dot(w);
    let det = vw * vw - v.square() * w.square();
    if det <= 1e-12 * v.euclid_norm_sq() * w.euclid_norm_sq() {
        return Err(GeometryError::LinearlyDependent);
    }
    let dr = l2.base() - l.base();
    let a = Matrix2::new(v.square(), -vw, vw, -w.square());
    let rhs = Vector2::new(dr.dot(v), dr.dot(w));
    let sol = a.lu().solve(&rhs).ok_or(GeometryError::LinearlyDependent)?;
    Ok((l.point(sol[0]), l2.point(sol[1])))
}

/// The simultaneity hyperplane of l through q, with normal l.direction.
pub fn simultaneity_hyperplane(l: &WorldLine, q: &Event) -> Result<Hyperplane> {
    let scale = 1.0 + (q - l.base()).euclid_norm_sq().sqrt();
    if l.distance_to(q) > 1e-10 * scale {
        return Err(GeometryError::Precondition("event is not on the line".into()));
    }
    Hyperplane::new(l.direction().clone(), q.clone())
}

/// For q on l, the event q' on l' that l regards as simultaneous with q,
/// together with (q - q').v', which vanishes iff l' agrees.
pub fn simultaneity_asymmetry(l: &WorldLine, l2: &WorldLine, q: &Event) -> Result<(Event, f64)> {
    let v = l.direction();
    let w = l2.direction();
    let wv = w.dot(v);
    if wv.abs() < 1e-14 {
        return Err(GeometryError::Precondition("second line is parallel to the simultaneity plane".into()));
    }
    let lambda = (q - l2.base()).dot(v) / wv;
    let q2 = l2.point(lambda);
    let mismatch = (q - &q2).dot(w);
    Ok((q2, mismatch))
}
