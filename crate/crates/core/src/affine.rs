//! Affine combinations, frames and independence of events.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::space::{Event, MinkVector};

fn check_same_dim(points: &[Event]) -> Result<usize> {
    let n = points.first().ok_or(GeometryError::Empty)?.dim();
    for p in points {
        if p.dim() != n {
            return Err(GeometryError::DimensionMismatch { expected: n, got: p.dim() });
        }
    }
    Ok(n)
}

/// Barycentric combination sum w_a p_a with sum w_a = 1, expanded about `points[base]`.
pub fn affine_combination_about(points: &[Event], weights: &[f64], base: usize) -> Result<Event> {
    check_same_dim(points)?;
    if weights.len() != points.len() {
        return Err(GeometryError::DimensionMismatch { expected: points.len(), got: weights.len() });
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(GeometryError::WeightSum(total));
    }
    let b = points.get(base).ok_or(GeometryError::Empty)?;
    let mut acc = MinkVector::zeros(b.dim());
    for (p, w) in points.iter().zip(weights) {
        acc += &((p - b) * *w);
    }
    Ok(b + &acc)
}

pub fn affine_combination(points: &[Event], weights: &[f64]) -> Result<Event> {
    affine_combination_about(points, weights, 0)
}

/// Origin plus a basis of the translation space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineFrame {
    origin: Event,
    basis: Vec<MinkVector>,
    #[serde(skip)]
    inverse: Option<DMatrix<f64>>,
}

impl AffineFrame {
    pub fn new(origin: Event, basis: Vec<MinkVector>) -> Result<Self> {
        let n = origin.dim();
        if basis.len() != n {
            return Err(GeometryError::DimensionMismatch { expected: n, got: basis.len() });
        }
        for b in &basis {
            if b.dim() != n {
                return Err(GeometryError::DimensionMismatch { expected: n, got: b.dim() });
            }
        }
        let m = DMatrix::from_fn(n, n, |i, j| basis[j][i]);
        let scale = m.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(f64::MIN_POSITIVE);
        let det = m.determinant();
        if det.abs() <= 1e-12 * scale.powi(n as i32) {
            return Err(GeometryError::SingularBasis);
        }
        let inverse = m.try_inverse().ok_or(GeometryError::SingularBasis)?;
        Ok(Self { origin, basis, inverse: Some(inverse) })
    }

    pub fn origin(&self) -> &Event {
        &self.origin
    }

    pub fn basis(&self) -> &[MinkVector] {
        &self.basis
    }

    fn inverse(&self) -> DMatrix<f64> {
        match &self.inverse {
            Some(m) => m.clone(),
            None => {
                let n = self.origin.dim();
                DMatrix::from_fn(n, n, |i, j| self.basis[j][i])
                    .try_inverse()
                    .expect("frame basis validated at construction")
            }
        }
    }

    /// Coordinates x with p = origin + sum x_a basis_a.
    pub fn coords(&self, p: &Event) -> Result<Vec<f64>> {
        let n = self.origin.dim();
        if p.dim() != n {
            return Err(GeometryError::DimensionMismatch { expected: n, got: p.dim() });
        }
        let d = (p - &self.origin).to_dvector();
        Ok((self.inverse() * d).iter().copied().collect())
    }

    pub fn point(&self, x: &[f64]) -> Result<Event> {
        let n = self.origin.dim();
        if x.len() != n {
            return Err(GeometryError::DimensionMismatch { expected: n, got: x.len() });
        }
        let mut acc = MinkVector::zeros(n);
        for (b, xa) in self.basis.iter().zip(x) {
            acc += &(b * *xa);
        }
        Ok(&self.origin + &acc)
    }
}

pub fn frame_coords(f: &AffineFrame, p: &Event) -> Result<Vec<f64>> {
    f.coords(p)
}

pub fn frame_point(f: &AffineFrame, x: &[f64]) -> Result<Event> {
    f.point(x)
}

/// Numerical rank of a set of column vectors (relative SVD threshold).
pub fn numerical_rank(vectors: &[MinkVector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let n = vectors[0].dim();
    let m = DMatrix::from_fn(n, vectors.len(), |i, j| vectors[j][i]);
    let sv = m.singular_values();
    let max = sv.iter().fold(0.0f64, |a, &s| a.max(s));
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > 1e-10 * max).count()
}

/// Whether p_a - p_0 (a = 1..m) are linearly independent.
pub fn affinely_independent_about(points: &[Event], base: usize) -> Result<bool> {
    let n = check_same_dim(points)?;
    let b = points.get(base).ok_or(GeometryError::Empty)?;
    if points.len() > n + 1 {
        return Ok(false);
    }
    let diffs: Vec<MinkVector> = points
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != base)
        .map(|(_, p)| p - b)
        .collect();
    Ok(numerical_rank(&diffs) == diffs.len())
}

pub fn affinely_independent(points: &[Event]) -> Result<bool> {
    affinely_independent_about(points, 0)
}
