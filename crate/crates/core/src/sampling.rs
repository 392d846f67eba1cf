//! Seeded generators for rotations, Lorentz matrices and events.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::space::{Event, MinkVector};

/// Haar-distributed element of SO(m) (QR of a Gaussian matrix).
pub fn random_rotation<R: Rng + ?Sized>(m: usize, rng: &mut R) -> DMatrix<f64> {
    if m == 0 {
        return DMatrix::identity(0, 0);
    }
    let a = DMatrix::from_fn(m, m, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = a.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..m {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    q
}

/// Spatial rotation embedded in an n x n spacetime matrix.
pub fn embed_rotation(r: &DMatrix<f64>) -> DMatrix<f64> {
    let n = r.nrows() + 1;
    let mut out = DMatrix::identity(n, n);
    out.view_mut((1, 1), (n - 1, n - 1)).copy_from(r);
    out
}

/// Boost along x^1 with the given rapidity, in (ct, x, ...) coordinates.
pub fn boost_x(n: usize, rapidity: f64) -> DMatrix<f64> {
    let mut b = DMatrix::identity(n, n);
    let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
    b[(0, 0)] = ch;
    b[(1, 1)] = ch;
    b[(0, 1)] = -sh;
    b[(1, 0)] = -sh;
    b
}

/// Proper orthochronous Lorentz matrix R_a B(rho) R_b with rho uniform in [-2, 2].
pub fn random_lorentz<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let rho = rng.random_range(-2.0..=2.0);
    let b = boost_x(n, rho);
    let ra = embed_rotation(&random_rotation(n - 1, rng));
    let rb = embed_rotation(&random_rotation(n - 1, rng));
    ra * b * rb
}

/// Event with coordinates uniform in [-half, half].
pub fn random_event<R: Rng + ?Sized>(n: usize, half: f64, rng: &mut R) -> Event {
    Event::new((0..n).map(|_| rng.random_range(-half..=half)).collect())
}

/// Future timelike vector with spatial speed below `max_speed` (< 1) and time component in [0.5, 2].
pub fn random_future_timelike<R: Rng + ?Sized>(n: usize, max_speed: f64, rng: &mut R) -> MinkVector {
    let t = rng.random_range(0.5..2.0);
    let mut dir: Vec<f64> = (1..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
    let speed = rng.random_range(0.0..max_speed);
    dir.iter_mut().for_each(|x| *x *= t * speed / norm);
    let mut c = vec![t];
    c.extend(dir);
    MinkVector::new(c)
}
