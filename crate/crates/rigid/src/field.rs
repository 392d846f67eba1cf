//! Normalised timelike velocity fields and their generators.

use std::fmt;
use std::sync::Arc;

use crate::error::{Result, RigidError};
use crate::metric::{check_normalized, normalize, square, Vec4};

type Generator = Arc<dyn Fn(&Vec4) -> Result<Vec4> + Send + Sync>;
type Domain = Arc<dyn Fn(&Vec4) -> bool + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    BoostKilling,
    RotationKilling,
    WorldlineInduced,
    User,
}

impl Provenance {
    /// Whether the field's domain is simply connected by construction.
    pub fn simply_connected(self) -> bool {
        !matches!(self, Provenance::User)
    }
}

/// A timelike generator K on a domain; evaluation returns u = c K / sqrt(K^2).
#[derive(Clone)]
pub struct VelocityField {
    c: f64,
    generator: Generator,
    domain: Domain,
    provenance: Provenance,
}

impl fmt::Debug for VelocityField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VelocityField").field("c", &self.c).field("provenance", &self.provenance).finish()
    }
}

impl VelocityField {
    pub fn new(
        c: f64,
        provenance: Provenance,
        generator: impl Fn(&Vec4) -> Result<Vec4> + Send + Sync + 'static,
        domain: impl Fn(&Vec4) -> bool + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(RigidError::BadParameter(format!("c = {c}")));
        }
        Ok(Self { c, generator: Arc::new(generator), domain: Arc::new(domain), provenance })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn contains(&self, p: &Vec4) -> bool {
        (self.domain)(p)
    }

    /// The un-normalised generator.
    pub fn generator(&self, p: &Vec4) -> Result<Vec4> {
        if !self.contains(p) {
            return Err(RigidError::OutsideDomain((*p).into()));
        }
        (self.generator)(p)
    }

    pub fn velocity(&self, p: &Vec4) -> Result<Vec4> {
        let k = self.generator(p)?;
        let u = normalize(&k, self.c).ok_or(RigidError::NotTimelike((*p).into()))?;
        check_normalized(&u, self.c)?;
        Ok(u)
    }

    /// Same flow lines, generator multiplied pointwise by `scale`.
    pub fn rescaled(&self, scale: impl Fn(&Vec4) -> f64 + Send + Sync + 'static) -> VelocityField {
        let inner = self.generator.clone();
        VelocityField {
            c: self.c,
            generator: Arc::new(move |p| Ok(inner(p)? * scale(p))),
            domain: self.domain.clone(),
            provenance: self.provenance,
        }
    }

    /// Whether p and the axis-aligned points at distance `margin` lie in the domain.
    pub fn interior(&self, p: &Vec4, margin: f64) -> bool {
        self.contains(p)
            && (0..4).all(|a| {
                let mut e = Vec4::zeros();
                e[a] = margin;
                self.contains(&(p + e)) && self.contains(&(p - e))
            })
    }
}

/// u = c e0 everywhere.
pub fn constant_field(c: f64) -> Result<VelocityField> {
    VelocityField::new(c, Provenance::User, |_| Ok(Vec4::new(1.0, 0.0, 0.0, 0.0)), |_| true)
}

/// K = x d_ct + ct d_x on the right wedge x > |ct|.
pub fn boost_killing_field(c: f64) -> Result<VelocityField> {
    VelocityField::new(
        c,
        Provenance::BoostKilling,
        |p| Ok(Vec4::new(p[1], p[0], 0.0, 0.0)),
        |p| p[1] > p[0].abs(),
    )
}

/// K = d_t + kappa d_phi about the z axis, i.e. (c, -kappa y, kappa x, 0) in
/// (ct, x, y, z) components, on kappa rho < c.
pub fn rotation_killing_field(kappa: f64, c: f64) -> Result<VelocityField> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(RigidError::BadParameter(format!("kappa = {kappa}")));
    }
    VelocityField::new(
        c,
        Provenance::RotationKilling,
        move |p| Ok(Vec4::new(c, -kappa * p[2], kappa * p[1], 0.0)),
        move |p| kappa * p[1].hypot(p[2]) < c,
    )
}

/// u proportional to e0 + eps (x, y, z): a Hubble-like expansion, never rigid for eps > 0.
pub fn radial_expansion_field(eps: f64, c: f64) -> Result<VelocityField> {
    VelocityField::new(
        c,
        Provenance::User,
        move |p| Ok(Vec4::new(1.0, eps * p[1], eps * p[2], eps * p[3])),
        move |p| eps * eps * (p[1] * p[1] + p[2] * p[2] + p[3] * p[3]) < 1.0,
    )
}

pub fn is_timelike(v: &Vec4) -> bool {
    square(v) > 0.0
}
