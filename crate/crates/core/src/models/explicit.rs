//! Explicitly parametrized model surfaces: geodesic spheres and products of
//! two spheres, both with closed-form projection and normal field.

use crate::error::IsoError;
use crate::models::{ModelSpec, PointModel};
use crate::{RealVec, Result};

/// Geodesic sphere of radius angle `r`:
/// `{ (sin r * u, cos r) : u in S^n }` inside the unit sphere of `R^{n+2}`.
///
/// Umbilic with shape operator `cot(r) I`; the middle member of its family
/// is the equator `r = pi/2`.
#[derive(Debug, Clone)]
pub struct SphereModel {
    spec: ModelSpec,
    radius_angle: f64,
}

impl SphereModel {
    pub fn new(spec: ModelSpec, radius_angle: f64) -> Result<Self> {
        if spec.g != 1 {
            return Err(IsoError::ModelConsistency {
                model: spec.name,
                reason: "geodesic sphere has one distinct curvature".into(),
            });
        }
        if !(radius_angle > 0.0 && radius_angle < std::f64::consts::PI) {
            return Err(IsoError::Config(format!(
                "radius angle must lie in (0, pi), got {radius_angle}"
            )));
        }
        Ok(SphereModel { spec, radius_angle })
    }

    fn split(&self, y: &RealVec) -> (RealVec, f64) {
        let n1 = self.spec.n + 1;
        (y.rows(0, n1).into_owned(), y[n1])
    }
}

impl PointModel for SphereModel {
    fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    fn project(&self, y: &RealVec) -> Result<RealVec> {
        if y.len() != self.spec.n + 2 {
            return Err(IsoError::Dimension {
                context: "projection seed",
                expected: self.spec.n + 2,
                got: y.len(),
            });
        }
        let (head, _) = self.split(y);
        let hn = head.norm();
        if hn < 1e-10 {
            return Err(IsoError::Projection {
                model: self.spec.name.clone(),
                residual: f64::INFINITY,
                iters: 0,
            });
        }
        let mut x = RealVec::zeros(self.spec.n + 2);
        x.rows_mut(0, self.spec.n + 1)
            .copy_from(&(head * (self.radius_angle.sin() / hn)));
        x[self.spec.n + 1] = self.radius_angle.cos();
        Ok(x)
    }

    /// `nu = (-cos r * u, sin r)` with `u = head/|head|`, smooth off-surface.
    fn normal_field(&self, x: &RealVec) -> Result<RealVec> {
        let (head, _) = self.split(x);
        let hn = head.norm();
        if hn < 1e-10 {
            return Err(IsoError::Sampling {
                model: self.spec.name.clone(),
                reason: "normal field degenerate on the polar axis".into(),
            });
        }
        let mut nu = RealVec::zeros(self.spec.n + 2);
        nu.rows_mut(0, self.spec.n + 1)
            .copy_from(&(head * (-self.radius_angle.cos() / hn)));
        nu[self.spec.n + 1] = self.radius_angle.sin();
        Ok(nu)
    }

    fn dnormal(&self, x: &RealVec, v: &RealVec) -> Result<RealVec> {
        let (head, _) = self.split(x);
        let hn = head.norm();
        if hn < 1e-10 {
            return Err(IsoError::Sampling {
                model: self.spec.name.clone(),
                reason: "normal derivative degenerate on the polar axis".into(),
            });
        }
        let u = head / hn;
        let vh = v.rows(0, self.spec.n + 1).into_owned();
        let du = (&vh - &u * u.dot(&vh)) / hn;
        let mut out = RealVec::zeros(self.spec.n + 2);
        out.rows_mut(0, self.spec.n + 1)
            .copy_from(&(du * (-self.radius_angle.cos())));
        Ok(out)
    }
}

/// Product of two round spheres:
/// `{ (cos q * u, sin q * v) : u in S^{d0}, v in S^{d1} }` with split angle
/// `q`; principal curvatures `tan q` (multiplicity `d0`) and `-cot q`
/// (multiplicity `d1`). The middle member has `q = pi/4`.
#[derive(Debug, Clone)]
pub struct ProductModel {
    spec: ModelSpec,
    split_angle: f64,
    d0: usize,
}

impl ProductModel {
    pub fn new(spec: ModelSpec, split_angle: f64) -> Result<Self> {
        if spec.g != 2 || spec.multiplicities.len() != 2 {
            return Err(IsoError::ModelConsistency {
                model: spec.name,
                reason: "product model has two distinct curvatures".into(),
            });
        }
        if !(split_angle > 0.0 && split_angle < std::f64::consts::FRAC_PI_2) {
            return Err(IsoError::Config(format!(
                "split angle must lie in (0, pi/2), got {split_angle}"
            )));
        }
        let d0 = spec.multiplicities[0];
        Ok(ProductModel { spec, split_angle, d0 })
    }

    /// Head block `R^{d0+1}`, tail block `R^{d1+1}`.
    fn blocks(&self, y: &RealVec) -> (RealVec, RealVec) {
        let h = self.d0 + 1;
        (y.rows(0, h).into_owned(), y.rows(h, y.len() - h).into_owned())
    }

    fn assemble(&self, head: &RealVec, tail: &RealVec) -> RealVec {
        let mut out = RealVec::zeros(self.spec.n + 2);
        out.rows_mut(0, head.len()).copy_from(head);
        out.rows_mut(head.len(), tail.len()).copy_from(tail);
        out
    }
}

impl PointModel for ProductModel {
    fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    fn project(&self, y: &RealVec) -> Result<RealVec> {
        if y.len() != self.spec.n + 2 {
            return Err(IsoError::Dimension {
                context: "projection seed",
                expected: self.spec.n + 2,
                got: y.len(),
            });
        }
        let (head, tail) = self.blocks(y);
        let (hn, tn) = (head.norm(), tail.norm());
        if hn < 1e-10 || tn < 1e-10 {
            return Err(IsoError::Projection {
                model: self.spec.name.clone(),
                residual: f64::INFINITY,
                iters: 0,
            });
        }
        Ok(self.assemble(
            &(head * (self.split_angle.cos() / hn)),
            &(tail * (self.split_angle.sin() / tn)),
        ))
    }

    /// `nu = (-sin q * u, cos q * v)`, smooth off-surface.
    fn normal_field(&self, x: &RealVec) -> Result<RealVec> {
        let (head, tail) = self.blocks(x);
        let (hn, tn) = (head.norm(), tail.norm());
        if hn < 1e-10 || tn < 1e-10 {
            return Err(IsoError::Sampling {
                model: self.spec.name.clone(),
                reason: "normal field degenerate where a block vanishes".into(),
            });
        }
        Ok(self.assemble(
            &(head * (-self.split_angle.sin() / hn)),
            &(tail * (self.split_angle.cos() / tn)),
        ))
    }

    fn dnormal(&self, x: &RealVec, v: &RealVec) -> Result<RealVec> {
        let (head, tail) = self.blocks(x);
        let (vh, vt) = self.blocks(v);
        let (hn, tn) = (head.norm(), tail.norm());
        if hn < 1e-10 || tn < 1e-10 {
            return Err(IsoError::Sampling {
                model: self.spec.name.clone(),
                reason: "normal derivative degenerate where a block vanishes".into(),
            });
        }
        let u = head / hn;
        let w = tail / tn;
        let du = (&vh - &u * u.dot(&vh)) / hn;
        let dw = (&vt - &w * w.dot(&vt)) / tn;
        Ok(self.assemble(
            &(du * (-self.split_angle.sin())),
            &(dw * self.split_angle.cos()),
        ))
    }
}
