//! Pointwise calculus on a model surface: projection-based curves, tangent
//! vector field extensions, directional derivatives of fields along the
//! surface, and the shape operator as an ambient operator.
//!
//! Everything here is single-level differencing: the ingredients (normal
//! field, its derivative, projections) are analytic, so first-order tensors
//! built from them need one difference quotient only.

use crate::models::PointModel;
use crate::numkit::{fd_dir, FdResult, FdValue, StepPolicy};
use crate::{RealVec, Result};

/// Calculus helper bound to one point model.
#[derive(Clone, Copy)]
pub struct Calc<'m> {
    model: &'m dyn PointModel,
}

/// A tangent vector field defined near a base point, equal to `value` there.
///
/// The field is the surface-tangential projection of the constant ambient
/// vector, optionally rescaled by the affine weight `1 + <q - base, tilt>`.
/// Distinct tilts give genuinely different extensions of the same tangent
/// vector, which is what extension-independence checks need.
#[derive(Debug, Clone)]
pub struct Extension {
    base: RealVec,
    value: RealVec,
    tilt: Option<RealVec>,
}

impl Extension {
    pub fn projected(base: RealVec, value: RealVec) -> Self {
        Extension { base, value, tilt: None }
    }

    pub fn tilted(base: RealVec, value: RealVec, tilt: RealVec) -> Self {
        Extension { base, value, tilt: Some(tilt) }
    }

    pub fn value(&self) -> &RealVec {
        &self.value
    }
}

impl<'m> Calc<'m> {
    pub fn new(model: &'m dyn PointModel) -> Self {
        Calc { model }
    }

    pub fn model(&self) -> &'m dyn PointModel {
        self.model
    }

    /// Removes the components along the point and the normal, leaving the
    /// surface-tangential part.
    pub fn tangent_project(&self, q: &RealVec, w: &RealVec) -> Result<RealVec> {
        let nu = self.model.normal_field(q)?;
        let mut out = w - q * w.dot(q);
        out -= &nu * nu.dot(&out);
        Ok(out)
    }

    /// Shape operator as an ambient operator: `A v = -(D_v nu)` projected
    /// tangent to the sphere at `q`.
    pub fn shape_apply(&self, q: &RealVec, v: &RealVec) -> Result<RealVec> {
        let dnu = self.model.dnormal(q, v)?;
        Ok(q * dnu.dot(q) - dnu)
    }

    /// Evaluates the extension field at a nearby surface point.
    pub fn extend(&self, ext: &Extension, q: &RealVec) -> Result<RealVec> {
        let mut out = self.tangent_project(q, &ext.value)?;
        if let Some(tilt) = &ext.tilt {
            out *= 1.0 + (q - &ext.base).dot(tilt);
        }
        Ok(out)
    }

    /// Derivative at `s = 0` of `field` along the projected curve
    /// `s -> project(p + s v)`.
    pub fn d_along<V, F>(
        &self,
        p: &RealVec,
        v: &RealVec,
        policy: &StepPolicy,
        field: F,
    ) -> Result<FdResult<V>>
    where
        V: FdValue<f64>,
        F: Fn(&RealVec) -> Result<V>,
    {
        fd_dir(
            |s| {
                let q = self.model.project(&(p + v * s))?;
                field(&q)
            },
            0.0,
            policy,
        )
    }

    /// Induced-metric covariant derivative of an extension field:
    /// the surface-tangential part of the ambient derivative along the curve.
    pub fn nabla0(
        &self,
        p: &RealVec,
        v: &RealVec,
        ext: &Extension,
        policy: &StepPolicy,
    ) -> Result<RealVec> {
        let d = self.d_along(p, v, policy, |q| self.extend(ext, q))?;
        self.tangent_project(p, &d.value)
    }
}
