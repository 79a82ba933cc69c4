//! The modified metric `gh(X, Y) = (g0(X,Y) + g0(A X, A Y))/2` and its
//! Levi-Civita connection computed by difference-quotient Koszul formula.
//!
//! The connection here deliberately uses only metric derivatives and
//! brackets; the alternative closed-form relation to the induced connection
//! is checked elsewhere and must stay an independent route.

use crate::error::IsoError;
use crate::models::{Calc, Extension, SurfaceJet};
use crate::numkit::StepPolicy;
use crate::{RealMat, RealVec, Result};

/// Modified metric matrix in a g0-orthonormal principal frame:
/// diagonal with entries `(1 + lambda_c^2)/2`.
pub fn ghat_matrix(jet: &SurfaceJet) -> RealMat {
    RealMat::from_diagonal(&RealVec::from_iterator(
        jet.n(),
        jet.lambdas.iter().map(|l| (1.0 + l * l) / 2.0),
    ))
}

/// Scale factors turning the principal frame into a gh-orthonormal one:
/// `e_c = scale_c f_c` with `scale_c = sqrt(2/(1+lambda_c^2))`.
pub fn eframe_scales(jet: &SurfaceJet) -> Vec<f64> {
    jet.lambdas.iter().map(|l| (2.0 / (1.0 + l * l)).sqrt()).collect()
}

/// Modified metric of two ambient tangent vectors at a surface point.
pub fn ghat_value(calc: &Calc, q: &RealVec, v: &RealVec, w: &RealVec) -> Result<f64> {
    let av = calc.shape_apply(q, v)?;
    let aw = calc.shape_apply(q, w)?;
    Ok((v.dot(w) + av.dot(&aw)) / 2.0)
}

/// A tangent vector field defined near a surface point, evaluated pointwise.
///
/// The connection routines only need field values along short projected
/// curves; anything that produces a tangent vector at nearby surface points
/// qualifies — extension fields, frame fields, or operator-valued fields
/// applied to them.
pub trait TangentField {
    fn at(&self, calc: &Calc, q: &RealVec) -> Result<RealVec>;
}

impl TangentField for Extension {
    fn at(&self, calc: &Calc, q: &RealVec) -> Result<RealVec> {
        calc.extend(self, q)
    }
}

/// Closure-backed tangent field.
pub struct FnField<F>(pub F)
where
    F: Fn(&RealVec) -> Result<RealVec>;

impl<F> TangentField for FnField<F>
where
    F: Fn(&RealVec) -> Result<RealVec>,
{
    fn at(&self, _calc: &Calc, q: &RealVec) -> Result<RealVec> {
        (self.0)(q)
    }
}

/// Lie bracket of two tangent fields at `q`, surface-tangential part.
pub fn bracket_fields(
    calc: &Calc,
    q: &RealVec,
    a: &dyn TangentField,
    b: &dyn TangentField,
    policy: &StepPolicy,
) -> Result<RealVec> {
    let av = a.at(calc, q)?;
    let bv = b.at(calc, q)?;
    let dab = calc.d_along(q, &av, policy, |r| b.at(calc, r))?.value;
    let dba = calc.d_along(q, &bv, policy, |r| a.at(calc, r))?.value;
    calc.tangent_project(q, &(dab - dba))
}

/// Lie bracket of two extension fields at `q`, surface-tangential part.
pub fn bracket(
    calc: &Calc,
    q: &RealVec,
    a: &Extension,
    b: &Extension,
    policy: &StepPolicy,
) -> Result<RealVec> {
    bracket_fields(calc, q, a, b, policy)
}

/// Covariant derivative of the modified metric's Levi-Civita connection:
/// `nabla_X Y` at `q`, where `X` is a tangent vector at `q` and `Y` is an
/// extension field. Returns the ambient tangent vector.
///
/// Computed from the Koszul formula with difference quotients: metric terms
/// along projected curves, brackets of extension fields, and a solve against
/// the metric Gram matrix of a local frame.
pub fn nabla_ghat(
    calc: &Calc,
    q: &RealVec,
    x: &RealVec,
    y_ext: &Extension,
    policy: &StepPolicy,
) -> Result<RealVec> {
    nabla_ghat_field(calc, q, x, y_ext, policy)
}

/// [`nabla_ghat`] for an arbitrary tangent field `Y`.
pub fn nabla_ghat_field(
    calc: &Calc,
    q: &RealVec,
    x: &RealVec,
    y_field: &dyn TangentField,
    policy: &StepPolicy,
) -> Result<RealVec> {
    let n = calc.model().spec().n;
    let dim = calc.model().ambient_dim();

    // Local test frame: tangent-projected coordinate directions, pruned to n
    // independent ones by Gram-Schmidt (in the induced metric for stability).
    let mut test: Vec<RealVec> = Vec::with_capacity(n);
    let mut onb: Vec<RealVec> = Vec::with_capacity(n);
    for k in 0..dim {
        if test.len() == n {
            break;
        }
        let mut e = RealVec::zeros(dim);
        e[k] = 1.0;
        let w = calc.tangent_project(q, &e)?;
        let mut r = w.clone();
        for b in &onb {
            r -= b * b.dot(&r);
        }
        if r.norm() > 1e-6 {
            onb.push(r.normalize());
            test.push(w);
        }
    }
    if test.len() != n {
        return Err(IsoError::Config(
            "local test frame construction failed".into(),
        ));
    }

    let x_ext = Extension::projected(q.clone(), x.clone());
    let y0 = y_field.at(calc, q)?;
    let xy_bracket = bracket_fields(calc, q, &x_ext, y_field, policy)?;

    let mut rhs = RealVec::zeros(n);
    let mut gram = RealMat::zeros(n, n);
    for (k, zk) in test.iter().enumerate() {
        let z_ext = Extension::projected(q.clone(), zk.clone());
        // X g(Y, Z)
        let t1 = calc
            .d_along(q, x, policy, |r| {
                let yv = y_field.at(calc, r)?;
                let zv = calc.extend(&z_ext, r)?;
                ghat_value(calc, r, &yv, &zv)
            })?
            .value;
        // Y g(X, Z)
        let t2 = calc
            .d_along(q, &y0, policy, |r| {
                let xv = calc.extend(&x_ext, r)?;
                let zv = calc.extend(&z_ext, r)?;
                ghat_value(calc, r, &xv, &zv)
            })?
            .value;
        // Z g(X, Y)
        let t3 = calc
            .d_along(q, zk, policy, |r| {
                let xv = calc.extend(&x_ext, r)?;
                let yv = y_field.at(calc, r)?;
                ghat_value(calc, r, &xv, &yv)
            })?
            .value;
        let xz_bracket = bracket(calc, q, &x_ext, &z_ext, policy)?;
        let yz_bracket = bracket_fields(calc, q, y_field, &z_ext, policy)?;
        rhs[k] = 0.5
            * (t1 + t2 - t3 + ghat_value(calc, q, &xy_bracket, zk)?
                - ghat_value(calc, q, &xz_bracket, &y0)?
                - ghat_value(calc, q, &yz_bracket, x)?);
        for (l, zl) in test.iter().enumerate() {
            gram[(k, l)] = ghat_value(calc, q, zk, zl)?;
        }
    }
    let coeffs = gram
        .lu()
        .solve(&rhs)
        .ok_or_else(|| IsoError::Config("metric Gram matrix is singular".into()))?;
    let mut out = RealVec::zeros(dim);
    for (l, zl) in test.iter().enumerate() {
        out += zl * coeffs[l];
    }
    Ok(out)
}
