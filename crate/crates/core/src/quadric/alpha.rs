//! The fundamental cubic form: the covariant derivative of the shape
//! operator contracted with the induced metric, measured by two independent
//! routes.
//!
//! Route one differentiates the shape operator with the induced connection.
//! Route two differentiates the lifted immersion differential and pairs it
//! Hermitian-orthogonally with a rotated lifted tangent; no shape-operator
//! derivative appears. Agreement of the two is a pipeline acceptance check,
//! so they share no intermediate quantities beyond the model's point maps.

use crate::models::{Calc, Extension};
use crate::numkit::StepPolicy;
use crate::quadric::lift::{dlift, herm};
use crate::{RealVec, Result};

/// `alpha(X, Y, Z) = g0((nabla0_X A) Y, Z)` via the induced connection:
/// the tangential derivative of the field `q -> A_q(Yext(q))` minus
/// `A(nabla0_X Yext)`, paired with `Z`.
///
/// `x` and `z` are tangent vectors at the base point of `y_ext`.
pub fn alpha_via_connection(
    calc: &Calc,
    p: &RealVec,
    x: &RealVec,
    y_ext: &Extension,
    z: &RealVec,
    policy: &StepPolicy,
) -> Result<f64> {
    let d_ay = calc
        .d_along(p, x, policy, |q| {
            let yq = calc.extend(y_ext, q)?;
            calc.shape_apply(q, &yq)
        })?
        .value;
    let w1 = calc.tangent_project(p, &d_ay)?;
    let d_y = calc.d_along(p, x, policy, |q| calc.extend(y_ext, q))?.value;
    let nabla0_y = calc.tangent_project(p, &d_y)?;
    let w2 = calc.shape_apply(p, &nabla0_y)?;
    Ok((w1 - w2).dot(z))
}

/// The same cubic form via the lift:
/// `alpha(X, Y, Z) = -2 Re < d/ds dz(Zext)|_{c_X(s)}, i dz(Y) >`,
/// where `dz(V) = (V - i A V)/sqrt(2)` is the lifted differential and `c_X`
/// the projected curve with velocity `X`.
///
/// The extension enters on `Z`; `Y` is used only at the base point.
pub fn alpha_via_lift(
    calc: &Calc,
    p: &RealVec,
    x: &RealVec,
    y: &RealVec,
    z_ext: &Extension,
    policy: &StepPolicy,
) -> Result<f64> {
    let d_dz = calc
        .d_along(p, x, policy, |q| {
            let zq = calc.extend(z_ext, q)?;
            let azq = calc.shape_apply(q, &zq)?;
            Ok(dlift(&zq, &azq))
        })?
        .value;
    let ay = calc.shape_apply(p, y)?;
    let dz_y = dlift(y, &ay);
    let i = crate::Cplx::new(0.0, 1.0);
    Ok(-2.0 * herm(&d_dz, &(dz_y * i)).re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{jet, load_model, sample_points, SurfaceJet};

    fn setup(name: &str, seed: u64) -> (crate::models::Model, SurfaceJet) {
        let model = load_model(name).unwrap();
        let j = {
            let pm = model.as_point().unwrap();
            let angles = model.angles().unwrap();
            let p = sample_points(pm, 1, seed).unwrap()[0].coords.clone();
            jet(pm, &angles, &p).unwrap()
        };
        (model, j)
    }

    #[test]
    fn both_routes_vanish_on_product() {
        // The product model is parallel: its shape operator is covariantly
        // constant, so the cubic form is identically zero.
        let (model, j) = setup("g2-product", 19);
        let calc = Calc::new(model.as_point().unwrap());
        let policy = StepPolicy::first_derivative();
        let x = j.frame_column(0);
        let y = j.frame_column(1);
        let ye = Extension::projected(j.point.clone(), y.clone());
        let a1 = alpha_via_connection(&calc, &j.point, &x, &ye, &y, &policy).unwrap();
        assert!(a1.abs() < 1e-7, "connection route {a1}");
        let a2 = alpha_via_lift(&calc, &j.point, &x, &y, &ye, &policy).unwrap();
        assert!(a2.abs() < 1e-7, "lift route {a2}");
    }

    #[test]
    fn routes_agree_on_cartan() {
        let (model, j) = setup("g3-cartan", 23);
        let calc = Calc::new(model.as_point().unwrap());
        let policy = StepPolicy::first_derivative();
        let mut max_dev = 0.0f64;
        let mut max_val = 0.0f64;
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    let x = j.frame_column(a);
                    let y = j.frame_column(b);
                    let z = j.frame_column(c);
                    let ye = Extension::projected(j.point.clone(), y.clone());
                    let ze = Extension::projected(j.point.clone(), z.clone());
                    let v1 = alpha_via_connection(&calc, &j.point, &x, &ye, &z, &policy).unwrap();
                    let v2 = alpha_via_lift(&calc, &j.point, &x, &y, &ze, &policy).unwrap();
                    max_dev = max_dev.max((v1 - v2).abs());
                    max_val = max_val.max(v1.abs());
                }
            }
        }
        assert!(max_dev < 1e-6, "routes deviate by {max_dev}");
        // The Cartan surface is not parallel: the form is nonzero.
        assert!(max_val > 0.5, "cubic form unexpectedly small: {max_val}");
    }

    #[test]
    fn tensorial_in_the_extended_slot() {
        let (model, j) = setup("g3-cartan", 31);
        let calc = Calc::new(model.as_point().unwrap());
        let policy = StepPolicy::first_derivative();
        let x = j.frame_column(0);
        let y = j.frame_column(1);
        let z = j.frame_column(2);
        let tilt = RealVec::from_vec(vec![0.4, -0.2, 0.9, 0.3, -0.6]);
        let ye1 = Extension::projected(j.point.clone(), y.clone());
        let ye2 = Extension::tilted(j.point.clone(), y.clone(), tilt.clone());
        let v1 = alpha_via_connection(&calc, &j.point, &x, &ye1, &z, &policy).unwrap();
        let v2 = alpha_via_connection(&calc, &j.point, &x, &ye2, &z, &policy).unwrap();
        assert!((v1 - v2).abs() < 1e-6, "connection route extension dependence {}", (v1 - v2).abs());

        let ze1 = Extension::projected(j.point.clone(), z.clone());
        let ze2 = Extension::tilted(j.point.clone(), z.clone(), tilt);
        let w1 = alpha_via_lift(&calc, &j.point, &x, &y, &ze1, &policy).unwrap();
        let w2 = alpha_via_lift(&calc, &j.point, &x, &y, &ze2, &policy).unwrap();
        assert!((w1 - w2).abs() < 1e-6, "lift route extension dependence {}", (w1 - w2).abs());
    }
}
