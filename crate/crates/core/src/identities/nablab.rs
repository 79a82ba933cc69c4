//! Derivative rule for the Cayley transform along the surface: the
//! covariant derivative of the transformed shape operator contracts
//! against the cubic form with a factor `−i/2`,
//!
//! ```text
//! gh((∇_X B) Y, Z) = −(i/2) { α(X, B Y, Z) + α(X, Y, B Z) }.
//! ```
//!
//! The left side is measured with no spectral shortcuts: the field
//! `q ↦ B_q Ỹ(q)` is evaluated through the pointwise resolvent solve and
//! differentiated with the Koszul connection of the modified metric.

use super::Residual;
use crate::models::{Calc, Extension, SurfaceJet};
use crate::numkit::StepPolicy;
use crate::quadric::{
    cayley_apply_at, complexify_vec, eframe_scales, ghat_value, nabla_ghat, nabla_ghat_field,
    FnField, InvariantSet,
};
use crate::{Cplx, CplxVec, RealVec, Result};

/// Right side on the gh-orthonormal eigenframe, where `B` is diagonal:
/// `−(i/2)(μ_b + μ_c) α(e_a, e_b, e_c)`.
pub fn nabla_b_rhs(inv: &InvariantSet, a: usize, b: usize, c: usize) -> Cplx {
    Cplx::new(0.0, -0.5) * (inv.mu(b) + inv.mu(c)) * inv.alpha(a, b, c)
}

/// Finite-difference check of the derivative rule at one surface point,
/// maximized over all frame triples `(a, b, c)`.
pub fn nabla_b_check(
    calc: &Calc,
    jet: &SurfaceJet,
    inv: &InvariantSet,
    tol: f64,
) -> Result<Residual> {
    let n = jet.n();
    let dim = jet.ambient_dim();
    let scales = eframe_scales(jet);
    let cols: Vec<RealVec> = (0..n).map(|c| jet.frame_column(c) * scales[c]).collect();
    let p = &jet.point;
    let policy = StepPolicy::first_derivative();

    let mut worst: f64 = -1.0;
    let mut ctx = String::new();
    for b in 0..n {
        // V(q) = B_q Ỹ_b(q): the Cayley image of the projected extension.
        let value_of = |q: &RealVec| -> Result<CplxVec> {
            let y = calc.tangent_project(q, &cols[b])?;
            cayley_apply_at(calc, q, &complexify_vec(&y))
        };
        let field_re = FnField(|q: &RealVec| Ok(value_of(q)?.map(|z| z.re)));
        let field_im = FnField(|q: &RealVec| Ok(value_of(q)?.map(|z| z.im)));
        for a in 0..n {
            let dv_re = nabla_ghat_field(calc, p, &cols[a], &field_re, &policy)?;
            let dv_im = nabla_ghat_field(calc, p, &cols[a], &field_im, &policy)?;
            // B_p ∇_X Ỹ, using that B_p acts on the eigenframe by phases.
            let nxy = nabla_ghat(
                calc,
                p,
                &cols[a],
                &Extension::projected(p.clone(), cols[b].clone()),
                &policy,
            )?;
            let f_coords = jet.pull(&nxy);
            let mut b_nxy = CplxVec::zeros(dim);
            for k in 0..n {
                let coeff = inv.mu(k) * (f_coords[k] / scales[k]);
                b_nxy += complexify_vec(&cols[k]) * coeff;
            }
            let lv_re = dv_re - b_nxy.map(|z| z.re);
            let lv_im = dv_im - b_nxy.map(|z| z.im);
            #[allow(clippy::needless_range_loop)] // `c` is both a frame index into cols and a tensor slot
            for c in 0..n {
                let lhs = Cplx::new(
                    ghat_value(calc, p, &lv_re, &cols[c])?,
                    ghat_value(calc, p, &lv_im, &cols[c])?,
                );
                let dev = (lhs - nabla_b_rhs(inv, a, b, c)).norm();
                if dev > worst {
                    worst = dev;
                    ctx = format!("triple=({a},{b},{c})");
                }
            }
        }
    }
    Ok(Residual::new("nabla-b", worst, tol).with_context(ctx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{jet, load_model, sample_points, Calc};

    #[test]
    fn threefold_family_satisfies_the_rule() {
        let model = load_model("g3-cartan").unwrap();
        let pm = model.as_point().unwrap();
        let angles = model.angles().unwrap();
        let calc = Calc::new(pm);
        let p = sample_points(pm, 1, 37).unwrap()[0].coords.clone();
        let j = jet(pm, &angles, &p).unwrap();
        let inv =
            InvariantSet::measure(&calc, &j, &angles, &StepPolicy::first_derivative()).unwrap();
        // Frozen magnitude for the fully mixed triple: |μ_1 + μ_2| = 1 and
        // |α(0,1,2)| = sqrt(3/2), so |rhs(0,1,2)| = sqrt(3/2)/2.
        let mag = nabla_b_rhs(&inv, 0, 1, 2).norm();
        assert!(
            (mag - 0.5 * (1.5f64).sqrt()).abs() < 1e-5,
            "|rhs(0,1,2)| = {mag}"
        );
        let r = nabla_b_check(&calc, &j, &inv, 1e-4).unwrap();
        assert!(r.pass(), "{r}");
    }

    #[test]
    fn twofold_family_has_parallel_transform() {
        let model = load_model("g2-product").unwrap();
        let pm = model.as_point().unwrap();
        let angles = model.angles().unwrap();
        let calc = Calc::new(pm);
        let p = sample_points(pm, 1, 43).unwrap()[0].coords.clone();
        let j = jet(pm, &angles, &p).unwrap();
        let inv =
            InvariantSet::measure(&calc, &j, &angles, &StepPolicy::first_derivative()).unwrap();
        let r = nabla_b_check(&calc, &j, &inv, 1e-8).unwrap();
        assert!(r.pass(), "{r}");
    }
}
