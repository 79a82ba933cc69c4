//! Reflection symmetries of the cubic form: the focal reflections map the
//! middle family member to itself and reverse the sign of the cubic form,
//! and two reflections compose to a symmetry preserving it.

use super::Residual;
use crate::family::{AngleData, Reflection};
use crate::models::{Calc, Extension, SurfaceJet};
use crate::numkit::StepPolicy;
use crate::quadric::{alpha_via_connection, eframe_scales, InvariantSet};
use crate::{RealVec, Result};

/// Measured cubic form at `q` on three ambient tangent vectors, through
/// the connection route.
fn alpha_at(
    calc: &Calc,
    q: &RealVec,
    x: &RealVec,
    y: &RealVec,
    z: &RealVec,
    policy: &StepPolicy,
) -> Result<f64> {
    alpha_via_connection(
        calc,
        q,
        x,
        &Extension::projected(q.clone(), y.clone()),
        z,
        policy,
    )
}

/// Sign reversal of the cubic form under the reflection through the focal
/// set at angle `θ_j`: for every frame triple,
///
/// ```text
/// α_{τ_j(p)}(dτ_j e_a, dτ_j e_b, dτ_j e_c) + α_p(e_a, e_b, e_c) = 0,
/// ```
///
/// with `dτ_j e_a = (cos 2θ_j − λ_a sin 2θ_j) e_a` as ambient vectors.
/// Both evaluations use the model's one global normal field, so no
/// orientation bookkeeping enters the statement.
pub fn symmetry_check(
    calc: &Calc,
    jet: &SurfaceJet,
    inv: &InvariantSet,
    angles: &AngleData,
    j: usize,
    policy: &StepPolicy,
    tol: f64,
) -> Result<Residual> {
    let n = jet.n();
    let refl = Reflection::new(angles, j);
    let nu = calc.model().normal_field(&jet.point)?;
    let (q_img, _) = refl.apply(&jet.point, &nu);
    let q_img = calc.model().project(&q_img)?;
    let scales = eframe_scales(jet);
    let (s2, c2) = refl.two_theta.sin_cos();
    let pushed: Vec<RealVec> = (0..n)
        .map(|c| jet.frame_column(c) * (scales[c] * (c2 - jet.lambdas[c] * s2)))
        .collect();

    let mut worst: f64 = -1.0;
    let mut ctx = String::new();
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                let img = alpha_at(calc, &q_img, &pushed[a], &pushed[b], &pushed[c], policy)?;
                let dev = (img + inv.alpha(a, b, c)).abs();
                if dev > worst {
                    worst = dev;
                    ctx = format!("j={j} triple=({a},{b},{c})");
                }
            }
        }
    }
    Ok(Residual::new(format!("symmetry-tau{j}"), worst, tol).with_context(ctx))
}

/// The reflection applied twice returns both the point and the transported
/// normal: `τ_j` is an involution of the normal geodesic flow.
pub fn involution_check(
    angles: &AngleData,
    j: usize,
    point: &RealVec,
    normal: &RealVec,
    tol: f64,
) -> Residual {
    let refl = Reflection::new(angles, j);
    let (q1, nu1) = refl.apply(point, normal);
    let (q2, nu2) = refl.apply(&q1, &nu1);
    let dev = (q2 - point).norm() + (nu2 - normal).norm();
    Residual::new("symmetry-involution", dev, tol).with_context(format!("j={j}"))
}

/// Two reflections compose to a symmetry that preserves the cubic form:
///
/// ```text
/// α_{τ_{j2} τ_{j1} (p)}(dτ dτ e_a, ..., ...) = α_p(e_a, e_b, e_c).
/// ```
///
/// The second differential needs the shape operator at the intermediate
/// point, applied as an ambient operator through the model's normal field.
#[allow(clippy::too_many_arguments)]
pub fn symmetry_composition_check(
    calc: &Calc,
    jet: &SurfaceJet,
    inv: &InvariantSet,
    angles: &AngleData,
    j1: usize,
    j2: usize,
    policy: &StepPolicy,
    tol: f64,
) -> Result<Residual> {
    let n = jet.n();
    let scales = eframe_scales(jet);
    let r1 = Reflection::new(angles, j1);
    let r2 = Reflection::new(angles, j2);
    // First reflection: frame vectors scale by their eigenfactor.
    let nu = calc.model().normal_field(&jet.point)?;
    let (q1_raw, _) = r1.apply(&jet.point, &nu);
    let q1 = calc.model().project(&q1_raw)?;
    let (s1, c1) = r1.two_theta.sin_cos();
    let mid: Vec<RealVec> = (0..n)
        .map(|c| jet.frame_column(c) * (scales[c] * (c1 - jet.lambdas[c] * s1)))
        .collect();
    // Second reflection from the intermediate point, with the model field.
    let nu1 = calc.model().normal_field(&q1)?;
    let (q2_raw, _) = r2.apply(&q1, &nu1);
    let q2 = calc.model().project(&q2_raw)?;
    let (s2, c2) = r2.two_theta.sin_cos();
    let mut pushed: Vec<RealVec> = Vec::with_capacity(n);
    for v in &mid {
        let av = calc.shape_apply(&q1, v)?;
        pushed.push(v * c2 - av * s2);
    }

    let mut worst: f64 = -1.0;
    let mut ctx = String::new();
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                let img = alpha_at(calc, &q2, &pushed[a], &pushed[b], &pushed[c], policy)?;
                let dev = (img - inv.alpha(a, b, c)).abs();
                if dev > worst {
                    worst = dev;
                    ctx = format!("j1={j1} j2={j2} triple=({a},{b},{c})");
                }
            }
        }
    }
    Ok(Residual::new("symmetry-composition", worst, tol).with_context(ctx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{jet, load_model, sample_points, Calc};

    fn cartan_setup(
        seed: u64,
    ) -> (
        Calc<'static>,
        SurfaceJet,
        InvariantSet,
        AngleData,
    ) {
        let model = Box::leak(Box::new(load_model("g3-cartan").unwrap()));
        let pm = model.as_point().unwrap();
        let angles = model.angles().unwrap();
        let calc = Calc::new(pm);
        let p = sample_points(pm, 1, seed).unwrap()[0].coords.clone();
        let j = jet(pm, &angles, &p).unwrap();
        let inv =
            InvariantSet::measure(&calc, &j, &angles, &StepPolicy::first_derivative()).unwrap();
        (calc, j, inv, angles)
    }

    #[test]
    fn reflections_reverse_the_cubic_form() {
        let (calc, j, inv, angles) = cartan_setup(47);
        let policy = StepPolicy::first_derivative();
        for refl_idx in 0..3 {
            let r = symmetry_check(&calc, &j, &inv, &angles, refl_idx, &policy, 1e-5).unwrap();
            assert!(r.pass(), "{r}");
        }
    }

    #[test]
    fn reflections_are_involutions() {
        let (calc, j, _, angles) = cartan_setup(53);
        let nu = calc.model().normal_field(&j.point).unwrap();
        for refl_idx in 0..3 {
            let r = involution_check(&angles, refl_idx, &j.point, &nu, 1e-12);
            assert!(r.pass(), "{r}");
        }
    }

    #[test]
    fn double_reflection_preserves_the_cubic_form() {
        let (calc, j, inv, angles) = cartan_setup(59);
        let policy = StepPolicy::first_derivative();
        let r =
            symmetry_composition_check(&calc, &j, &inv, &angles, 0, 1, &policy, 1e-4).unwrap();
        assert!(r.pass(), "{r}");
        // Composing a reflection with itself is the identity on the form.
        let r_same =
            symmetry_composition_check(&calc, &j, &inv, &angles, 2, 2, &policy, 1e-4).unwrap();
        assert!(r_same.pass(), "{r_same}");
    }
}
