//! Curvature forms of the ambient complex quadric restricted to lifted
//! tangent planes, and their algebraic match with the frame-level forms.
//!
//! On a lifted tangent plane the Hermitian metric restricts to the modified
//! metric, the Kaehler form vanishes, and the quadric's holomorphic second
//! fundamental form restricts to minus the Cayley pairing. Assembling the
//! standard curvature expression of the quadric out of measured lift data
//! must therefore reproduce the Kulkarni-Nomizu combination of the modified
//! metric and the Cayley pairing.

use crate::models::SurfaceJet;
use crate::numkit::{kn_skew, kn_sym};
use crate::quadric::cayley::{b_operator, complexify};
use crate::quadric::ghat::ghat_matrix;
use crate::quadric::lift::{bilin, dlift_col, herm};
use crate::{Cplx, CplxMat, CplxVec, RealMat, Result};

/// Measured restriction data of the quadric forms on lifted frame columns.
pub struct LiftForms {
    /// `Re <dz_a, dz_b>`: the restricted Hermitian metric.
    pub metric: RealMat,
    /// `-Im <dz_a, dz_b>`: the restricted Kaehler form.
    pub kaehler: RealMat,
    /// `sum_k (dz_a)_k (dz_b)_k`: the restricted holomorphic quadratic form.
    pub quadratic: CplxMat,
}

/// Computes the three restricted forms from the lifted frame at a jet.
pub fn lift_forms(jet: &SurfaceJet) -> LiftForms {
    let n = jet.n();
    let lifted: Vec<CplxVec> = (0..n).map(|c| dlift_col(jet, c)).collect();
    let mut metric = RealMat::zeros(n, n);
    let mut kaehler = RealMat::zeros(n, n);
    let mut quadratic = CplxMat::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            let h = herm(&lifted[a], &lifted[b]);
            metric[(a, b)] = h.re;
            kaehler[(a, b)] = -h.im;
            quadratic[(a, b)] = bilin(&lifted[a], &lifted[b]);
        }
    }
    LiftForms { metric, kaehler, quadratic }
}

/// Residuals of the quadric-restriction identities at a jet, maxima over all
/// frame index tuples:
/// - `metric-match`: restricted metric vs modified metric,
/// - `kaehler-vanishes`: Lagrangian condition,
/// - `quadratic-match`: holomorphic form vs minus the Cayley pairing,
/// - `curvature-assembly`: Kulkarni-Nomizu assembly from measured lift data
///   vs the frame-level reference combination.
pub fn quadric_residuals(jet: &SurfaceJet, cluster_tol: f64) -> Result<Vec<(&'static str, f64)>> {
    let n = jet.n();
    let forms = lift_forms(jet);
    let ghat = ghat_matrix(jet);
    let b0 = b_operator(&jet.a0, cluster_tol)?;

    let metric_res = (&forms.metric - &ghat).amax();
    let kaehler_res = forms.kaehler.amax();

    // b(x, y) = gh(B x, y) has form matrix B^T G; quadratic form must be -b.
    let b_form_mat = b0.transpose() * complexify(&ghat);
    let quad_res = (&forms.quadratic + &b_form_mat).norm();

    // Curvature assembly on coordinate vectors of the frame.
    let gq = complexify(&forms.metric);
    let quad_conj = forms.quadratic.map(|e| e.conj());
    let ghat_c = complexify(&ghat);
    let b_conj = b_form_mat.map(|e| e.conj());
    let mut assembly_res = 0.0f64;
    let unit = |a: usize| {
        let mut v = CplxVec::zeros(n);
        v[a] = Cplx::new(1.0, 0.0);
        v
    };
    let runit = |a: usize| {
        let mut v = crate::RealVec::zeros(n);
        v[a] = 1.0;
        v
    };
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let (x, y, z, w) = (unit(a), unit(b), unit(c), unit(d));
                    let measured = kn_sym(&gq, &gq, &x, &y, &z, &w).re
                        + kn_skew(&forms.kaehler, &runit(a), &runit(b), &runit(c), &runit(d))
                        + kn_sym(&forms.quadratic, &quad_conj, &x, &y, &z, &w).re;
                    let reference = kn_sym(&ghat_c, &ghat_c, &x, &y, &z, &w).re
                        + kn_sym(&b_form_mat, &b_conj, &x, &y, &z, &w).re;
                    assembly_res = assembly_res.max((measured - reference).abs());
                }
            }
        }
    }

    Ok(vec![
        ("metric-match", metric_res),
        ("kaehler-vanishes", kaehler_res),
        ("quadratic-match", quad_res),
        ("curvature-assembly", assembly_res),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::CLUSTER_TOL;
    use crate::models::{jet, load_model, sample_points};

    #[test]
    fn quadratic_form_diagonal_value() {
        // On an eigencolumn with curvature lambda the holomorphic form takes
        // the value -(lambda + i)^2 / 2.
        let model = load_model("g2-product").unwrap();
        let pm = model.as_point().unwrap();
        let angles = model.angles().unwrap();
        let p = sample_points(pm, 1, 41).unwrap()[0].coords.clone();
        let j = jet(pm, &angles, &p).unwrap();
        let forms = lift_forms(&j);
        for c in 0..2 {
            let lam = j.lambdas[c];
            let expect = -Cplx::new(lam, 1.0) * Cplx::new(lam, 1.0) / 2.0;
            assert!((forms.quadratic[(c, c)] - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn restriction_identities_hold_on_models() {
        for name in ["g1-sphere", "g2-product", "g3-cartan"] {
            let model = load_model(name).unwrap();
            let pm = model.as_point().unwrap();
            let angles = model.angles().unwrap();
            let p = sample_points(pm, 1, 43).unwrap()[0].coords.clone();
            let j = jet(pm, &angles, &p).unwrap();
            for (check, res) in quadric_residuals(&j, CLUSTER_TOL).unwrap() {
                assert!(res < 1e-10, "{name}/{check}: {res}");
            }
        }
    }
}
