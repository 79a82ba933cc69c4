//! The unit-normal lift of a hypersurface into complex space:
//! `z = (F + i nu)/sqrt(2)` with differential `dz(X) = (X - i A X)/sqrt(2)`.
//!
//! The image satisfies `sum_k z_k^2 = 0` (a cone over a complex quadric),
//! the lift of the parallel family is `z_t = exp(-i t) z_0`, and the lifted
//! tangent planes are Lagrangian: the Hermitian products of lifted tangents
//! are real and reproduce the modified metric.

use num_complex::Complex;

use crate::models::SurfaceJet;
use crate::{Cplx, CplxVec, RealVec};

/// Hermitian inner product `sum_k a_k conj(b_k)`.
pub fn herm(a: &CplxVec, b: &CplxVec) -> Cplx {
    a.iter().zip(b.iter()).map(|(x, y)| x * y.conj()).sum()
}

/// Complex-bilinear product `sum_k a_k b_k`.
pub fn bilin(a: &CplxVec, b: &CplxVec) -> Cplx {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Lift of a point/normal pair.
pub fn lift(point: &RealVec, normal: &RealVec) -> CplxVec {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CplxVec::from_iterator(
        point.len(),
        point.iter().zip(normal.iter()).map(|(&f, &n)| Cplx::new(f * s, n * s)),
    )
}

/// Lift differential applied to an ambient tangent vector, given the shape
/// image `az = A x`.
pub fn dlift(x: &RealVec, az: &RealVec) -> CplxVec {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CplxVec::from_iterator(
        x.len(),
        x.iter().zip(az.iter()).map(|(&v, &a)| Cplx::new(v * s, -a * s)),
    )
}

/// Lift differential on a frame column of a jet.
pub fn dlift_col(jet: &SurfaceJet, c: usize) -> CplxVec {
    let f = jet.frame_column(c);
    dlift(&f, &(&f * jet.lambdas[c]))
}

/// Lift differential on frame coordinates.
pub fn dlift_coeffs(jet: &SurfaceJet, coeffs: &RealVec) -> CplxVec {
    let x = jet.push(coeffs);
    let ax = jet.push(&(&jet.a0 * coeffs));
    dlift(&x, &ax)
}

/// Pointwise residuals of the structural invariants of the lift at a jet.
///
/// Returned entries, all expected to vanish:
/// - `unit`: deviation of the Hermitian norm of `z` from 1,
/// - `cone`: the quadric constraint `|sum_k z_k^2|`,
/// - `tangency`: max Hermitian pairing of lifted tangents with `z`,
/// - `lagrangian`: max imaginary part of Hermitian products of lifted
///   tangents,
/// - `metric`: max deviation of `Re <dz X, dz Y>` from the modified metric
///   `(g0(X,Y) + g0(AX, AY))/2`.
pub fn lift_residuals(jet: &SurfaceJet) -> Vec<(&'static str, f64)> {
    let z = lift(&jet.point, &jet.normal);
    let n = jet.n();
    let unit = (herm(&z, &z).re - 1.0).abs().max(herm(&z, &z).im.abs());
    let cone = bilin(&z, &z).norm();

    let lifts: Vec<CplxVec> = (0..n).map(|c| dlift_col(jet, c)).collect();
    let mut tangency = 0.0f64;
    let mut lagrangian = 0.0f64;
    let mut metric = 0.0f64;
    for (a, za) in lifts.iter().enumerate() {
        tangency = tangency.max(herm(za, &z).norm());
        for (b, zb) in lifts.iter().enumerate() {
            let h = herm(za, zb);
            lagrangian = lagrangian.max(h.im.abs());
            // Frame columns are g0-orthonormal eigenvectors, so the modified
            // metric is diagonal with entries (1 + lambda^2)/2.
            let expect = if a == b { (1.0 + jet.lambdas[a].powi(2)) / 2.0 } else { 0.0 };
            metric = metric.max((h.re - expect).abs());
        }
    }
    vec![
        ("unit", unit),
        ("cone", cone),
        ("tangency", tangency),
        ("lagrangian", lagrangian),
        ("metric", metric),
    ]
}

/// Residuals of the parallel-family coherence of the lift at time `t`:
/// the lift of `(F_t, nu_t)` must equal `exp(-i t) z_0`, and the lifted
/// differential of the parallel surface on transported vectors must equal
/// `exp(-i t)` times the base lifted differential.
pub fn lift_t_coherence(jet: &SurfaceJet, t: f64) -> Vec<(&'static str, f64)> {
    let z0 = lift(&jet.point, &jet.normal);
    let (pt, nt) = crate::family::parallel(&jet.point, &jet.normal, t);
    let zt = lift(&pt, &nt);
    let phase = Complex::from_polar(1.0, -t);
    let point_res = (&zt - &z0 * phase).norm();

    // Transported tangent W = dF_t X = (cos t - sin t lambda) X on an
    // eigencolumn; the parallel surface's shape image is A_t W with
    // A_t W = cot(theta - t) W.
    let mut diff_res = 0.0f64;
    for c in 0..jet.n() {
        let x = jet.frame_column(c);
        let lam = jet.lambdas[c];
        let theta = (1.0f64).atan2(lam);
        let w = &x * (t.cos() - t.sin() * lam);
        let lam_t = ((theta - t).cos()) / ((theta - t).sin());
        let lhs = dlift(&w, &(&w * lam_t));
        let rhs = dlift(&x, &(&x * lam)) * phase;
        diff_res = diff_res.max((lhs - rhs).norm());
    }
    vec![("point-phase", point_res), ("differential-phase", diff_res)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{jet, load_model, sample_points};

    fn jet_of(name: &str, seed: u64) -> SurfaceJet {
        let model = load_model(name).unwrap();
        let pm = model.as_point().unwrap();
        let angles = model.angles().unwrap();
        let p = sample_points(pm, 1, seed).unwrap()[0].coords.clone();
        jet(pm, &angles, &p).unwrap()
    }

    #[test]
    fn lift_invariants_vanish_on_models() {
        for name in ["g1-sphere", "g2-product", "g3-cartan"] {
            let j = jet_of(name, 17);
            for (check, res) in lift_residuals(&j) {
                assert!(res < 1e-10, "{name}/{check}: {res}");
            }
        }
    }

    #[test]
    fn parallel_family_rotates_the_lift() {
        let j = jet_of("g3-cartan", 29);
        for t in [-0.4, 0.1, 0.37] {
            for (check, res) in lift_t_coherence(&j, t) {
                assert!(res < 1e-10, "t={t} {check}: {res}");
            }
        }
    }

    #[test]
    fn metric_value_on_product() {
        let j = jet_of("g2-product", 3);
        let za = dlift_col(&j, 0);
        let h = herm(&za, &za);
        // lambda = 1: (1 + 1)/2 = 1.
        assert!((h.re - 1.0).abs() < 1e-12);
        assert!(h.im.abs() < 1e-14);
    }
}
