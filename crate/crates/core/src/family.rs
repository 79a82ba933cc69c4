//! The parallel family of an isoparametric hypersurface: angle bookkeeping,
//! parallel translation of point and normal, shape operators of the parallel
//! surfaces, focal spectra, and the reflections generated by the family.
//!
//! Conventions: the base surface sits at the middle of its curvature
//! interval, so the principal angles are `theta_j = pi/(2g) + j*pi/g` for
//! distribution index `j` in `0..g` and the principal curvatures
//! `lambda_j = cot(theta_j)` are strictly decreasing in `j`.

use nalgebra::DMatrix;

use crate::error::IsoError;
use crate::numkit::eig_sym;
use crate::scalar::Scalar;
use crate::surd::{cot_k_pi_6, Surd};
use crate::{RealVec, Result};

/// Guard distance in `|cot t - lambda|` around focal times.
pub const FOCAL_GUARD: f64 = 1e-6;
/// Eigenvalue clustering tolerance used throughout the pipeline.
pub const CLUSTER_TOL: f64 = 1e-6;

/// Principal-angle data of a family with `g` distinct curvatures.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleData {
    g: usize,
    multiplicities: Vec<usize>,
    phi: f64,
}

impl AngleData {
    /// Angle data for the middle hypersurface convention `phi = pi/(2g)`.
    ///
    /// Multiplicities must satisfy the alternation rule `m_j = m_{j+2 mod g}`.
    pub fn middle(g: usize, multiplicities: Vec<usize>) -> Result<Self> {
        if !matches!(g, 1 | 2 | 3 | 4 | 6) {
            return Err(IsoError::Config(format!(
                "number of distinct curvatures must be in {{1,2,3,4,6}}, got {g}"
            )));
        }
        if multiplicities.len() != g {
            return Err(IsoError::Dimension {
                context: "AngleData multiplicities",
                expected: g,
                got: multiplicities.len(),
            });
        }
        for j in 0..g {
            if multiplicities[j] == 0 {
                return Err(IsoError::Config("zero multiplicity".into()));
            }
            if multiplicities[j] != multiplicities[(j + 2) % g] {
                return Err(IsoError::Config(format!(
                    "multiplicity alternation violated: m_{j} != m_{}",
                    (j + 2) % g
                )));
            }
        }
        Ok(AngleData {
            g,
            multiplicities,
            phi: std::f64::consts::PI / (2.0 * g as f64),
        })
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// Hypersurface dimension `n = sum of multiplicities`.
    pub fn n(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// Principal angle `theta_j` in `(0, pi)`, strictly increasing in `j`.
    pub fn theta(&self, j: usize) -> f64 {
        assert!(j < self.g, "distribution index out of range");
        self.phi + j as f64 * std::f64::consts::PI / self.g as f64
    }

    /// Principal curvature `lambda_j = cot(theta_j)`, strictly decreasing.
    pub fn lambda(&self, j: usize) -> f64 {
        let t = self.theta(j);
        t.cos() / t.sin()
    }

    /// All principal curvatures expanded by multiplicity, descending.
    pub fn lambdas_expanded(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n());
        for j in 0..self.g {
            out.extend(std::iter::repeat(self.lambda(j)).take(self.multiplicities[j]));
        }
        out
    }

    /// Exact curvature `cot((2j+1) pi/12)` for the sixfold family.
    pub fn lambda_exact6(j: usize) -> Surd {
        crate::surd::cot_odd_k_pi_12(2 * j as i64 + 1)
    }

    /// Distribution index whose focal time `theta_j mod pi` is nearest to `t`.
    pub fn nearest_focal(&self, t: f64) -> (usize, f64) {
        let pi = std::f64::consts::PI;
        let mut best = (0usize, f64::INFINITY, 0.0);
        for j in 0..self.g {
            let theta = self.theta(j);
            let d = (t - theta) / pi;
            let dist = (d - d.round()).abs() * pi;
            if dist < best.1 {
                best = (j, dist, theta);
            }
        }
        (best.0, best.2)
    }
}

/// Parallel translation of a point and its unit normal along the normal
/// geodesic: `F_t = cos(t) F + sin(t) nu`, `nu_t = -sin(t) F + cos(t) nu`.
pub fn parallel(point: &RealVec, normal: &RealVec, t: f64) -> (RealVec, RealVec) {
    let (c, s) = (t.cos(), t.sin());
    (point * c + normal * s, point * (-s) + normal * c)
}

/// Differential factor of the parallel map: `dF_t = dF_0 (cos t I - sin t A_0)`.
pub fn dparallel_factor<T: Scalar>(a0: &DMatrix<T>, t: f64) -> DMatrix<T> {
    let n = a0.nrows();
    DMatrix::identity(n, n) * T::from_f64_lossy(t.cos()) - a0 * T::from_f64_lossy(t.sin())
}

/// Induced metric of the parallel surface in the base frame:
/// `g_t = (cos t I - sin t A_0)^2`.
pub fn metric_at_t<T: Scalar>(a0: &DMatrix<T>, t: f64) -> DMatrix<T> {
    let f = dparallel_factor(a0, t);
    &f * &f
}

/// Shape operator of the parallel surface at time `t`, computed spectrally:
/// each eigenvalue `lambda = cot(theta)` of `A_0` becomes `cot(theta - t)`.
///
/// Equals `(I + cot(t) A_0)(cot(t) I - A_0)^{-1}` away from `t = 0 mod pi`.
/// Errors when `t` is within the focal guard of some `theta_j mod pi`.
pub fn shape_at_t<T: Scalar>(a0: &DMatrix<T>, t: f64) -> Result<DMatrix<T>> {
    let clusters = eig_sym(a0, CLUSTER_TOL)?;
    if t.sin() != 0.0 {
        let cot_t = t.cos() / t.sin();
        for (idx, &lam) in clusters.values().iter().enumerate() {
            let lam = lam.to_f64_lossy();
            if (cot_t - lam).abs() <= FOCAL_GUARD {
                return Err(IsoError::FocalTime {
                    t,
                    j: idx,
                    theta: (1.0f64).atan2(lam),
                });
            }
        }
    }
    Ok(clusters.apply_fn(|lam| {
        let theta = (1.0f64).atan2(lam.to_f64_lossy());
        let x = theta - t;
        T::from_f64_lossy(x.cos() / x.sin())
    }))
}

/// Spectrum of the focal shape operator `A_{theta_j}` with respect to the
/// surviving normal: values `cot(k pi / g)` for `k = 1..g`, where the value
/// at offset `k` carries the multiplicity of distribution `(j + k) mod g`.
/// Returned descending with multiplicities.
pub fn focal_spectrum(angles: &AngleData, j: usize) -> Vec<(f64, usize)> {
    let g = angles.g();
    assert!(j < g, "distribution index out of range");
    let pi = std::f64::consts::PI;
    let mut out: Vec<(f64, usize)> = (1..g)
        .map(|k| {
            let x = k as f64 * pi / g as f64;
            (x.cos() / x.sin(), angles.multiplicities()[(j + k) % g])
        })
        .collect();
    out.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    out
}

/// Exact focal spectrum for `g = 6`, descending.
pub fn focal_spectrum_exact6(angles: &AngleData, j: usize) -> Vec<(Surd, usize)> {
    assert_eq!(angles.g(), 6);
    let mut out: Vec<(Surd, usize)> = (1..6)
        .map(|k| (cot_k_pi_6(k as i64), angles.multiplicities()[(j + k) % 6]))
        .collect();
    out.sort_by(|a, b| b.0.to_f64().partial_cmp(&a.0.to_f64()).unwrap());
    out
}

/// Reflection of the family attached to the focal time `theta_j`:
/// `tau_j(p) = cos(2 theta_j) F(p) + sin(2 theta_j) nu(p)`.
#[derive(Debug, Clone)]
pub struct Reflection {
    pub j: usize,
    pub two_theta: f64,
}

impl Reflection {
    pub fn new(angles: &AngleData, j: usize) -> Self {
        Reflection {
            j,
            two_theta: 2.0 * angles.theta(j),
        }
    }

    /// Image point and image normal convention `-nu_{2 theta_j}`.
    ///
    /// The returned normal is the candidate unit normal at the image point;
    /// whether the model's own orientation matches is recorded by the caller.
    pub fn apply(&self, point: &RealVec, normal: &RealVec) -> (RealVec, RealVec) {
        let (q, nu_q) = parallel(point, normal, self.two_theta);
        (q, -nu_q)
    }

    /// Frame-coordinate factor of the differential:
    /// `d tau_j = dF_0 (cos(2 theta_j) I - sin(2 theta_j) A_0)`.
    pub fn dtau_factor<T: Scalar>(&self, a0: &DMatrix<T>) -> DMatrix<T> {
        dparallel_factor(a0, self.two_theta)
    }
}

/// Validates that a measured spectrum matches angle-data predictions.
pub fn spectrum_matches(angles: &AngleData, values: &[f64], mults: &[usize], tol: f64) -> bool {
    values.len() == angles.g()
        && mults == angles.multiplicities()
        && values
            .iter()
            .enumerate()
            .all(|(j, v)| (v - angles.lambda(j)).abs() <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn middle_angles_and_curvatures() {
        let a = AngleData::middle(3, vec![1, 1, 1]).unwrap();
        assert!((a.theta(0) - PI / 6.0).abs() < 1e-15);
        assert!((a.lambda(0) - 3f64.sqrt()).abs() < 1e-12);
        assert!(a.lambda(1).abs() < 1e-12);
        assert!((a.lambda(2) + 3f64.sqrt()).abs() < 1e-12);

        let a6 = AngleData::middle(6, vec![2, 2, 2, 2, 2, 2]).unwrap();
        for j in 0..6 {
            assert!((AngleData::lambda_exact6(j).to_f64() - a6.lambda(j)).abs() < 1e-12);
        }
    }

    #[test]
    fn multiplicity_rule_enforced() {
        assert!(AngleData::middle(4, vec![1, 2, 1, 2]).is_ok());
        assert!(AngleData::middle(4, vec![1, 2, 2, 1]).is_err());
        assert!(AngleData::middle(5, vec![1; 5]).is_err());
    }

    #[test]
    fn parallel_preserves_orthonormality() {
        let p = DVector::from_vec(vec![1.0, 0.0, 0.0]);
        let nu = DVector::from_vec(vec![0.0, 1.0, 0.0]);
        let (pt, nt) = parallel(&p, &nu, 0.7);
        assert!((pt.norm() - 1.0).abs() < 1e-15);
        assert!((nt.norm() - 1.0).abs() < 1e-15);
        assert!(pt.dot(&nt).abs() < 1e-15);
        // Second derivative returns to minus the point: geodesic on the sphere.
        let (pt2, _) = parallel(&p, &nu, PI);
        assert!((pt2 + p).norm() < 1e-15);
    }

    #[test]
    fn shape_at_t_spectral_values() {
        let a0 = DMatrix::from_diagonal(&DVector::from_vec(vec![3f64.sqrt(), 0.0, -(3f64.sqrt())]));
        let t = PI / 12.0;
        let at = shape_at_t(&a0, t).unwrap();
        let angles = AngleData::middle(3, vec![1, 1, 1]).unwrap();
        for j in 0..3 {
            let expect = (angles.theta(j) - t).cos() / (angles.theta(j) - t).sin();
            assert!((at[(j, j)] - expect).abs() < 1e-10, "j={j}");
        }
        // Closed-form route agrees away from t = 0 mod pi.
        let cot_t = t.cos() / t.sin();
        let n = 3;
        let closed = (DMatrix::identity(n, n) + &a0 * cot_t)
            * (DMatrix::identity(n, n) * cot_t - &a0).try_inverse().unwrap();
        assert!((&at - closed).amax() < 1e-9);
    }

    #[test]
    fn focal_time_guarded() {
        let a0 = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -1.0]));
        let err = shape_at_t(&a0, PI / 4.0).unwrap_err();
        assert!(matches!(err, IsoError::FocalTime { .. }));
        assert!(shape_at_t(&a0, PI / 4.0 + 0.05).is_ok());
    }

    #[test]
    fn focal_rank_drop() {
        // At t = theta_j the parallel differential loses exactly m_j ranks.
        let angles = AngleData::middle(3, vec![1, 1, 1]).unwrap();
        let a0 = DMatrix::from_diagonal(&DVector::from_vec(angles.lambdas_expanded()));
        let f = dparallel_factor(&a0, angles.theta(1));
        let svs = f.svd(false, false).singular_values;
        let zeros = svs.iter().filter(|s| **s < 1e-12).count();
        assert_eq!(zeros, 1);
        assert_eq!(svs.iter().filter(|s| **s > 1e-6).count(), 2);
    }

    #[test]
    fn focal_spectrum_sixfold_exact() {
        let angles = AngleData::middle(6, vec![1; 6]).unwrap();
        let spec = focal_spectrum(&angles, 5);
        let exact = focal_spectrum_exact6(&angles, 5);
        let expect = [
            3f64.sqrt(),
            1.0 / 3f64.sqrt(),
            0.0,
            -1.0 / 3f64.sqrt(),
            -(3f64.sqrt()),
        ];
        assert_eq!(spec.len(), 5);
        for (k, (v, m)) in spec.iter().enumerate() {
            assert!((v - expect[k]).abs() < 1e-12);
            assert_eq!(*m, 1);
            assert!((exact[k].0.to_f64() - v).abs() < 1e-15);
        }
    }

    #[test]
    fn reflection_is_involutive_on_sphere_data() {
        let angles = AngleData::middle(2, vec![1, 1]).unwrap();
        let refl = Reflection::new(&angles, 0);
        let p = DVector::from_vec(vec![1.0, 0.0]);
        let nu = DVector::from_vec(vec![0.0, 1.0]);
        let (q, nu_q) = refl.apply(&p, &nu);
        let (p2, nu2) = refl.apply(&q, &nu_q);
        assert!((p2 - p).norm() < 1e-14);
        assert!((nu2 - nu).norm() < 1e-14);
    }
}
