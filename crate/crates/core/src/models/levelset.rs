//! Hypersurfaces realized as level sets of a homogeneous polynomial
//! restricted to the unit sphere, with analytic normal field and its
//! ambient derivative.

use crate::error::IsoError;
use crate::models::poly::Polynomial;
use crate::models::{ModelSpec, PointModel};
use crate::{RealVec, Result};

/// Newton projection tolerance on the max-norm of the joint residual.
pub const PROJECT_TOL: f64 = 1e-13;
const MAX_NEWTON: usize = 60;
const MAX_HALVINGS: usize = 30;
/// Minimum spherical gradient norm for a usable normal direction.
const GRAD_GUARD: f64 = 1e-8;

/// The surface `{ x : f(x) = level, |x| = 1 }` oriented by the spherical
/// gradient of `f`.
#[derive(Debug, Clone)]
pub struct LevelSetModel {
    spec: ModelSpec,
    poly: Polynomial,
    level: f64,
}

impl LevelSetModel {
    pub fn new(spec: ModelSpec, poly: Polynomial, level: f64) -> Result<Self> {
        if poly.dim() != spec.n + 2 {
            return Err(IsoError::Dimension {
                context: "level-set polynomial ambient dimension",
                expected: spec.n + 2,
                got: poly.dim(),
            });
        }
        let model = LevelSetModel { spec, poly, level };
        model.validate_structure_equations()?;
        Ok(model)
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn level(&self) -> f64 {
        self.level
    }

    /// A sibling surface of the same polynomial at a different level. The
    /// parallel surfaces of a level set are level sets of the same function,
    /// so this gives point access to the whole family. Distribution labels
    /// of the sibling are not adjusted; callers use field-level access only.
    pub fn at_level(&self, level: f64) -> LevelSetModel {
        let mut spec = self.spec.clone();
        spec.name = format!("{}@{level:.6}", spec.name);
        LevelSetModel {
            spec,
            poly: self.poly.clone(),
            level,
        }
    }

    /// Joint residual `(f(x) - level, |x|^2 - 1)`.
    fn residual(&self, x: &RealVec) -> (f64, f64) {
        (self.poly.eval(x) - self.level, x.norm_squared() - 1.0)
    }

    fn residual_norm(&self, x: &RealVec) -> f64 {
        let (r0, r1) = self.residual(x);
        r0.abs().max(r1.abs())
    }

    pub fn contains(&self, x: &RealVec, tol: f64) -> bool {
        self.residual_norm(x) <= tol
    }

    /// Spherical gradient `w = grad f - <grad f, x> x` at a unit vector.
    fn spherical_grad(&self, x: &RealVec) -> RealVec {
        let g = self.poly.grad(x);
        let radial = g.dot(x);
        g - x * radial
    }

    /// Checks the two defining equations of an isoparametric level family:
    /// `|grad F|^2 = g^2 |x|^(2g-2)` and
    /// `lap F = (m1 - m0) g^2 |x|^(g-2) / 2`,
    /// sampled on a fixed deterministic point set.
    fn validate_structure_equations(&self) -> Result<()> {
        let g = self.spec.g as f64;
        let deg = self
            .poly
            .homogeneous_degree()
            .ok_or_else(|| IsoError::ModelConsistency {
                model: self.spec.name.clone(),
                reason: "polynomial is not homogeneous".into(),
            })?;
        if deg as usize != self.spec.g {
            return Err(IsoError::ModelConsistency {
                model: self.spec.name.clone(),
                reason: format!("polynomial degree {deg} differs from curvature count {}", self.spec.g),
            });
        }
        let m = &self.spec.multiplicities;
        let lap_coeff = (m[1 % m.len()] as f64 - m[0] as f64) * g * g / 2.0;
        let dim = self.poly.dim();
        // Low-discrepancy deterministic sample: entries from a fixed affine
        // recurrence, shifted per point.
        for s in 0..8 {
            let mut x = RealVec::zeros(dim);
            let mut u = 0.5 + 0.07 * s as f64;
            for k in 0..dim {
                u = (u * 9.869604401089358 + 0.718281828).fract();
                x[k] = 2.0 * u - 1.0;
            }
            let r2 = x.norm_squared();
            let grad = self.poly.grad(&x);
            let lhs = grad.norm_squared();
            let rhs = g * g * r2.powi(self.spec.g as i32 - 1);
            if (lhs - rhs).abs() > 1e-9 * (1.0 + rhs.abs()) {
                return Err(IsoError::ModelConsistency {
                    model: self.spec.name.clone(),
                    reason: format!("gradient norm equation fails: {lhs} vs {rhs}"),
                });
            }
            let lap = self.poly.hessian(&x).trace();
            let rhs_lap = lap_coeff * r2.powf(g / 2.0 - 1.0);
            if (lap - rhs_lap).abs() > 1e-9 * (1.0 + rhs_lap.abs()) {
                return Err(IsoError::ModelConsistency {
                    model: self.spec.name.clone(),
                    reason: format!("Laplacian equation fails: {lap} vs {rhs_lap}"),
                });
            }
        }
        Ok(())
    }
}

impl PointModel for LevelSetModel {
    fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    /// Damped Gauss-Newton projection onto the intersection of `{f = level}`
    /// with the unit sphere, using least-norm steps of the stacked
    /// constraint Jacobian.
    fn project(&self, y: &RealVec) -> Result<RealVec> {
        if y.len() != self.poly.dim() {
            return Err(IsoError::Dimension {
                context: "projection seed",
                expected: self.poly.dim(),
                got: y.len(),
            });
        }
        let norm = y.norm();
        if norm < 1e-10 {
            return Err(IsoError::Projection {
                model: self.spec.name.clone(),
                residual: f64::INFINITY,
                iters: 0,
            });
        }
        let mut x = y / norm;
        for iter in 0..MAX_NEWTON {
            let res = self.residual_norm(&x);
            if res <= PROJECT_TOL {
                return Ok(x);
            }
            let (r0, r1) = self.residual(&x);
            let grad = self.poly.grad(&x);
            // Least-norm solve of J dx = -r with J = [grad^T; 2 x^T].
            let a = grad.norm_squared();
            let b = 2.0 * grad.dot(&x);
            let c = 4.0 * x.norm_squared();
            let det = a * c - b * b;
            if det.abs() < 1e-14 * (1.0 + a * c) {
                return Err(IsoError::Projection {
                    model: self.spec.name.clone(),
                    residual: res,
                    iters: iter,
                });
            }
            let u0 = (c * r0 - b * r1) / det;
            let u1 = (-b * r0 + a * r1) / det;
            let step = grad * (-u0) + &x * (-2.0 * u1);
            let mut scale = 1.0;
            let mut accepted = false;
            for _ in 0..MAX_HALVINGS {
                let cand = &x + &step * scale;
                if self.residual_norm(&cand) < res {
                    x = cand;
                    accepted = true;
                    break;
                }
                scale *= 0.5;
            }
            if !accepted {
                return Err(IsoError::Projection {
                    model: self.spec.name.clone(),
                    residual: res,
                    iters: iter,
                });
            }
        }
        let res = self.residual_norm(&x);
        if res <= PROJECT_TOL {
            Ok(x)
        } else {
            Err(IsoError::Projection {
                model: self.spec.name.clone(),
                residual: res,
                iters: MAX_NEWTON,
            })
        }
    }

    fn normal_field(&self, x: &RealVec) -> Result<RealVec> {
        let w = self.spherical_grad(x);
        let n = w.norm();
        if n < GRAD_GUARD {
            return Err(IsoError::Sampling {
                model: self.spec.name.clone(),
                reason: format!("degenerate spherical gradient (norm {n:.3e}), point near focal set"),
            });
        }
        Ok(w / n)
    }

    /// Ambient directional derivative of the unit normal field:
    /// with `w = grad f - <grad f, x> x`,
    /// `Dw(v) = H v - (<H v, x> + <grad f, v>) x - <grad f, x> v` and
    /// `D nu (v) = (I - nu nu^T) Dw(v) / |w|`.
    fn dnormal(&self, x: &RealVec, v: &RealVec) -> Result<RealVec> {
        let grad = self.poly.grad(x);
        let h = self.poly.hessian(x);
        let w = &grad - x * grad.dot(x);
        let wn = w.norm();
        if wn < GRAD_GUARD {
            return Err(IsoError::Sampling {
                model: self.spec.name.clone(),
                reason: "degenerate spherical gradient in normal derivative".into(),
            });
        }
        let hv = &h * v;
        let dw = &hv - x * (hv.dot(x) + grad.dot(v)) - v * grad.dot(x);
        let nu = &w / wn;
        Ok((&dw - &nu * nu.dot(&dw)) / wn)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{builtin_names, load_model, Model};
    use nalgebra::DVector;

    fn cartan() -> LevelSetModel {
        match load_model("g3-cartan").unwrap() {
            Model::LevelSet(m) => m,
            _ => panic!("expected level-set model"),
        }
    }

    #[test]
    fn builtin_list_contains_cartan() {
        assert!(builtin_names().contains(&"g3-cartan"));
    }

    #[test]
    fn newton_projection_converges() {
        let m = cartan();
        let y = DVector::from_vec(vec![0.9, -0.3, 0.4, 0.2, -0.7]);
        let x = m.project(&y).unwrap();
        assert!(m.contains(&x, PROJECT_TOL));
        assert!((x.norm() - 1.0).abs() < 1e-13);
        // Projection is idempotent to tolerance.
        let x2 = m.project(&x).unwrap();
        assert!((&x2 - &x).norm() < 1e-12);
    }

    #[test]
    fn normal_is_unit_and_tangent_to_sphere() {
        let m = cartan();
        let x = m.project(&DVector::from_vec(vec![0.2, 1.0, -0.5, 0.3, 0.8])).unwrap();
        let nu = m.normal_field(&x).unwrap();
        assert!((nu.norm() - 1.0).abs() < 1e-12);
        assert!(nu.dot(&x).abs() < 1e-12);
    }

    #[test]
    fn dnormal_matches_difference_quotient() {
        let m = cartan();
        let x = m.project(&DVector::from_vec(vec![-0.4, 0.6, 0.9, -0.2, 0.3])).unwrap();
        let nu = m.normal_field(&x).unwrap();
        // A tangent direction of the surface.
        let mut v = DVector::from_vec(vec![0.3, -0.1, 0.5, 0.7, 0.2]);
        v -= &x * v.dot(&x);
        v -= &nu * v.dot(&nu);
        v /= v.norm();
        let exact = m.dnormal(&x, &v).unwrap();
        let fd = crate::numkit::fd_dir(
            |s| {
                let q = m.project(&(&x + &v * s))?;
                m.normal_field(&q)
            },
            0.0,
            &crate::numkit::StepPolicy::first_derivative(),
        )
        .unwrap();
        // The curve stays on the surface, so only the tangential parts of the
        // ambient derivative agree; remove components along x and nu of both.
        let strip = |w: &DVector<f64>| {
            let mut w = w.clone();
            w -= &x * w.dot(&x);
            w -= &nu * w.dot(&nu);
            w
        };
        let d = (strip(&exact) - strip(&fd.value)).norm();
        assert!(d < 5e-7, "mismatch {d}");
    }

    #[test]
    fn wrong_polynomial_rejected() {
        let m = cartan();
        let mut spec = m.spec().clone();
        spec.name = "broken".into();
        let bad = Polynomial::new(
            5,
            vec![crate::models::poly::Monomial {
                coeff: 1.0,
                exponents: vec![3, 0, 0, 0, 0],
            }],
        )
        .unwrap();
        assert!(LevelSetModel::new(spec, bad, 0.0).is_err());
    }
}
