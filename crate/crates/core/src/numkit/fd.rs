//! Directional finite differences for scalar-, vector- and matrix-valued
//! curves, with a half-step error estimate and optional Richardson
//! extrapolation.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::IsoError;
use crate::scalar::Scalar;
use crate::Result;

/// Step selection for central differences.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct StepPolicy {
    /// Order of the central stencil; only 2 is supported.
    pub order: usize,
    /// Base step, scaled by `1 + |t0|` at the evaluation point.
    pub base_step: f64,
    /// Extrapolate the two-step ladder to fourth order.
    pub richardson: bool,
}

impl StepPolicy {
    /// Policy for first derivatives of smooth closed-form quantities.
    pub fn first_derivative() -> Self {
        StepPolicy {
            order: 2,
            base_step: 1e-5,
            richardson: false,
        }
    }

    /// Wider-step policy for outer derivatives of quantities that are
    /// themselves finite differences.
    pub fn nested_second() -> Self {
        StepPolicy {
            order: 2,
            base_step: 1e-4,
            richardson: false,
        }
    }

    /// Richardson-extrapolated policy for curvature-level checks.
    pub fn curvature() -> Self {
        StepPolicy {
            order: 2,
            base_step: 1e-4,
            richardson: true,
        }
    }

    pub fn with_base_step(mut self, h: f64) -> Self {
        self.base_step = h;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.order != 2 {
            return Err(IsoError::Config(format!(
                "unsupported finite-difference order {}",
                self.order
            )));
        }
        if !(1e-8..=1e-2).contains(&self.base_step) {
            return Err(IsoError::Config(format!(
                "base_step {} outside [1e-8, 1e-2]",
                self.base_step
            )));
        }
        Ok(())
    }

    /// Effective step at `t0`.
    pub fn step_at(&self, t0: f64) -> f64 {
        self.base_step * (1.0 + t0.abs())
    }
}

impl Default for StepPolicy {
    fn default() -> Self {
        StepPolicy::first_derivative()
    }
}

/// Derivative value together with an a-posteriori error estimate.
#[derive(Debug, Clone)]
pub struct FdResult<V> {
    pub value: V,
    pub err_est: f64,
}

/// Values a finite difference can act on: a normed vector space over `T`.
pub trait FdValue<T: Scalar>: Clone {
    /// `a*x + b*y`.
    fn lin(a: T, x: &Self, b: T, y: &Self) -> Self;
    fn norm_inf(&self) -> f64;
}

impl<T: Scalar> FdValue<T> for T {
    fn lin(a: T, x: &Self, b: T, y: &Self) -> Self {
        a * *x + b * *y
    }
    fn norm_inf(&self) -> f64 {
        self.abs().to_f64_lossy()
    }
}

impl<T: Scalar> FdValue<T> for Complex<T> {
    fn lin(a: T, x: &Self, b: T, y: &Self) -> Self {
        x * a + y * b
    }
    fn norm_inf(&self) -> f64 {
        self.re
            .abs()
            .max(self.im.abs())
            .to_f64_lossy()
    }
}

impl<T: Scalar> FdValue<T> for DVector<T> {
    fn lin(a: T, x: &Self, b: T, y: &Self) -> Self {
        x * a + y * b
    }
    fn norm_inf(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            self.amax().to_f64_lossy()
        }
    }
}

impl<T: Scalar> FdValue<T> for DMatrix<T> {
    fn lin(a: T, x: &Self, b: T, y: &Self) -> Self {
        x * a + y * b
    }
    fn norm_inf(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            self.amax().to_f64_lossy()
        }
    }
}

impl<T: Scalar> FdValue<T> for DVector<Complex<T>> {
    fn lin(a: T, x: &Self, b: T, y: &Self) -> Self {
        x * Complex::new(a, T::zero()) + y * Complex::new(b, T::zero())
    }
    fn norm_inf(&self) -> f64 {
        self.iter()
            .map(|z| z.re.abs().max(z.im.abs()).to_f64_lossy())
            .fold(0.0, f64::max)
    }
}

impl<T: Scalar> FdValue<T> for DMatrix<Complex<T>> {
    fn lin(a: T, x: &Self, b: T, y: &Self) -> Self {
        x * Complex::new(a, T::zero()) + y * Complex::new(b, T::zero())
    }
    fn norm_inf(&self) -> f64 {
        self.iter()
            .map(|z| z.re.abs().max(z.im.abs()).to_f64_lossy())
            .fold(0.0, f64::max)
    }
}

/// Central-difference derivative of `f` at `t0`.
///
/// Always evaluates the stencil at steps `h` and `h/2`; without Richardson
/// the full-step quotient is returned and the ladder difference feeds the
/// error estimate, with Richardson the fourth-order extrapolation is
/// returned. Evaluation failures are annotated with the stencil location.
pub fn fd_dir<T, V, F>(f: F, t0: T, policy: &StepPolicy) -> Result<FdResult<V>>
where
    T: Scalar,
    V: FdValue<T>,
    F: Fn(T) -> Result<V>,
{
    policy.validate()?;
    let h0 = policy.step_at(t0.to_f64_lossy());
    let quotient = |h: f64| -> Result<V> {
        let ht = T::from_f64_lossy(h);
        let eval = |t: T| {
            f(t).map_err(|e| {
                IsoError::Config(format!(
                    "finite-difference stencil evaluation failed at t = {}: {e}",
                    t.to_f64_lossy()
                ))
            })
        };
        let fp = eval(t0 + ht)?;
        let fm = eval(t0 - ht)?;
        let s = T::from_f64_lossy(0.5 / h);
        Ok(V::lin(s, &fp, -s, &fm))
    };
    let d_full = quotient(h0)?;
    let d_half = quotient(h0 / 2.0)?;
    let ladder = V::lin(T::one(), &d_half, -T::one(), &d_full).norm_inf();
    if policy.richardson {
        let third = T::from_f64_lossy(1.0 / 3.0);
        let value = V::lin(third * T::from_f64_lossy(4.0), &d_half, -third, &d_full);
        Ok(FdResult {
            value,
            err_est: ladder / 3.0,
        })
    } else {
        Ok(FdResult {
            value: d_full,
            err_est: ladder * 4.0 / 3.0,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_on_quadratics() {
        let f = |t: f64| Ok(3.0 * t * t - 2.0 * t + 7.0);
        let r = fd_dir(f, 1.5, &StepPolicy::first_derivative()).unwrap();
        assert!((r.value - (6.0 * 1.5 - 2.0)).abs() < 1e-9);
        assert!(r.err_est < 1e-8);
    }

    #[test]
    fn trig_accuracy_and_estimate() {
        let f = |t: f64| Ok(t.sin());
        let r = fd_dir(f, 0.7, &StepPolicy::first_derivative()).unwrap();
        let err = (r.value - 0.7f64.cos()).abs();
        assert!(err < 1e-9);
        assert!(r.err_est >= err / 10.0, "estimate {} vs err {err}", r.err_est);
        let rr = fd_dir(f, 0.7, &StepPolicy::curvature()).unwrap();
        assert!((rr.value - 0.7f64.cos()).abs() < 1e-10);
    }

    #[test]
    fn matrix_valued_curve() {
        let f = |t: f64| {
            Ok(DMatrix::from_fn(2, 2, |i, j| {
                (t * (1.0 + i as f64 + j as f64)).exp()
            }))
        };
        let r = fd_dir(f, 0.0, &StepPolicy::first_derivative()).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let k = 1.0 + i as f64 + j as f64;
                assert!((r.value[(i, j)] - k).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn complex_vector_rotation() {
        use num_complex::Complex;
        let f = |t: f64| {
            Ok(DVector::from_vec(vec![
                Complex::new(t.cos(), t.sin()),
                Complex::new(0.0, 2.0 * t),
            ]))
        };
        let r = fd_dir(f, 0.3, &StepPolicy::first_derivative()).unwrap();
        assert!((r.value[0] - Complex::new(-(0.3f64.sin()), 0.3f64.cos())).norm() < 1e-9);
        assert!((r.value[1] - Complex::new(0.0, 2.0)).norm() < 1e-9);
    }

    #[test]
    fn invalid_policy_rejected() {
        let f = |t: f64| Ok(t);
        let bad = StepPolicy {
            order: 4,
            base_step: 1e-5,
            richardson: false,
        };
        assert!(fd_dir(f, 0.0, &bad).is_err());
        let bad_step = StepPolicy::first_derivative().with_base_step(1.0);
        assert!(fd_dir(f, 0.0, &bad_step).is_err());
    }

    #[test]
    fn stencil_failure_is_annotated() {
        let f = |t: f64| {
            if t > 1.0 {
                Err(IsoError::Config("out of domain".into()))
            } else {
                Ok(t)
            }
        };
        let err = fd_dir(f, 1.0, &StepPolicy::first_derivative()).unwrap_err();
        assert!(err.to_string().contains("stencil"));
    }

    proptest! {
        #[test]
        fn polynomial_derivatives(a in -2.0..2.0f64, b in -2.0..2.0f64, t0 in -2.0..2.0f64) {
            let f = move |t: f64| Ok(a * t * t * t + b * t);
            let r = fd_dir(f, t0, &StepPolicy::curvature()).unwrap();
            let exact = 3.0 * a * t0 * t0 + b;
            prop_assert!((r.value - exact).abs() < 1e-7 * (1.0 + exact.abs()));
        }
    }
}
