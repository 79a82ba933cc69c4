//! Sparse multivariate polynomials with analytic gradient and Hessian.

use serde::{Deserialize, Serialize};

use crate::error::IsoError;
use crate::{RealMat, RealVec, Result};

/// One monomial `coeff * prod_k x_k^{exponents[k]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    pub coeff: f64,
    pub exponents: Vec<u32>,
}

/// A polynomial on `R^dim` given as a monomial list.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    dim: usize,
    monomials: Vec<Monomial>,
}

fn powers(x: &RealVec, exponents: &[u32]) -> f64 {
    exponents
        .iter()
        .enumerate()
        .map(|(k, &p)| x[k].powi(p as i32))
        .product()
}

impl Polynomial {
    pub fn new(dim: usize, monomials: Vec<Monomial>) -> Result<Self> {
        if monomials.is_empty() {
            return Err(IsoError::Config("polynomial needs at least one monomial".into()));
        }
        for m in &monomials {
            if m.exponents.len() != dim {
                return Err(IsoError::Dimension {
                    context: "monomial exponent vector",
                    expected: dim,
                    got: m.exponents.len(),
                });
            }
            if !m.coeff.is_finite() || m.coeff == 0.0 {
                return Err(IsoError::Config("monomial coefficient must be finite and nonzero".into()));
            }
        }
        Ok(Polynomial { dim, monomials })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Common total degree if every monomial has the same one.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let deg: u32 = self.monomials[0].exponents.iter().sum();
        self.monomials
            .iter()
            .all(|m| m.exponents.iter().sum::<u32>() == deg)
            .then_some(deg)
    }

    pub fn eval(&self, x: &RealVec) -> f64 {
        assert_eq!(x.len(), self.dim);
        self.monomials
            .iter()
            .map(|m| m.coeff * powers(x, &m.exponents))
            .sum()
    }

    pub fn grad(&self, x: &RealVec) -> RealVec {
        assert_eq!(x.len(), self.dim);
        let mut g = RealVec::zeros(self.dim);
        for m in &self.monomials {
            for (k, &p) in m.exponents.iter().enumerate() {
                if p == 0 {
                    continue;
                }
                let mut e = m.exponents.clone();
                e[k] = p - 1;
                g[k] += m.coeff * p as f64 * powers(x, &e);
            }
        }
        g
    }

    pub fn hessian(&self, x: &RealVec) -> RealMat {
        assert_eq!(x.len(), self.dim);
        let mut h = RealMat::zeros(self.dim, self.dim);
        for m in &self.monomials {
            for (k, &p) in m.exponents.iter().enumerate() {
                if p == 0 {
                    continue;
                }
                // Diagonal term d^2/dx_k^2.
                if p >= 2 {
                    let mut e = m.exponents.clone();
                    e[k] = p - 2;
                    h[(k, k)] += m.coeff * (p * (p - 1)) as f64 * powers(x, &e);
                }
                // Mixed terms d^2/dx_k dx_l, each unordered pair once.
                for (l, &q) in m.exponents.iter().enumerate().skip(k + 1) {
                    if q == 0 {
                        continue;
                    }
                    let mut e = m.exponents.clone();
                    e[k] = p - 1;
                    e[l] = q - 1;
                    let v = m.coeff * (p * q) as f64 * powers(x, &e);
                    h[(k, l)] += v;
                    h[(l, k)] += v;
                }
            }
        }
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::{fd_dir, StepPolicy};
    use nalgebra::DVector;
    use proptest::prelude::*;

    fn cubic() -> Polynomial {
        // f = 3 x0^2 x1 - x1^3
        Polynomial::new(
            2,
            vec![
                Monomial { coeff: 3.0, exponents: vec![2, 1] },
                Monomial { coeff: -1.0, exponents: vec![0, 3] },
            ],
        )
        .unwrap()
    }

    #[test]
    fn eval_grad_hessian_exact() {
        let f = cubic();
        let (u, v) = (2.0, -1.0);
        let x = DVector::from_vec(vec![u, v]);
        assert_eq!(f.eval(&x), 3.0 * u * u * v - v * v * v);
        let g = f.grad(&x);
        assert_eq!(g[0], 6.0 * u * v);
        assert_eq!(g[1], 3.0 * u * u - 3.0 * v * v);
        let h = f.hessian(&x);
        assert_eq!(h[(0, 0)], 6.0 * v);
        assert_eq!(h[(0, 1)], 6.0 * u);
        assert_eq!(h[(1, 0)], 6.0 * u);
        assert_eq!(h[(1, 1)], -6.0 * v);
        assert_eq!(f.homogeneous_degree(), Some(3));
    }

    #[test]
    fn euler_identity_for_homogeneous() {
        let f = cubic();
        let x = DVector::from_vec(vec![0.3, 0.7]);
        let lhs = f.grad(&x).dot(&x);
        assert!((lhs - 3.0 * f.eval(&x)).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn gradient_matches_directional_difference(
            x0 in -2.0..2.0f64, x1 in -2.0..2.0f64, v0 in -1.0..1.0f64, v1 in -1.0..1.0f64
        ) {
            let f = cubic();
            let x = DVector::from_vec(vec![x0, x1]);
            let v = DVector::from_vec(vec![v0, v1]);
            let fd = fd_dir(
                |s| Ok(f.eval(&(&x + &v * s))),
                0.0,
                &StepPolicy::first_derivative(),
            ).unwrap();
            let exact = f.grad(&x).dot(&v);
            prop_assert!((fd.value - exact).abs() < 1e-7 * (1.0 + exact.abs()));

            let hfd = fd_dir(
                |s| Ok(f.grad(&(&x + &v * s))),
                0.0,
                &StepPolicy::first_derivative(),
            ).unwrap();
            let hexact = f.hessian(&x) * &v;
            prop_assert!((hfd.value - &hexact).norm() < 1e-6 * (1.0 + hexact.norm()));
        }
    }
}
