//! Structural identities satisfied by an isoparametric family and the
//! invariant package measured on it.
//!
//! Every check in this module produces a [`Residual`]: a named, non-negative
//! deviation together with the tolerance it is judged against and a short
//! context string describing where it was measured.  A missing or undefined
//! value (NaN/infinity) is always a *failure*, never a silent skip.

mod cartan;
mod codazzi;
mod gauss;
mod nablab;
mod symmetry;
mod weyl;

pub use cartan::{cartan_identity, cartan_sum, focal_trace};
pub use codazzi::{codazzi_check, codazzi_rhs};
pub use gauss::{
    chart_riemann, gauss_check, gauss_rhs, gauss_rhs_max, sphere_gauss_check, sphere_gauss_rhs,
    ChartMetric, Tensor4,
};
pub use nablab::nabla_b_check;
pub use symmetry::{involution_check, symmetry_check, symmetry_composition_check};
pub use weyl::{
    alpha_f, classical_weyl, invariant_weyl, invariant_weyl_exact6, invariant_weyl_tuple,
    polarized_weyl,
};

/// Outcome of a single identity check: the measured deviation `value`
/// compared against tolerance `tol`.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    /// Stable identifier of the check (e.g. `"cartan"`, `"gauss"`).
    pub name: String,
    /// Measured deviation; finite and `< tol` means the check passes.
    pub value: f64,
    /// Tolerance the deviation is judged against.
    pub tol: f64,
    /// Free-form description of where the residual was measured
    /// (model, point index, frame columns, ...).
    pub context: String,
}

impl Residual {
    /// Creates a residual with an empty context.
    pub fn new(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Residual {
            name: name.into(),
            value,
            tol,
            context: String::new(),
        }
    }

    /// Attaches a context description and returns the residual.
    pub fn with_context(mut self, context: impl Into<String>) -> Self {
        self.context = context.into();
        self
    }

    /// A residual passes only when it is finite and strictly below
    /// tolerance; NaN and infinities fail.
    pub fn pass(&self) -> bool {
        self.value.is_finite() && self.value < self.tol
    }
}

impl std::fmt::Display for Residual {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: {:.3e} (tol {:.1e}) [{}]{}",
            self.name,
            self.value,
            self.tol,
            if self.pass() { "pass" } else { "FAIL" },
            if self.context.is_empty() {
                String::new()
            } else {
                format!(" {}", self.context)
            }
        )
    }
}

#[cfg(test)]
mod tests {
    use super::Residual;

    #[test]
    fn residual_pass_rules() {
        assert!(Residual::new("x", 1e-9, 1e-6).pass());
        assert!(!Residual::new("x", 1e-3, 1e-6).pass());
        assert!(!Residual::new("x", f64::NAN, 1e-6).pass());
        assert!(!Residual::new("x", f64::INFINITY, 1e-6).pass());
        // boundary: value == tol fails (strict inequality)
        assert!(!Residual::new("x", 1e-6, 1e-6).pass());
    }

    #[test]
    fn residual_display_mentions_status() {
        let r = Residual::new("demo", 0.5, 1e-3).with_context("model=g1");
        let s = format!("{r}");
        assert!(s.contains("demo"));
        assert!(s.contains("FAIL"));
        assert!(s.contains("model=g1"));
    }
}
