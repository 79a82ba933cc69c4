//! Frame-level invariant package of a family member: distribution labels,
//! curvature phases, and the full cubic-form component array in a
//! gh-orthonormal eigenframe. This is the common input format for the
//! algebraic identity checks, whether the components were measured on a
//! geometric model or taken from an exact table.

use num_complex::Complex;

use crate::error::IsoError;
use crate::family::AngleData;
use crate::homog6::AlphaTable;
use crate::models::{Calc, Extension, SurfaceJet};
use crate::numkit::StepPolicy;
use crate::quadric::alpha::alpha_via_connection;
use crate::quadric::ghat::eframe_scales;
use crate::{Cplx, Result};

/// Cubic-form components and curvature labels over a gh-orthonormal frame.
#[derive(Debug, Clone)]
pub struct InvariantSet {
    n: usize,
    g: usize,
    labels: Vec<usize>,
    thetas: Vec<f64>,
    alpha_e: Vec<f64>,
}

impl InvariantSet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn g(&self) -> usize {
        self.g
    }

    /// Distribution label of a frame column, in `0..g`.
    pub fn label(&self, col: usize) -> usize {
        self.labels[col]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Principal angle of a frame column.
    pub fn theta(&self, col: usize) -> f64 {
        self.thetas[col]
    }

    /// Principal curvature `cot(theta)` of a frame column.
    pub fn lambda(&self, col: usize) -> f64 {
        let t = self.thetas[col];
        t.cos() / t.sin()
    }

    /// Cayley phase `exp(2 i theta)` of a frame column.
    pub fn mu(&self, col: usize) -> Cplx {
        Complex::from_polar(1.0, 2.0 * self.thetas[col])
    }

    /// Fully symmetric component `alpha(e_a, e_b, e_c)`.
    pub fn alpha(&self, a: usize, b: usize, c: usize) -> f64 {
        self.alpha_e[(a * self.n + b) * self.n + c]
    }

    pub fn max_alpha(&self) -> f64 {
        self.alpha_e.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Builds the package from an exact coefficient table: the table's
    /// entries are already components in a gh-orthonormal frame ordered with
    /// distribution `col mod 6`.
    pub fn from_table(table: &AlphaTable, angles: &AngleData) -> Result<Self> {
        if angles.g() != 6 {
            return Err(IsoError::Config(
                "coefficient tables describe sixfold families".into(),
            ));
        }
        let n = table.dim();
        let labels: Vec<usize> = (0..n).map(|c| table.dist(c)).collect();
        let thetas: Vec<f64> = labels.iter().map(|&l| angles.theta(l)).collect();
        let mut alpha_e = vec![0.0; n * n * n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    alpha_e[(a * n + b) * n + c] = table.get(a, b, c).to_f64();
                }
            }
        }
        Ok(InvariantSet {
            n,
            g: 6,
            labels,
            thetas,
            alpha_e,
        })
    }

    /// Assembles a package from raw parts; primarily an escape hatch for
    /// synthetic data in diagnostics and tests.  `alpha_e` is the flattened
    /// `n^3` component array with index `(a*n + b)*n + c`.
    pub fn from_parts(
        g: usize,
        labels: Vec<usize>,
        thetas: Vec<f64>,
        alpha_e: Vec<f64>,
    ) -> Result<Self> {
        let n = labels.len();
        if g == 0 || thetas.len() != n || alpha_e.len() != n * n * n {
            return Err(IsoError::Config(
                "invariant package parts have inconsistent sizes".into(),
            ));
        }
        if labels.iter().any(|&l| l >= g) {
            return Err(IsoError::Config(
                "invariant package label exceeds curvature count".into(),
            ));
        }
        Ok(InvariantSet {
            n,
            g,
            labels,
            thetas,
            alpha_e,
        })
    }

    /// Measures the package on a geometric model at a jet: each unordered
    /// triple of frame columns once through the connection route, rescaled
    /// to the gh-orthonormal frame, then symmetrized.
    pub fn measure(
        calc: &Calc,
        jet: &SurfaceJet,
        angles: &AngleData,
        policy: &StepPolicy,
    ) -> Result<Self> {
        let n = jet.n();
        let scales = eframe_scales(jet);
        let mut alpha_e = vec![0.0; n * n * n];
        for a in 0..n {
            for b in a..n {
                let ye = Extension::projected(jet.point.clone(), jet.frame_column(b));
                for c in b..n {
                    let v = alpha_via_connection(
                        calc,
                        &jet.point,
                        &jet.frame_column(a),
                        &ye,
                        &jet.frame_column(c),
                        policy,
                    )?;
                    let ve = v * scales[a] * scales[b] * scales[c];
                    for (i, j, k) in [
                        (a, b, c),
                        (a, c, b),
                        (b, a, c),
                        (b, c, a),
                        (c, a, b),
                        (c, b, a),
                    ] {
                        alpha_e[(i * n + j) * n + k] = ve;
                    }
                }
            }
        }
        let thetas: Vec<f64> = jet.labels.iter().map(|&l| angles.theta(l)).collect();
        Ok(InvariantSet {
            n,
            g: angles.g(),
            labels: jet.labels.clone(),
            thetas,
            alpha_e,
        })
    }
}
