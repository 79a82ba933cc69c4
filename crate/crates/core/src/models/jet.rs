//! Second-order data of a model surface at a point: adapted orthonormal
//! eigenframe of the shape operator, principal curvatures, and distribution
//! labels, validated against the family's angle data.

use std::ops::Range;

use crate::error::IsoError;
use crate::family::{spectrum_matches, AngleData, CLUSTER_TOL};
use crate::models::PointModel;
use crate::numkit::eig_sym;
use crate::{RealMat, RealVec, Result};

/// Tolerance for the measured principal curvatures against angle data.
pub const SPECTRUM_TOL: f64 = 1e-8;
/// Hard bound on the symmetry defect of the measured shape matrix.
const SYMMETRY_DEFECT_LIMIT: f64 = 1e-6;

/// A point on a model surface.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfacePoint {
    pub coords: RealVec,
}

/// Point, unit normal, and an adapted principal frame with curvature data.
///
/// `frame` is `(n+2) x n` with orthonormal columns spanning the tangent
/// space; column `c` is a principal direction with curvature `lambdas[c]`
/// belonging to distribution `labels[c]`. Curvatures are descending, so
/// columns are grouped by distribution in index order.
#[derive(Debug, Clone)]
pub struct SurfaceJet {
    pub point: RealVec,
    pub normal: RealVec,
    pub frame: RealMat,
    pub lambdas: Vec<f64>,
    pub labels: Vec<usize>,
    pub a0: RealMat,
    pub warnings: Vec<String>,
}

impl SurfaceJet {
    pub fn n(&self) -> usize {
        self.frame.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.frame.nrows()
    }

    pub fn frame_column(&self, c: usize) -> RealVec {
        self.frame.column(c).into_owned()
    }

    /// Column range of distribution `j` (labels are contiguous).
    pub fn columns_of(&self, j: usize) -> Range<usize> {
        let start = self.labels.iter().position(|&l| l == j);
        match start {
            Some(s) => {
                let len = self.labels[s..].iter().take_while(|&&l| l == j).count();
                s..s + len
            }
            None => 0..0,
        }
    }

    /// Ambient vector from frame coordinates.
    pub fn push(&self, coeffs: &RealVec) -> RealVec {
        &self.frame * coeffs
    }

    /// Frame coordinates of an ambient tangent vector.
    pub fn pull(&self, w: &RealVec) -> RealVec {
        self.frame.transpose() * w
    }
}

/// Deterministic orthonormal tangent basis at `x` with normal `nu`:
/// modified Gram-Schmidt over the ambient coordinate vectors, seeded with
/// `x` and `nu`, re-orthogonalized once for stability.
fn tangent_basis(x: &RealVec, nu: &RealVec, n: usize) -> Result<RealMat> {
    let dim = x.len();
    let mut basis: Vec<RealVec> = vec![x.clone(), nu.clone()];
    for k in 0..dim {
        if basis.len() == n + 2 {
            break;
        }
        let mut w = RealVec::zeros(dim);
        w[k] = 1.0;
        for _ in 0..2 {
            for b in &basis {
                let c = b.dot(&w);
                w -= b * c;
            }
        }
        let norm = w.norm();
        if norm > 1e-6 {
            basis.push(w / norm);
        }
    }
    if basis.len() != n + 2 {
        return Err(IsoError::Config(format!(
            "tangent basis construction found {} directions, expected {}",
            basis.len() - 2,
            n
        )));
    }
    let mut frame = RealMat::zeros(dim, n);
    for (c, b) in basis[2..].iter().enumerate() {
        frame.set_column(c, b);
    }
    Ok(frame)
}

/// Computes the full second-order jet at the projection of `seed` and
/// validates the measured spectrum against the family's angle data.
pub fn jet(model: &dyn PointModel, angles: &AngleData, seed: &RealVec) -> Result<SurfaceJet> {
    let name = || model.spec().name.clone();
    let n = model.spec().n;
    let x = model.project(seed)?;
    let nu = model.normal_field(&x)?;
    if (x.norm() - 1.0).abs() > 1e-10 || (nu.norm() - 1.0).abs() > 1e-10 || nu.dot(&x).abs() > 1e-10 {
        return Err(IsoError::ModelConsistency {
            model: name(),
            reason: "point/normal pair is not orthonormal".into(),
        });
    }
    let t_raw = tangent_basis(&x, &nu, n)?;

    // Shape matrix in the raw tangent basis from the analytic normal
    // derivative, then symmetrized; the defect is a model-quality signal.
    let mut s = RealMat::zeros(n, n);
    for j in 0..n {
        let col = t_raw.column(j).into_owned();
        let dnu = model.dnormal(&x, &col)?;
        let av = &x * dnu.dot(&x) - dnu;
        for i in 0..n {
            s[(i, j)] = t_raw.column(i).dot(&av);
        }
    }
    let defect = (&s - s.transpose()).amax();
    let scale = 1.0 + s.amax();
    let mut warnings = Vec::new();
    if defect > SYMMETRY_DEFECT_LIMIT * scale {
        return Err(IsoError::ModelConsistency {
            model: name(),
            reason: format!("shape operator symmetry defect {defect:.3e}"),
        });
    }
    if defect > 1e-9 * scale {
        warnings.push(format!("shape symmetry defect {defect:.3e}"));
    }
    let a_raw = (&s + s.transpose()) * 0.5;

    let clusters = eig_sym(&a_raw, CLUSTER_TOL)?;
    warnings.extend(clusters.warnings().iter().cloned());
    if clusters.len() != angles.g() || clusters.multiplicities() != angles.multiplicities() {
        return Err(IsoError::ModelConsistency {
            model: name(),
            reason: format!(
                "curvature multiplicities {:?} do not match expected {:?}",
                clusters.multiplicities(),
                angles.multiplicities()
            ),
        });
    }
    if !spectrum_matches(angles, clusters.values(), clusters.multiplicities(), SPECTRUM_TOL) {
        return Err(IsoError::ModelConsistency {
            model: name(),
            reason: format!(
                "principal curvatures {:?} deviate from angle data beyond {SPECTRUM_TOL:.1e}",
                clusters.values()
            ),
        });
    }

    let frame = &t_raw * clusters.basis();
    let lambdas = clusters.eigenvalues().to_vec();
    let mut labels = Vec::with_capacity(n);
    for (j, &m) in clusters.multiplicities().iter().enumerate() {
        labels.extend(std::iter::repeat(j).take(m));
    }
    let a0 = RealMat::from_diagonal(&RealVec::from_vec(lambdas.clone()));
    Ok(SurfaceJet {
        point: x,
        normal: nu,
        frame,
        lambdas,
        labels,
        a0,
        warnings,
    })
}
