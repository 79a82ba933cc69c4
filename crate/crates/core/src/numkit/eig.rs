//! Symmetric eigendecomposition with eigenvalue clustering.
//!
//! Shape operators of isoparametric hypersurfaces have few distinct
//! eigenvalues with known multiplicities; downstream code wants the spectrum
//! grouped into clusters (curvature distributions) rather than raw repeated
//! eigenvalues. Clusters are ordered by descending eigenvalue and the
//! orthonormal basis columns are grouped accordingly.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::IsoError;
use crate::scalar::Scalar;
use crate::Result;

/// Clustered spectrum of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SpectralClusters<T: Scalar> {
    /// Representative eigenvalue per cluster (mean of members), descending.
    values: Vec<T>,
    /// Number of eigenvalues in each cluster.
    multiplicities: Vec<usize>,
    /// All eigenvalues in descending order, one per basis column.
    eigenvalues: Vec<T>,
    /// Orthonormal eigenbasis, columns sorted by descending eigenvalue and
    /// grouped cluster by cluster.
    basis: DMatrix<T>,
    cluster_tol: f64,
    /// Ambiguity notes: gaps between tol and 10*tol.
    warnings: Vec<String>,
}

/// Eigendecomposition of a symmetric matrix with gap clustering.
///
/// Eigenvalues closer than `cluster_tol` are merged into one cluster; a gap
/// in `[cluster_tol, 10*cluster_tol)` still splits but is recorded as an
/// ambiguity warning.
pub fn eig_sym<T: Scalar>(m: &DMatrix<T>, cluster_tol: f64) -> Result<SpectralClusters<T>> {
    if m.nrows() != m.ncols() {
        return Err(IsoError::Dimension {
            context: "eig_sym",
            expected: m.nrows(),
            got: m.ncols(),
        });
    }
    if !(cluster_tol > 0.0 && cluster_tol.is_finite()) {
        return Err(IsoError::Config(format!(
            "cluster_tol must be positive and finite, got {cluster_tol}"
        )));
    }
    let n = m.nrows();
    let sym_defect = (m - m.transpose()).amax().to_f64_lossy();
    let scale = m.amax().to_f64_lossy().max(1.0);
    if sym_defect > 1e-9 * scale {
        return Err(IsoError::Config(format!(
            "eig_sym input is not symmetric: defect {sym_defect:.3e}"
        )));
    }

    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[j]
            .partial_cmp(&eig.eigenvalues[i])
            .expect("symmetric eigenvalues are finite")
    });

    let eigenvalues: Vec<T> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut basis = DMatrix::<T>::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        basis.set_column(col, &eig.eigenvectors.column(i));
    }

    let mut values = Vec::new();
    let mut multiplicities = Vec::new();
    let mut warnings = Vec::new();
    let mut start = 0;
    for i in 1..=n {
        let split = i == n || {
            let gap = (eigenvalues[i - 1] - eigenvalues[i]).to_f64_lossy();
            if gap >= cluster_tol && gap < 10.0 * cluster_tol {
                warnings.push(format!(
                    "ambiguous spectral gap {gap:.3e} between eigenvalues {} and {} \
                     (cluster_tol {cluster_tol:.1e})",
                    i - 1,
                    i
                ));
            }
            gap >= cluster_tol
        };
        if split {
            let mult = i - start;
            let mean = eigenvalues[start..i]
                .iter()
                .fold(T::zero(), |acc, &v| acc + v)
                / T::from_f64_lossy(mult as f64);
            values.push(mean);
            multiplicities.push(mult);
            start = i;
        }
    }

    Ok(SpectralClusters {
        values,
        multiplicities,
        eigenvalues,
        basis,
        cluster_tol,
        warnings,
    })
}

impl<T: Scalar> SpectralClusters<T> {
    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    /// Number of clusters (distinct eigenvalues at resolution `cluster_tol`).
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn basis(&self) -> &DMatrix<T> {
        &self.basis
    }

    pub fn cluster_tol(&self) -> f64 {
        self.cluster_tol
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Column range of the basis spanned by cluster `c`.
    pub fn cluster_columns(&self, c: usize) -> std::ops::Range<usize> {
        let start: usize = self.multiplicities[..c].iter().sum();
        start..start + self.multiplicities[c]
    }

    /// Cluster index owning basis column `col`.
    pub fn cluster_of_column(&self, col: usize) -> usize {
        let mut acc = 0;
        for (c, &m) in self.multiplicities.iter().enumerate() {
            acc += m;
            if col < acc {
                return c;
            }
        }
        panic!("column {col} out of range");
    }

    /// Orthogonal projector onto the eigenspace of cluster `c`.
    pub fn projector(&self, c: usize) -> DMatrix<T> {
        let n = self.dim();
        let mut p = DMatrix::<T>::zeros(n, n);
        for col in self.cluster_columns(c) {
            let q = self.basis.column(col);
            p += q * q.transpose();
        }
        p
    }

    /// Spectral calculus: `Q f(Lambda) Q^T` with `f` applied per cluster value.
    pub fn apply_fn(&self, f: impl Fn(T) -> T) -> DMatrix<T> {
        let n = self.dim();
        let mut out = DMatrix::<T>::zeros(n, n);
        for c in 0..self.len() {
            let fv = f(self.values[c]);
            for col in self.cluster_columns(c) {
                let q = self.basis.column(col);
                out += q * q.transpose() * fv;
            }
        }
        out
    }

    /// Spectral calculus with a complex-valued function of the eigenvalues.
    pub fn apply_fn_complex(&self, f: impl Fn(T) -> Complex<T>) -> DMatrix<Complex<T>> {
        let n = self.dim();
        let mut out = DMatrix::<Complex<T>>::zeros(n, n);
        for c in 0..self.len() {
            let fv = f(self.values[c]);
            for col in self.cluster_columns(c) {
                let q: DVector<Complex<T>> = self
                    .basis
                    .column(col)
                    .map(|x| Complex::new(x, T::zero()));
                out += &q * q.transpose() * fv;
            }
        }
        out
    }

    /// Reconstruction `Q Lambda Q^T` from the raw (unclustered) eigenvalues.
    pub fn reconstruct(&self) -> DMatrix<T> {
        let n = self.dim();
        let mut out = DMatrix::<T>::zeros(n, n);
        for col in 0..n {
            let q = self.basis.column(col);
            out += q * q.transpose() * self.eigenvalues[col];
        }
        out
    }
}
