//! Linear families of symmetric operators attached to a sixfold focal
//! manifold, and their spectral behaviour along the family parameter.
//!
//! The focal manifold reached at the last focal angle carries, for each
//! orthonormal pair of normal directions, a family
//! `L(s) = cos(s) L0 + sin(s) L1` of symmetric operators whose spectrum is
//! independent of `s`. `L0` is the diagonal focal shape operator; `L1` is
//! assembled exactly from the coefficient table. Constancy of the kernel of
//! `L(s)` is the spectral reformulation of homogeneity checked here.

use num_traits::Zero;

use crate::error::IsoError;
use crate::family::{focal_spectrum_exact6, AngleData, CLUSTER_TOL};
use crate::identities::Residual;
use crate::numkit::eig_sym;
use crate::surd::{cot_k_pi_6, Surd};
use crate::{RealMat, Result};

use super::AlphaTable;

/// Eigenvalues closer to zero than this are counted into the kernel cluster.
const KERNEL_TOL: f64 = CLUSTER_TOL;

/// Linear family `L(s) = cos(s) L0 + sin(s) L1` on the tangent space of the
/// focal manifold, stored with exact entries.
#[derive(Debug, Clone)]
pub struct IsoFamily {
    m: usize,
    j: usize,
    l0_diag: Vec<Surd>,
    l1: Vec<Surd>,
}

impl IsoFamily {
    /// Common multiplicity of the distributions.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Focal index the family is attached to (0-based distribution label).
    pub fn attached_index(&self) -> usize {
        self.j
    }

    /// Operator dimension `5m`.
    pub fn dim(&self) -> usize {
        5 * self.m
    }

    /// Exact diagonal of `L0`, descending, `m` copies per curvature value.
    pub fn l0_diag_exact(&self) -> &[Surd] {
        &self.l0_diag
    }

    /// Exact entry of `L1` at row `r`, column `c`.
    pub fn l1_entry_exact(&self, r: usize, c: usize) -> Surd {
        self.l1[r * self.dim() + c]
    }

    /// `L0` as a float matrix.
    pub fn l0(&self) -> RealMat {
        let n = self.dim();
        RealMat::from_fn(n, n, |r, c| {
            if r == c {
                self.l0_diag[r].to_f64()
            } else {
                0.0
            }
        })
    }

    /// `L1` as a float matrix.
    pub fn l1(&self) -> RealMat {
        let n = self.dim();
        RealMat::from_fn(n, n, |r, c| self.l1[r * n + c].to_f64())
    }

    /// The family member at parameter `s`.
    pub fn at(&self, s: f64) -> RealMat {
        self.l0() * s.cos() + self.l1() * s.sin()
    }
}

/// Coefficient multiplying the table component in the `(p, q)` block of
/// `L1`, where `p, q` are 1-based distribution positions in `1..=5`.
fn l1_coefficient(p: usize, q: usize) -> Surd {
    let (p, q) = if p <= q { (p, q) } else { (q, p) };
    match (p, q) {
        (1, 2) | (1, 4) | (2, 5) | (4, 5) => Surd::frac(1, 3) * Surd::sqrt6(),
        (1, 3) | (3, 5) => Surd::frac(1, 2) * Surd::sqrt2(),
        (1, 5) => Surd::sqrt2(),
        (2, 4) => Surd::frac(1, 3) * Surd::sqrt2(),
        (2, 3) | (3, 4) => Surd::frac(1, 6) * Surd::sqrt6(),
        _ => Surd::zero(),
    }
}

/// Builds the linear family attached to the last focal angle from a
/// coefficient table: `L0` is the exact focal shape diagonal, and `L1` is
/// the shape operator in the direction of the last distribution's first
/// leg, populated blockwise from the table.
pub fn build_isospectral_family(table: &AlphaTable) -> Result<IsoFamily> {
    let m = table.m();
    let n = 5 * m;
    // Tangent legs of the focal manifold: distribution positions 1..=5
    // with m legs each; leg `l` of position `p` is frame index
    // (p - 1) + 6 l. Rows interleave the m legs of each position.
    let leg = |p: usize, l: usize| (p - 1) + 6 * l;
    let row = |p: usize, l: usize| (p - 1) * m + l;
    // Differentiating normal direction: first leg of the last distribution.
    let normal_leg = 5;

    let mut l0_diag = vec![Surd::zero(); n];
    let mut l1 = vec![Surd::zero(); n * n];
    for p in 1..=5 {
        for l in 0..m {
            l0_diag[row(p, l)] = cot_k_pi_6(p as i64);
        }
    }
    for p in 1..=5 {
        for q in 1..=5 {
            if p == q {
                continue;
            }
            let coeff = l1_coefficient(p, q);
            for lp in 0..m {
                for lq in 0..m {
                    let value = coeff * table.get(leg(p, lp), leg(q, lq), normal_leg);
                    l1[row(p, lp) * n + row(q, lq)] = value;
                }
            }
        }
    }
    // The assembly above fills (r, c) and (c, r) from the same symmetric
    // table lookup, so L1 is symmetric by construction; verify anyway.
    for r in 0..n {
        for c in 0..r {
            if l1[r * n + c] != l1[c * n + r] {
                return Err(IsoError::Config(
                    "assembled family operator is not symmetric".into(),
                ));
            }
        }
    }

    let fam = IsoFamily {
        m,
        j: 5,
        l0_diag,
        l1,
    };

    // Structural invariant: the exact diagonal of L0 reproduces the focal
    // spectrum attached to the last angle, multiplicity m each.
    let angles = AngleData::middle(6, vec![m; 6])?;
    let spectrum = focal_spectrum_exact6(&angles, fam.j);
    let mut expanded = Vec::with_capacity(n);
    for (value, mult) in &spectrum {
        for _ in 0..*mult {
            expanded.push(*value);
        }
    }
    if expanded != fam.l0_diag {
        return Err(IsoError::Config(
            "family diagonal disagrees with the focal spectrum".into(),
        ));
    }
    Ok(fam)
}

fn sorted_spectrum(mat: &RealMat) -> Result<Vec<f64>> {
    let clusters = eig_sym(mat, CLUSTER_TOL)?;
    let mut vals: Vec<f64> = clusters.eigenvalues().to_vec();
    vals.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    Ok(vals)
}

fn check_pair_dims(l0: &RealMat, l1: &RealMat) -> Result<()> {
    if l0.nrows() != l0.ncols() || l1.nrows() != l1.ncols() || l0.nrows() != l1.nrows() {
        return Err(IsoError::Dimension {
            context: "linear family operator pair",
            expected: l0.nrows(),
            got: l1.nrows(),
        });
    }
    Ok(())
}

/// Maximum spectral deviation of `cos(s) L0 + sin(s) L1` from the spectrum
/// of `L0`, over `s_count` equispaced parameters in `[0, 2 pi)`. Sorted
/// spectra are compared entrywise.
pub fn isospectral_scan_pair(
    l0: &RealMat,
    l1: &RealMat,
    s_count: usize,
    tol: f64,
) -> Result<Residual> {
    if s_count < 8 {
        return Err(IsoError::Config(format!(
            "isospectral scan needs at least 8 parameter values, got {s_count}"
        )));
    }
    check_pair_dims(l0, l1)?;
    let reference = sorted_spectrum(l0)?;
    let mut worst = 0.0f64;
    for i in 0..s_count {
        let s = 2.0 * std::f64::consts::PI * i as f64 / s_count as f64;
        let ls = l0 * s.cos() + l1 * s.sin();
        let vals = sorted_spectrum(&ls)?;
        for (a, b) in vals.iter().zip(&reference) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(Residual::new("isospectral-scan", worst, tol)
        .with_context(format!("{} parameter values, dim {}", s_count, l0.nrows())))
}

/// Scan of an assembled family against its exact reference spectrum.
pub fn isospectral_scan(fam: &IsoFamily, s_count: usize, tol: f64) -> Result<Residual> {
    isospectral_scan_pair(&fam.l0(), &fam.l1(), s_count, tol)
}

/// Orthonormal basis of the kernel cluster (eigenvalues within
/// `KERNEL_TOL` of zero) of a symmetric matrix.
fn kernel_basis(mat: &RealMat) -> Result<RealMat> {
    let clusters = eig_sym(mat, CLUSTER_TOL)?;
    let cols: Vec<usize> = clusters
        .eigenvalues()
        .iter()
        .enumerate()
        .filter(|(_, &v)| v.abs() < KERNEL_TOL)
        .map(|(i, _)| i)
        .collect();
    let n = mat.nrows();
    let mut basis = RealMat::zeros(n, cols.len());
    for (out, &c) in cols.iter().enumerate() {
        basis.set_column(out, &clusters.basis().column(c));
    }
    Ok(basis)
}

/// Largest principal angle between the column spans of two orthonormal
/// bases of equal rank, computed through the projection defect
/// `sin(theta) = ||V - U U^T V||`.
fn max_principal_angle(u: &RealMat, v: &RealMat) -> f64 {
    let defect = v - u * (u.transpose() * v);
    let sine = defect
        .singular_values()
        .iter()
        .fold(0.0f64, |acc, &s| acc.max(s));
    sine.clamp(0.0, 1.0).asin()
}

/// Maximum principal angle between the kernel of `cos(s) L0 + sin(s) L1`
/// and the kernel at `s = 0`, over `s_count` equispaced parameters. A
/// change of kernel multiplicity across the grid is reported as an error
/// rather than folded into the residual.
pub fn kernel_constancy_pair(
    l0: &RealMat,
    l1: &RealMat,
    s_count: usize,
    tol: f64,
) -> Result<Residual> {
    if s_count < 8 {
        return Err(IsoError::Config(format!(
            "kernel scan needs at least 8 parameter values, got {s_count}"
        )));
    }
    check_pair_dims(l0, l1)?;
    let base = kernel_basis(l0)?;
    if base.ncols() == 0 {
        return Err(IsoError::Config(
            "family has trivial kernel at s = 0; kernel constancy is vacuous".into(),
        ));
    }
    let mut worst = 0.0f64;
    for i in 0..s_count {
        let s = 2.0 * std::f64::consts::PI * i as f64 / s_count as f64;
        let ls = l0 * s.cos() + l1 * s.sin();
        let ker = kernel_basis(&ls)?;
        if ker.ncols() != base.ncols() {
            return Err(IsoError::Config(format!(
                "kernel multiplicity changed across the scan grid: {} at s = 0, {} at s = {s:.6}",
                base.ncols(),
                ker.ncols()
            )));
        }
        worst = worst.max(max_principal_angle(&base, &ker));
    }
    Ok(Residual::new("kernel-constancy", worst, tol).with_context(format!(
        "{} parameter values, kernel rank {}",
        s_count,
        base.ncols()
    )))
}

/// Kernel-constancy scan of an assembled family.
pub fn kernel_constancy(fam: &IsoFamily, s_count: usize, tol: f64) -> Result<Residual> {
    kernel_constancy_pair(&fam.l0(), &fam.l1(), s_count, tol)
}

/// Negative-control pair: a rank-two family `L(s) = w(s) e5^T + e5 w(s)^T`
/// with `w(s) = cos(s) e1 + sin(s) e2`. Its spectrum is `{1, 0, 0, 0, -1}`
/// for every `s`, but the kernel rotates with `s`. Test fixture, not a
/// geometric example.
pub fn rotating_kernel_control() -> (RealMat, RealMat) {
    let mut l0 = RealMat::zeros(5, 5);
    l0[(0, 4)] = 1.0;
    l0[(4, 0)] = 1.0;
    let mut l1 = RealMat::zeros(5, 5);
    l1[(1, 4)] = 1.0;
    l1[(4, 1)] = 1.0;
    (l0, l1)
}
