//! The rational identity tying the principal curvatures to the
//! multiplicities, checked through two independent routes:
//!
//! * directly, as the vanishing of the sums
//!   `Σ_{j≠i} m_j (1 + λ_i λ_j) / (λ_i − λ_j)`;
//! * geometrically, as the vanishing of the mean curvature of each focal
//!   submanifold, whose shape spectrum consists of cotangents of the angle
//!   differences.
//!
//! The two routes agree term by term because
//! `cot(θ_j − θ_i) = (1 + λ_i λ_j)/(λ_i − λ_j)` for `λ = cot θ`, so testing
//! them against each other exercises the trigonometric bookkeeping rather
//! than re-deriving one from the other.

use super::Residual;
use crate::family::AngleData;
use crate::Real;

/// The `i`-th curvature sum `Σ_{j≠i} m_j (1 + λ_i λ_j)/(λ_i − λ_j)`.
///
/// For a family with middle-convention angles this vanishes for every `i`.
pub fn cartan_sum(angles: &AngleData, i: usize) -> Real {
    let li = angles.lambda(i);
    let mut total = 0.0;
    for j in 0..angles.g() {
        if j == i {
            continue;
        }
        let lj = angles.lambda(j);
        total += angles.multiplicities()[j] as Real * (1.0 + li * lj) / (li - lj);
    }
    total
}

/// Trace of the shape operator of the focal submanifold reached at angle
/// `θ_i`: `Σ_{j≠i} m_j cot(θ_j − θ_i)`.
///
/// Algebraically identical to [`cartan_sum`], but computed purely from the
/// angle differences.
pub fn focal_trace(angles: &AngleData, i: usize) -> Real {
    let ti = angles.theta(i);
    let mut total = 0.0;
    for j in 0..angles.g() {
        if j == i {
            continue;
        }
        let d = angles.theta(j) - ti;
        total += angles.multiplicities()[j] as Real * d.cos() / d.sin();
    }
    total
}

/// Residual for the full identity: the largest `|cartan_sum(i)|` over all
/// curvature indices `i`, plus the largest disagreement between the two
/// computation routes (either one failing is a failure of the check).
pub fn cartan_identity(angles: &AngleData, tol: f64) -> Residual {
    let mut worst: f64 = 0.0;
    let mut route_gap: f64 = 0.0;
    for i in 0..angles.g() {
        let direct = cartan_sum(angles, i);
        let trig = focal_trace(angles, i);
        worst = worst.max(direct.abs());
        route_gap = route_gap.max((direct - trig).abs());
    }
    Residual::new("cartan", worst.max(route_gap), tol).with_context(format!(
        "g={} mults={:?} route-gap={:.2e}",
        angles.g(),
        angles.multiplicities(),
        route_gap
    ))
}
