//! Curvature equation of the lift: the intrinsic curvature of the modified
//! metric, measured by finite differences in a graph chart, against its
//! algebraic expression through the Cayley phases and the cubic form.
//!
//! The chart is `x(u) = project(p + Σ_a u_a col_a)` for a fixed set of
//! tangent columns; its metric is sampled on a second-order stencil and the
//! curvature tensor is assembled from first and second metric derivatives
//! only (Christoffel symbols of the first kind and their differentiated
//! inverses), never from third derivatives of the chart map.

use super::Residual;
use crate::error::IsoError;
use crate::models::{Calc, SurfaceJet};
use crate::numkit::{fd_dir, StepPolicy};
use crate::quadric::ghat::eframe_scales;
use crate::quadric::InvariantSet;
use crate::{RealMat, RealVec, Result};

/// Which metric the chart samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartMetric {
    /// The modified metric `(g0(X,Y) + g0(AX,AY))/2` of the lift.
    Modified,
    /// The induced round metric `g0`.
    Induced,
}

/// Dense rank-4 tensor over chart indices.
#[derive(Debug, Clone)]
pub struct Tensor4 {
    n: usize,
    data: Vec<f64>,
}

impl Tensor4 {
    fn zeros(n: usize) -> Self {
        Tensor4 {
            n,
            data: vec![0.0; n * n * n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.data[((a * self.n + b) * self.n + c) * self.n + d]
    }

    fn set(&mut self, a: usize, b: usize, c: usize, d: usize, v: f64) {
        self.data[((a * self.n + b) * self.n + c) * self.n + d] = v;
    }
}

/// Outer step for the metric stencils in chart coordinates; the stencils
/// are Richardson-extrapolated from this step and its half.
const CHART_STEP: f64 = 3e-3;
/// Base step of the inner chart differentials (Richardson-refined).
const CHART_INNER_STEP: f64 = 1e-3;

/// Metric matrix of the chart at chart parameter `u`.
fn chart_metric_at(
    calc: &Calc,
    p: &RealVec,
    cols: &[RealVec],
    kind: ChartMetric,
    u: &[f64],
) -> Result<RealMat> {
    let n = cols.len();
    let mut center = p.clone();
    for (a, col) in cols.iter().enumerate() {
        center += col * u[a];
    }
    let q = calc.model().project(&center)?;
    let policy = StepPolicy::curvature().with_base_step(CHART_INNER_STEP);
    let mut dirs: Vec<RealVec> = Vec::with_capacity(n);
    for col in cols {
        let d = fd_dir(
            |s| calc.model().project(&(&center + col * s)),
            0.0,
            &policy,
        )?;
        dirs.push(d.value);
    }
    let shaped: Option<Vec<RealVec>> = match kind {
        ChartMetric::Modified => {
            let mut sv = Vec::with_capacity(n);
            for d in &dirs {
                sv.push(calc.shape_apply(&q, d)?);
            }
            Some(sv)
        }
        ChartMetric::Induced => None,
    };
    let mut g = RealMat::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let val = match &shaped {
                Some(sv) => 0.5 * (dirs[a].dot(&dirs[b]) + sv[a].dot(&sv[b])),
                None => dirs[a].dot(&dirs[b]),
            };
            g[(a, b)] = val;
            g[(b, a)] = val;
        }
    }
    Ok(g)
}

/// Curvature tensor `R(∂_a, ∂_b, ∂_c, ∂_d) = gh(R(∂_a, ∂_b) ∂_c, ∂_d)` of
/// the chart metric at the chart origin, in the convention where the unit
/// round sphere has `R(X, Y, Y, X) = +1` for orthonormal `X, Y`.
pub fn chart_riemann(
    calc: &Calc,
    p: &RealVec,
    cols: &[RealVec],
    kind: ChartMetric,
) -> Result<Tensor4> {
    let n = cols.len();
    let h = CHART_STEP;
    let eval = |axes: &[(usize, f64)]| -> Result<RealMat> {
        let mut u = vec![0.0; n];
        for &(axis, step) in axes {
            u[axis] += step;
        }
        chart_metric_at(calc, p, cols, kind, &u)
    };

    let g0 = eval(&[])?;
    // Second-order stencils at one step size.
    let stencils = |h: f64| -> Result<(Vec<RealMat>, Vec<Vec<RealMat>>)> {
        let mut gp = Vec::with_capacity(n);
        let mut gm = Vec::with_capacity(n);
        for a in 0..n {
            gp.push(eval(&[(a, h)])?);
            gm.push(eval(&[(a, -h)])?);
        }
        let dg: Vec<RealMat> = (0..n).map(|a| (&gp[a] - &gm[a]) / (2.0 * h)).collect();
        let mut ddg: Vec<Vec<RealMat>> = vec![vec![RealMat::zeros(n, n); n]; n];
        #[allow(clippy::needless_range_loop)] // `a` addresses gp, gm and the diagonal of ddg together
        for a in 0..n {
            ddg[a][a] = (&gp[a] + &gm[a] - &g0 * 2.0) / (h * h);
        }
        #[allow(clippy::needless_range_loop)] // `a`, `b` address chart directions and both ddg slots
        for a in 0..n {
            for b in (a + 1)..n {
                let pp = eval(&[(a, h), (b, h)])?;
                let pm = eval(&[(a, h), (b, -h)])?;
                let mp = eval(&[(a, -h), (b, h)])?;
                let mm = eval(&[(a, -h), (b, -h)])?;
                let second = (pp - pm - mp + mm) / (4.0 * h * h);
                ddg[a][b] = second.clone();
                ddg[b][a] = second;
            }
        }
        Ok((dg, ddg))
    };
    // Richardson extrapolation of every stencil from h and h/2: the
    // leading error of each is O(h^2), so (4 D_{h/2} − D_h)/3 is O(h^4).
    let (dg_full, ddg_full) = stencils(h)?;
    let (dg_half, ddg_half) = stencils(h / 2.0)?;
    let dg: Vec<RealMat> = (0..n)
        .map(|a| (&dg_half[a] * 4.0 - &dg_full[a]) / 3.0)
        .collect();
    let ddg: Vec<Vec<RealMat>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| (&ddg_half[a][b] * 4.0 - &ddg_full[a][b]) / 3.0)
                .collect()
        })
        .collect();

    let g0inv = g0.clone().try_inverse().ok_or_else(|| {
        IsoError::Config("chart metric is singular at the chart origin".into())
    })?;
    let dginv: Vec<RealMat> = (0..n).map(|a| -(&g0inv * &dg[a] * &g0inv)).collect();

    // Christoffel symbols of the first kind: chris1[e][(b,c)] = Γ_{e,bc}.
    let chris1: Vec<RealMat> = (0..n)
        .map(|e| {
            let mut m = RealMat::zeros(n, n);
            for b in 0..n {
                for c in 0..n {
                    m[(b, c)] = 0.5 * (dg[b][(c, e)] + dg[c][(b, e)] - dg[e][(b, c)]);
                }
            }
            m
        })
        .collect();
    // Second kind: chris2[f][(b,c)] = Γ^f_{bc}.
    let chris2: Vec<RealMat> = (0..n)
        .map(|f| {
            let mut m = RealMat::zeros(n, n);
            for b in 0..n {
                for c in 0..n {
                    let mut s = 0.0;
                    for e in 0..n {
                        s += g0inv[(f, e)] * chris1[e][(b, c)];
                    }
                    m[(b, c)] = s;
                }
            }
            m
        })
        .collect();
    // ∂_x Γ_{e,bc} from the second metric derivatives.
    let dchris1 = |x: usize, e: usize, b: usize, c: usize| -> f64 {
        0.5 * (ddg[x][b][(c, e)] + ddg[x][c][(b, e)] - ddg[x][e][(b, c)])
    };
    // ∂_x Γ^f_{bc} via the differentiated inverse metric.
    let dchris2 = |x: usize, f: usize, b: usize, c: usize| -> f64 {
        let mut s = 0.0;
        for e in 0..n {
            s += dginv[x][(f, e)] * chris1[e][(b, c)] + g0inv[(f, e)] * dchris1(x, e, b, c);
        }
        s
    };

    let mut r = Tensor4::zeros(n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let mut upper = vec![0.0; n];
                    for (f, slot) in upper.iter_mut().enumerate() {
                        let mut quad = 0.0;
                        for e in 0..n {
                            quad += chris2[f][(a, e)] * chris2[e][(b, c)]
                                - chris2[f][(b, e)] * chris2[e][(a, c)];
                        }
                        *slot = dchris2(a, f, b, c) - dchris2(b, f, a, c) + quad;
                    }
                    let mut val = 0.0;
                    for (f, comp) in upper.iter().enumerate() {
                        val += g0[(d, f)] * comp;
                    }
                    r.set(a, b, c, d, val);
                }
            }
        }
    }
    Ok(r)
}

/// Algebraic right side of the curvature equation on the gh-orthonormal
/// eigenframe:
///
/// ```text
/// R(e_a, e_b, e_c, e_d) = (gh ∘∧ gh) + (b ∘∧ b̄) + ¼ (α ∘∧ α),
/// ```
///
/// which reduces to `(1 + Re(μ_a conj(μ_b))) (δ_ad δ_bc − δ_ac δ_bd)` plus
/// the frame trace `¼ Σ_m (α_adm α_bcm − α_acm α_bdm)`.
pub fn gauss_rhs(inv: &InvariantSet, a: usize, b: usize, c: usize, d: usize) -> f64 {
    let delta = |x: usize, y: usize| if x == y { 1.0 } else { 0.0 };
    let pair = delta(a, d) * delta(b, c) - delta(a, c) * delta(b, d);
    let phase = (inv.mu(a) * inv.mu(b).conj()).re;
    let mut trace = 0.0;
    for m in 0..inv.n() {
        trace += inv.alpha(a, d, m) * inv.alpha(b, c, m) - inv.alpha(a, c, m) * inv.alpha(b, d, m);
    }
    (1.0 + phase) * pair + 0.25 * trace
}

/// Largest algebraic right-side entry over all frame tuples; the flatness
/// witness for families whose cubic form vanishes structurally.
pub fn gauss_rhs_max(inv: &InvariantSet) -> f64 {
    let n = inv.n();
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    worst = worst.max(gauss_rhs(inv, a, b, c, d).abs());
                }
            }
        }
    }
    worst
}

/// Finite-difference check of the curvature equation of the lift at one
/// surface point: the chart curvature of the modified metric over the
/// gh-orthonormal eigenframe against [`gauss_rhs`], maximized over all
/// frame tuples.
pub fn gauss_check(calc: &Calc, jet: &SurfaceJet, inv: &InvariantSet, tol: f64) -> Result<Residual> {
    let n = jet.n();
    if inv.n() != n {
        return Err(IsoError::Config(
            "invariant package and jet have different frame sizes".into(),
        ));
    }
    let scales = eframe_scales(jet);
    let cols: Vec<RealVec> = (0..n)
        .map(|c| jet.frame_column(c) * scales[c])
        .collect();
    let r = chart_riemann(calc, &jet.point, &cols, ChartMetric::Modified)?;
    let mut worst: f64 = -1.0;
    let mut ctx = String::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let dev = (r.get(a, b, c, d) - gauss_rhs(inv, a, b, c, d)).abs();
                    if dev > worst {
                        worst = dev;
                        ctx = format!("tuple=({a},{b},{c},{d})");
                    }
                }
            }
        }
    }
    Ok(Residual::new("gauss", worst, tol).with_context(ctx))
}

/// Right side of the classical curvature equation of the hypersurface in
/// the round sphere, on the induced-orthonormal eigenframe: the shape
/// operator is diagonal there, so
/// `R0(f_a, f_b, f_c, f_d) = (1 + λ_a λ_b)(δ_ad δ_bc − δ_ac δ_bd)`.
pub fn sphere_gauss_rhs(jet: &SurfaceJet, a: usize, b: usize, c: usize, d: usize) -> f64 {
    let delta = |x: usize, y: usize| if x == y { 1.0 } else { 0.0 };
    let pair = delta(a, d) * delta(b, c) - delta(a, c) * delta(b, d);
    (1.0 + jet.lambdas[a] * jet.lambdas[b]) * pair
}

/// Finite-difference check of the classical curvature equation in the
/// round sphere: the chart curvature of the induced metric over the
/// induced-orthonormal eigenframe against [`sphere_gauss_rhs`].
pub fn sphere_gauss_check(calc: &Calc, jet: &SurfaceJet, tol: f64) -> Result<Residual> {
    let n = jet.n();
    let cols: Vec<RealVec> = (0..n).map(|c| jet.frame_column(c)).collect();
    let r = chart_riemann(calc, &jet.point, &cols, ChartMetric::Induced)?;
    let mut worst: f64 = -1.0;
    let mut ctx = String::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let dev = (r.get(a, b, c, d) - sphere_gauss_rhs(jet, a, b, c, d)).abs();
                    if dev > worst {
                        worst = dev;
                        ctx = format!("tuple=({a},{b},{c},{d})");
                    }
                }
            }
        }
    }
    Ok(Residual::new("sphere-gauss", worst, tol).with_context(ctx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{jet, load_model, sample_points, Calc};
    use crate::numkit::StepPolicy;

    fn measured(name: &str, seed: u64) -> (Calc<'static>, SurfaceJet, InvariantSet) {
        let model = Box::leak(Box::new(load_model(name).unwrap()));
        let pm = model.as_point().unwrap();
        let angles = model.angles().unwrap();
        let calc = Calc::new(pm);
        let p = sample_points(pm, 1, seed).unwrap()[0].coords.clone();
        let j = jet(pm, &angles, &p).unwrap();
        let inv =
            InvariantSet::measure(&calc, &j, &angles, &StepPolicy::first_derivative()).unwrap();
        (calc, j, inv)
    }

    #[test]
    fn chart_curvature_of_round_sphere_is_doubled_pair_form() {
        // With a single curvature the cubic form vanishes and the phase
        // factor is 1, so the equation reads R = 2 (gh ∘∧ gh); in the
        // orthonormal chart R(0,1,0,1) = −2 exactly.
        let (calc, j, inv) = measured("g1-sphere", 3);
        let scales = eframe_scales(&j);
        let cols: Vec<_> = (0..j.n())
            .map(|c| j.frame_column(c) * scales[c])
            .collect();
        let r = chart_riemann(&calc, &j.point, &cols, ChartMetric::Modified).unwrap();
        assert!(
            (r.get(0, 1, 0, 1) + 2.0).abs() < 1e-5,
            "R(0,1,0,1) = {}",
            r.get(0, 1, 0, 1)
        );
        let res = gauss_check(&calc, &j, &inv, 1e-4).unwrap();
        assert!(res.pass(), "{res}");
    }

    #[test]
    fn chart_curvature_has_tensor_symmetries() {
        let (calc, j, _) = measured("g1-sphere", 5);
        let scales = eframe_scales(&j);
        let cols: Vec<_> = (0..j.n())
            .map(|c| j.frame_column(c) * scales[c])
            .collect();
        let r = chart_riemann(&calc, &j.point, &cols, ChartMetric::Modified).unwrap();
        let n = j.n();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let v = r.get(a, b, c, d);
                        assert!((v + r.get(b, a, c, d)).abs() < 1e-4);
                        assert!((v + r.get(a, b, d, c)).abs() < 1e-4);
                        assert!((v - r.get(c, d, a, b)).abs() < 1e-4);
                    }
                }
            }
        }
    }

    #[test]
    fn twofold_product_is_flat_both_algebraically_and_by_chart() {
        let (calc, j, inv) = measured("g2-product", 11);
        // Structural flatness of the right side: both invariant deltas
        // cancel the pair form and the measured cubic form is noise-level.
        assert!(gauss_rhs_max(&inv) < 1e-10, "rhs = {}", gauss_rhs_max(&inv));
        let res = gauss_check(&calc, &j, &inv, 1e-4).unwrap();
        assert!(res.pass(), "{res}");
        let round = sphere_gauss_check(&calc, &j, 1e-4).unwrap();
        assert!(round.pass(), "{round}");
    }

    #[test]
    fn threefold_gauss_equation_holds_by_chart() {
        let (calc, j, inv) = measured("g3-cartan", 23);
        // Frozen algebraic value: on the threefold family the (0,1,0,1)
        // entry is −1 + 1/2 + 3/8 = −1/8.
        assert!(
            (gauss_rhs(&inv, 0, 1, 0, 1) + 0.125).abs() < 1e-5,
            "rhs(0,1,0,1) = {}",
            gauss_rhs(&inv, 0, 1, 0, 1)
        );
        let res = gauss_check(&calc, &j, &inv, 1e-3).unwrap();
        assert!(res.pass(), "{res}");
    }

    #[test]
    fn threefold_round_gauss_equation_holds_by_chart() {
        let (calc, j, _) = measured("g3-cartan", 29);
        let res = sphere_gauss_check(&calc, &j, 1e-3).unwrap();
        assert!(res.pass(), "{res}");
    }
}
