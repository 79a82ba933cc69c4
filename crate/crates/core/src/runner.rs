//! Verification run orchestration: suite selection, per-point fan-out over
//! sampled surface points, and deterministic aggregation into a report.
//!
//! A run is described by a [`RunConfig`]; [`run_verify`] executes every
//! requested suite that applies to the chosen model, records one
//! [`CheckEntry`](crate::report::CheckEntry) per check with the worst
//! residual over all evaluation points, and lists suites that do not apply
//! (point-geometry suites on tabulated models and vice versa) as skipped
//! with explicit reasons.  Checks are keyed by stable `suite/check` names,
//! which are also the keys of the per-check tolerance overrides.

use std::collections::BTreeMap;
use std::path::PathBuf;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::IsoError;
use crate::family::{self, AngleData, CLUSTER_TOL};
use crate::homog6::{
    build_isospectral_family, classical_weyl_table, frame_convert, homogeneity_criteria,
    isospectral_scan, kernel_constancy, AlphaTable, EXACT_TOL,
};
use crate::identities::{
    cartan_identity, classical_weyl, codazzi_check, gauss_check, invariant_weyl,
    invariant_weyl_exact6, involution_check, nabla_b_check, polarized_weyl, sphere_gauss_check,
    symmetry_check, symmetry_composition_check, Residual,
};
use crate::models::{
    available_models, jet, load_model, model_self_test, sample_points, Calc, Extension, Model,
    SurfaceJet,
};
use crate::numkit::StepPolicy;
use crate::quadric::{
    alpha_via_connection, alpha_via_lift, b_at_t, b_operator, eframe_scales, ghat_matrix,
    lift_residuals, lift_t_coherence, projector, t_tensor, InvariantSet,
};
use crate::report::{CheckEntry, Report, SkippedEntry};
use num_traits::Zero;
use crate::{Cplx, CplxMat, RealMat, RealVec, Result};

/// Default tolerance for purely algebraic and exact-table checks.
pub const TOL_ALGEBRAIC: f64 = 1e-10;
/// Default tolerance for checks built on first finite-difference derivatives.
pub const TOL_FD1: f64 = 1e-5;
/// Default tolerance for checks built on second (nested) derivatives.
pub const TOL_FD2: f64 = 1e-3;

const TOL_LIFT_EXACT: f64 = 1e-12;
const TOL_LIFT_STRUCT: f64 = 1e-10;
const TOL_OPERATOR: f64 = 1e-9;
const TOL_GHAT_T: f64 = 1e-8;
const TOL_ALPHA_ZERO: f64 = 1e-7;
const TOL_DUAL_ROUTE: f64 = 1e-6;
const TOL_QUADRIC: f64 = 1e-8;
const TOL_INVARIANT_WEYL_FD: f64 = 1e-4;
const TOL_NABLA_B_FD: f64 = 1e-4;
const TOL_STRUCTURAL_ZERO: f64 = 1e-8;
const TOL_CARTAN: f64 = 1e-12;
const TOL_SCAN: f64 = 1e-9;
const TOL_KERNEL: f64 = 1e-8;
const TOL_BINARY: f64 = 0.5;

const SCAN_SAMPLES: usize = 64;
/// Family-parameter grid for transport checks; well inside the focal guard
/// of every builtin model (the nearest focal angle is pi/6).
const T_GRID: [f64; 5] = [-0.3, -0.15, 0.1, 0.2, 0.3];
const GHAT_T_SAMPLES: usize = 10;
/// Measured components smaller than this are treated as structural zeros
/// when exporting.
pub const EXPORT_CUTOFF: f64 = 1e-6;

/// The eight check suites a run can request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Suite {
    /// Model-internal consistency checks.
    #[serde(rename = "self")]
    SelfTest,
    /// Structural invariants of the normal lift.
    #[serde(rename = "lift")]
    Lift,
    /// Algebraic invariants of the modified metric, cubic form and Cayley
    /// operator.
    #[serde(rename = "invariants")]
    Invariants,
    /// Classical, polarized and invariant curvature identities.
    #[serde(rename = "weyl")]
    Weyl,
    /// Codazzi and Gauss equations and the operator derivative rule.
    #[serde(rename = "codazzi-gauss")]
    CodazziGauss,
    /// Reflection symmetries of the cubic form.
    #[serde(rename = "symmetry")]
    Symmetry,
    /// The multiplicity identity of the angle data.
    #[serde(rename = "cartan")]
    Cartan,
    /// Exact sixfold-table criteria and the isospectral family.
    #[serde(rename = "homog6")]
    Homog6,
}

impl Suite {
    /// Every suite, in canonical execution order.
    pub const ALL: [Suite; 8] = [
        Suite::SelfTest,
        Suite::Lift,
        Suite::Invariants,
        Suite::Weyl,
        Suite::CodazziGauss,
        Suite::Symmetry,
        Suite::Cartan,
        Suite::Homog6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::SelfTest => "self",
            Suite::Lift => "lift",
            Suite::Invariants => "invariants",
            Suite::Weyl => "weyl",
            Suite::CodazziGauss => "codazzi-gauss",
            Suite::Symmetry => "symmetry",
            Suite::Cartan => "cartan",
            Suite::Homog6 => "homog6",
        }
    }

    pub fn parse(s: &str) -> Result<Suite> {
        Suite::ALL
            .iter()
            .copied()
            .find(|v| v.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|v| v.name()).collect();
                IsoError::Config(format!(
                    "unknown suite '{s}'; valid suites: {}",
                    names.join(", ")
                ))
            })
    }

    /// Suites that evaluate finite differences at sampled surface points.
    fn point_geometry(self) -> bool {
        matches!(
            self,
            Suite::Lift | Suite::Invariants | Suite::CodazziGauss | Suite::Symmetry
        )
    }
}

impl std::fmt::Display for Suite {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Configuration of one verification run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    /// Registered model name.
    pub model: String,
    /// Requested suites; executed in canonical order, duplicates ignored.
    pub suites: Vec<Suite>,
    /// Number of surface points to sample for point-geometry suites.
    pub points: usize,
    /// Seed for point sampling and coefficient-vector draws.
    pub seed: u64,
    /// Per-check tolerance overrides, keyed by the full check name.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tol_overrides: BTreeMap<String, f64>,
    /// Step policy for first-derivative measurements.
    pub fd: StepPolicy,
    /// Report destination; `None` keeps the report in memory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(model: impl Into<String>) -> Self {
        RunConfig {
            model: model.into(),
            suites: Suite::ALL.to_vec(),
            points: 4,
            seed: 1,
            tol_overrides: BTreeMap::new(),
            fd: StepPolicy::first_derivative(),
            out: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.points == 0 {
            return Err(IsoError::Config(
                "point count must be at least 1".into(),
            ));
        }
        if self.suites.is_empty() {
            return Err(IsoError::Config(
                "at least one suite must be requested".into(),
            ));
        }
        for (name, tol) in &self.tol_overrides {
            if !(tol.is_finite() && *tol > 0.0) {
                return Err(IsoError::Config(format!(
                    "tolerance override for '{name}' must be a positive real, got {tol}"
                )));
            }
        }
        self.fd.validate()
    }

    /// Tolerance for a check: the override when present, else the default.
    fn tol(&self, name: &str, default: f64) -> f64 {
        self.tol_overrides.get(name).copied().unwrap_or(default)
    }
}

/// Deterministic merge of per-point check results: each named check keeps
/// its worst (largest, with NaN counting as worst) residual.
#[derive(Default)]
struct Agg {
    entries: BTreeMap<String, CheckEntry>,
}

impl Agg {
    fn add(&mut self, name: &str, value: f64, tol: f64, context: String) {
        self.add_gated(name, value, tol, true, context);
    }

    /// Adds a result whose pass status additionally requires `gate`; used
    /// for checks that carry an internal pass criterion beyond the
    /// residual-below-tolerance comparison.
    fn add_gated(&mut self, name: &str, value: f64, tol: f64, gate: bool, context: String) {
        let mut entry = CheckEntry::new(name, value, tol).with_context(context);
        entry.pass = entry.pass && gate;
        match self.entries.get_mut(name) {
            None => {
                self.entries.insert(name.to_string(), entry);
            }
            Some(slot) => {
                // Replace when strictly worse; `!(value <= slot.value)` also
                // catches NaN, which must dominate and fail.
                #[allow(clippy::neg_cmp_op_on_partial_ord)]
                let worse = !(entry.value <= slot.value) || (!entry.pass && slot.pass);
                if worse {
                    entry.warnings = std::mem::take(&mut slot.warnings);
                    *slot = entry;
                }
            }
        }
    }

    fn add_residual(&mut self, name: &str, r: &Residual, point: Option<usize>) {
        let context = match point {
            Some(i) if r.context.is_empty() => format!("point {i}"),
            Some(i) => format!("point {i}; {}", r.context),
            None => r.context.clone(),
        };
        self.add(name, r.value, r.tol, context);
    }

    fn warn(&mut self, name: &str, message: String) {
        if let Some(entry) = self.entries.get_mut(name) {
            entry.warnings.push(message);
        }
    }

    fn into_checks(self) -> Vec<CheckEntry> {
        self.entries.into_values().collect()
    }
}

fn bool_residual(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        1.0
    }
}

/// Executes the configured verification run and assembles the report.
///
/// Unknown models, malformed configurations and structural errors (a table
/// that cannot be converted, a focal-time hit) surface as `Err`; identity
/// violations surface as failed checks inside the report.
pub fn run_verify(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let model = load_model(&cfg.model)?;
    let angles = model.angles()?;

    // Canonical execution order, duplicates dropped.
    let requested: Vec<Suite> = Suite::ALL
        .iter()
        .copied()
        .filter(|s| cfg.suites.contains(s))
        .collect();

    let mut agg = Agg::default();
    let mut skipped: Vec<SkippedEntry> = Vec::new();
    let is_point = model.as_point().is_some();

    for suite in &requested {
        match suite {
            Suite::SelfTest => run_self_suite(cfg, &model, &mut agg)?,
            Suite::Cartan => {
                let r = cartan_identity(&angles, cfg.tol("cartan/identity", TOL_CARTAN));
                agg.add_residual("cartan/identity", &r, None);
            }
            Suite::Homog6 => match model.as_tabulated() {
                Some(tm) => run_homog6_suite(cfg, tm.table(), &mut agg)?,
                None => skipped.push(SkippedEntry {
                    name: suite.name().into(),
                    reason: format!(
                        "skipped: not applicable — model '{}' has no coefficient table",
                        cfg.model
                    ),
                }),
            },
            Suite::Weyl if !is_point => {
                let table = model
                    .as_tabulated()
                    .expect("non-point models are tabulated")
                    .table();
                run_weyl_table_suite(cfg, table, &angles, &mut agg)?;
            }
            s if s.point_geometry() && !is_point => skipped.push(SkippedEntry {
                name: s.name().into(),
                reason: format!(
                    "skipped: not applicable — model '{}' is tabulated and has no point geometry",
                    cfg.model
                ),
            }),
            _ => {} // point-geometry suites and point-model weyl run below
        }
    }

    if is_point {
        let point_suites: Vec<Suite> = requested
            .iter()
            .copied()
            .filter(|s| s.point_geometry() || *s == Suite::Weyl)
            .collect();
        if !point_suites.is_empty() {
            run_point_suites(cfg, &model, &angles, &point_suites, &mut agg)?;
        }
    }

    let config_echo = serde_json::to_value(cfg).map_err(|e| IsoError::Json {
        what: "run configuration".into(),
        source: e,
    })?;
    Ok(Report::assemble(config_echo, agg.into_checks(), skipped))
}

fn run_self_suite(cfg: &RunConfig, model: &Model, agg: &mut Agg) -> Result<()> {
    for outcome in model_self_test(model, cfg.points, cfg.seed)? {
        let name = format!("self/{}", outcome.name);
        let tol = cfg.tol(&name, outcome.tol);
        agg.add(&name, outcome.residual, tol, outcome.detail);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Point-geometry fan-out
// ---------------------------------------------------------------------------

fn run_point_suites(
    cfg: &RunConfig,
    model: &Model,
    angles: &AngleData,
    suites: &[Suite],
    agg: &mut Agg,
) -> Result<()> {
    let pm = model.as_point().expect("caller checked point geometry");
    let calc = Calc::new(pm);
    let sampled = sample_points(pm, cfg.points, cfg.seed)?;
    let needs_components = suites.iter().any(|s| {
        matches!(
            s,
            Suite::Weyl | Suite::Invariants | Suite::CodazziGauss | Suite::Symmetry
        )
    });

    let mut weyl_pairs_checked = false;
    let mut weyl_pairs_pass = true;
    let mut jet_warnings: Vec<String> = Vec::new();

    for (idx, sp) in sampled.iter().enumerate() {
        let j = jet(pm, angles, &sp.coords)?;
        for w in &j.warnings {
            jet_warnings.push(format!("point {idx}: {w}"));
        }
        let inv = if needs_components {
            Some(InvariantSet::measure(&calc, &j, angles, &cfg.fd)?)
        } else {
            None
        };
        for suite in suites {
            match suite {
                Suite::Lift => lift_suite(cfg, &j, idx, agg),
                Suite::Invariants => {
                    invariants_suite(cfg, &calc, &j, inv.as_ref().unwrap(), angles, idx, agg)?
                }
                Suite::Weyl => weyl_point_suite(
                    cfg,
                    inv.as_ref().unwrap(),
                    idx,
                    &mut weyl_pairs_checked,
                    &mut weyl_pairs_pass,
                    agg,
                )?,
                Suite::CodazziGauss => {
                    codazzi_gauss_suite(cfg, &calc, &j, inv.as_ref().unwrap(), idx, agg)?
                }
                Suite::Symmetry => {
                    symmetry_suite(cfg, &calc, &j, inv.as_ref().unwrap(), angles, idx, agg)?
                }
                _ => {}
            }
        }
    }

    if suites.contains(&Suite::Weyl) {
        implication_entry(cfg, angles, weyl_pairs_checked, weyl_pairs_pass, agg);
    }
    if !jet_warnings.is_empty() {
        let name = format!("{}/frame-construction", suites[0].name());
        agg.add(
            &name,
            0.0,
            TOL_BINARY,
            format!("{} sampled points", sampled.len()),
        );
        for w in jet_warnings {
            agg.warn(&name, w);
        }
    }
    Ok(())
}

fn lift_suite(cfg: &RunConfig, j: &SurfaceJet, idx: usize, agg: &mut Agg) {
    for (check, value) in lift_residuals(j) {
        let name = format!("lift/{check}");
        let default = match check {
            "unit" | "cone" => TOL_LIFT_EXACT,
            _ => TOL_LIFT_STRUCT,
        };
        agg.add(&name, value, cfg.tol(&name, default), format!("point {idx}"));
    }
    for &t in &T_GRID {
        for (check, value) in lift_t_coherence(j, t) {
            let name = format!("lift/t-coherence-{check}");
            agg.add(
                &name,
                value,
                cfg.tol(&name, TOL_LIFT_STRUCT),
                format!("point {idx}; t = {t}"),
            );
        }
    }
}

fn max_cplx(m: &CplxMat) -> f64 {
    m.iter().map(|e| e.norm()).fold(0.0, f64::max)
}

/// Kronecker product of two complex matrices, row-major block layout.
fn kron_c(a: &CplxMat, b: &CplxMat) -> CplxMat {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CplxMat::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn invariants_suite(
    cfg: &RunConfig,
    calc: &Calc,
    j: &SurfaceJet,
    inv: &InvariantSet,
    angles: &AngleData,
    idx: usize,
    agg: &mut Agg,
) -> Result<()> {
    let n = j.n();
    let g = angles.g();
    let point_ctx = |extra: &str| {
        if extra.is_empty() {
            format!("point {idx}")
        } else {
            format!("point {idx}; {extra}")
        }
    };

    // Modified metric of every family member, written in the transported
    // base frame: (F^T F + G^T G)/2 with F = cos t I - sin t A0 and
    // G = cos t A0 + sin t I, which must reproduce the base value for all t.
    {
        let ghat0 = ghat_matrix(j);
        let id = RealMat::identity(n, n);
        let mut worst = 0.0f64;
        for k in 0..GHAT_T_SAMPLES {
            let t = -1.5 + 3.0 * (k as f64 + 0.5) / GHAT_T_SAMPLES as f64;
            let f = family::dparallel_factor(&j.a0, t);
            let gm = &j.a0 * t.cos() + &id * t.sin();
            let ghat_t = (f.transpose() * &f + gm.transpose() * &gm) * 0.5;
            worst = worst.max((ghat_t - &ghat0).amax());
        }
        let name = "invariants/ghat-t-independence";
        agg.add(
            name,
            worst,
            cfg.tol(name, TOL_GHAT_T),
            point_ctx(&format!("{GHAT_T_SAMPLES} parameter values")),
        );
    }

    // Full symmetry of the measured cubic form: every ordering of every
    // frame triple through the connection route.
    {
        let policy = &cfg.fd;
        let mut worst = 0.0f64;
        let mut at = String::new();
        for a in 0..n {
            for b in a..n {
                for c in b..n {
                    let mut lo = f64::INFINITY;
                    let mut hi = f64::NEG_INFINITY;
                    for (x, y, z) in [
                        (a, b, c),
                        (a, c, b),
                        (b, a, c),
                        (b, c, a),
                        (c, a, b),
                        (c, b, a),
                    ] {
                        let ye = Extension::projected(j.point.clone(), j.frame_column(y));
                        let v = alpha_via_connection(
                            calc,
                            &j.point,
                            &j.frame_column(x),
                            &ye,
                            &j.frame_column(z),
                            policy,
                        )?;
                        lo = lo.min(v);
                        hi = hi.max(v);
                    }
                    if hi - lo > worst {
                        worst = hi - lo;
                        at = format!("triple ({a},{b},{c})");
                    }
                }
            }
        }
        let name = "invariants/alpha-symmetric";
        agg.add(name, worst, cfg.tol(name, TOL_ALPHA_ZERO), point_ctx(&at));
    }

    // Components with a repeated distribution label vanish.
    {
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let la = inv.label(a);
                    let (lb, lc) = (inv.label(b), inv.label(c));
                    if la == lb || la == lc || lb == lc {
                        worst = worst.max(inv.alpha(a, b, c).abs());
                    }
                }
            }
        }
        let name = "invariants/alpha-same-distribution";
        agg.add(name, worst, cfg.tol(name, TOL_ALPHA_ZERO), point_ctx(""));
    }

    // Frame trace of the cubic form vanishes slot-wise.
    {
        let mut worst = 0.0f64;
        for c in 0..n {
            let tr: f64 = (0..n).map(|a| inv.alpha(a, a, c)).sum();
            worst = worst.max(tr.abs());
        }
        let name = "invariants/alpha-trace-free";
        agg.add(name, worst, cfg.tol(name, TOL_ALPHA_ZERO), point_ctx(""));
    }

    // Cayley operator algebra.
    let b0 = b_operator(&j.a0, CLUSTER_TOL)?;
    let id = CplxMat::identity(n, n);
    {
        let mut p = id.clone();
        for _ in 0..g {
            p = &p * &b0;
        }
        let name = "invariants/cayley-root";
        agg.add(
            name,
            max_cplx(&(p + &id)),
            cfg.tol(name, TOL_OPERATOR),
            point_ctx(&format!("operator power {g}")),
        );

        let name = "invariants/cayley-conjugate-inverse";
        let prod = b0.map(|e| e.conj()) * &b0;
        agg.add(
            name,
            max_cplx(&(prod - &id)),
            cfg.tol(name, TOL_OPERATOR),
            point_ctx(""),
        );

        let (t, phi) = (0.2, 0.35);
        let shifted = b_at_t(&b0, t + phi);
        let phased = b_at_t(&b0, t) * Cplx::from_polar(1.0, -2.0 * phi);
        let name = "invariants/cayley-phase-shift";
        agg.add(
            name,
            max_cplx(&(shifted - phased)),
            cfg.tol(name, TOL_OPERATOR),
            point_ctx(""),
        );

        if g >= 2 && angles.multiplicities().windows(2).all(|w| w[0] == w[1]) {
            let name = "invariants/cayley-trace-free";
            agg.add(
                name,
                b_at_t(&b0, 0.3).trace().norm(),
                cfg.tol(name, TOL_OPERATOR),
                point_ctx("equal multiplicities"),
            );
        }

        let binv0 = b0.map(|e| e.conj());
        let bt = b_at_t(&b0, 0.7);
        let name = "invariants/cayley-tensor-invariant";
        agg.add(
            name,
            max_cplx(&(kron_c(&bt, &bt.map(|e| e.conj())) - kron_c(&b0, &binv0))),
            cfg.tol(name, TOL_OPERATOR),
            point_ctx(""),
        );
    }

    // Spectral projectors: resolution of the identity, orthogonal
    // idempotents, and the tensor-average identity.
    {
        let projs: Vec<CplxMat> = (0..g).map(|d| projector(&b0, angles, d)).collect();
        let total = projs.iter().fold(CplxMat::zeros(n, n), |acc, p| acc + p);
        let name = "invariants/projector-resolution";
        agg.add(
            name,
            max_cplx(&(total - &id)),
            cfg.tol(name, TOL_OPERATOR),
            point_ctx(""),
        );

        let mut worst = 0.0f64;
        for (a, pa) in projs.iter().enumerate() {
            for (b, pb) in projs.iter().enumerate() {
                let prod = pa * pb;
                let expect = if a == b { pa.clone() } else { CplxMat::zeros(n, n) };
                worst = worst.max(max_cplx(&(prod - expect)));
            }
        }
        let name = "invariants/projector-algebra";
        agg.add(name, worst, cfg.tol(name, TOL_OPERATOR), point_ctx(""));

        let dim2 = n * n;
        let mut lhs = CplxMat::zeros(dim2, dim2);
        for p in &projs {
            lhs += kron_c(p, p);
        }
        let mut rhs = CplxMat::zeros(dim2, dim2);
        let mut pow = id.clone();
        for _ in 0..g {
            rhs += kron_c(&pow, &pow.map(|e| e.conj()));
            pow = &pow * &b0;
        }
        rhs /= Cplx::new(g as f64, 0.0);
        let name = "invariants/projector-average";
        agg.add(
            name,
            max_cplx(&(lhs - rhs)),
            cfg.tol(name, TOL_OPERATOR),
            point_ctx(""),
        );
    }

    // Four-tensor on frame coordinates against its closed diagonal form.
    {
        let ghat = ghat_matrix(j);
        let unit = |a: usize| {
            let mut v = RealVec::zeros(n);
            v[a] = 1.0;
            v
        };
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let measured = t_tensor(&b0, &ghat, &unit(a), &unit(b), &unit(c), &unit(d));
                        let expect = if a == b && c == d {
                            (inv.mu(a) * inv.mu(c).conj()).im * ghat[(a, a)] * ghat[(c, c)]
                        } else {
                            0.0
                        };
                        worst = worst.max((measured - expect).abs());
                    }
                }
            }
        }
        let name = "invariants/t-tensor-frame";
        agg.add(name, worst, cfg.tol(name, TOL_OPERATOR), point_ctx(""));
    }

    // The two independent measurement routes for the cubic form agree.
    {
        let policy = &cfg.fd;
        let mut worst = 0.0f64;
        let mut at = String::new();
        for a in 0..n {
            for b in a..n {
                for c in b..n {
                    let x = j.frame_column(a);
                    let y = j.frame_column(b);
                    let z = j.frame_column(c);
                    let ye = Extension::projected(j.point.clone(), y.clone());
                    let ze = Extension::projected(j.point.clone(), z.clone());
                    let v1 = alpha_via_connection(calc, &j.point, &x, &ye, &z, policy)?;
                    let v2 = alpha_via_lift(calc, &j.point, &x, &y, &ze, policy)?;
                    if (v1 - v2).abs() > worst {
                        worst = (v1 - v2).abs();
                        at = format!("triple ({a},{b},{c})");
                    }
                }
            }
        }
        let name = "invariants/alpha-dual-route";
        agg.add(name, worst, cfg.tol(name, TOL_DUAL_ROUTE), point_ctx(&at));
    }

    // The cubic form is the same on every family member when measured in
    // the member's own transported gh-orthonormal frame.
    {
        let mut worst = 0.0f64;
        let mut at = String::new();
        for &t in &T_GRID {
            for a in 0..n {
                for b in a..n {
                    for c in b..n {
                        let v = alpha_on_member(cfg, calc, j, t, a, b, c)?;
                        let dev = (v - inv.alpha(a, b, c)).abs();
                        if dev > worst {
                            worst = dev;
                            at = format!("t = {t}, triple ({a},{b},{c})");
                        }
                    }
                }
            }
        }
        let name = "invariants/alpha-t-independence";
        agg.add(name, worst, cfg.tol(name, TOL_FD1), point_ctx(&at));
    }

    // Curvature data of the lift against the frame-level reference.
    for (check, value) in crate::quadric::quadric_residuals(j, CLUSTER_TOL)? {
        let name = format!("invariants/quadric-{check}");
        agg.add(&name, value, cfg.tol(&name, TOL_QUADRIC), point_ctx(""));
    }

    Ok(())
}

/// Cubic-form component on the family member at parameter `t`, measured by
/// finite differences through the parallel map and normalized to the
/// member's gh-orthonormal frame.
///
/// The member-`t` data is expressed through base-surface fields: with
/// `F_t = cos t I - sin t A` the parallel differential, the transported
/// field satisfies `Y_t = F_t Y` pointwise and the member's shape operator
/// obeys `A_t F_t = cos t A + sin t I`, so both fields entering the
/// covariant derivative are evaluated without inverting `F_t` anywhere but
/// at the base point, where the principal frame diagonalizes it.
fn alpha_on_member(
    cfg: &RunConfig,
    calc: &Calc,
    j: &SurfaceJet,
    t: f64,
    a: usize,
    b: usize,
    c: usize,
) -> Result<f64> {
    let (ct, st) = (t.cos(), t.sin());
    for &lam in &j.lambdas {
        if (ct - lam * st).abs() < family::FOCAL_GUARD {
            return Err(IsoError::FocalTime {
                t,
                j: 0,
                theta: (1.0f64).atan2(lam),
            });
        }
    }
    let p = &j.point;
    let n = j.n();
    let (qt, nut) = family::parallel(p, &j.normal, t);
    let tan_t = |v: &RealVec| -> RealVec {
        let mut w = v.clone();
        w -= &qt * v.dot(&qt);
        w -= &nut * v.dot(&nut);
        w
    };
    let policy = &cfg.fd;
    let xa = j.frame_column(a);
    let ye = Extension::projected(p.clone(), j.frame_column(b));

    // Derivative of the member's shape image A_t Y_t = cos t (A Y) + sin t Y
    // along the transported curve, then its member-tangential part.
    let d_shape = calc
        .d_along(p, &xa, policy, |r| {
            let y = calc.extend(&ye, r)?;
            Ok(calc.shape_apply(r, &y)? * ct + &y * st)
        })?
        .value;
    let w1 = tan_t(&d_shape);

    // Member covariant derivative of Y_t itself, then A_t applied at the
    // base point through the common principal directions.
    let d_field = calc
        .d_along(p, &xa, policy, |r| {
            let y = calc.extend(&ye, r)?;
            Ok(&y * ct - calc.shape_apply(r, &y)? * st)
        })?
        .value;
    let nab = tan_t(&d_field);
    let mut w2 = RealVec::zeros(p.len());
    for d in 0..n {
        let xd = j.frame_column(d);
        let lam_t = (j.lambdas[d] * ct + st) / (ct - j.lambdas[d] * st);
        w2 += &xd * (lam_t * nab.dot(&xd));
    }

    let zt = j.frame_column(c) * (ct - j.lambdas[c] * st);
    let raw = (w1 - w2).dot(&zt);

    // Normalization to the member's gh-orthonormal frame collapses to the
    // base scales: the transported-length and curvature factors cancel.
    let scales = eframe_scales(j);
    Ok(raw * scales[a] * scales[b] * scales[c])
}

fn weyl_point_suite(
    cfg: &RunConfig,
    inv: &InvariantSet,
    idx: usize,
    pairs_checked: &mut bool,
    pairs_pass: &mut bool,
    agg: &mut Agg,
) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(
        cfg.seed
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(idx as u64),
    );
    // Column counts per distribution label.
    let mut cols: BTreeMap<usize, usize> = BTreeMap::new();
    for &l in inv.labels() {
        *cols.entry(l).or_insert(0) += 1;
    }
    let labels: Vec<usize> = cols.keys().copied().collect();
    let mut draw = |len: usize| -> Vec<f64> {
        (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect()
    };

    let tol_cl = cfg.tol("weyl/classical", TOL_FD1);
    let tol_po = cfg.tol("weyl/polarized", TOL_FD1);
    for (i, &di) in labels.iter().enumerate() {
        for &dj in &labels[i + 1..] {
            let (mi, mj) = (cols[&di], cols[&dj]);
            let vi = draw(mi);
            let vj = draw(mj);
            let r = classical_weyl(inv, di, dj, &vi, &vj, tol_cl)?;
            *pairs_checked = true;
            *pairs_pass = *pairs_pass && r.pass();
            agg.add_residual("weyl/classical", &r, Some(idx));

            let vit = draw(mi);
            let vjt = draw(mj);
            let rp = polarized_weyl(inv, di, dj, &vi, &vit, &vj, &vjt, tol_po)?;
            agg.add_residual("weyl/polarized", &rp, Some(idx));
        }
    }

    let r = invariant_weyl(inv, cfg.tol("weyl/invariant", TOL_INVARIANT_WEYL_FD));
    agg.add_residual("weyl/invariant", &r, Some(idx));
    Ok(())
}

fn run_weyl_table_suite(
    cfg: &RunConfig,
    table: &AlphaTable,
    angles: &AngleData,
    agg: &mut Agg,
) -> Result<()> {
    let inv = InvariantSet::from_table(table, angles)?;

    let r = invariant_weyl(&inv, cfg.tol("weyl/invariant", TOL_ALGEBRAIC));
    agg.add_residual("weyl/invariant", &r, None);

    let exact = invariant_weyl_exact6(table)?;
    let name = "weyl/invariant-exact";
    agg.add(
        name,
        bool_residual(exact),
        cfg.tol(name, TOL_BINARY),
        "exact field arithmetic over all frame tuples".into(),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let m = table.m();
    let mut draw = |len: usize| -> Vec<f64> {
        (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect()
    };
    let tol_cl = cfg.tol("weyl/classical", TOL_ALGEBRAIC);
    let tol_po = cfg.tol("weyl/polarized", TOL_ALGEBRAIC);
    let mut pairs_pass = true;
    for di in 0..6 {
        for dj in di + 1..6 {
            let vi = draw(m);
            let vj = draw(m);
            let r = classical_weyl(&inv, di, dj, &vi, &vj, tol_cl)?;
            pairs_pass = pairs_pass && r.pass();
            agg.add_residual("weyl/classical", &r, None);
            let vit = draw(m);
            let vjt = draw(m);
            let rp = polarized_weyl(&inv, di, dj, &vi, &vit, &vj, &vjt, tol_po)?;
            agg.add_residual("weyl/polarized", &rp, None);
        }
    }

    implication_entry(cfg, angles, true, pairs_pass, agg);
    Ok(())
}

/// Suite-level implication: whenever the classical identity holds on the
/// model, the multiplicity identity of the angle data must hold as well.
fn implication_entry(
    cfg: &RunConfig,
    angles: &AngleData,
    pairs_checked: bool,
    pairs_pass: bool,
    agg: &mut Agg,
) {
    let cartan = cartan_identity(angles, cfg.tol("cartan/identity", TOL_CARTAN));
    let violated = pairs_checked && pairs_pass && !cartan.pass();
    let context = if !pairs_checked {
        "vacuous: no distinct distribution pairs".to_string()
    } else {
        format!(
            "classical identity {} and multiplicity identity residual {:.3e}",
            if pairs_pass { "holds" } else { "fails" },
            cartan.value
        )
    };
    let name = "weyl/implies-cartan";
    agg.add(
        name,
        bool_residual(!violated),
        cfg.tol(name, TOL_BINARY),
        context,
    );
}

fn codazzi_gauss_suite(
    cfg: &RunConfig,
    calc: &Calc,
    j: &SurfaceJet,
    inv: &InvariantSet,
    idx: usize,
    agg: &mut Agg,
) -> Result<()> {
    let g = inv.g();
    let default_cod = if g < 3 { TOL_ALGEBRAIC } else { TOL_FD2 };
    let r = codazzi_check(calc, j, inv, cfg.tol("codazzi-gauss/codazzi", default_cod))?;
    agg.add_residual("codazzi-gauss/codazzi", &r, Some(idx));

    let r = gauss_check(calc, j, inv, cfg.tol("codazzi-gauss/gauss-chart", TOL_FD2))?;
    agg.add_residual("codazzi-gauss/gauss-chart", &r, Some(idx));

    let r = sphere_gauss_check(calc, j, cfg.tol("codazzi-gauss/gauss-sphere", TOL_FD2))?;
    agg.add_residual("codazzi-gauss/gauss-sphere", &r, Some(idx));

    let default_nb = if g < 3 { TOL_STRUCTURAL_ZERO } else { TOL_NABLA_B_FD };
    let r = nabla_b_check(calc, j, inv, cfg.tol("codazzi-gauss/nabla-b", default_nb))?;
    agg.add_residual("codazzi-gauss/nabla-b", &r, Some(idx));
    Ok(())
}

fn symmetry_suite(
    cfg: &RunConfig,
    calc: &Calc,
    j: &SurfaceJet,
    inv: &InvariantSet,
    angles: &AngleData,
    idx: usize,
    agg: &mut Agg,
) -> Result<()> {
    let g = angles.g();
    for refl in 0..g {
        let name = format!("symmetry/tau{refl}");
        let r = symmetry_check(calc, j, inv, angles, refl, &cfg.fd, cfg.tol(&name, TOL_FD1))?;
        agg.add_residual(&name, &r, Some(idx));

        let ri = involution_check(
            angles,
            refl,
            &j.point,
            &j.normal,
            cfg.tol("symmetry/involution", TOL_STRUCTURAL_ZERO),
        );
        agg.add_residual("symmetry/involution", &ri, Some(idx));
    }
    let (j1, j2) = if g >= 2 { (0, 1) } else { (0, 0) };
    let r = symmetry_composition_check(
        calc,
        j,
        inv,
        angles,
        j1,
        j2,
        &cfg.fd,
        cfg.tol("symmetry/composition", TOL_FD1),
    )?;
    agg.add_residual("symmetry/composition", &r, Some(idx));
    Ok(())
}

fn run_homog6_suite(cfg: &RunConfig, table: &AlphaTable, agg: &mut Agg) -> Result<()> {
    for rep in homogeneity_criteria(table)? {
        let name = format!("homog6/criterion-{}", rep.criterion);
        let default = if rep.criterion == "vi" { TOL_KERNEL } else { EXACT_TOL };
        agg.add_gated(&name, rep.residual, cfg.tol(&name, default), rep.pass, rep.detail);
    }

    let fam = build_isospectral_family(table)?;
    let r = isospectral_scan(&fam, SCAN_SAMPLES, cfg.tol("homog6/isospectral-scan", TOL_SCAN))?;
    agg.add_residual("homog6/isospectral-scan", &r, None);
    let r = kernel_constancy(&fam, SCAN_SAMPLES, cfg.tol("homog6/kernel-constancy", TOL_KERNEL))?;
    agg.add_residual("homog6/kernel-constancy", &r, None);

    let mut relation_ok = true;
    for di in 0..6 {
        for dj in di + 1..6 {
            relation_ok = relation_ok && classical_weyl_table(table, di, dj)?;
        }
    }
    let name = "homog6/curvature-relation";
    agg.add(
        name,
        bool_residual(relation_ok),
        cfg.tol(name, TOL_BINARY),
        "15 distribution pairs in exact arithmetic".into(),
    );

    // Connection coefficients from the frame conversion are exactly
    // antisymmetric in their last two legs.
    let frames = frame_convert(table)?;
    let mut antisym_ok = true;
    for ((a, b, c), value) in &frames.christoffel {
        let mirrored = frames
            .christoffel
            .iter()
            .find(|((x, y, z), _)| (x, y, z) == (a, c, b))
            .map(|(_, v)| *v);
        match mirrored {
            Some(m) => antisym_ok = antisym_ok && (*value + m).is_zero(),
            None => antisym_ok = false,
        }
    }
    let name = "homog6/connection-antisymmetry";
    agg.add(
        name,
        bool_residual(antisym_ok),
        cfg.tol(name, TOL_BINARY),
        format!("{} connection entries", frames.christoffel.len()),
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// Listing and export
// ---------------------------------------------------------------------------

/// One row of the model listing.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelRow {
    pub name: String,
    pub kind: String,
    pub g: usize,
    pub n: usize,
    pub multiplicities: Vec<usize>,
}

/// All registered models (builtin and directory-provided), sorted by name.
pub fn list_models() -> Result<Vec<ModelRow>> {
    let mut rows = Vec::new();
    for name in available_models()? {
        let model = load_model(&name)?;
        let spec = model.spec();
        rows.push(ModelRow {
            name: spec.name.clone(),
            kind: spec.kind.as_str().to_string(),
            g: spec.g,
            n: spec.n,
            multiplicities: spec.multiplicities.clone(),
        });
    }
    rows.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(rows)
}

/// One exported cubic-form component; `value` is an exact coefficient
/// string for tabulated models and a float for measured ones.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlphaComponent {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: serde_json::Value,
}

/// Serializable dump of a model's cubic-form components.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlphaExport {
    pub schema: u32,
    pub model: String,
    /// `"table"` for exact tabulated data, `"point"` for measured data.
    pub source: String,
    pub g: usize,
    pub n: usize,
    pub multiplicities: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Nonzero components only, canonical index order, 1-based indices.
    pub components: Vec<AlphaComponent>,
}

/// Exports the nonzero cubic-form components of a model.
///
/// Tabulated models export their exact table; point models measure the
/// components at one sampled surface point.  Requesting a point measurement
/// on a tabulated model is a configuration error.
pub fn export_alpha(
    model_name: &str,
    at_point: bool,
    seed: u64,
    fd: &StepPolicy,
) -> Result<AlphaExport> {
    let model = load_model(model_name)?;
    let spec = model.spec().clone();
    if let Some(tm) = model.as_tabulated() {
        if at_point {
            return Err(IsoError::NotApplicable {
                op: "point measurement export",
                model: model_name.to_string(),
                kind: "tabulated",
            });
        }
        let components = tm
            .table()
            .components_canonical()
            .into_iter()
            .map(|(i, j, k, value)| AlphaComponent {
                i,
                j,
                k,
                value: serde_json::Value::String(value),
            })
            .collect();
        return Ok(AlphaExport {
            schema: 1,
            model: spec.name,
            source: "table".into(),
            g: spec.g,
            n: spec.n,
            multiplicities: spec.multiplicities,
            seed: None,
            components,
        });
    }

    let pm = model.as_point().expect("non-tabulated models have points");
    let angles = model.angles()?;
    let calc = Calc::new(pm);
    let p = sample_points(pm, 1, seed)?[0].coords.clone();
    let j = jet(pm, &angles, &p)?;
    let inv = InvariantSet::measure(&calc, &j, &angles, fd)?;
    let mut components = Vec::new();
    for a in 0..inv.n() {
        for b in a..inv.n() {
            for c in b..inv.n() {
                let v = inv.alpha(a, b, c);
                if v.abs() > EXPORT_CUTOFF {
                    components.push(AlphaComponent {
                        i: a + 1,
                        j: b + 1,
                        k: c + 1,
                        value: serde_json::json!(v),
                    });
                }
            }
        }
    }
    Ok(AlphaExport {
        schema: 1,
        model: spec.name,
        source: "point".into(),
        g: spec.g,
        n: spec.n,
        multiplicities: spec.multiplicities,
        seed: Some(seed),
        components,
    })
}
