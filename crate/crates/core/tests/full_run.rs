//! End-to-end verification runs over every builtin model: all applicable
//! suites must pass at default tolerances, and the report must reflect the
//! skip rules exactly.

use isogeo::runner::{run_verify, RunConfig};

fn full_report(model: &str, points: usize, seed: u64) -> isogeo::report::Report {
    let mut cfg = RunConfig::new(model);
    cfg.points = points;
    cfg.seed = seed;
    run_verify(&cfg).unwrap_or_else(|e| panic!("run on {model} failed: {e}"))
}

fn assert_clean(report: &isogeo::report::Report, model: &str) {
    let failed: Vec<String> = report
        .checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("{} = {:.3e} (tol {:.1e}) [{}]", c.name, c.value, c.tol, c.context))
        .collect();
    assert!(failed.is_empty(), "failures on {model}:\n{}", failed.join("\n"));
    assert!(report.all_passed());
    assert_eq!(report.summary.failed, 0);
}

#[test]
fn sphere_model_full_run() {
    let report = full_report("g1-sphere", 2, 5);
    assert_clean(&report, "g1-sphere");
    // One distribution only: the classical identity is vacuous.
    let imp = report
        .checks
        .iter()
        .find(|c| c.name == "weyl/implies-cartan")
        .expect("implication entry present");
    assert!(imp.context.contains("vacuous"));
    assert_eq!(report.skipped.len(), 1);
    assert_eq!(report.skipped[0].name, "homog6");
}

#[test]
fn product_model_full_run() {
    let report = full_report("g2-product", 2, 5);
    assert_clean(&report, "g2-product");
    let names: Vec<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
    for expected in [
        "invariants/ghat-t-independence",
        "invariants/alpha-t-independence",
        "invariants/cayley-trace-free",
        "invariants/projector-average",
        "invariants/t-tensor-frame",
        "codazzi-gauss/codazzi",
        "symmetry/tau1",
    ] {
        assert!(names.contains(&expected), "missing {expected}");
    }
    // Structural-zero tolerances apply below three distributions.
    let cod = report
        .checks
        .iter()
        .find(|c| c.name == "codazzi-gauss/codazzi")
        .unwrap();
    assert!(cod.tol <= 1e-10);
}

#[test]
fn cartan_model_full_run() {
    let report = full_report("g3-cartan", 2, 5);
    assert_clean(&report, "g3-cartan");
    let names: Vec<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
    for expected in [
        "lift/unit",
        "lift/t-coherence-point-phase",
        "invariants/alpha-dual-route",
        "invariants/alpha-t-independence",
        "invariants/quadric-metric-match",
        "weyl/classical",
        "weyl/polarized",
        "weyl/invariant",
        "codazzi-gauss/gauss-chart",
        "codazzi-gauss/nabla-b",
        "symmetry/tau0",
        "symmetry/tau2",
        "symmetry/involution",
        "symmetry/composition",
    ] {
        assert!(names.contains(&expected), "missing {expected}");
    }
    // No cubic-form component with a repeated distribution: its trace-free
    // and same-distribution residuals sit at measurement noise.
    let same = report
        .checks
        .iter()
        .find(|c| c.name == "invariants/alpha-same-distribution")
        .unwrap();
    assert!(same.value < 1e-7, "{}", same.value);
}

#[test]
fn tabulated_models_full_run() {
    for model in ["g6-hom-m1", "g6-hom-m2"] {
        let report = full_report(model, 1, 1);
        assert_clean(&report, model);
        let skipped: Vec<&str> = report.skipped.iter().map(|s| s.name.as_str()).collect();
        assert_eq!(skipped, vec!["codazzi-gauss", "invariants", "lift", "symmetry"]);
    }
}
