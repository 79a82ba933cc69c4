//! Model surfaces: registry of built-in examples, JSON model files, point
//! sampling, and per-model self-tests.
//!
//! Point models expose analytic projection, normal field, and normal
//! derivative; everything downstream (frames, tensors, identities) is built
//! on those three maps. Tabulated models carry exact coefficient tables
//! instead of point geometry.

pub mod calc;
pub mod explicit;
pub mod jet;
pub mod levelset;
pub mod poly;

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Deserialize;

use crate::error::IsoError;
use crate::family::AngleData;
use crate::homog6::AlphaTable;
use crate::{RealVec, Result};

pub use calc::{Calc, Extension};
pub use explicit::{ProductModel, SphereModel};
pub use jet::{jet, SurfaceJet, SurfacePoint};
pub use levelset::LevelSetModel;
pub use poly::{Monomial, Polynomial};

/// How a model's geometry is realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Sphere,
    Product,
    LevelSet,
    Tabulated,
}

impl ModelKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::Sphere => "sphere",
            ModelKind::Product => "product",
            ModelKind::LevelSet => "level-set",
            ModelKind::Tabulated => "tabulated",
        }
    }
}

/// Static description of a model surface.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub name: String,
    pub n: usize,
    pub g: usize,
    pub multiplicities: Vec<usize>,
    pub kind: ModelKind,
}

impl ModelSpec {
    /// Validates the curvature count, multiplicity alternation, and the
    /// dimension sum, returning the family angle data.
    pub fn angles(&self) -> Result<AngleData> {
        let angles = AngleData::middle(self.g, self.multiplicities.clone())?;
        if angles.n() != self.n {
            return Err(IsoError::ModelConsistency {
                model: self.name.clone(),
                reason: format!(
                    "multiplicities sum to {} but dimension is {}",
                    angles.n(),
                    self.n
                ),
            });
        }
        Ok(angles)
    }
}

/// Point access shared by all geometric models.
pub trait PointModel: Send + Sync {
    fn spec(&self) -> &ModelSpec;

    /// Retracts an ambient point onto the surface.
    fn project(&self, y: &RealVec) -> Result<RealVec>;

    /// Unit normal field, defined and smooth near the surface.
    fn normal_field(&self, x: &RealVec) -> Result<RealVec>;

    /// Ambient directional derivative of the normal field.
    fn dnormal(&self, x: &RealVec, v: &RealVec) -> Result<RealVec>;

    fn ambient_dim(&self) -> usize {
        self.spec().n + 2
    }
}

/// A model with an exact coefficient table instead of point geometry.
#[derive(Debug, Clone)]
pub struct TabulatedModel {
    spec: ModelSpec,
    table: AlphaTable,
}

impl TabulatedModel {
    pub fn new(spec: ModelSpec, table: AlphaTable) -> Result<Self> {
        if spec.g != 6 {
            return Err(IsoError::ModelConsistency {
                model: spec.name,
                reason: "tabulated models describe sixfold families".into(),
            });
        }
        let m = spec.multiplicities[0];
        if spec.multiplicities.iter().any(|&x| x != m) {
            return Err(IsoError::ModelConsistency {
                model: spec.name,
                reason: "tabulated models need equal multiplicities".into(),
            });
        }
        if table.dim() != spec.n {
            return Err(IsoError::Dimension {
                context: "alpha table dimension",
                expected: spec.n,
                got: table.dim(),
            });
        }
        Ok(TabulatedModel { spec, table })
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn table(&self) -> &AlphaTable {
        &self.table
    }
}

/// Any registered model.
#[derive(Clone)]
pub enum Model {
    Sphere(SphereModel),
    Product(ProductModel),
    LevelSet(LevelSetModel),
    Tabulated(TabulatedModel),
}

impl Model {
    pub fn spec(&self) -> &ModelSpec {
        match self {
            Model::Sphere(m) => m.spec(),
            Model::Product(m) => m.spec(),
            Model::LevelSet(m) => m.spec(),
            Model::Tabulated(m) => m.spec(),
        }
    }

    pub fn name(&self) -> &str {
        &self.spec().name
    }

    pub fn angles(&self) -> Result<AngleData> {
        self.spec().angles()
    }

    pub fn as_point(&self) -> Option<&dyn PointModel> {
        match self {
            Model::Sphere(m) => Some(m),
            Model::Product(m) => Some(m),
            Model::LevelSet(m) => Some(m),
            Model::Tabulated(_) => None,
        }
    }

    pub fn as_tabulated(&self) -> Option<&TabulatedModel> {
        match self {
            Model::Tabulated(m) => Some(m),
            _ => None,
        }
    }
}

#[derive(Deserialize)]
struct AlphaComponentFile {
    i: usize,
    j: usize,
    k: usize,
    value_expression: String,
}

#[derive(Deserialize)]
struct ModelFile {
    name: String,
    n: usize,
    g: usize,
    multiplicities: Vec<usize>,
    kind: String,
    #[serde(default)]
    level: Option<f64>,
    #[serde(default)]
    poly: Option<Vec<Monomial>>,
    #[serde(default)]
    alpha_components: Option<Vec<AlphaComponentFile>>,
    #[serde(default)]
    radius_angle: Option<f64>,
    #[serde(default)]
    split_angle: Option<f64>,
}

/// Embedded model definitions shipped with the crate, as (name, JSON) pairs.
pub fn embedded_model_data() -> &'static [(&'static str, &'static str)] {
    &[
        ("g3-cartan", include_str!("../../data/g3_cartan.json")),
        ("g6-hom-m1", include_str!("../../data/g6_hom_m1.json")),
        ("g6-hom-m2", include_str!("../../data/g6_hom_m2.json")),
    ]
}

/// Names of the built-in models, in listing order.
pub fn builtin_names() -> &'static [&'static str] {
    &["g1-sphere", "g2-product", "g3-cartan", "g6-hom-m1", "g6-hom-m2"]
}

fn builtin(name: &str) -> Option<Result<Model>> {
    match name {
        "g1-sphere" => Some(
            SphereModel::new(
                ModelSpec {
                    name: "g1-sphere".into(),
                    n: 3,
                    g: 1,
                    multiplicities: vec![3],
                    kind: ModelKind::Sphere,
                },
                std::f64::consts::FRAC_PI_2,
            )
            .map(Model::Sphere),
        ),
        "g2-product" => Some(
            ProductModel::new(
                ModelSpec {
                    name: "g2-product".into(),
                    n: 2,
                    g: 2,
                    multiplicities: vec![1, 1],
                    kind: ModelKind::Product,
                },
                std::f64::consts::FRAC_PI_4,
            )
            .map(Model::Product),
        ),
        "g3-cartan" | "g6-hom-m1" | "g6-hom-m2" => {
            let json = embedded_model_data()
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, j)| *j)
                .expect("embedded data present");
            Some(model_from_json(json))
        }
        _ => None,
    }
}

/// Parses a model from its JSON description.
pub fn model_from_json(json: &str) -> Result<Model> {
    let file: ModelFile = serde_json::from_str(json).map_err(|e| IsoError::Json {
        what: "model file".into(),
        source: e,
    })?;
    let kind = match file.kind.as_str() {
        "sphere" => ModelKind::Sphere,
        "product" => ModelKind::Product,
        "level-set" => ModelKind::LevelSet,
        "tabulated" => ModelKind::Tabulated,
        other => {
            return Err(IsoError::Parse {
                what: "model kind".into(),
                reason: format!("unknown kind {other:?}"),
            })
        }
    };
    let spec = ModelSpec {
        name: file.name,
        n: file.n,
        g: file.g,
        multiplicities: file.multiplicities,
        kind,
    };
    spec.angles()?;
    match kind {
        ModelKind::Sphere => {
            let r = file.radius_angle.ok_or(IsoError::Parse {
                what: "model file".into(),
                reason: "sphere model needs radius_angle".into(),
            })?;
            SphereModel::new(spec, r).map(Model::Sphere)
        }
        ModelKind::Product => {
            let q = file.split_angle.ok_or(IsoError::Parse {
                what: "model file".into(),
                reason: "product model needs split_angle".into(),
            })?;
            ProductModel::new(spec, q).map(Model::Product)
        }
        ModelKind::LevelSet => {
            let monomials = file.poly.ok_or(IsoError::Parse {
                what: "model file".into(),
                reason: "level-set model needs poly".into(),
            })?;
            let level = file.level.ok_or(IsoError::Parse {
                what: "model file".into(),
                reason: "level-set model needs level".into(),
            })?;
            let poly = Polynomial::new(spec.n + 2, monomials)?;
            LevelSetModel::new(spec, poly, level).map(Model::LevelSet)
        }
        ModelKind::Tabulated => {
            let comps = file.alpha_components.ok_or(IsoError::Parse {
                what: "model file".into(),
                reason: "tabulated model needs alpha_components".into(),
            })?;
            let tuples: Vec<(usize, usize, usize, String)> = comps
                .into_iter()
                .map(|c| (c.i, c.j, c.k, c.value_expression))
                .collect();
            let m = spec.multiplicities[0];
            let table = AlphaTable::new(m, &tuples)?;
            TabulatedModel::new(spec, table).map(Model::Tabulated)
        }
    }
}

/// Loads a model from a JSON file on disk.
pub fn load_model_file(path: &Path) -> Result<Model> {
    let json = std::fs::read_to_string(path).map_err(|e| IsoError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    model_from_json(&json)
}

/// Environment variable naming a directory of extra model JSON files.
pub const MODEL_DIR_VAR: &str = "ISOGEO_MODEL_DIR";

fn model_dir() -> Option<PathBuf> {
    std::env::var_os(MODEL_DIR_VAR).map(PathBuf::from)
}

fn dir_model_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| IsoError::Io {
            path: dir.display().to_string(),
            source: e,
        })?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    Ok(files)
}

/// All available model names: built-ins plus the model directory, sorted
/// with built-ins first. A directory model that shadows a built-in name is
/// an error, keeping name resolution unambiguous.
pub fn available_models() -> Result<Vec<String>> {
    let mut names: Vec<String> = builtin_names().iter().map(|s| s.to_string()).collect();
    if let Some(dir) = model_dir() {
        let mut extra = Vec::new();
        for path in dir_model_files(&dir)? {
            let model = load_model_file(&path)?;
            let name = model.name().to_string();
            if names.contains(&name) || extra.contains(&name) {
                return Err(IsoError::Config(format!(
                    "model name {name:?} from {} collides with an existing model",
                    path.display()
                )));
            }
            extra.push(name);
        }
        extra.sort();
        names.extend(extra);
    }
    Ok(names)
}

/// Loads a model by name from the built-ins or the model directory.
pub fn load_model(name: &str) -> Result<Model> {
    if let Some(result) = builtin(name) {
        return result;
    }
    if let Some(dir) = model_dir() {
        for path in dir_model_files(&dir)? {
            let model = load_model_file(&path)?;
            if model.name() == name {
                return Ok(model);
            }
        }
    }
    Err(IsoError::UnknownModel {
        name: name.to_string(),
        available: available_models().unwrap_or_default().join(", "),
    })
}

/// Draws points on a point model: ambient Gaussian seeds, normalized and
/// projected, skipping seeds that land in projection or normal-field guards.
pub fn sample_points(model: &dyn PointModel, count: usize, seed: u64) -> Result<Vec<SurfacePoint>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = model.ambient_dim();
    let mut out = Vec::with_capacity(count);
    let max_attempts = 200 + 100 * count;
    for _ in 0..max_attempts {
        if out.len() == count {
            break;
        }
        let y = RealVec::from_fn(dim, |_, _| rng.sample::<f64, _>(StandardNormal));
        if y.norm() < 1e-3 {
            continue;
        }
        let Ok(x) = model.project(&y) else { continue };
        if model.normal_field(&x).is_err() {
            continue;
        }
        out.push(SurfacePoint { coords: x });
    }
    if out.len() < count {
        return Err(IsoError::Sampling {
            model: model.spec().name.clone(),
            reason: format!("drew {} of {count} requested points", out.len()),
        });
    }
    Ok(out)
}

/// One named residual check from a model self-test.
#[derive(Debug, Clone)]
pub struct SelfTestOutcome {
    pub name: String,
    pub residual: f64,
    pub tol: f64,
    pub detail: String,
}

impl SelfTestOutcome {
    pub fn passed(&self) -> bool {
        self.residual.is_finite() && self.residual <= self.tol
    }
}

/// Internal consistency checks of a model's own data, independent of any
/// structural identity: surface residuals, normal invariants, spectrum
/// against angle data, and table sanity for tabulated models.
pub fn model_self_test(model: &Model, points: usize, seed: u64) -> Result<Vec<SelfTestOutcome>> {
    let mut out = Vec::new();
    let angles = model.angles()?;
    match model.as_point() {
        Some(pm) => {
            let sampled = sample_points(pm, points, seed)?;
            let mut on_surface = 0.0f64;
            let mut normal_defect = 0.0f64;
            let mut spectrum_dev = 0.0f64;
            let mut frame_defect = 0.0f64;
            for p in &sampled {
                let x = &p.coords;
                let reproj = pm.project(x)?;
                on_surface = on_surface
                    .max((x.norm() - 1.0).abs())
                    .max((&reproj - x).norm());
                let nu = pm.normal_field(x)?;
                normal_defect = normal_defect
                    .max((nu.norm() - 1.0).abs())
                    .max(nu.dot(x).abs());
                let j = jet(pm, &angles, x)?;
                for (c, &lam) in j.lambdas.iter().enumerate() {
                    spectrum_dev = spectrum_dev.max((lam - angles.lambda(j.labels[c])).abs());
                }
                let gram = j.frame.transpose() * &j.frame;
                frame_defect = frame_defect
                    .max((gram - crate::RealMat::identity(j.n(), j.n())).amax());
            }
            out.push(SelfTestOutcome {
                name: "point/on-surface".into(),
                residual: on_surface,
                tol: 1e-11,
                detail: format!("max over {points} points", points = sampled.len()),
            });
            out.push(SelfTestOutcome {
                name: "point/normal-orthonormal".into(),
                residual: normal_defect,
                tol: 1e-11,
                detail: "unit normal orthogonal to position".into(),
            });
            out.push(SelfTestOutcome {
                name: "point/principal-curvatures".into(),
                residual: spectrum_dev,
                tol: jet::SPECTRUM_TOL,
                detail: "measured spectrum vs angle data".into(),
            });
            out.push(SelfTestOutcome {
                name: "point/frame-orthonormal".into(),
                residual: frame_defect,
                tol: 1e-11,
                detail: "Gram matrix of adapted frame".into(),
            });
            // Single-point cross-check of the analytic normal derivative
            // against a difference quotient along a projected curve.
            let x = &sampled[0].coords;
            let nu = pm.normal_field(x)?;
            let calc = Calc::new(pm);
            let mut v = RealVec::from_fn(pm.ambient_dim(), |i, _| ((i + 2) as f64 * 0.377).sin());
            v = calc.tangent_project(x, &v)?;
            let vn = v.norm();
            if vn > 1e-6 {
                v /= vn;
                let exact = pm.dnormal(x, &v)?;
                let fd = calc.d_along(x, &v, &crate::numkit::StepPolicy::first_derivative(), |q| {
                    pm.normal_field(q)
                })?;
                let strip = |w: &RealVec| {
                    let mut w = w.clone();
                    w -= x * w.dot(x);
                    w -= &nu * w.dot(&nu);
                    w
                };
                out.push(SelfTestOutcome {
                    name: "point/normal-derivative-fd".into(),
                    residual: (strip(&exact) - strip(&fd.value)).norm(),
                    tol: 1e-5,
                    detail: "analytic vs difference quotient, tangential part".into(),
                });
            }
        }
        None => {
            let tab = model.as_tabulated().expect("non-point models are tabulated");
            let table = tab.table();
            let round_trip = AlphaTable::new(table.m(), &table.components_canonical())
                .map(|t| t == *table)
                .unwrap_or(false);
            out.push(SelfTestOutcome {
                name: "table/round-trip".into(),
                residual: if round_trip { 0.0 } else { 1.0 },
                tol: 0.5,
                detail: "canonical export reparses to the same table".into(),
            });
            out.push(SelfTestOutcome {
                name: "table/distinct-distributions".into(),
                residual: if table.distinct_distribution_triples() { 0.0 } else { 1.0 },
                tol: 0.5,
                detail: "every stored triple touches three distributions".into(),
            });
            out.push(SelfTestOutcome {
                name: "table/dimension".into(),
                residual: if table.dim() == tab.spec().n { 0.0 } else { 1.0 },
                tol: 0.5,
                detail: "table dimension equals 6m".into(),
            });
        }
    }
    Ok(out)
}
