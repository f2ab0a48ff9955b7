//! Artifact files. The kind of a file is read off its top-level keys.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Component, Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::CliError;
use crate::compose::{flatten_params, par_compose, seq_compose};
use crate::fincat::{validate_category, CatError, CategorySpec, FinCat, Functor, NatTrans};
use crate::learner::LearnerSpec;
use crate::lens::{make_lens, materialize, AlaLens, LensError, Point, PutRow, TableLens};
use crate::modelspace::{
    as_ala_lens, sample_points, ModelDelta, Policy, RelSpace, Scenario, ViewDef, IT_DEPARTMENTS,
};
use crate::pfun::ParamFunctor;

/// A lens between model spaces with finite parameters.
pub type ModelLensBox = Box<dyn AlaLens<P = FinCat, S = RelSpace, T = RelSpace>>;

/// A database lens together with the points its laws are checked at.
pub struct ModelLens {
    pub lens: ModelLensBox,
    pub points: Vec<Point<ModelLensBox>>,
}

pub enum LensArtifact {
    Table(TableLens),
    Model(ModelLens),
}

pub enum Artifact {
    Category(FinCat),
    PFunctor(ParamFunctor),
    Lens(LensArtifact),
    Scenario(Scenario),
    Learner(LearnerSpec),
}

impl Artifact {
    pub fn kind(&self) -> &'static str {
        match self {
            Artifact::Category(_) => "category",
            Artifact::PFunctor(_) => "p-functor",
            Artifact::Lens(LensArtifact::Table(_)) => "lens",
            Artifact::Lens(LensArtifact::Model(_)) => "database lens",
            Artifact::Scenario(_) => "scenario",
            Artifact::Learner(_) => "learner",
        }
    }
}

/// Seed for sampled law-check points of database lenses.
const SAMPLE_SEED: u64 = 0;
const SAMPLES_PER_ANCHOR: usize = 2;

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: malformed JSON: {e}", path.display())))
}

fn parse<T: for<'de> Deserialize<'de>>(v: Value, what: &str) -> Result<T, CliError> {
    serde_json::from_value(v).map_err(|e| CliError::Input(format!("bad {what}: {e}")))
}

fn dir_of(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

/// The variant name of an error, for reports.
pub fn variant<E: std::fmt::Debug>(e: &E) -> String {
    let s = format!("{e:?}");
    s.split(|c: char| !c.is_alphanumeric())
        .next()
        .unwrap_or_default()
        .to_string()
}

fn cat_check(e: CatError) -> CliError {
    CliError::Check(format!("{}: {e}", variant(&e)))
}

fn lens_check(e: LensError) -> CliError {
    match e {
        LensError::Cat(c) => cat_check(c),
        other => CliError::Check(format!("{}: {other}", variant(&other))),
    }
}

pub fn load(path: &Path) -> Result<Artifact, CliError> {
    let v = read_json(path)?;
    load_value(v, &dir_of(path))
}

fn has(v: &Value, key: &str) -> bool {
    v.get(key).is_some()
}

fn load_value(v: Value, dir: &Path) -> Result<Artifact, CliError> {
    if !v.is_object() {
        return Err(CliError::Input("expected a JSON object".into()));
    }
    if has(&v, "compose") && has(&v, "components") {
        Ok(Artifact::Lens(load_descriptor(v, dir)?))
    } else if has(&v, "put") {
        Ok(Artifact::Lens(LensArtifact::Table(load_table_lens(
            v, dir,
        )?)))
    } else if has(&v, "on_obj") {
        Ok(Artifact::PFunctor(load_pfun(v, dir)?))
    } else if has(&v, "objects") {
        Ok(Artifact::Category(load_category(v)?))
    } else if has(&v, "source") && has(&v, "view_update") {
        let sc: Scenario = parse(v, "scenario")?;
        Ok(Artifact::Scenario(sc))
    } else if has(&v, "layers") {
        Ok(Artifact::Learner(parse(v, "learner spec")?))
    } else if has(&v, "policy") && has(&v, "view") {
        Ok(Artifact::Lens(LensArtifact::Model(load_model_lens(v)?)))
    } else {
        Err(CliError::Input(
            "unrecognised file: no category, p-functor, lens, scenario or learner keys".into(),
        ))
    }
}

fn load_category(v: Value) -> Result<FinCat, CliError> {
    let spec: CategorySpec = parse(v, "category")?;
    validate_category(&spec).map_err(cat_check)
}

/// A category given inline or as a path relative to `dir`.
fn category_ref(v: Value, dir: &Path) -> Result<FinCat, CliError> {
    match v {
        Value::String(p) => match load(&dir.join(p))? {
            Artifact::Category(c) => Ok(c),
            other => Err(CliError::Input(format!(
                "expected a category file, got a {}",
                other.kind()
            ))),
        },
        other => load_category(other),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FunctorFile {
    obj_map: BTreeMap<String, String>,
    arr_map: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NatFile {
    components: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PFunFile {
    params: Value,
    source: Value,
    target: Value,
    on_obj: BTreeMap<String, FunctorFile>,
    #[serde(default)]
    on_arr: BTreeMap<String, NatFile>,
}

fn load_pfun(v: Value, dir: &Path) -> Result<ParamFunctor, CliError> {
    let f: PFunFile = parse(v, "p-functor")?;
    let params = category_ref(f.params, dir)?;
    let source = category_ref(f.source, dir)?;
    let target = category_ref(f.target, dir)?;
    let mut on_obj = BTreeMap::new();
    for (p, ff) in f.on_obj {
        let fun = Functor::checked(source.clone(), target.clone(), ff.obj_map, ff.arr_map)
            .map_err(cat_check)?;
        on_obj.insert(p, fun);
    }
    let mut on_arr = BTreeMap::new();
    for (e, nf) in f.on_arr {
        let ends = params
            .src(&e)
            .and_then(|a| Ok((a, params.dst(&e)?)))
            .map_err(cat_check)?;
        let pick = |o: &str| {
            on_obj.get(o).cloned().ok_or_else(|| {
                CliError::Check(format!("MissingFunctor: no functor for parameter `{o}`"))
            })
        };
        let t =
            NatTrans::checked(pick(ends.0)?, pick(ends.1)?, nf.components).map_err(cat_check)?;
        on_arr.insert(e, t);
    }
    for p in params.objects() {
        let id = params.identity(p).map_err(cat_check)?;
        if let (false, Some(f)) = (on_arr.contains_key(id), on_obj.get(p)) {
            on_arr.insert(id.to_string(), NatTrans::identity(f));
        }
    }
    ParamFunctor::new(params, source, target, on_obj, on_arr).map_err(cat_check)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LensFile {
    get: Value,
    put: Vec<PutRow>,
}

fn load_table_lens(v: Value, dir: &Path) -> Result<TableLens, CliError> {
    let f: LensFile = parse(v, "lens")?;
    let get = match f.get {
        Value::String(p) => match load(&dir.join(p))? {
            Artifact::PFunctor(g) => g,
            other => {
                return Err(CliError::Input(format!(
                    "expected a p-functor file, got a {}",
                    other.kind()
                )))
            }
        },
        other => load_pfun(other, dir)?,
    };
    make_lens(get, f.put).map_err(lens_check)
}

/// A policy applied to one of the database views.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelLensFile {
    policy: Policy,
    view: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    thresholds: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    it_departments: Option<Vec<String>>,
}

fn named_view(
    view: &str,
    thresholds: Option<&[String]>,
    it: Option<&[String]>,
) -> Result<ViewDef, CliError> {
    let it: Vec<String> = it
        .map(<[String]>::to_vec)
        .unwrap_or_else(|| IT_DEPARTMENTS.map(String::from).to_vec());
    let model = |e: crate::modelspace::ModelError| CliError::Input(e.to_string());
    let first = match thresholds {
        Some(t) => ViewDef::it_view(&it).with_thresholds(t).map_err(model)?,
        None => ViewDef::it_view(&it),
    };
    match view {
        "it" => Ok(first),
        "ml" => Ok(ViewDef::ml_view(&it)),
        "it;ml" => {
            use crate::compose::ComposableGet;
            first
                .then(&ViewDef::ml_view(&it))
                .map_err(|e| CliError::Input(e.to_string()))
        }
        other => Err(CliError::Input(format!(
            "unknown view `{other}` (expected it, ml or it;ml)"
        ))),
    }
}

fn boxed_model_lens(lens: ModelLensBox) -> Result<ModelLens, CliError> {
    let points = sample_points(&lens, SAMPLE_SEED, SAMPLES_PER_ANCHOR).map_err(lens_check)?;
    Ok(ModelLens { lens, points })
}

fn load_model_lens(v: Value) -> Result<ModelLens, CliError> {
    let f: ModelLensFile = parse(v, "database lens")?;
    let vd = named_view(
        &f.view,
        f.thresholds.as_deref(),
        f.it_departments.as_deref(),
    )?;
    boxed_model_lens(Box::new(as_ala_lens(f.policy, &vd)))
}

/// The lens of a scenario file and its two points: the identity and the
/// scenario's update.
pub fn scenario_lens(sc: &Scenario, policy: Option<Policy>) -> Result<ModelLens, CliError> {
    let policy = policy
        .or(sc.policy)
        .ok_or_else(|| CliError::Input("scenario names no policy; pass --policy".into()))?;
    let vd = sc
        .selected_view()
        .map_err(|e| CliError::Input(e.to_string()))?;
    let theta = sc.selected_theta();
    let w = sc.update().map_err(|e| CliError::Input(e.to_string()))?;
    let lens: ModelLensBox = Box::new(as_ala_lens(policy, &vd));
    let view = lens.get_obj(&theta, &sc.source).map_err(lens_check)?;
    let points = vec![
        (
            theta.clone(),
            sc.source.clone(),
            ModelDelta::identity(&view),
        ),
        (theta, sc.source.clone(), w),
    ];
    Ok(ModelLens { lens, points })
}

/// How two lenses are composed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComposeKind {
    Seq,
    Par,
}

/// A composite of lens files, referenced relative to the descriptor.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Descriptor {
    pub compose: ComposeKind,
    pub components: Vec<String>,
}

fn load_lens_file(path: &Path) -> Result<LensArtifact, CliError> {
    match load(path)? {
        Artifact::Lens(l) => Ok(l),
        other => Err(CliError::Input(format!(
            "{}: expected a lens file, got a {}",
            path.display(),
            other.kind()
        ))),
    }
}

fn load_descriptor(v: Value, dir: &Path) -> Result<LensArtifact, CliError> {
    let d: Descriptor = parse(v, "composition descriptor")?;
    let mut parts = d.components.iter().map(|c| load_lens_file(&dir.join(c)));
    let first = parts
        .next()
        .ok_or_else(|| CliError::Input("descriptor has no components".into()))??;
    parts.try_fold(first, |acc, next| compose_lenses(d.compose, acc, next?))
}

fn compose_error(e: LensError) -> CliError {
    CliError::Input(format!("{}: {e}", variant(&e)))
}

pub fn compose_lenses(
    kind: ComposeKind,
    a: LensArtifact,
    b: LensArtifact,
) -> Result<LensArtifact, CliError> {
    match (kind, a, b) {
        (ComposeKind::Seq, LensArtifact::Table(k), LensArtifact::Table(l)) => {
            let c = seq_compose(k, l).map_err(compose_error)?;
            Ok(LensArtifact::Table(materialize(&c).map_err(lens_check)?))
        }
        (ComposeKind::Par, LensArtifact::Table(k), LensArtifact::Table(l)) => Ok(
            LensArtifact::Table(materialize(&par_compose(k, l)).map_err(lens_check)?),
        ),
        (ComposeKind::Seq, LensArtifact::Model(k), LensArtifact::Model(l)) => {
            let c = seq_compose(k.lens, l.lens).map_err(compose_error)?;
            Ok(LensArtifact::Model(boxed_model_lens(Box::new(
                flatten_params(c),
            ))?))
        }
        (ComposeKind::Par, LensArtifact::Model(_), LensArtifact::Model(_)) => Err(CliError::Input(
            "parallel composites of database lenses have no file form".into(),
        )),
        _ => Err(CliError::Input(
            "cannot compose a table lens with a database lens".into(),
        )),
    }
}

/// A self-contained p-functor file.
pub fn pfun_value(g: &ParamFunctor) -> Value {
    let file = PFunFile {
        params: serde_json::to_value(g.params().to_spec()).expect("spec"),
        source: serde_json::to_value(g.source().to_spec()).expect("spec"),
        target: serde_json::to_value(g.target().to_spec()).expect("spec"),
        on_obj: g
            .on_obj()
            .iter()
            .map(|(p, f)| {
                (
                    p.clone(),
                    FunctorFile {
                        obj_map: f.obj_map.clone(),
                        arr_map: f.arr_map.clone(),
                    },
                )
            })
            .collect(),
        on_arr: g
            .on_arr()
            .iter()
            .filter(|(e, _)| !g.params().is_identity(e))
            .map(|(e, t)| {
                (
                    e.clone(),
                    NatFile {
                        components: t.components.clone(),
                    },
                )
            })
            .collect(),
    };
    serde_json::to_value(file).expect("p-functor")
}

/// A self-contained lens file with the get inlined.
pub fn table_lens_value(l: &TableLens) -> Value {
    serde_json::json!({ "get": pfun_value(l.get()), "put": l.rows() })
}

/// `to` relative to the directory `from`.
pub fn relative_path(from: &Path, to: &Path) -> PathBuf {
    let (from, to) = (absolute(from), absolute(to));
    let (a, b): (Vec<Component>, Vec<Component>) =
        (from.components().collect(), to.components().collect());
    let common = a.iter().zip(&b).take_while(|(x, y)| x == y).count();
    let mut out = PathBuf::new();
    for _ in common..a.len() {
        out.push("..");
    }
    for c in &b[common..] {
        out.push(c);
    }
    out
}

fn absolute(p: &Path) -> PathBuf {
    fs::canonicalize(p).unwrap_or_else(|_| std::env::current_dir().unwrap_or_default().join(p))
}
