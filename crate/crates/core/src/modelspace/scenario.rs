use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::policy::Policy;
use super::view::{ViewDef, IT_DEPARTMENTS};
use super::{Constraint, DeptValue, ModelDelta, ModelError, RelModel, RelSpace, Row, Schema};
use crate::compose::ComposableGet;
use crate::fincat::Category;
use crate::lens::{AlaLens, LensError, Point};

/// A row added to a view.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Inserted {
    pub oid: String,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expr: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dep: Option<DeptValue>,
}

/// An update of a view, relative to the view it starts at. Without `kept`
/// every row that is not deleted is kept under its own oid; `changed` gives
/// new attributes for kept rows, keyed by their new oid.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViewUpdate {
    #[serde(default)]
    pub deleted: Vec<String>,
    #[serde(default)]
    pub inserted: Vec<Inserted>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kept: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub changed: BTreeMap<String, Row>,
}

fn default_view() -> String {
    "it;ml".into()
}

fn default_theta() -> String {
    "*".into()
}

fn default_it() -> Vec<String> {
    IT_DEPARTMENTS.iter().map(|s| s.to_string()).collect()
}

/// The scenario file layout.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    source: BTreeMap<String, Row>,
    view_update: ViewUpdate,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    policy: Option<Policy>,
    #[serde(default = "default_view")]
    view: String,
    #[serde(default = "default_theta")]
    theta: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    thresholds: Option<Vec<String>>,
    #[serde(default = "default_it")]
    it_departments: Vec<String>,
}

/// A source model, a view of it and an update of that view.
///
/// `view` is `it` (`A → B`), `ml` (`B → C`) or `it;ml` (`A → C`). With
/// `thresholds` the IT view is parameterized by them and `theta` is the
/// current one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ScenarioFile", into = "ScenarioFile")]
pub struct Scenario {
    pub source: RelModel,
    pub update: ViewUpdate,
    pub policy: Option<Policy>,
    pub view: String,
    pub theta: String,
    pub thresholds: Option<Vec<String>>,
    pub it_departments: Vec<String>,
}

impl TryFrom<ScenarioFile> for Scenario {
    type Error = ModelError;

    fn try_from(f: ScenarioFile) -> Result<Scenario, ModelError> {
        let schema = match f.view.as_str() {
            "it" | "it;ml" => Schema::A,
            "ml" => Schema::B,
            other => return Err(ModelError::BadScenario(format!("unknown view `{other}`"))),
        };
        let source = RelModel::new(schema, f.source)?;
        let sc = Scenario {
            source,
            update: f.view_update,
            policy: f.policy,
            view: f.view,
            theta: f.theta,
            thresholds: f.thresholds,
            it_departments: f.it_departments,
        };
        sc.selected_view()?;
        Ok(sc)
    }
}

impl From<Scenario> for ScenarioFile {
    fn from(s: Scenario) -> ScenarioFile {
        ScenarioFile {
            source: s.source.rows,
            view_update: s.update,
            policy: s.policy,
            view: s.view,
            theta: s.theta,
            thresholds: s.thresholds,
            it_departments: s.it_departments,
        }
    }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Scenario, ModelError> {
        serde_json::from_str(text).map_err(|e| ModelError::BadScenario(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    /// The IT view, `A → B`.
    pub fn first_view(&self) -> Result<ViewDef, ModelError> {
        let v = ViewDef::it_view(&self.it_departments);
        match &self.thresholds {
            Some(t) => v.with_thresholds(t),
            None => Ok(v),
        }
    }

    /// The ML view of the IT view, `B → C`.
    pub fn second_view(&self) -> Result<ViewDef, ModelError> {
        Ok(ViewDef::ml_view(&self.it_departments))
    }

    pub fn selected_view(&self) -> Result<ViewDef, ModelError> {
        match self.view.as_str() {
            "it" => self.first_view(),
            "ml" => self.second_view(),
            "it;ml" => Ok(self.first_view()?.then(&self.second_view()?)?),
            other => Err(ModelError::BadScenario(format!("unknown view `{other}`"))),
        }
    }

    /// The parameter of [`Scenario::selected_view`].
    pub fn selected_theta(&self) -> String {
        match self.view.as_str() {
            "it;ml" => crate::fincat::pair_name(&self.theta, "*"),
            _ => self.theta.clone(),
        }
    }

    /// The update as a delta out of the view of the source at `theta`.
    pub fn update_for(&self, vd: &ViewDef, theta: &str) -> Result<ModelDelta, ModelError> {
        let from = vd.view_model(theta, &self.source)?;
        let up = &self.update;
        let bad = |m: String| ModelError::BadScenario(m);
        for o in &up.deleted {
            if !from.rows.contains_key(o) {
                return Err(bad(format!("deleted oid {o} is not in the view")));
            }
        }
        let deleted: BTreeSet<&String> = up.deleted.iter().collect();
        let kept: BTreeMap<String, String> = match &up.kept {
            Some(pairs) => {
                let kept: BTreeMap<String, String> = pairs.iter().cloned().collect();
                for o in from.rows.keys() {
                    if kept.contains_key(o) == deleted.contains(o) {
                        return Err(bad(format!("oid {o} must be either kept or deleted")));
                    }
                }
                kept
            }
            None => from
                .rows
                .keys()
                .filter(|o| !deleted.contains(o))
                .map(|o| (o.clone(), o.clone()))
                .collect(),
        };
        let mut rows = BTreeMap::new();
        for (a, b) in &kept {
            let row = from
                .rows
                .get(a)
                .ok_or_else(|| bad(format!("kept oid {a} is not in the view")))?;
            let row = up.changed.get(b).unwrap_or(row).clone();
            if rows.insert(b.clone(), row).is_some() {
                return Err(bad(format!("oid {b} is kept twice")));
            }
        }
        for c in up.changed.keys() {
            if !rows.contains_key(c) {
                return Err(bad(format!("changed oid {c} is not kept")));
            }
        }
        for i in &up.inserted {
            let row = Row {
                name: i.name.clone(),
                expr: i.expr,
                dep: i.dep.clone(),
            };
            if rows.insert(i.oid.clone(), row).is_some() {
                return Err(bad(format!(
                    "inserted oid {} is already in the view",
                    i.oid
                )));
            }
        }
        let to = RelModel::new(vd.target, rows)?;
        ModelDelta::new(from, to, kept)
    }

    /// The update of the selected view.
    pub fn update(&self) -> Result<ModelDelta, ModelError> {
        self.update_for(&self.selected_view()?, &self.selected_theta())
    }
}

fn row(name: &str, expr: Option<i64>, dep: &str) -> Row {
    Row::new(name, expr, Some(DeptValue::known(dep)))
}

/// Ann works in HR, John in Testing and Mary in ML.
pub fn source_fixture() -> RelModel {
    RelModel::new(
        Schema::A,
        [
            ("#A".to_string(), row("Ann", Some(10), "HR")),
            ("#J".to_string(), row("John", Some(3), "Testing")),
            ("#M".to_string(), row("Mary", Some(10), "ML")),
        ],
    )
    .expect("fixture")
}

/// Mary `#M` leaves the ML view and a new Mary `#M'` joins it.
pub fn scenario_w() -> Scenario {
    Scenario {
        source: source_fixture(),
        update: ViewUpdate {
            deleted: vec!["#M".into()],
            inserted: vec![Inserted {
                oid: "#M'".into(),
                name: "Mary".into(),
                expr: None,
                dep: None,
            }],
            kept: None,
            changed: BTreeMap::new(),
        },
        policy: None,
        view: default_view(),
        theta: default_theta(),
        thresholds: None,
        it_departments: default_it(),
    }
}

const NAMES: [&str; 6] = ["Ann", "Bob", "Eve", "John", "Kim", "Mary"];
const DEPTS: [&str; 4] = ["DB", "HR", "ML", "Testing"];

fn random_dep<R: Rng>(rng: &mut R, oid: &str) -> DeptValue {
    let label = format!("?{oid}");
    match rng.gen_range(0..10) {
        0 => DeptValue::unknown(&label, Constraint::within(&["ML"])),
        1 => DeptValue::unknown(&label, Constraint::within(&["ML", "Testing"])),
        2 => DeptValue::unknown(&label, Constraint::outside(&["ML"])),
        _ => DeptValue::known(DEPTS.choose(rng).expect("departments")),
    }
}

/// `n` seeded scenarios over the ML view of the IT view: random staff, then
/// random deletions, renamings and insertions in the ML view.
pub fn generate_scenarios(seed: u64, n: usize) -> Vec<Scenario> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let long = ViewDef::it_view(&IT_DEPARTMENTS)
        .then(&ViewDef::ml_view(&IT_DEPARTMENTS))
        .expect("views compose");
    (0..n)
        .map(|_| {
            let k = rng.gen_range(2..=6);
            let rows = (0..k).map(|i| {
                let oid = format!("#E{i}");
                let expr = rng.gen_bool(0.8).then(|| rng.gen_range(0..16));
                let dep = random_dep(&mut rng, &oid);
                let name = NAMES.choose(&mut rng).expect("names");
                (oid, Row::new(name, expr, Some(dep)))
            });
            let source =
                RelModel::new(Schema::A, rows.collect::<Vec<_>>()).expect("generated model");
            let view = long.view_model("(*|*)", &source).expect("generated view");
            let mut update = ViewUpdate::default();
            for (o, r) in &view.rows {
                match rng.gen_range(0..10) {
                    0..=3 => update.deleted.push(o.clone()),
                    4..=6 => {
                        update
                            .changed
                            .insert(o.clone(), Row::new(&format!("{}'", r.name), None, None));
                    }
                    _ => {}
                }
            }
            for j in 0..rng.gen_range(0..=2) {
                update.inserted.push(Inserted {
                    oid: format!("#N{j}"),
                    name: NAMES.choose(&mut rng).expect("names").to_string(),
                    expr: None,
                    dep: None,
                });
            }
            Scenario {
                source,
                update,
                ..scenario_w()
            }
        })
        .collect()
}

/// Seeded source models of a schema: the fixture and generated staff, or
/// their IT and ML views.
pub fn sample_models(schema: Schema, seed: u64, n: usize) -> Vec<RelModel> {
    let mut models = vec![source_fixture()];
    models.extend(generate_scenarios(seed, n).into_iter().map(|s| s.source));
    let it = ViewDef::it_view(&IT_DEPARTMENTS);
    let ml = ViewDef::ml_view(&IT_DEPARTMENTS);
    let to_b = |m: &RelModel| it.view_model("*", m).expect("IT view");
    match schema {
        Schema::A => models,
        Schema::B => models.iter().map(to_b).collect(),
        Schema::C => models
            .iter()
            .map(|m| ml.view_model("*", &to_b(m)).expect("ML view"))
            .collect(),
    }
}

/// A random update of a view: deletions, renamings and at most one
/// insertion copying the department of a shown row.
pub fn random_view_update<R: Rng>(view: &RelModel, rng: &mut R) -> ModelDelta {
    let mut rows = BTreeMap::new();
    let mut kept = BTreeMap::new();
    for (o, r) in &view.rows {
        match rng.gen_range(0..10) {
            0..=2 => continue,
            3..=5 => {
                let mut r = r.clone();
                r.name.push('\'');
                rows.insert(o.clone(), r);
            }
            _ => {
                rows.insert(o.clone(), r.clone());
            }
        }
        kept.insert(o.clone(), o.clone());
    }
    let donor = view.rows.values().collect::<Vec<_>>();
    if rng.gen_bool(0.5) && (!view.schema.has_dep() || !donor.is_empty()) {
        let dep = donor.choose(rng).and_then(|r| r.dep.clone());
        let name = NAMES.choose(rng).expect("names");
        rows.insert(
            "#new".into(),
            Row::new(name, None, if view.schema.has_dep() { dep } else { None }),
        );
    }
    let to = RelModel {
        schema: view.schema,
        rows,
    };
    ModelDelta::new(view.clone(), to, kept).expect("sampled delta")
}

/// Law-check points for a lens between model spaces: every parameter,
/// sampled sources, the identity and `per_anchor` random updates of each
/// view. Updates the policy declares inapplicable are dropped.
pub fn sample_points<L>(lens: &L, seed: u64, per_anchor: usize) -> Result<Vec<Point<L>>, LensError>
where
    L: AlaLens<S = RelSpace, T = RelSpace> + ?Sized,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = lens
        .params()
        .objects()
        .ok_or_else(|| LensError::NotEnumerable("parameter space".into()))?;
    let mut out = Vec::new();
    for s in sample_models(lens.source().schema, seed, 10) {
        for p in &params {
            let view = lens.get_obj(p, &s)?;
            out.push((p.clone(), s.clone(), ModelDelta::identity(&view)));
            for _ in 0..per_anchor {
                let v = random_view_update(&view, &mut rng);
                if !matches!(lens.put(p, &s, &v), Err(LensError::PolicyInapplicable(_))) {
                    out.push((p.clone(), s.clone(), v));
                }
            }
        }
    }
    Ok(out)
}
