//! Relational models, partial-injection deltas and view update policies.
//!
//! Models are employee tables under one of three schemas: `A` with
//! `(name, expr, dep)`, `B` with `(name, dep)` and `C` with `(name)`.
//! Unknown departments are labelled nulls constrained to a set of admissible
//! names.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fincat::{CatError, Category};
use crate::lens::LensError;

mod compare;
mod policy;
mod scenario;
mod view;

#[cfg(test)]
mod tests;

pub use compare::{compare_policies, comparison_delta, Comparison};
pub use policy::{as_ala_lens, policy_put, Policy, RelLens, RelPut};
pub use scenario::{
    generate_scenarios, random_view_update, sample_models, sample_points, scenario_w,
    source_fixture, Inserted, Scenario, ViewUpdate,
};
pub use view::{threshold_of, view_get, ViewDef, IT_DEPARTMENTS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("schema mismatch: expected {expected}, got {got}")]
    SchemaMismatch { expected: Schema, got: Schema },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid delta: {0}")]
    InvalidDelta(String),
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("policy inapplicable: {0}")]
    PolicyInapplicable(String),
    #[error("no comparison delta: {0}")]
    NoComparisonDelta(String),
    #[error("bad scenario: {0}")]
    BadScenario(String),
    #[error(transparent)]
    Lens(#[from] LensError),
}

impl From<ModelError> for LensError {
    fn from(e: ModelError) -> LensError {
        match e {
            ModelError::Lens(l) => l,
            ModelError::PolicyInapplicable(m) => LensError::PolicyInapplicable(m),
            ModelError::BoundaryMismatch(m) => LensError::BoundaryMismatch(m),
            other => LensError::DomainError(other.to_string()),
        }
    }
}

impl From<CatError> for ModelError {
    fn from(e: CatError) -> ModelError {
        ModelError::Lens(e.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Schema {
    A,
    B,
    C,
}

impl Schema {
    pub fn has_expr(self) -> bool {
        self == Schema::A
    }

    pub fn has_dep(self) -> bool {
        self != Schema::C
    }

    /// Whether every attribute of `other` is an attribute of `self`.
    pub fn covers(self, other: Schema) -> bool {
        (self.has_expr() || !other.has_expr()) && (self.has_dep() || !other.has_dep())
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// The admissible values of a labelled null. `NotIn` is relative to an open
/// set of department names.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Constraint {
    In(BTreeSet<String>),
    NotIn(BTreeSet<String>),
}

impl Constraint {
    pub fn within<S: AsRef<str>>(names: &[S]) -> Constraint {
        Constraint::In(names.iter().map(|n| n.as_ref().to_string()).collect())
    }

    pub fn outside<S: AsRef<str>>(names: &[S]) -> Constraint {
        Constraint::NotIn(names.iter().map(|n| n.as_ref().to_string()).collect())
    }

    /// No constraint at all, or the universe when one is fixed.
    pub fn top(universe: Option<&BTreeSet<String>>) -> Constraint {
        match universe {
            Some(u) => Constraint::In(u.clone()),
            None => Constraint::NotIn(BTreeSet::new()),
        }
    }

    /// The complement of `set`, relative to `universe` when given.
    pub fn complement(set: &BTreeSet<String>, universe: Option<&BTreeSet<String>>) -> Constraint {
        match universe {
            Some(u) => Constraint::In(u.difference(set).cloned().collect()),
            None => Constraint::NotIn(set.clone()),
        }
    }

    pub fn admits(&self, d: &str) -> bool {
        match self {
            Constraint::In(s) => s.contains(d),
            Constraint::NotIn(s) => !s.contains(d),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Constraint::In(s) if s.is_empty())
    }

    pub fn intersect(&self, other: &Constraint) -> Constraint {
        use Constraint::*;
        match (self, other) {
            (In(a), In(b)) => In(a.intersection(b).cloned().collect()),
            (In(a), NotIn(b)) | (NotIn(b), In(a)) => In(a.difference(b).cloned().collect()),
            (NotIn(a), NotIn(b)) => NotIn(a.union(b).cloned().collect()),
        }
    }

    pub fn is_subset(&self, other: &Constraint) -> bool {
        use Constraint::*;
        match (self, other) {
            (In(a), In(b)) => a.is_subset(b),
            (In(a), NotIn(b)) => a.is_disjoint(b),
            (NotIn(_), In(_)) => false,
            (NotIn(a), NotIn(b)) => b.is_subset(a),
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (op, s) = match self {
            Constraint::In(s) => ("∈", s),
            Constraint::NotIn(s) => ("∉", s),
        };
        write!(
            f,
            "{op}{{{}}}",
            s.iter().cloned().collect::<Vec<_>>().join(",")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "DeptRepr", into = "DeptRepr")]
pub enum DeptValue {
    Known(String),
    Unknown {
        label: String,
        constraint: Constraint,
    },
}

impl DeptValue {
    pub fn known(d: &str) -> DeptValue {
        DeptValue::Known(d.to_string())
    }

    pub fn unknown(label: &str, constraint: Constraint) -> DeptValue {
        DeptValue::Unknown {
            label: label.to_string(),
            constraint,
        }
    }

    /// The admissible values as a constraint.
    pub fn constraint(&self) -> Constraint {
        match self {
            DeptValue::Known(d) => Constraint::In(BTreeSet::from([d.clone()])),
            DeptValue::Unknown { constraint, .. } => constraint.clone(),
        }
    }

    /// Certainly one of `set`.
    pub fn certainly_in(&self, set: &BTreeSet<String>) -> bool {
        self.constraint().is_subset(&Constraint::In(set.clone()))
    }

    /// Narrows to `c`, keeping the label. A known value must satisfy `c`.
    pub fn refine(&self, c: &Constraint) -> Option<DeptValue> {
        match self {
            DeptValue::Known(d) => c.admits(d).then(|| self.clone()),
            DeptValue::Unknown { label, constraint } => {
                let n = constraint.intersect(c);
                (!n.is_empty()).then(|| DeptValue::unknown(label, n))
            }
        }
    }
}

impl fmt::Display for DeptValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeptValue::Known(d) => write!(f, "{d}"),
            DeptValue::Unknown { label, constraint } => write!(f, "{label}{constraint}"),
        }
    }
}

/// File form: a plain string for known values, otherwise
/// `{"label": "?x", "in": [...]}` or `{"label": "?x", "not_in": [...]}`.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum DeptRepr {
    Known(String),
    Unknown {
        label: String,
        #[serde(rename = "in", default, skip_serializing_if = "Option::is_none")]
        within: Option<BTreeSet<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        not_in: Option<BTreeSet<String>>,
    },
}

impl TryFrom<DeptRepr> for DeptValue {
    type Error = String;

    fn try_from(r: DeptRepr) -> Result<DeptValue, String> {
        match r {
            DeptRepr::Known(d) => Ok(DeptValue::Known(d)),
            DeptRepr::Unknown {
                label,
                within,
                not_in,
            } => {
                let constraint = match (within, not_in) {
                    (Some(s), None) => Constraint::In(s),
                    (None, Some(s)) => Constraint::NotIn(s),
                    _ => return Err(format!("null {label} needs exactly one of `in`, `not_in`")),
                };
                if constraint.is_empty() {
                    return Err(format!("null {label} has an empty constraint"));
                }
                Ok(DeptValue::Unknown { label, constraint })
            }
        }
    }
}

impl From<DeptValue> for DeptRepr {
    fn from(d: DeptValue) -> DeptRepr {
        match d {
            DeptValue::Known(d) => DeptRepr::Known(d),
            DeptValue::Unknown { label, constraint } => match constraint {
                Constraint::In(s) => DeptRepr::Unknown {
                    label,
                    within: Some(s),
                    not_in: None,
                },
                Constraint::NotIn(s) => DeptRepr::Unknown {
                    label,
                    within: None,
                    not_in: Some(s),
                },
            },
        }
    }
}

/// One employee record. `expr` is null or absent outside schema `A`, `dep`
/// is absent in schema `C`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Row {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expr: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dep: Option<DeptValue>,
}

impl Row {
    pub fn new(name: &str, expr: Option<i64>, dep: Option<DeptValue>) -> Row {
        Row {
            name: name.to_string(),
            expr,
            dep,
        }
    }

    fn check(&self, schema: Schema, oid: &str) -> Result<(), ModelError> {
        if !schema.has_expr() && self.expr.is_some() {
            return Err(ModelError::InvalidModel(format!(
                "{oid}: schema {schema} has no expr"
            )));
        }
        match (&self.dep, schema.has_dep()) {
            (None, true) => Err(ModelError::InvalidModel(format!("{oid}: missing dep"))),
            (Some(_), false) => Err(ModelError::InvalidModel(format!(
                "{oid}: schema {schema} has no dep"
            ))),
            (Some(d), true) if d.constraint().is_empty() => {
                Err(ModelError::InvalidModel(format!("{oid}: empty constraint")))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if let Some(x) = self.expr {
            write!(f, " {x}")?;
        }
        if let Some(d) = &self.dep {
            write!(f, " {d}")?;
        }
        Ok(())
    }
}

/// A model: rows keyed by oid.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RelModel {
    pub schema: Schema,
    pub rows: BTreeMap<String, Row>,
}

impl RelModel {
    pub fn new(
        schema: Schema,
        rows: impl IntoIterator<Item = (String, Row)>,
    ) -> Result<RelModel, ModelError> {
        let mut out = BTreeMap::new();
        for (oid, row) in rows {
            row.check(schema, &oid)?;
            if out.insert(oid.clone(), row).is_some() {
                return Err(ModelError::InvalidModel(format!("duplicate oid {oid}")));
            }
        }
        Ok(RelModel { schema, rows: out })
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        self.rows
            .iter()
            .try_for_each(|(o, r)| r.check(self.schema, o))
    }

    pub fn oids(&self) -> BTreeSet<&str> {
        self.rows.keys().map(String::as_str).collect()
    }
}

impl fmt::Display for RelModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.rows.iter().map(|(o, r)| format!("{o}: {r}")).collect();
        write!(f, "{}{{{}}}", self.schema, rows.join("; "))
    }
}

/// An update: a partial injection from the oids of `from` to those of `to`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModelDelta {
    pub from: RelModel,
    pub to: RelModel,
    pub kept: BTreeMap<String, String>,
}

impl ModelDelta {
    pub fn new(
        from: RelModel,
        to: RelModel,
        kept: BTreeMap<String, String>,
    ) -> Result<ModelDelta, ModelError> {
        let d = ModelDelta { from, to, kept };
        d.validate()?;
        Ok(d)
    }

    pub fn identity(m: &RelModel) -> ModelDelta {
        ModelDelta {
            from: m.clone(),
            to: m.clone(),
            kept: m.rows.keys().map(|o| (o.clone(), o.clone())).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == ModelDelta::identity(&self.from)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.from.schema != self.to.schema {
            return Err(ModelError::SchemaMismatch {
                expected: self.from.schema,
                got: self.to.schema,
            });
        }
        let mut image = BTreeSet::new();
        for (a, b) in &self.kept {
            if !self.from.rows.contains_key(a) || !self.to.rows.contains_key(b) {
                return Err(ModelError::InvalidDelta(format!(
                    "kept pair {a}={b} leaves the models"
                )));
            }
            if !image.insert(b) {
                return Err(ModelError::InvalidDelta(format!("{b} is kept twice")));
            }
        }
        Ok(())
    }

    /// Oids of `from` outside the kept domain.
    pub fn deleted(&self) -> Vec<&str> {
        self.from
            .rows
            .keys()
            .filter(|o| !self.kept.contains_key(*o))
            .map(String::as_str)
            .collect()
    }

    /// Oids of `to` outside the kept image.
    pub fn inserted(&self) -> Vec<&str> {
        let image: BTreeSet<&String> = self.kept.values().collect();
        self.to
            .rows
            .keys()
            .filter(|o| !image.contains(o))
            .map(String::as_str)
            .collect()
    }
}

impl fmt::Display for ModelDelta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kept: Vec<String> = self.kept.iter().map(|(a, b)| format!("{a}={b}")).collect();
        write!(f, "{} => {} kept [{}]", self.from, self.to, kept.join(", "))
    }
}

/// Sequential composition of deltas.
pub fn delta_compose(d1: &ModelDelta, d2: &ModelDelta) -> Result<ModelDelta, ModelError> {
    if d1.to != d2.from {
        return Err(ModelError::BoundaryMismatch(format!(
            "first delta ends at {}, second starts at {}",
            d1.to, d2.from
        )));
    }
    let kept = d1
        .kept
        .iter()
        .filter_map(|(a, b)| d2.kept.get(b).map(|c| (a.clone(), c.clone())))
        .collect();
    Ok(ModelDelta {
        from: d1.from.clone(),
        to: d2.to.clone(),
        kept,
    })
}

/// All models of one schema with their deltas. The space is open, so laws
/// over it are checked at sample points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelSpace {
    pub schema: Schema,
}

impl Category for RelSpace {
    type Ob = RelModel;
    type Arr = ModelDelta;

    fn dom(&self, f: &ModelDelta) -> Result<RelModel, CatError> {
        Ok(f.from.clone())
    }

    fn cod(&self, f: &ModelDelta) -> Result<RelModel, CatError> {
        Ok(f.to.clone())
    }

    fn id(&self, x: &RelModel) -> Result<ModelDelta, CatError> {
        Ok(ModelDelta::identity(x))
    }

    fn compose(&self, f: &ModelDelta, g: &ModelDelta) -> Result<ModelDelta, CatError> {
        delta_compose(f, g).map_err(|_| CatError::NotComposable {
            first: f.to_string(),
            second: g.to_string(),
        })
    }

    fn contains_ob(&self, x: &RelModel) -> bool {
        x.schema == self.schema && x.validate().is_ok()
    }

    fn contains_arr(&self, f: &ModelDelta) -> bool {
        self.contains_ob(&f.from) && self.contains_ob(&f.to) && f.validate().is_ok()
    }

    fn ob_label(&self, x: &RelModel) -> String {
        x.to_string()
    }

    fn arr_label(&self, f: &ModelDelta) -> String {
        f.to_string()
    }
}
