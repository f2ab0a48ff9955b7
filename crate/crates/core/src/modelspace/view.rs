use std::collections::{BTreeMap, BTreeSet};

use super::{ModelDelta, ModelError, RelModel, Row, Schema};
use crate::compose::ComposableGet;
use crate::fincat::{product_category, split_pair, FinCat};
use crate::lens::LensError;

/// The departments shown by the IT view.
pub const IT_DEPARTMENTS: [&str; 2] = ["ML", "Testing"];

/// A selection-projection view. A row is shown when its department is
/// certainly in `depts` (if set) and its `expr` exceeds the threshold named
/// by the parameter (if any). Parameters are objects of `params`; `any` and
/// `*` mean no threshold, a pair `(a|b)` means the larger of the two.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViewDef {
    pub name: String,
    pub source: Schema,
    pub target: Schema,
    pub depts: Option<BTreeSet<String>>,
    /// All department values the source can hold, if closed.
    pub universe: Option<BTreeSet<String>>,
    pub params: FinCat,
}

fn set<S: AsRef<str>>(names: &[S]) -> BTreeSet<String> {
    names.iter().map(|n| n.as_ref().to_string()).collect()
}

impl ViewDef {
    pub fn new(
        name: &str,
        source: Schema,
        target: Schema,
        depts: Option<BTreeSet<String>>,
        universe: Option<BTreeSet<String>>,
        params: FinCat,
    ) -> Result<ViewDef, ModelError> {
        if !source.covers(target) {
            return Err(ModelError::InvalidModel(format!(
                "view {name}: {target} has attributes {source} lacks"
            )));
        }
        if depts.is_some() && !source.has_dep() {
            return Err(ModelError::InvalidModel(format!(
                "view {name}: {source} has no dep"
            )));
        }
        for p in params.objects() {
            if threshold_of(p)?.is_some() && !source.has_expr() {
                return Err(ModelError::InvalidModel(format!(
                    "view {name}: threshold {p} on a schema without expr"
                )));
            }
        }
        Ok(ViewDef {
            name: name.to_string(),
            source,
            target,
            depts,
            universe,
            params,
        })
    }

    /// Employees of the given departments, `A → B`.
    pub fn it_view<S: AsRef<str>>(it: &[S]) -> ViewDef {
        ViewDef::new(
            "it",
            Schema::A,
            Schema::B,
            Some(set(it)),
            None,
            FinCat::terminal(),
        )
        .expect("fixed view")
    }

    /// Names of the ML employees in an IT view, `B → C`.
    pub fn ml_view<S: AsRef<str>>(it: &[S]) -> ViewDef {
        ViewDef::new(
            "ml",
            Schema::B,
            Schema::C,
            Some(set(&["ML"])),
            Some(set(it)),
            FinCat::terminal(),
        )
        .expect("fixed view")
    }

    /// The same view parameterized by an experience threshold; the
    /// parameter space is codiscrete on `thresholds`.
    pub fn with_thresholds<S: AsRef<str>>(&self, thresholds: &[S]) -> Result<ViewDef, ModelError> {
        let params = FinCat::codiscrete(thresholds)?;
        ViewDef::new(
            &self.name,
            self.source,
            self.target,
            self.depts.clone(),
            self.universe.clone(),
            params,
        )
    }

    pub(crate) fn shows(&self, theta: Option<i64>, row: &Row) -> bool {
        let dep_ok = match (&self.depts, &row.dep) {
            (None, _) => true,
            (Some(d), Some(v)) => v.certainly_in(d),
            (Some(_), None) => false,
        };
        dep_ok && theta.is_none_or(|t| row.expr.is_some_and(|x| x > t))
    }

    pub(crate) fn project(&self, row: &Row) -> Row {
        Row {
            name: row.name.clone(),
            expr: if self.target.has_expr() {
                row.expr
            } else {
                None
            },
            dep: if self.target.has_dep() {
                row.dep.clone()
            } else {
                None
            },
        }
    }

    fn check_source(&self, m: &RelModel) -> Result<(), ModelError> {
        if m.schema != self.source {
            return Err(ModelError::SchemaMismatch {
                expected: self.source,
                got: m.schema,
            });
        }
        Ok(())
    }

    pub(crate) fn view_model(&self, theta: &str, m: &RelModel) -> Result<RelModel, ModelError> {
        self.check_source(m)?;
        if !self.params.has_object(theta) {
            return Err(ModelError::Lens(LensError::DomainError(format!(
                "`{theta}` is not a parameter of view {}",
                self.name
            ))));
        }
        let t = threshold_of(theta)?;
        let rows = m
            .rows
            .iter()
            .filter(|(_, r)| self.shows(t, r))
            .map(|(o, r)| (o.clone(), self.project(r)))
            .collect();
        Ok(RelModel {
            schema: self.target,
            rows,
        })
    }

    /// The view of `d` from parameter `p` to `q`: kept pairs whose ends are
    /// shown on both sides.
    pub(crate) fn restrict(
        &self,
        p: &str,
        q: &str,
        d: &ModelDelta,
    ) -> Result<ModelDelta, ModelError> {
        let from = self.view_model(p, &d.from)?;
        let to = self.view_model(q, &d.to)?;
        let kept: BTreeMap<String, String> = d
            .kept
            .iter()
            .filter(|(a, b)| from.rows.contains_key(*a) && to.rows.contains_key(*b))
            .map(|(a, b)| (a.clone(), b.clone()))
            .collect();
        Ok(ModelDelta { from, to, kept })
    }
}

/// The threshold named by a parameter object.
pub fn threshold_of(p: &str) -> Result<Option<i64>, ModelError> {
    if let Some((a, b)) = split_pair(p) {
        return Ok(threshold_of(a)?.max(threshold_of(b)?));
    }
    match p {
        "any" | "*" => Ok(None),
        _ => p
            .parse::<i64>()
            .map(Some)
            .map_err(|_| ModelError::InvalidModel(format!("`{p}` is not a threshold"))),
    }
}

/// The view of `m` at parameter `theta`, and of `d` when given.
pub fn view_get(
    vd: &ViewDef,
    theta: &str,
    m: &RelModel,
    d: Option<&ModelDelta>,
) -> Result<(RelModel, Option<ModelDelta>), ModelError> {
    let view = vd.view_model(theta, m)?;
    let dv = match d {
        None => None,
        Some(d) => {
            if &d.from != m {
                return Err(ModelError::BoundaryMismatch(
                    "delta does not start at the model".into(),
                ));
            }
            Some(vd.restrict(theta, theta, d)?)
        }
    };
    Ok((view, dv))
}

impl ComposableGet for ViewDef {
    fn then(&self, next: &ViewDef) -> Result<ViewDef, LensError> {
        if self.target != next.source {
            return Err(LensError::BoundaryMismatch(format!(
                "view {} ends at {}, view {} starts at {}",
                self.name, self.target, next.name, next.source
            )));
        }
        let depts = match (&self.depts, &next.depts) {
            (Some(a), Some(b)) => Some(a.intersection(b).cloned().collect()),
            (a, b) => a.clone().or(b.clone()),
        };
        Ok(ViewDef::new(
            &format!("{};{}", self.name, next.name),
            self.source,
            next.target,
            depts,
            self.universe.clone(),
            product_category(&self.params, &next.params),
        )?)
    }
}
