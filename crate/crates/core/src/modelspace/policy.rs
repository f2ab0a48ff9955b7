use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::view::{threshold_of, ViewDef};
use super::{Constraint, DeptValue, ModelDelta, ModelError, RelModel, RelSpace, Row};
use crate::compose::UpdatePolicy;
use crate::fincat::FinCat;
use crate::lens::{AlaLens, LensError, ParamGet, PutOf, PutResult};

/// How a view update is propagated back to the source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Policy {
    /// A row that leaves the view left the company.
    Quit,
    /// A row that leaves the view moved to a department outside it.
    Trans,
    /// Rows that leave the view are explained by a new threshold.
    Param,
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Policy::Quit => "quit",
            Policy::Trans => "trans",
            Policy::Param => "param",
        })
    }
}

impl FromStr for Policy {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Policy, ModelError> {
        match s {
            "quit" => Ok(Policy::Quit),
            "trans" => Ok(Policy::Trans),
            "param" => Ok(Policy::Param),
            _ => Err(ModelError::BadScenario(format!(
                "unknown policy `{s}` (expected quit, trans or param)"
            ))),
        }
    }
}

pub type RelPut = PutResult<String, ModelDelta, ModelDelta>;

fn fresh_label(oid: &str) -> String {
    format!("?{oid}")
}

/// The source row for a kept view row. A changed department makes the
/// experience unknown.
fn merge(vd: &ViewDef, old: &Row, new: &Row) -> Row {
    let mut out = old.clone();
    out.name = new.name.clone();
    if vd.target.has_dep() && new.dep != old.dep {
        out.dep = new.dep.clone();
        out.expr = None;
    }
    out
}

/// A fresh source row for an inserted view row.
fn insert_row(vd: &ViewDef, oid: &str, new: &Row) -> Result<Row, ModelError> {
    let inapplicable =
        || ModelError::PolicyInapplicable(format!("{oid} cannot be shown by view {}", vd.name));
    let mut c = Constraint::top(vd.universe.as_ref());
    if let Some(d) = &vd.depts {
        c = c.intersect(&Constraint::In(d.clone()));
    }
    let dep = if !vd.source.has_dep() {
        None
    } else {
        let base = match &new.dep {
            Some(d) if vd.target.has_dep() => d.clone(),
            _ => DeptValue::unknown(&fresh_label(oid), Constraint::top(vd.universe.as_ref())),
        };
        Some(base.refine(&c).ok_or_else(inapplicable)?)
    };
    Ok(Row {
        name: new.name.clone(),
        expr: if vd.target.has_expr() { new.expr } else { None },
        dep,
    })
}

fn check_anchor(
    vd: &ViewDef,
    theta: &str,
    src: &RelModel,
    vdelta: &ModelDelta,
) -> Result<(), ModelError> {
    vdelta.validate()?;
    let view = vd.view_model(theta, src)?;
    if vdelta.from != view {
        return Err(ModelError::Lens(LensError::DomainError(format!(
            "{} does not start at the view {view}",
            vdelta
        ))));
    }
    Ok(())
}

/// Propagates `vdelta`, an update of the view of `src` at parameter
/// `theta`, to a parameter update, a source update and an amendment. The
/// amendment is always the identity.
pub fn policy_put(
    policy: Policy,
    vd: &ViewDef,
    theta: &str,
    src: &RelModel,
    vdelta: &ModelDelta,
) -> Result<RelPut, ModelError> {
    check_anchor(vd, theta, src, vdelta)?;
    let inserted = vdelta.inserted();
    if policy == Policy::Param && !inserted.is_empty() {
        return Err(ModelError::PolicyInapplicable(format!(
            "a threshold cannot explain inserted rows {}",
            inserted.join(", ")
        )));
    }
    let mut rows = BTreeMap::new();
    let mut kept = BTreeMap::new();
    for (o, row) in &src.rows {
        let (oid, new) = if !vdelta.from.rows.contains_key(o) {
            (o.clone(), row.clone())
        } else if let Some(o2) = vdelta.kept.get(o) {
            (o2.clone(), merge(vd, row, &vdelta.to.rows[o2]))
        } else {
            match policy {
                Policy::Quit => continue,
                Policy::Param => (o.clone(), row.clone()),
                Policy::Trans => {
                    let d = vd.depts.as_ref().ok_or_else(|| {
                        ModelError::PolicyInapplicable(format!(
                            "view {} selects on no department",
                            vd.name
                        ))
                    })?;
                    let c = Constraint::complement(d, vd.universe.as_ref());
                    if c.is_empty() {
                        return Err(ModelError::PolicyInapplicable(format!(
                            "no department outside view {} for {o}",
                            vd.name
                        )));
                    }
                    let moved = Row {
                        name: row.name.clone(),
                        expr: None,
                        dep: Some(DeptValue::unknown(&fresh_label(o), c)),
                    };
                    (o.clone(), moved)
                }
            }
        };
        if rows.insert(oid.clone(), new).is_some() {
            return Err(ModelError::PolicyInapplicable(format!(
                "oid {oid} is used twice"
            )));
        }
        kept.insert(o.clone(), oid);
    }
    for o in inserted {
        let row = insert_row(vd, o, &vdelta.to.rows[o])?;
        if rows.insert(o.to_string(), row).is_some() {
            return Err(ModelError::PolicyInapplicable(format!(
                "inserted oid {o} is already in the source"
            )));
        }
    }
    let target = RelModel {
        schema: src.schema,
        rows,
    };
    let request = ModelDelta::new(src.clone(), target.clone(), kept)?;
    let amendment = ModelDelta::identity(&vdelta.to);

    let candidates: Vec<&str> = if policy == Policy::Param {
        let mut others: Vec<&str> = vd.params.objects().filter(|q| *q != theta).collect();
        others.sort_by_key(|q| threshold_of(q).unwrap_or(None));
        std::iter::once(theta).chain(others).collect()
    } else {
        vec![theta]
    };
    for q in candidates {
        if vd.view_model(q, &target)? == vdelta.to {
            let update = vd
                .params
                .hom(theta, q)
                .first()
                .ok_or_else(|| {
                    ModelError::PolicyInapplicable(format!("no parameter arrow {theta} to {q}"))
                })?
                .to_string();
            return Ok(PutResult {
                update,
                request,
                amendment,
            });
        }
    }
    Err(ModelError::PolicyInapplicable(match policy {
        Policy::Param => format!("no threshold of view {} explains the update", vd.name),
        _ => format!(
            "the propagated source does not reproduce the updated view of {}",
            vd.name
        ),
    }))
}

/// A database view with an update policy as an ala-lens over the open
/// spaces of models.
#[derive(Debug, Clone)]
pub struct RelLens {
    policy: Policy,
    view: ViewDef,
    source: RelSpace,
    target: RelSpace,
}

pub fn as_ala_lens(policy: Policy, vd: &ViewDef) -> RelLens {
    RelLens {
        policy,
        view: vd.clone(),
        source: RelSpace { schema: vd.source },
        target: RelSpace { schema: vd.target },
    }
}

impl RelLens {
    pub fn policy(&self) -> Policy {
        self.policy
    }

    pub fn view(&self) -> &ViewDef {
        &self.view
    }
}

impl ParamGet for RelLens {
    type P = FinCat;
    type S = RelSpace;
    type T = RelSpace;

    fn params(&self) -> &FinCat {
        &self.view.params
    }
    fn source(&self) -> &RelSpace {
        &self.source
    }
    fn target(&self) -> &RelSpace {
        &self.target
    }
    fn get_obj(&self, p: &String, s: &RelModel) -> Result<RelModel, LensError> {
        Ok(self.view.view_model(p, s)?)
    }
    fn get_arr(&self, p: &String, u: &ModelDelta) -> Result<ModelDelta, LensError> {
        Ok(self.view.restrict(p, p, u)?)
    }
    fn get_param(&self, e: &String, s: &RelModel) -> Result<ModelDelta, LensError> {
        self.get_diag(e, &ModelDelta::identity(s))
    }
    fn get_diag(&self, e: &String, u: &ModelDelta) -> Result<ModelDelta, LensError> {
        let pc = &self.view.params;
        Ok(self.view.restrict(pc.src(e)?, pc.dst(e)?, u)?)
    }
}

impl AlaLens for RelLens {
    fn put(&self, p: &String, s: &RelModel, v: &ModelDelta) -> Result<PutOf<Self>, LensError> {
        Ok(policy_put(self.policy, &self.view, p, s, v)?)
    }
}

impl UpdatePolicy<ViewDef> for Policy {
    type Lens = RelLens;

    fn apply(&self, get: &ViewDef) -> Result<RelLens, LensError> {
        Ok(as_ala_lens(*self, get))
    }
}
