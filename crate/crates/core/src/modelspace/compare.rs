use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::policy::{as_ala_lens, Policy, RelPut};
use super::scenario::Scenario;
use super::{delta_compose, DeptValue, ModelDelta, ModelError, RelModel};
use crate::compose::{seq_compose, ComposableGet};
use crate::fincat::pair_name;
use crate::lens::lens_put;

/// Long lens `policy(get1;get2)` against the composite
/// `policy(get1);policy(get2)` on one scenario.
#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub policy: Policy,
    /// The two source updates coincide.
    pub equal: bool,
    #[serde(serialize_with = "show")]
    pub long: ModelDelta,
    #[serde(serialize_with = "show")]
    pub composed: ModelDelta,
    /// The refinement from the long result to the composed one.
    #[serde(serialize_with = "show")]
    pub delta: ModelDelta,
    /// `long ; delta = composed`.
    pub factors: bool,
}

fn show<S: serde::Serializer, T: fmt::Display>(x: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "policy {}: long and composed puts {}",
            self.policy,
            if self.equal { "agree" } else { "differ" }
        )?;
        writeln!(f, "  long:     {}", self.long.to)?;
        writeln!(f, "  composed: {}", self.composed.to)?;
        if !self.equal {
            writeln!(
                f,
                "  comparison delta: {} => {}",
                self.delta.from, self.delta.to
            )?;
        }
        write!(
            f,
            "  long ; delta = composed: {}",
            if self.factors { "yes" } else { "NO" }
        )
    }
}

fn refine_dep(
    oid: &str,
    a: &Option<DeptValue>,
    b: &Option<DeptValue>,
) -> Result<Option<DeptValue>, ModelError> {
    let no = |why: &str| ModelError::NoComparisonDelta(format!("{oid}: {why}"));
    match (a, b) {
        (None, None) => Ok(None),
        (Some(x), Some(y)) if x == y => Ok(Some(x.clone())),
        (Some(DeptValue::Unknown { .. }), Some(y)) => {
            let (cx, cy) = (a.as_ref().expect("some").constraint(), y.constraint());
            if !cy.is_subset(&cx) {
                return Err(no(&format!(
                    "{y} does not refine {}",
                    a.as_ref().expect("some")
                )));
            }
            match y {
                DeptValue::Known(_) => Ok(Some(y.clone())),
                DeptValue::Unknown { label, .. } => {
                    Ok(Some(DeptValue::unknown(label, cx.intersect(&cy))))
                }
            }
        }
        _ => Err(no("known department changed")),
    }
}

/// The refinement delta from `a` to `b`: identity on oids, each labelled
/// null narrowed to the intersection of both constraints. Fails unless `b`
/// only adds information to `a`.
pub fn comparison_delta(a: &RelModel, b: &RelModel) -> Result<ModelDelta, ModelError> {
    if a.schema != b.schema || a.oids() != b.oids() {
        return Err(ModelError::NoComparisonDelta(
            "the models have different rows".into(),
        ));
    }
    let mut rows = BTreeMap::new();
    for (o, ra) in &a.rows {
        let rb = &b.rows[o];
        if ra.name != rb.name {
            return Err(ModelError::NoComparisonDelta(format!("{o}: name changed")));
        }
        let expr = match (ra.expr, rb.expr) {
            (x, y) if x == y => x,
            (None, y) => y,
            _ => {
                return Err(ModelError::NoComparisonDelta(format!(
                    "{o}: known expr changed"
                )))
            }
        };
        let mut row = ra.clone();
        row.expr = expr;
        row.dep = refine_dep(o, &ra.dep, &rb.dep)?;
        rows.insert(o.clone(), row);
    }
    let to = RelModel {
        schema: a.schema,
        rows,
    };
    let kept = a.rows.keys().map(|o| (o.clone(), o.clone())).collect();
    ModelDelta::new(a.clone(), to, kept)
}

/// Runs the scenario's update through the long and the composed lens of
/// the IT view followed by the ML view and relates the two results.
pub fn compare_policies(sc: &Scenario, policy: Policy) -> Result<Comparison, ModelError> {
    let (g1, g2) = (sc.first_view()?, sc.second_view()?);
    let long_view = g1.then(&g2)?;
    let theta = pair_name(&sc.theta, "*");
    let w = sc.update_for(&long_view, &theta)?;
    let long = as_ala_lens(policy, &long_view);
    let composed = seq_compose(as_ala_lens(policy, &g1), as_ala_lens(policy, &g2))?;
    let rl: RelPut = lens_put(&long, &theta, &sc.source, &w)?;
    let rc = lens_put(
        &composed,
        &(sc.theta.clone(), "*".to_string()),
        &sc.source,
        &w,
    )?;
    let equal = rl.request == rc.request;
    let delta = comparison_delta(&rl.request.to, &rc.request.to)?;
    let factors = delta_compose(&rl.request, &delta)? == rc.request;
    Ok(Comparison {
        policy,
        equal,
        long: rl.request,
        composed: rc.request,
        delta,
        factors,
    })
}
