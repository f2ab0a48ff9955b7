use std::collections::BTreeMap;

use super::*;
use crate::compose::{check_policy_functoriality, ComposableGet};
use crate::lens::{lens_put, LawSuite, Point};

fn it() -> ViewDef {
    ViewDef::it_view(&IT_DEPARTMENTS)
}

fn ml() -> ViewDef {
    ViewDef::ml_view(&IT_DEPARTMENTS)
}

/// Scenario w one level up: the IT view loses Mary and gains a new Mary
/// in some IT department.
fn w_on_it_view() -> Scenario {
    let mut sc = scenario_w();
    sc.view = "it".into();
    sc.update.inserted[0].dep = Some(DeptValue::unknown(
        "?#M'",
        Constraint::within(&IT_DEPARTMENTS),
    ));
    sc
}

fn oids(m: &RelModel) -> Vec<&str> {
    m.rows.keys().map(String::as_str).collect()
}

fn kept(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect()
}

#[test]
fn it_view_and_ml_view_of_the_fixture() {
    let a = source_fixture();
    let (b, _) = view_get(&it(), "*", &a, None).unwrap();
    assert_eq!(oids(&b), ["#J", "#M"]);
    assert_eq!(b.schema, Schema::B);
    assert_eq!(
        b.rows["#J"],
        Row::new("John", None, Some(DeptValue::known("Testing")))
    );
    let (c, _) = view_get(&ml(), "*", &b, None).unwrap();
    assert_eq!(oids(&c), ["#M"]);
    assert_eq!(c.rows["#M"], Row::new("Mary", None, None));

    let err = view_get(&ml(), "*", &a, None).unwrap_err();
    assert!(matches!(err, ModelError::SchemaMismatch { .. }));
}

#[test]
fn view_of_identity_is_identity() {
    let a = source_fixture();
    let (b, d) = view_get(&it(), "*", &a, Some(&ModelDelta::identity(&a))).unwrap();
    assert_eq!(d.unwrap(), ModelDelta::identity(&b));
}

#[test]
fn delta_composition() {
    let a = source_fixture();
    let mut a1 = a.clone();
    a1.rows.remove("#M");
    let mut a2 = a1.clone();
    a2.rows.insert("#M".into(), a.rows["#M"].clone());
    a2.rows.insert("#J2".into(), a.rows["#J"].clone());
    a2.rows.remove("#J");
    let d1 = ModelDelta::new(a.clone(), a1.clone(), kept(&[("#A", "#A"), ("#J", "#J")])).unwrap();
    let d2 = ModelDelta::new(a1.clone(), a2.clone(), kept(&[("#A", "#A"), ("#J", "#J2")])).unwrap();
    assert_eq!(delta_compose(&d1, &ModelDelta::identity(&a1)).unwrap(), d1);
    let d = delta_compose(&d1, &d2).unwrap();
    // by hand: #A=#A, #J=#J2; #M deleted then a new #M inserted
    assert_eq!(d.kept, kept(&[("#A", "#A"), ("#J", "#J2")]));
    assert_eq!(d.deleted(), ["#M"]);
    assert_eq!(d.inserted(), ["#M"]);
    assert!(matches!(
        delta_compose(&d2, &d1),
        Err(ModelError::BoundaryMismatch(_))
    ));

    let bad = ModelDelta::new(a.clone(), a1, kept(&[("#A", "#A"), ("#J", "#A")]));
    assert!(matches!(bad, Err(ModelError::InvalidDelta(_))));
}

#[test]
fn quit_on_scenario_w() {
    let sc = scenario_w();
    let long = it().then(&ml()).unwrap();
    let w = sc.update_for(&long, "(*|*)").unwrap();
    let r = policy_put(Policy::Quit, &long, "(*|*)", &sc.source, &w).unwrap();
    let a2 = &r.request.to;
    assert_eq!(oids(a2), ["#A", "#J", "#M'"]);
    assert_eq!(
        a2.rows["#M'"],
        Row::new(
            "Mary",
            None,
            Some(DeptValue::unknown("?#M'", Constraint::within(&["ML"])))
        )
    );
    assert_eq!(r.request.kept, kept(&[("#A", "#A"), ("#J", "#J")]));
    assert_eq!(r.update, "(id_*|id_*)");
    assert!(r.amendment.is_identity());
}

#[test]
fn quit_on_the_it_view_inserts_an_it_employee() {
    let sc = w_on_it_view();
    let w = sc.update().unwrap();
    let r = policy_put(Policy::Quit, &it(), "*", &sc.source, &w).unwrap();
    assert_eq!(
        r.request.to.rows["#M'"].dep,
        Some(DeptValue::unknown(
            "?#M'",
            Constraint::within(&["ML", "Testing"])
        ))
    );
    assert!(!r.request.to.rows.contains_key("#M"));
}

#[test]
fn trans_keeps_mary_outside_the_view() {
    let sc = w_on_it_view();
    let w = sc.update().unwrap();
    let r = policy_put(Policy::Trans, &it(), "*", &sc.source, &w).unwrap();
    let mary = &r.request.to.rows["#M"];
    assert_eq!(mary.expr, None);
    assert_eq!(
        mary.dep,
        Some(DeptValue::unknown(
            "?#M",
            Constraint::outside(&["ML", "Testing"])
        ))
    );
    assert_eq!(r.request.kept["#M"], "#M");
    assert!(r.request.to.rows.contains_key("#M'"));
}

#[test]
fn identity_update_is_stable_under_every_policy() {
    let a = source_fixture();
    let v = it().with_thresholds(&["any", "5", "10"]).unwrap();
    for pol in [Policy::Quit, Policy::Trans, Policy::Param] {
        let (b, _) = view_get(&v, "any", &a, None).unwrap();
        let r = policy_put(pol, &v, "any", &a, &ModelDelta::identity(&b)).unwrap();
        assert_eq!(r.update, "any->any");
        assert_eq!(r.request, ModelDelta::identity(&a));
    }
}

#[test]
fn param_explains_a_deletion_by_a_threshold() {
    let mut sc = w_on_it_view();
    sc.theta = "any".into();
    sc.thresholds = Some(vec!["any".into(), "5".into(), "10".into()]);
    sc.update = ViewUpdate {
        deleted: vec!["#J".into()],
        ..ViewUpdate::default()
    };
    let vd = sc.selected_view().unwrap();
    let w = sc.update().unwrap();
    let lens = as_ala_lens(Policy::Param, &vd);
    let r = lens_put(&lens, &"any".to_string(), &sc.source, &w).unwrap();
    assert_eq!(r.update, "any->5");
    assert_eq!(r.request, ModelDelta::identity(&sc.source));

    // a new employee cannot be explained by a threshold
    let mut w2s = sc.clone();
    w2s.update = w_on_it_view().update;
    let err = policy_put(
        Policy::Param,
        &vd,
        "any",
        &sc.source,
        &w2s.update().unwrap(),
    )
    .unwrap_err();
    assert!(matches!(err, ModelError::PolicyInapplicable(_)));
}

#[test]
fn putget_zero_holds_row_for_row() {
    for sc in generate_scenarios(7, 12) {
        let vd = sc.selected_view().unwrap();
        let theta = sc.selected_theta();
        let w = sc.update().unwrap();
        for pol in [Policy::Quit, Policy::Trans] {
            let r = policy_put(pol, &vd, &theta, &sc.source, &w).unwrap();
            let (view, _) = view_get(&vd, &theta, &r.request.to, None).unwrap();
            assert_eq!(view, w.to);
        }
    }
}

fn points(vd: &ViewDef, scenarios: &[Scenario]) -> Vec<Point<RelLens>> {
    let mut out = Vec::new();
    for sc in scenarios {
        let theta = sc.selected_theta();
        let w = sc.update().unwrap();
        let (view, _) = view_get(vd, &theta, &sc.source, None).unwrap();
        out.push((
            theta.clone(),
            sc.source.clone(),
            ModelDelta::identity(&view),
        ));
        out.push((theta, sc.source.clone(), w));
    }
    out
}

#[test]
fn policy_lenses_are_well_behaved_on_the_suite() {
    let mut scenarios = generate_scenarios(11, 15);
    scenarios.push(scenario_w());
    let long = it().then(&ml()).unwrap();
    let pts = points(&long, &scenarios);
    for pol in [Policy::Quit, Policy::Trans] {
        let lens = as_ala_lens(pol, &long);
        let suite = LawSuite::sampled(&lens, pts.clone());
        assert!(suite.stability().unwrap().passed(), "{pol}");
        assert!(suite.putget().unwrap().passed(), "{pol}");
    }
}

#[test]
fn comparison_on_scenario_w() {
    let sc = scenario_w();
    let q = compare_policies(&sc, Policy::Quit).unwrap();
    assert!(q.equal && q.factors);
    assert!(q.delta.is_identity());

    let t = compare_policies(&sc, Policy::Trans).unwrap();
    assert!(!t.equal && t.factors);
    assert_eq!(
        t.long.to.rows["#M"].dep,
        Some(DeptValue::unknown("?#M", Constraint::outside(&["ML"])))
    );
    assert_eq!(
        t.composed.to.rows["#M"].dep,
        Some(DeptValue::unknown("?#M", Constraint::within(&["Testing"])))
    );
    assert_eq!(t.delta.to, t.composed.to);
}

#[test]
fn empty_update_compares_equal() {
    let mut sc = scenario_w();
    sc.update = ViewUpdate::default();
    for pol in [Policy::Quit, Policy::Trans] {
        let c = compare_policies(&sc, pol).unwrap();
        assert!(c.equal && c.factors && c.delta.is_identity());
    }
}

#[test]
fn comparison_delta_rejects_non_refinements() {
    let a = source_fixture();
    let mut b = a.clone();
    b.rows.get_mut("#J").unwrap().dep = Some(DeptValue::known("HR"));
    assert!(matches!(
        comparison_delta(&a, &b),
        Err(ModelError::NoComparisonDelta(_))
    ));
}

#[test]
fn constraints_only_shrink_along_comparison_deltas() {
    for sc in generate_scenarios(3, 20) {
        let c = compare_policies(&sc, Policy::Trans).unwrap();
        assert!(c.factors);
        for (o, r) in &c.delta.from.rows {
            if let (Some(x), Some(y)) = (&r.dep, &c.delta.to.rows[o].dep) {
                assert!(y.constraint().is_subset(&x.constraint()));
            }
        }
    }
}

#[test]
fn functoriality_quit_passes_trans_fails() {
    let mut scenarios = generate_scenarios(5, 10);
    scenarios.push(scenario_w());
    let long = it().then(&ml()).unwrap();
    let pts = points(&long, &scenarios);
    let q = check_policy_functoriality(&Policy::Quit, &it(), &ml(), Some(pts.clone())).unwrap();
    assert!(q.holds(), "{q}");
    let t = check_policy_functoriality(&Policy::Trans, &it(), &ml(), Some(pts)).unwrap();
    assert!(!t.holds());
    assert!(t.mismatches.iter().any(|c| c.equation == "u"));
}

#[test]
fn scenario_file_round_trip() {
    let sc = scenario_w();
    let back = Scenario::from_json(&sc.to_json()).unwrap();
    assert_eq!(back, sc);
    let json = r##"{"source": {"#A": {"name": "Ann", "expr": 1, "dep": {"label": "?a", "in": []}}},
                  "view_update": {}}"##;
    assert!(matches!(
        Scenario::from_json(json),
        Err(ModelError::BadScenario(_))
    ));
    let json = r##"{"source": {}, "view_update": {"deleted": ["#X"]}}"##;
    assert!(matches!(
        Scenario::from_json(json).unwrap().update(),
        Err(ModelError::BadScenario(_))
    ));
}

#[test]
fn view_is_functorial_on_dep_stable_deltas() {
    // a row that is hidden in the middle step loses its kept pair stepwise
    let a = source_fixture();
    let mut mid = a.clone();
    mid.rows.get_mut("#J").unwrap().dep = Some(DeptValue::known("HR"));
    let d1 = ModelDelta::identity(&a);
    let d1 = ModelDelta {
        to: mid.clone(),
        ..d1
    };
    let d2 = ModelDelta {
        from: mid.clone(),
        to: a.clone(),
        kept: d1.kept.clone(),
    };
    let vd = it();
    let whole = vd
        .restrict("*", "*", &delta_compose(&d1, &d2).unwrap())
        .unwrap();
    let steps = delta_compose(
        &vd.restrict("*", "*", &d1).unwrap(),
        &vd.restrict("*", "*", &d2).unwrap(),
    )
    .unwrap();
    assert_ne!(whole, steps);

    for sc in generate_scenarios(9, 10) {
        let lens = as_ala_lens(Policy::Quit, &sc.selected_view().unwrap());
        let theta = sc.selected_theta();
        let w = sc.update().unwrap();
        let u = lens_put(&lens, &theta, &sc.source, &w).unwrap().request;
        let back = policy_put(
            Policy::Quit,
            lens.view(),
            &theta,
            &u.to,
            &ModelDelta::identity(&w.to),
        )
        .unwrap();
        let vd = lens.view();
        let composite = vd
            .restrict(&theta, &theta, &delta_compose(&u, &back.request).unwrap())
            .unwrap();
        let stepwise = delta_compose(
            &vd.restrict(&theta, &theta, &u).unwrap(),
            &vd.restrict(&theta, &theta, &back.request).unwrap(),
        )
        .unwrap();
        assert_eq!(composite, stepwise);
    }
}
