use proptest::prelude::*;

use super::*;
use crate::fincat::{product_category, split_pair, Functor};
use crate::fixtures::{idempotent, parallel_pair, pararrow_pfun, walking_arrow};

fn row(p: &str, s: &str, v: &str, e: &str, u: &str, a: &str) -> PutRow {
    PutRow {
        p: p.into(),
        s: s.into(),
        v: v.into(),
        e: e.into(),
        u: u.into(),
        amendment: a.into(),
    }
}

/// Identity get over the terminal parameter space; the request replays `v`.
fn replay_lens(c: &crate::fincat::FinCat) -> TableLens {
    let get = ParamFunctor::identity(c);
    TableLens::from_fn(get, |_, _, v| {
        Ok(PutResult {
            update: "id_*".into(),
            request: v.into(),
            amendment: c.identity(c.dst(v)?)?.into(),
        })
    })
    .unwrap()
}

#[test]
fn replay_lens_is_lawful() {
    let l = replay_lens(&walking_arrow());
    let suite = LawSuite::exhaustive(&l).unwrap();
    for r in suite.run(&Law::ALL).unwrap() {
        assert!(r.passed(), "{r}");
    }
    assert!(is_well_behaved(&l).unwrap());
}

#[test]
fn putget_zero_violation_names_the_row() {
    let get = ParamFunctor::identity(&walking_arrow());
    let rows = vec![
        row("*", "X", "idX", "id_*", "idX", "idX"),
        row("*", "X", "f", "id_*", "idX", "idY"),
        row("*", "Y", "idY", "id_*", "idY", "idY"),
    ];
    match make_lens(get, rows) {
        Err(LensError::PutgetZeroViolation {
            point,
            expected,
            actual,
        }) => {
            assert_eq!(point, "(p=*, S=X, v=f)");
            assert_eq!((expected.as_str(), actual.as_str()), ("Y", "X"));
        }
        other => panic!("expected a Putget0 violation, got {other:?}"),
    }
}

#[test]
fn partial_table_is_rejected() {
    let get = ParamFunctor::identity(&walking_arrow());
    let rows = vec![
        row("*", "X", "idX", "id_*", "idX", "idX"),
        row("*", "Y", "idY", "id_*", "idY", "idY"),
    ];
    assert!(matches!(
        make_lens(get, rows),
        Err(LensError::PutDomainIncomplete { point }) if point == "(p=*, S=X, v=f)"
    ));
}

#[test]
fn lens_put_checks_the_anchor() {
    let l = replay_lens(&walking_arrow());
    let r = lens_put(&l, &"*".into(), &"X".into(), &"f".into()).unwrap();
    assert_eq!(r.request, "f");
    assert_eq!(r.amendment, "idY");
    let err = lens_put(&l, &"*".into(), &"Y".into(), &"f".into()).unwrap_err();
    assert!(matches!(err, LensError::DomainError(_)));
}

#[test]
fn stability_violation_reports_the_anchor() {
    // At p the view is constantly X; on (p, X, idX) the put still moves the
    // parameter along e, which lands on the same view.
    let l = make_lens(
        pararrow_pfun(),
        vec![
            row("p", "X", "idX", "e", "idX", "idX"),
            row("p", "X", "f", "e", "f", "idY"),
            row("p", "Y", "idX", "idp", "idY", "idX"),
            row("p", "Y", "f", "e", "idY", "idY"),
            row("p'", "X", "idX", "idp'", "idX", "idX"),
            row("p'", "X", "f", "idp'", "f", "idY"),
            row("p'", "Y", "idY", "idp'", "idY", "idY"),
        ],
    )
    .unwrap();
    let rep = check_stability(&l).unwrap();
    assert_eq!(rep.counterexamples.len(), 1);
    assert_eq!(rep.counterexamples[0].point, "(p=p, S=X, v=idX)");
    assert!(check_putget(&l).unwrap().passed());
}

#[test]
fn putget_fails_on_a_parallel_request() {
    let c = parallel_pair();
    let good = replay_lens(&c);
    let bad = good.with_row_unchecked(row("*", "X", "f", "id_*", "g", "idY"));
    // The swapped row still satisfies Putget0.
    let r = lens_put(&bad, &"*".into(), &"X".into(), &"f".into()).unwrap();
    assert_eq!(r.request, "g");
    let rep = check_putget(&bad).unwrap();
    assert_eq!(rep.counterexamples.len(), 1);
    let cx = &rep.counterexamples[0];
    assert_eq!((cx.expected.as_str(), cx.actual.as_str()), ("f", "g"));
    assert!(check_stability(&bad).unwrap().passed());
}

#[test]
fn amending_an_image_update_breaks_hippocraticness_only() {
    // v = e is in the image of the identity get, yet the put amends with e.
    let c = idempotent();
    let l = make_lens(
        ParamFunctor::identity(&c),
        vec![
            row("*", "X", "idX", "id_*", "idX", "idX"),
            row("*", "X", "e", "id_*", "e", "e"),
        ],
    )
    .unwrap();
    assert!(is_well_behaved(&l).unwrap());
    let rep = check_hippocratic(&l).unwrap();
    assert_eq!(rep.counterexamples.len(), 1);
    assert_eq!(rep.counterexamples[0].actual, "e");
}

#[test]
fn putput_on_replay_lens() {
    let rep = check_putput(&replay_lens(&crate::fixtures::chain3())).unwrap();
    assert!(rep.passed(), "{rep}");
    assert!(rep.checked > 0);
}

#[test]
fn fn_lens_checks_putget_zero_on_each_call() {
    let c = walking_arrow();
    let get = ParamFunctor::identity(&c);
    let lens = FnLens::new(get, |_: &String, s: &String, _: &String| {
        Ok(PutResult {
            update: "id_*".to_string(),
            request: format!("id{s}"),
            amendment: "idY".to_string(),
        })
    });
    assert!(lens_put(&lens, &"*".into(), &"Y".into(), &"idY".into()).is_ok());
    let err = lens.put(&"*".into(), &"X".into(), &"f".into()).unwrap_err();
    assert!(matches!(err, LensError::PutgetZeroViolation { .. }));
}

#[test]
fn law_names_parse() {
    assert_eq!("putget".parse::<Law>().unwrap(), Law::Putget);
    assert!("putgte".parse::<Law>().is_err());
}

#[test]
fn materialize_round_trips_a_table() {
    let l = replay_lens(&parallel_pair());
    assert_eq!(materialize(&l).unwrap(), l);
}

/// First projection `C×C → C`.
fn projection(c: &crate::fincat::FinCat) -> Functor {
    let cc = product_category(c, c);
    let first = |n: &str| split_pair(n).expect("pair").0.to_string();
    Functor::checked(
        cc.clone(),
        c.clone(),
        cc.objects().map(|o| (o.to_string(), first(o))).collect(),
        cc.arrows().map(|a| (a.to_string(), first(a))).collect(),
    )
    .unwrap()
}

proptest! {
    // A plain delta lens (trivial parameters, identity amendments) satisfies
    // the amended Putget exactly when get(put(v)) = v.
    #[test]
    fn plain_delta_lens_putget_agrees(choices in proptest::collection::vec(0usize..64, 32)) {
        let c = walking_arrow();
        let get = ParamFunctor::constant(projection(&c));
        let s_cat = get.source().clone();
        let mut plain_ok = true;
        let mut picks = choices.into_iter().cycle();
        let lens = TableLens::from_fn(get.clone(), |_, s, v| {
            let want = c.dst(v)?;
            let cands: Vec<&str> = s_cat
                .arrows_from(s)?
                .iter()
                .map(String::as_str)
                .filter(|u| get.at("*").unwrap().ob(s_cat.dst(u).unwrap()).unwrap() == want)
                .collect();
            let u = cands[picks.next().unwrap() % cands.len()];
            if get.at("*")?.arr(u)? != v {
                plain_ok = false;
            }
            Ok(PutResult { update: "id_*".into(), request: u.into(), amendment: c.identity(want)?.into() })
        }).unwrap();
        prop_assert_eq!(check_putget(&lens).unwrap().passed(), plain_ok);
    }
}
