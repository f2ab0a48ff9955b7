use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::fincat::{product_category, FinCat, Functor};
use crate::fixtures::{lens_chain, parallel_pair, pararrow_pfun, walking_arrow};
use crate::lens::{
    check_putget, check_stability, full_domain, is_well_behaved, lens_put, materialize, Law,
    LawSuite, PutRow, TableLens,
};
use crate::pfun::{pfun_compose, pfun_product, ParamFunctor};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn identity_lens_replays_updates() {
    let l = identity_lens(walking_arrow());
    let r = lens_put(&l, &"*".into(), &"X".into(), &"f".into()).unwrap();
    assert_eq!(
        (r.update.as_str(), r.request.as_str(), r.amendment.as_str()),
        ("id_*", "f", "idY")
    );
    let suite = LawSuite::exhaustive(&l).unwrap();
    for rep in suite.run(&Law::ALL).unwrap() {
        assert!(rep.passed(), "{rep}");
    }
}

#[test]
fn identity_is_a_two_sided_unit() {
    for seed in 0..8 {
        let l = lens_chain(&mut rng(seed), 1).remove(0);
        let left = seq_compose(identity_lens(l.source().clone()), &l).unwrap();
        assert!(check_equivalence(&left, &l, &LeftUnitor).unwrap().holds());
        let right = seq_compose(&l, identity_lens(l.target().clone())).unwrap();
        assert!(check_equivalence(&right, &l, &RightUnitor).unwrap().holds());
    }
}

#[test]
fn boundary_mismatch_is_rejected() {
    let k = identity_lens(walking_arrow());
    let l = identity_lens(parallel_pair());
    assert!(matches!(
        seq_compose(k, l),
        Err(LensError::BoundaryMismatch(_))
    ));
}

#[test]
fn identity_iso_lens_is_the_identity_lens() {
    let c = walking_arrow();
    let iso = iso_lens(Functor::identity(&c)).unwrap();
    let id = identity_lens(c);
    assert!(
        check_equivalence(&iso, &id, &Functor::identity(&FinCat::terminal()))
            .unwrap()
            .holds()
    );
}

#[test]
fn renaming_and_braiding_iso_lenses_are_wb() {
    let c = walking_arrow();
    let renamed = FinCat::from_parts(
        ["A", "B"],
        [("idA", "A", "A"), ("idB", "B", "B"), ("g", "A", "B")],
        [("A", "idA"), ("B", "idB")],
        [
            ("idA", "idA", "idA"),
            ("idB", "idB", "idB"),
            ("idA", "g", "g"),
            ("g", "idB", "g"),
        ],
    )
    .unwrap();
    let iota = Functor::checked(
        c.clone(),
        renamed,
        [("X", "A"), ("Y", "B")]
            .map(|(a, b)| (a.into(), b.into()))
            .into(),
        [("idX", "idA"), ("idY", "idB"), ("f", "g")]
            .map(|(a, b)| (a.into(), b.into()))
            .into(),
    )
    .unwrap();
    let l = iso_lens(iota).unwrap();
    assert!(is_well_behaved(&l).unwrap());
    let braid = iso_lens(Functor::braiding(&c, &c)).unwrap();
    for rep in LawSuite::exhaustive(&braid)
        .unwrap()
        .run(&Law::ALL)
        .unwrap()
    {
        assert!(rep.passed(), "{rep}");
    }
    let twice = seq_compose(&braid, &braid).unwrap();
    let id = identity_lens(product_category(&c, &c));
    assert!(check_equivalence(&twice, &id, &LeftUnitor).unwrap().holds());
}

#[test]
fn non_iso_is_rejected() {
    let c = walking_arrow();
    let collapse = Functor::constant(&c, &c, "X").unwrap();
    assert!(iso_lens(collapse).is_err());
}

/// The sequential put recomputed straight from the two tables.
fn seq_oracle(
    k: &TableLens,
    l: &TableLens,
    p: &str,
    q: &str,
    a: &str,
    w: &str,
) -> (String, String, String, String) {
    let find = |t: &TableLens, p: &str, s: &str, v: &str| -> PutRow {
        t.rows()
            .into_iter()
            .find(|r| r.p == p && r.s == s && r.v == v)
            .expect("row")
    };
    let b = k.get().at(p).unwrap().ob(a).unwrap();
    let second = find(l, q, b, w);
    let first = find(k, p, a, &second.u);
    let q2 = l.params().dst(&second.e).unwrap();
    let image = l.get().at(q2).unwrap().arr(&first.amendment).unwrap();
    let amendment = l
        .target()
        .compose(&second.amendment, image)
        .unwrap()
        .to_string();
    (first.e, second.e, first.u, amendment)
}

#[test]
fn seq_put_matches_the_table_oracle() {
    for seed in 0..10 {
        let mut chain = lens_chain(&mut rng(100 + seed), 2);
        let l = chain.pop().unwrap();
        let k = chain.pop().unwrap();
        let kl = seq_compose(&k, &l).unwrap();
        for ((p, q), a, w) in full_domain(&kl).unwrap() {
            let r = lens_put(&kl, &(p.clone(), q.clone()), &a, &w).unwrap();
            let got = (r.update.0, r.update.1, r.request, r.amendment);
            assert_eq!(got, seq_oracle(&k, &l, &p, &q, &a, &w));
        }
        let table = materialize(&kl).unwrap();
        assert_eq!(table.get(), &pfun_compose(k.get(), l.get()).unwrap());
    }
}

#[test]
fn par_put_projects_onto_components() {
    for seed in 0..10 {
        let mut r = rng(200 + seed);
        let k = lens_chain(&mut r, 1).remove(0);
        let l = lens_chain(&mut r, 1).remove(0);
        let kl = par_compose(&k, &l);
        assert!(check_stability(&kl).unwrap().passed());
        assert!(check_putget(&kl).unwrap().passed());
        for ((p, q), (a, b), (v, w)) in full_domain(&kl).unwrap() {
            let both = lens_put(
                &kl,
                &(p.clone(), q.clone()),
                &(a.clone(), b.clone()),
                &(v.clone(), w.clone()),
            )
            .unwrap();
            let x = lens_put(&k, &p, &a, &v).unwrap();
            let y = lens_put(&l, &q, &b, &w).unwrap();
            assert_eq!(both.update, (x.update, y.update));
            assert_eq!(both.request, (x.request, y.request));
            assert_eq!(both.amendment, (x.amendment, y.amendment));
        }
        assert_eq!(
            materialize(&kl).unwrap().get(),
            &pfun_product(k.get(), l.get())
        );
    }
}

#[test]
fn par_of_identities_is_the_identity() {
    let c = walking_arrow();
    let both = par_compose(identity_lens(c.clone()), identity_lens(c.clone()));
    let id = identity_lens(crate::fincat::Product(c.clone(), c));
    assert!(check_equivalence(&both, &id, &LeftUnitor).unwrap().holds());
}

#[test]
fn perturbed_row_breaks_equivalence() {
    let l = LeastChange
        .apply(&ParamFunctor::identity(&parallel_pair()))
        .unwrap();
    let bad = l.with_row_unchecked(PutRow {
        p: "*".into(),
        s: "X".into(),
        v: "f".into(),
        e: "id_*".into(),
        u: "g".into(),
        amendment: "idY".into(),
    });
    let iota = Functor::identity(&FinCat::terminal());
    assert!(check_equivalence(&l, &l, &iota).unwrap().holds());
    let rep = check_equivalence(&l, &bad, &iota).unwrap();
    assert_eq!(rep.mismatches.len(), 1);
    assert_eq!(rep.mismatches[0].equation, "u");
}

#[test]
fn iso_search_finds_a_witness_and_respects_the_bound() {
    let l = LeastChange.apply(&pararrow_pfun()).unwrap();
    let iota = find_equivalence(&l, &l, DEFAULT_ISO_BOUND)
        .unwrap()
        .unwrap();
    assert_eq!(iota, Functor::identity(l.params()));
    let big = FinCat::codiscrete(&["a", "b", "c", "d", "e", "f", "g"]).unwrap();
    assert!(matches!(
        find_isos(&big, &big, DEFAULT_ISO_BOUND),
        Err(LensError::SearchBoundExceeded {
            objects: 7,
            bound: 6
        })
    ));
    // codiscrete on 3 objects has 3! automorphisms
    let c3 = FinCat::codiscrete(&["a", "b", "c"]).unwrap();
    assert_eq!(find_isos(&c3, &c3, DEFAULT_ISO_BOUND).unwrap().len(), 6);
}

#[test]
fn associativity_on_identities_and_random_chains() {
    let c = walking_arrow();
    let id = identity_lens(c);
    assert!(check_associativity(&id, &id, &id, None).unwrap().holds());
    for seed in 0..5 {
        let chain = lens_chain(&mut rng(300 + seed), 3);
        let rep = check_associativity(&chain[0], &chain[1], &chain[2], None).unwrap();
        assert!(rep.holds(), "{rep}");
    }
}

#[test]
fn least_change_is_functorial_against_the_identity_get() {
    for seed in 0..6 {
        let l = lens_chain(&mut rng(400 + seed), 1).remove(0);
        let g = l.get().clone();
        let id = ParamFunctor::identity(g.target());
        let rep = check_policy_functoriality(&LeastChange, &g, &id, None).unwrap();
        assert!(rep.holds(), "{rep}");
        let lens = LeastChange.apply(&g).unwrap();
        assert!(is_well_behaved(&lens).unwrap());
    }
}
