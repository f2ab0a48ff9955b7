//! Small categories and transformations used throughout tests, examples and
//! the acceptance suite.

mod random;

pub use random::{
    all_functors, all_nat_trans, fixture_categories, lens_chain, param_shapes, poset, random_pfun,
    random_wb_lens, ParamShape,
};

use std::collections::BTreeMap;

use crate::fincat::{FinCat, Functor, NatTrans};
use crate::pfun::ParamFunctor;

fn map(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect()
}

/// `X --f--> Y`.
pub fn walking_arrow() -> FinCat {
    FinCat::from_parts(
        ["X", "Y"],
        [("idX", "X", "X"), ("idY", "Y", "Y"), ("f", "X", "Y")],
        [("X", "idX"), ("Y", "idY")],
        [
            ("idX", "idX", "idX"),
            ("idY", "idY", "idY"),
            ("idX", "f", "f"),
            ("f", "idY", "f"),
        ],
    )
    .expect("walking arrow")
}

/// `X --f--> Y --g--> Z` with `h = f;g`.
pub fn chain3() -> FinCat {
    FinCat::from_parts(
        ["X", "Y", "Z"],
        [
            ("idX", "X", "X"),
            ("idY", "Y", "Y"),
            ("idZ", "Z", "Z"),
            ("f", "X", "Y"),
            ("g", "Y", "Z"),
            ("h", "X", "Z"),
        ],
        [("X", "idX"), ("Y", "idY"), ("Z", "idZ")],
        [
            ("idX", "idX", "idX"),
            ("idY", "idY", "idY"),
            ("idZ", "idZ", "idZ"),
            ("idX", "f", "f"),
            ("f", "idY", "f"),
            ("idY", "g", "g"),
            ("g", "idZ", "g"),
            ("idX", "h", "h"),
            ("h", "idZ", "h"),
            ("f", "g", "h"),
        ],
    )
    .expect("chain")
}

/// Two parallel arrows `f, g: X -> Y`.
pub fn parallel_pair() -> FinCat {
    FinCat::from_parts(
        ["X", "Y"],
        [
            ("idX", "X", "X"),
            ("idY", "Y", "Y"),
            ("f", "X", "Y"),
            ("g", "X", "Y"),
        ],
        [("X", "idX"), ("Y", "idY")],
        [
            ("idX", "idX", "idX"),
            ("idY", "idY", "idY"),
            ("idX", "f", "f"),
            ("f", "idY", "f"),
            ("idX", "g", "g"),
            ("g", "idY", "g"),
        ],
    )
    .expect("parallel pair")
}

/// One object with an idempotent `e;e = e`.
pub fn idempotent() -> FinCat {
    FinCat::from_parts(
        ["X"],
        [("idX", "X", "X"), ("e", "X", "X")],
        [("X", "idX")],
        [
            ("idX", "idX", "idX"),
            ("idX", "e", "e"),
            ("e", "idX", "e"),
            ("e", "e", "e"),
        ],
    )
    .expect("idempotent")
}

/// `alpha: F⇒F′` from the terminal category into [`walking_arrow`], and
/// `beta: id⇒const_Y` on the walking arrow; neither is an identity.
pub fn nat_trans_fixture() -> (NatTrans, NatTrans) {
    let t = FinCat::terminal();
    let c = walking_arrow();
    let f = Functor::constant(&t, &c, "X").expect("object");
    let f2 = Functor::constant(&t, &c, "Y").expect("object");
    let alpha = NatTrans::checked(f, f2, map(&[("*", "f")])).expect("natural");
    let g = Functor::identity(&c);
    let g2 = Functor::constant(&c, &c, "Y").expect("object");
    let beta = NatTrans::checked(g, g2, map(&[("X", "f"), ("Y", "idY")])).expect("natural");
    (alpha, beta)
}

/// `p --e--> p'`.
pub fn pararrow() -> FinCat {
    FinCat::from_parts(
        ["p", "p'"],
        [("idp", "p", "p"), ("idp'", "p'", "p'"), ("e", "p", "p'")],
        [("p", "idp"), ("p'", "idp'")],
        [
            ("idp", "idp", "idp"),
            ("idp'", "idp'", "idp'"),
            ("idp", "e", "e"),
            ("e", "idp'", "e"),
        ],
    )
    .expect("parameters")
}

/// A p-functor over the walking-arrow parameter category `p --e--> p'` from
/// and to [`walking_arrow`]: `get_p` collapses onto `X`, `get_p'` is the
/// identity, and `get_e` has components `X ↦ idX`, `Y ↦ f`.
pub fn pararrow_pfun() -> ParamFunctor {
    let params = pararrow();
    let c = walking_arrow();
    let at_p = Functor::constant(&c, &c, "X").expect("object");
    let at_p2 = Functor::identity(&c);
    let e = NatTrans::checked(
        at_p.clone(),
        at_p2.clone(),
        map(&[("X", "idX"), ("Y", "f")]),
    )
    .expect("natural");
    let on_obj = [
        ("p".to_string(), at_p.clone()),
        ("p'".to_string(), at_p2.clone()),
    ]
    .into();
    let on_arr = [
        ("idp".to_string(), NatTrans::identity(&at_p)),
        ("idp'".to_string(), NatTrans::identity(&at_p2)),
        ("e".to_string(), e),
    ]
    .into();
    ParamFunctor::new(params, c.clone(), c, on_obj, on_arr).expect("p-functor")
}
