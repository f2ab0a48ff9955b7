//! Seeded generation of small categories, p-functors and well-behaved table
//! lenses for the exhaustive suites.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;

use super::{chain3, idempotent, parallel_pair, pararrow, walking_arrow};
use crate::fincat::{vertical_compose, FinCat, Functor, NatTrans};
use crate::lens::{full_domain, make_lens, ParamGet, PutRow, TableLens};
use crate::pfun::ParamFunctor;

/// Most functors enumerated between two fixture categories.
const FUNCTOR_LIMIT: usize = 4096;

/// The category of a finite poset given by its covering pairs. The arrow
/// `x ≤ y` is named `xy`, identities `idx`.
pub fn poset(objects: &[&str], covers: &[(&str, &str)]) -> FinCat {
    let mut le: BTreeSet<(String, String)> = objects
        .iter()
        .map(|o| (o.to_string(), o.to_string()))
        .collect();
    le.extend(covers.iter().map(|(a, b)| (a.to_string(), b.to_string())));
    loop {
        let extra: Vec<_> = le
            .iter()
            .cartesian_product(le.iter())
            .filter(|((_, b), (c, _))| b == c)
            .map(|((a, _), (_, d))| (a.clone(), d.clone()))
            .filter(|p| !le.contains(p))
            .collect();
        if extra.is_empty() {
            break;
        }
        le.extend(extra);
    }
    let name = |a: &str, b: &str| {
        if a == b {
            format!("id{a}")
        } else {
            format!("{a}{b}")
        }
    };
    let arrows: Vec<(String, String, String)> = le
        .iter()
        .map(|(a, b)| (name(a, b), a.clone(), b.clone()))
        .collect();
    let compose: Vec<(String, String, String)> = le
        .iter()
        .cartesian_product(le.iter())
        .filter(|((_, b), (c, _))| b == c)
        .map(|((a, b), (_, d))| (name(a, b), name(b, d), name(a, d)))
        .collect();
    let ids: Vec<(String, String)> = objects
        .iter()
        .map(|o| (o.to_string(), name(o, o)))
        .collect();
    FinCat::from_parts(
        objects.iter().copied(),
        arrows
            .iter()
            .map(|(a, s, d)| (a.as_str(), s.as_str(), d.as_str())),
        ids.iter().map(|(o, a)| (o.as_str(), a.as_str())),
        compose
            .iter()
            .map(|(f, g, h)| (f.as_str(), g.as_str(), h.as_str())),
    )
    .expect("poset category")
}

/// Source and target spaces for generated lenses: at most 4 objects and 10
/// arrows each.
pub fn fixture_categories() -> Vec<FinCat> {
    vec![
        FinCat::terminal(),
        walking_arrow(),
        chain3(),
        parallel_pair(),
        idempotent(),
        FinCat::codiscrete(&["X", "Y"]).expect("codiscrete"),
        FinCat::codiscrete(&["X", "Y", "Z"]).expect("codiscrete"),
        poset(&["a", "b"], &[]),
        poset(&["a", "b", "c"], &[("a", "b"), ("a", "c")]),
        poset(&["a", "b", "c"], &[("a", "c"), ("b", "c")]),
        poset(
            &["a", "b", "c", "d"],
            &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")],
        ),
    ]
}

/// A free parameter category with its generating arrows listed so that each
/// generator's source is reached before it is used.
#[derive(Debug, Clone)]
pub struct ParamShape {
    pub params: FinCat,
    pub generators: Vec<String>,
}

/// Parameter categories with at most 3 objects and unique paths.
pub fn param_shapes() -> Vec<ParamShape> {
    let shape = |params: FinCat, gens: &[&str]| ParamShape {
        params,
        generators: gens.iter().map(|g| g.to_string()).collect(),
    };
    vec![
        shape(FinCat::terminal(), &[]),
        shape(pararrow(), &["e"]),
        shape(
            poset(&["p", "q", "r"], &[("p", "q"), ("q", "r")]),
            &["pq", "qr"],
        ),
        shape(
            poset(&["p", "q", "r"], &[("p", "q"), ("p", "r")]),
            &["pq", "pr"],
        ),
    ]
}

/// Every functor `s → t`, up to a fixed cap.
pub fn all_functors(s: &FinCat, t: &FinCat) -> Vec<Functor> {
    let objs: Vec<&str> = s.objects().collect();
    let arrows: Vec<&str> = s.arrows().filter(|a| !s.is_identity(a)).collect();
    let targets: Vec<&str> = t.objects().collect();
    let mut out = Vec::new();
    let images = objs
        .iter()
        .map(|_| targets.iter().copied())
        .multi_cartesian_product();
    for img in images {
        let obj_map: BTreeMap<String, String> = objs
            .iter()
            .zip(&img)
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        let ids: BTreeMap<String, String> = objs
            .iter()
            .map(|o| {
                let id = s.identity(o).expect("object");
                (
                    id.to_string(),
                    t.identity(&obj_map[*o]).expect("object").to_string(),
                )
            })
            .collect();
        let choices: Vec<Vec<&str>> = arrows
            .iter()
            .map(|a| {
                let (x, y) = (s.src(a).expect("arrow"), s.dst(a).expect("arrow"));
                t.hom(&obj_map[x], &obj_map[y])
            })
            .collect();
        let combos: Box<dyn Iterator<Item = Vec<&str>>> = if arrows.is_empty() {
            Box::new(std::iter::once(Vec::new()))
        } else {
            Box::new(choices.into_iter().multi_cartesian_product())
        };
        for combo in combos {
            let mut arr_map = ids.clone();
            arr_map.extend(
                arrows
                    .iter()
                    .zip(combo)
                    .map(|(a, b)| (a.to_string(), b.to_string())),
            );
            if let Ok(f) = Functor::checked(s.clone(), t.clone(), obj_map.clone(), arr_map) {
                out.push(f);
                if out.len() >= FUNCTOR_LIMIT {
                    return out;
                }
            }
        }
    }
    out
}

/// Every natural transformation `f ⇒ g`.
pub fn all_nat_trans(f: &Functor, g: &Functor) -> Vec<NatTrans> {
    let objs: Vec<&str> = f.source.objects().collect();
    let t = &f.target;
    objs.iter()
        .map(|o| t.hom(f.ob(o).expect("object"), g.ob(o).expect("object")))
        .multi_cartesian_product()
        .filter_map(|cs| {
            let components = objs
                .iter()
                .zip(cs)
                .map(|(o, c)| (o.to_string(), c.to_string()))
                .collect();
            NatTrans::checked(f.clone(), g.clone(), components).ok()
        })
        .collect()
}

/// A random p-functor over `shape`. Each generator gets a random
/// transformation out of the functor already chosen at its source, so one
/// always exists.
pub fn random_pfun<R: Rng>(
    shape: &ParamShape,
    s: &FinCat,
    t: &FinCat,
    rng: &mut R,
) -> Option<ParamFunctor> {
    let functors = all_functors(s, t);
    if functors.is_empty() {
        return None;
    }
    let p = &shape.params;
    let mut on_obj: BTreeMap<String, Functor> = BTreeMap::new();
    let mut on_arr: BTreeMap<String, NatTrans> = BTreeMap::new();
    let targets: BTreeSet<&str> = shape
        .generators
        .iter()
        .map(|g| p.dst(g).expect("generator"))
        .collect();
    for o in p.objects().filter(|o| !targets.contains(o)) {
        on_obj.insert(o.to_string(), functors.choose(rng)?.clone());
    }
    for g in &shape.generators {
        let from = on_obj.get(p.src(g).ok()?)?.clone();
        let options: Vec<NatTrans> = functors
            .iter()
            .flat_map(|h| all_nat_trans(&from, h))
            .collect();
        let eta = options.choose(rng)?.clone();
        on_obj.insert(p.dst(g).ok()?.to_string(), eta.to.clone());
        on_arr.insert(g.clone(), eta);
    }
    for o in p.objects() {
        on_arr.insert(
            p.identity(o).ok()?.to_string(),
            NatTrans::identity(&on_obj[o]),
        );
    }
    while on_arr.len() < p.arrow_count() {
        let (a, b, c) = p.composition_table().find(|(a, b, c)| {
            on_arr.contains_key(*a) && on_arr.contains_key(*b) && !on_arr.contains_key(*c)
        })?;
        let eta = vertical_compose(&on_arr[a], &on_arr[b]).ok()?;
        on_arr.insert(c.to_string(), eta);
    }
    ParamFunctor::new(p.clone(), s.clone(), t.clone(), on_obj, on_arr).ok()
}

/// A random well-behaved table lens on `get`: identities are put to
/// identities and every other row is drawn from the triples `(e, u, v@)`
/// with `u_e = v;v@`. Fails when some update has no such triple.
pub fn random_wb_lens<R: Rng>(get: &ParamFunctor, rng: &mut R) -> Option<TableLens> {
    let (pc, sc, tc) = (get.params(), get.source(), get.target());
    let mut rows = Vec::new();
    for (p, s, v) in full_domain(get).ok()? {
        let (e, u, a) = if tc.is_identity(&v) {
            (
                pc.identity(&p).ok()?.to_string(),
                sc.identity(&s).ok()?.to_string(),
                v.clone(),
            )
        } else {
            let mut cands = Vec::new();
            for e in pc.arrows_from(&p).ok()? {
                for u in sc.arrows_from(&s).ok()? {
                    let diag = get.get_diag(e, u).ok()?;
                    for a in tc.arrows_from(tc.dst(&v).ok()?).ok()? {
                        if tc.compose(&v, a).ok()? == diag {
                            cands.push((e.clone(), u.clone(), a.clone()));
                        }
                    }
                }
            }
            cands.choose(rng)?.clone()
        };
        rows.push(PutRow {
            p,
            s,
            v,
            e,
            u,
            amendment: a,
        });
    }
    make_lens(get.clone(), rows).ok()
}

/// `n` composable random wb lenses, the i-th from `cats[i]` to `cats[i+1]`.
pub fn lens_chain<R: Rng>(rng: &mut R, n: usize) -> Vec<TableLens> {
    let cats = fixture_categories();
    let shapes = param_shapes();
    'attempt: loop {
        let spaces: Vec<&FinCat> = (0..=n)
            .map(|_| cats.choose(rng).expect("categories"))
            .collect();
        let mut out = Vec::new();
        for w in spaces.windows(2) {
            let shape = shapes.choose(rng).expect("shapes");
            let Some(get) = random_pfun(shape, w[0], w[1], rng) else {
                continue 'attempt;
            };
            let Some(lens) = random_wb_lens(&get, rng) else {
                continue 'attempt;
            };
            out.push(lens);
        }
        return out;
    }
}
