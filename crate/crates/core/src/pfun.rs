//! Parameterized functors: a functor `get_p: S → T` for every parameter `p`
//! and a natural transformation `get_e: get_p ⇒ get_p′` for every parameter
//! delta `e: p → p′`, functorial in the parameter.

use std::collections::BTreeMap;

use crate::fincat::{
    godement_product, pair_name, product_category, vertical_compose, CatError, FinCat, Functor,
    NatTrans,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamFunctor {
    params: FinCat,
    source: FinCat,
    target: FinCat,
    on_obj: BTreeMap<String, Functor>,
    on_arr: BTreeMap<String, NatTrans>,
}

impl ParamFunctor {
    /// Builds a p-functor, checking every functor, every transformation and
    /// functoriality in the parameter exhaustively.
    pub fn new(
        params: FinCat,
        source: FinCat,
        target: FinCat,
        on_obj: BTreeMap<String, Functor>,
        on_arr: BTreeMap<String, NatTrans>,
    ) -> Result<ParamFunctor, CatError> {
        let pf = ParamFunctor {
            params,
            source,
            target,
            on_obj,
            on_arr,
        };
        match pf.violations().into_iter().next() {
            None => Ok(pf),
            Some(msg) => Err(CatError::InvalidFunctor(msg)),
        }
    }

    /// The identity p-functor on `c` over the terminal parameter category.
    pub fn identity(c: &FinCat) -> ParamFunctor {
        let id = Functor::identity(c);
        ParamFunctor {
            params: FinCat::terminal(),
            source: c.clone(),
            target: c.clone(),
            on_arr: [("id_*".to_string(), NatTrans::identity(&id))].into(),
            on_obj: [("*".to_string(), id)].into(),
        }
    }

    /// A p-functor over the terminal parameter category.
    pub fn constant(get: Functor) -> ParamFunctor {
        ParamFunctor {
            params: FinCat::terminal(),
            source: get.source.clone(),
            target: get.target.clone(),
            on_arr: [("id_*".to_string(), NatTrans::identity(&get))].into(),
            on_obj: [("*".to_string(), get)].into(),
        }
    }

    pub fn params(&self) -> &FinCat {
        &self.params
    }

    pub fn source(&self) -> &FinCat {
        &self.source
    }

    pub fn target(&self) -> &FinCat {
        &self.target
    }

    pub fn at(&self, p: &str) -> Result<&Functor, CatError> {
        self.on_obj
            .get(p)
            .ok_or_else(|| CatError::UnknownObject(p.to_string()))
    }

    pub fn at_arrow(&self, e: &str) -> Result<&NatTrans, CatError> {
        self.on_arr
            .get(e)
            .ok_or_else(|| CatError::UnknownArrow(e.to_string()))
    }

    pub fn on_obj(&self) -> &BTreeMap<String, Functor> {
        &self.on_obj
    }

    pub fn on_arr(&self) -> &BTreeMap<String, NatTrans> {
        &self.on_arr
    }

    /// Every violated invariant, rendered as text.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for p in self.params.objects() {
            let Some(f) = self.on_obj.get(p) else {
                out.push(format!("parameter `{p}` has no functor"));
                continue;
            };
            if f.source != self.source || f.target != self.target {
                out.push(format!("get_{p} has the wrong source or target"));
            }
            out.extend(f.violations().iter().map(|v| format!("get_{p}: {v}")));
        }
        for e in self.params.arrows() {
            let Some(t) = self.on_arr.get(e) else {
                out.push(format!("parameter delta `{e}` has no transformation"));
                continue;
            };
            let (s, d) = (
                self.params.src(e).expect("known"),
                self.params.dst(e).expect("known"),
            );
            if self.on_obj.get(s) != Some(&t.from) || self.on_obj.get(d) != Some(&t.to) {
                out.push(format!("get_{e} does not go from get_{s} to get_{d}"));
                continue;
            }
            out.extend(t.violations().iter().map(|v| format!("get_{e}: {v}")));
        }
        if !out.is_empty() {
            return out;
        }
        for p in self.params.objects() {
            let id = self.params.identity(p).expect("valid");
            if !self.on_arr[id].is_identity() {
                out.push(format!("get_{id} is not the identity transformation"));
            }
        }
        for (e1, e2, e12) in self.params.composition_table() {
            match vertical_compose(&self.on_arr[e1], &self.on_arr[e2]) {
                Ok(t) if t == self.on_arr[e12] => {}
                _ => out.push(format!("get_{e12} differs from get_{e1};get_{e2}")),
            }
        }
        out
    }
}

/// `get_p(s)`, also written `s_p`.
pub fn pfun_get<'a>(pf: &'a ParamFunctor, p: &str, s: &str) -> Result<&'a str, CatError> {
    pf.at(p)?.ob(s)
}

/// The diagonal `u_e: s_p → s′_p′` of the naturality square of `get_e` at
/// `u: s → s′`. Both bracketings are computed and compared.
pub fn pfun_diag(pf: &ParamFunctor, e: &str, u: &str) -> Result<String, CatError> {
    let t = pf.target();
    let (p, p2) = (pf.params.src(e)?, pf.params.dst(e)?);
    let (s, s2) = (pf.source.src(u)?, pf.source.dst(u)?);
    let get_e = pf.at_arrow(e)?;
    let left = t.compose(get_e.component(s)?, pf.at(p2)?.arr(u)?)?;
    let right = t.compose(pf.at(p)?.arr(u)?, get_e.component(s2)?)?;
    if left != right {
        return Err(CatError::NaturalityMismatch {
            left: left.into(),
            right: right.into(),
        });
    }
    Ok(left.to_string())
}

/// Sequential composite over `P×Q`: `get_(p|q) = f_p;g_q` and
/// `get_(e|h)` the Godement product of `f_e` and `g_h`.
pub fn pfun_compose(f: &ParamFunctor, g: &ParamFunctor) -> Result<ParamFunctor, CatError> {
    if f.target != g.source {
        return Err(CatError::BoundaryMismatch(
            "target of the first p-functor is not the source of the second".into(),
        ));
    }
    let mut on_obj = BTreeMap::new();
    for (p, fp) in &f.on_obj {
        for (q, gq) in &g.on_obj {
            on_obj.insert(pair_name(p, q), fp.then(gq)?);
        }
    }
    let mut on_arr = BTreeMap::new();
    for (e, fe) in &f.on_arr {
        for (h, gh) in &g.on_arr {
            on_arr.insert(pair_name(e, h), godement_product(fe, gh)?);
        }
    }
    Ok(ParamFunctor {
        params: product_category(&f.params, &g.params),
        source: f.source.clone(),
        target: g.target.clone(),
        on_obj,
        on_arr,
    })
}

/// Parallel product `S1×S2 → T1×T2` over `P1×P2`.
pub fn pfun_product(f: &ParamFunctor, g: &ParamFunctor) -> ParamFunctor {
    let mut on_obj = BTreeMap::new();
    for (p, fp) in &f.on_obj {
        for (q, gq) in &g.on_obj {
            on_obj.insert(pair_name(p, q), Functor::product(fp, gq));
        }
    }
    let mut on_arr = BTreeMap::new();
    for (e, fe) in &f.on_arr {
        for (h, gh) in &g.on_arr {
            let mut components = BTreeMap::new();
            for (x, a) in &fe.components {
                for (y, b) in &gh.components {
                    components.insert(pair_name(x, y), pair_name(a, b));
                }
            }
            let t = NatTrans {
                from: Functor::product(&fe.from, &gh.from),
                to: Functor::product(&fe.to, &gh.to),
                components,
            };
            on_arr.insert(pair_name(e, h), t);
        }
    }
    ParamFunctor {
        params: product_category(&f.params, &g.params),
        source: product_category(&f.source, &g.source),
        target: product_category(&f.target, &g.target),
        on_obj,
        on_arr,
    }
}

/// Strict equivalence along a parameter isomorphism `iota: P → P̂`: the
/// functors at `p` and `iota(p)`, and the transformations at `e` and
/// `iota(e)`, must be equal.
pub fn pfun_equiv_check(
    f: &ParamFunctor,
    other: &ParamFunctor,
    iota: &Functor,
) -> Result<bool, CatError> {
    if iota.source != f.params || iota.target != other.params {
        return Err(CatError::BoundaryMismatch(
            "iota does not map between the parameter categories".into(),
        ));
    }
    iota.inverse()?;
    if f.source != other.source || f.target != other.target {
        return Ok(false);
    }
    for (p, fp) in &f.on_obj {
        if other.at(iota.ob(p)?)? != fp {
            return Ok(false);
        }
    }
    for (e, fe) in &f.on_arr {
        if other.at_arrow(iota.arr(e)?)? != fe {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{chain3, pararrow_pfun, walking_arrow};

    #[test]
    fn identity_pfun_get() {
        let c = walking_arrow();
        let id = ParamFunctor::identity(&c);
        assert_eq!(pfun_get(&id, "*", "X").unwrap(), "X");
        assert!(matches!(
            pfun_get(&id, "*", "Q"),
            Err(CatError::UnknownObject(_))
        ));
    }

    #[test]
    fn pararrow_functors_differ_pointwise() {
        let pf = pararrow_pfun();
        assert_eq!(pfun_get(&pf, "p", "Y").unwrap(), "X");
        assert_eq!(pfun_get(&pf, "p'", "Y").unwrap(), "Y");
        assert_eq!(pf.at("p").unwrap().arr("f").unwrap(), "idX");
        assert_eq!(pf.at("p'").unwrap().arr("f").unwrap(), "f");
    }

    #[test]
    fn diag_degenerate_cases() {
        let pf = pararrow_pfun();
        // e = id_p gives get_p(u)
        assert_eq!(pfun_diag(&pf, "idp", "f").unwrap(), "idX");
        // u = id_s gives the component of get_e at s
        assert_eq!(pfun_diag(&pf, "e", "idY").unwrap(), "f");
        // both non-identity
        assert_eq!(pfun_diag(&pf, "e", "f").unwrap(), "f");
    }

    #[test]
    fn diag_bracketings_agree_exhaustively() {
        let pf = pararrow_pfun();
        let composite = pfun_compose(&pf, &pf).unwrap();
        for g in [&pf, &composite] {
            for e in g.params().arrows() {
                for u in g.source().arrows() {
                    pfun_diag(g, e, u).unwrap();
                }
            }
        }
    }

    #[test]
    fn bad_transformation_is_rejected() {
        let pf = pararrow_pfun();
        let mut on_arr = pf.on_arr().clone();
        // Y ↦ idY no longer goes from get_p(Y) = X to get_p'(Y) = Y
        on_arr
            .get_mut("e")
            .unwrap()
            .components
            .insert("Y".into(), "idY".into());
        let c = walking_arrow();
        let err = ParamFunctor::new(
            pf.params().clone(),
            c.clone(),
            c,
            pf.on_obj().clone(),
            on_arr,
        );
        assert!(matches!(err, Err(CatError::InvalidFunctor(_))));
    }

    #[test]
    fn non_functorial_parameter_action_is_rejected() {
        // P has an idempotent e;e = e, but get_e is the swap s of Z/2 with s;s = id
        let z2 = FinCat::from_parts(
            ["X"],
            [("idX", "X", "X"), ("s", "X", "X")],
            [("X", "idX")],
            [
                ("idX", "idX", "idX"),
                ("idX", "s", "s"),
                ("s", "idX", "s"),
                ("s", "s", "idX"),
            ],
        )
        .unwrap();
        let t = FinCat::terminal();
        let get = Functor::constant(&t, &z2, "X").unwrap();
        let swap = NatTrans::checked(
            get.clone(),
            get.clone(),
            [("*".to_string(), "s".to_string())].into(),
        )
        .unwrap();
        let on_obj: BTreeMap<_, _> = [("X".to_string(), get.clone())].into();
        let on_arr: BTreeMap<_, _> = [
            ("idX".to_string(), NatTrans::identity(&get)),
            ("e".to_string(), swap),
        ]
        .into();
        let p = crate::fixtures::idempotent();
        let err = ParamFunctor::new(p, t, z2, on_obj, on_arr).unwrap_err();
        assert!(matches!(err, CatError::InvalidFunctor(msg) if msg.contains("differs")));
    }

    #[test]
    fn compose_with_identity_is_equivalent_via_unitors() {
        let pf = pararrow_pfun();
        let c = walking_arrow();
        let id = ParamFunctor::identity(&c);
        let left = pfun_compose(&id, &pf).unwrap();
        let right = pfun_compose(&pf, &id).unwrap();
        let lu = Functor::left_unitor(pf.params()).inverse().unwrap();
        let ru = Functor::right_unitor(pf.params()).inverse().unwrap();
        assert!(pfun_equiv_check(&pf, &left, &lu).unwrap());
        assert!(pfun_equiv_check(&pf, &right, &ru).unwrap());
    }

    #[test]
    fn composite_on_arr_matches_direct_godement_table() {
        let pf = pararrow_pfun();
        let comp = pfun_compose(&pf, &pf).unwrap();
        assert!(comp.violations().is_empty());
        let t = pf.target();
        for e in pf.params().arrows() {
            for h in pf.params().arrows() {
                let (fe, gh) = (pf.at_arrow(e).unwrap(), pf.at_arrow(h).unwrap());
                let got = comp.at_arrow(&pair_name(e, h)).unwrap();
                for s in pf.source().objects() {
                    // brute force: component = g_q(f_e[s]) ; g_h[f_p'(s)]
                    let a = fe.component(s).unwrap();
                    let expected = t
                        .compose(
                            gh.from.arr(a).unwrap(),
                            gh.component(fe.to.ob(s).unwrap()).unwrap(),
                        )
                        .unwrap();
                    assert_eq!(got.component(s).unwrap(), expected);
                }
            }
        }
    }

    #[test]
    fn equivalence_along_renaming() {
        let pf = pararrow_pfun();
        assert!(pfun_equiv_check(&pf, &pf, &Functor::identity(pf.params())).unwrap());

        let renamed = FinCat::from_parts(
            ["a", "b"],
            [("ida", "a", "a"), ("idb", "b", "b"), ("r", "a", "b")],
            [("a", "ida"), ("b", "idb")],
            [
                ("ida", "ida", "ida"),
                ("idb", "idb", "idb"),
                ("ida", "r", "r"),
                ("r", "idb", "r"),
            ],
        )
        .unwrap();
        let names = [
            ("p", "a"),
            ("p'", "b"),
            ("idp", "ida"),
            ("idp'", "idb"),
            ("e", "r"),
        ];
        let lookup = |n: &str| names.iter().find(|(k, _)| *k == n).unwrap().1.to_string();
        let iota = Functor {
            source: pf.params().clone(),
            target: renamed.clone(),
            obj_map: pf
                .params()
                .objects()
                .map(|o| (o.to_string(), lookup(o)))
                .collect(),
            arr_map: pf
                .params()
                .arrows()
                .map(|a| (a.to_string(), lookup(a)))
                .collect(),
        };
        let moved = ParamFunctor::new(
            renamed,
            pf.source().clone(),
            pf.target().clone(),
            pf.on_obj()
                .iter()
                .map(|(k, v)| (lookup(k), v.clone()))
                .collect(),
            pf.on_arr()
                .iter()
                .map(|(k, v)| (lookup(k), v.clone()))
                .collect(),
        )
        .unwrap();
        assert!(pfun_equiv_check(&pf, &moved, &iota).unwrap());

        // perturb one on_obj entry: get_p' becomes the constant functor at Y
        let c = walking_arrow();
        let mut on_obj = pf.on_obj().clone();
        on_obj.insert("p'".into(), Functor::constant(&c, &c, "Y").unwrap());
        let perturbed = ParamFunctor {
            on_obj,
            ..pf.clone()
        };
        assert!(!pfun_equiv_check(&pf, &perturbed, &Functor::identity(pf.params())).unwrap());
    }

    #[test]
    fn compose_rejects_boundary_mismatch() {
        let a = ParamFunctor::identity(&walking_arrow());
        let b = ParamFunctor::identity(&chain3());
        assert!(matches!(
            pfun_compose(&a, &b),
            Err(CatError::BoundaryMismatch(_))
        ));
    }

    #[test]
    fn composition_is_associative_up_to_reassociator() {
        let pf = pararrow_pfun();
        let left = pfun_compose(&pfun_compose(&pf, &pf).unwrap(), &pf).unwrap();
        let right = pfun_compose(&pf, &pfun_compose(&pf, &pf).unwrap()).unwrap();
        let iota = Functor::reassociator(pf.params(), pf.params(), pf.params());
        assert!(pfun_equiv_check(&left, &right, &iota).unwrap());
    }

    #[test]
    fn product_pfun_is_valid() {
        let pf = pararrow_pfun();
        let prod = pfun_product(&pf, &pf);
        assert!(prod.violations().is_empty());
    }
}
