use std::collections::BTreeMap;
use std::fmt;

use super::{pair_name, product_category, split_pair, CatError, FinCat};

/// One failed equation found by [`Functor::violations`] or
/// [`NatTrans::violations`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctorViolation {
    Unmapped {
        kind: &'static str,
        name: String,
    },
    UnknownImage {
        kind: &'static str,
        name: String,
        image: String,
    },
    SourceNotPreserved {
        arrow: String,
        expected: String,
        actual: String,
    },
    TargetNotPreserved {
        arrow: String,
        expected: String,
        actual: String,
    },
    IdentityNotPreserved {
        object: String,
        image: String,
    },
    CompositionNotPreserved {
        f: String,
        g: String,
        left: String,
        right: String,
    },
    NotParallel,
    ComponentEnds {
        object: String,
        component: String,
    },
    NotNatural {
        arrow: String,
        left: String,
        right: String,
    },
}

impl fmt::Display for FunctorViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use FunctorViolation::*;
        match self {
            Unmapped { kind, name } => write!(f, "{kind} `{name}` is not mapped"),
            UnknownImage { kind, name, image } => {
                write!(f, "{kind} `{name}` maps to unknown `{image}`")
            }
            SourceNotPreserved {
                arrow,
                expected,
                actual,
            } => {
                write!(
                    f,
                    "src(F({arrow})) = {actual} but F(src({arrow})) = {expected}"
                )
            }
            TargetNotPreserved {
                arrow,
                expected,
                actual,
            } => {
                write!(
                    f,
                    "dst(F({arrow})) = {actual} but F(dst({arrow})) = {expected}"
                )
            }
            IdentityNotPreserved { object, image } => {
                write!(f, "F(id_{object}) = {image} is not an identity")
            }
            CompositionNotPreserved {
                f: a,
                g,
                left,
                right,
            } => {
                write!(f, "F({a};{g}) = {left} but F({a});F({g}) = {right}")
            }
            NotParallel => write!(f, "functors are not parallel"),
            ComponentEnds { object, component } => {
                write!(
                    f,
                    "component `{component}` at `{object}` has wrong endpoints"
                )
            }
            NotNatural { arrow, left, right } => {
                write!(f, "naturality square for `{arrow}`: {left} != {right}")
            }
        }
    }
}

/// A functor between finite categories, given by its object and arrow tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Functor {
    pub source: FinCat,
    pub target: FinCat,
    pub obj_map: BTreeMap<String, String>,
    pub arr_map: BTreeMap<String, String>,
}

impl Functor {
    /// Builds a functor and rejects it unless every law holds.
    pub fn checked(
        source: FinCat,
        target: FinCat,
        obj_map: BTreeMap<String, String>,
        arr_map: BTreeMap<String, String>,
    ) -> Result<Functor, CatError> {
        let f = Functor {
            source,
            target,
            obj_map,
            arr_map,
        };
        match f.violations().first() {
            None => Ok(f),
            Some(v) => Err(CatError::InvalidFunctor(v.to_string())),
        }
    }

    pub fn identity(c: &FinCat) -> Functor {
        Functor {
            source: c.clone(),
            target: c.clone(),
            obj_map: c
                .objects()
                .map(|o| (o.to_string(), o.to_string()))
                .collect(),
            arr_map: c.arrows().map(|a| (a.to_string(), a.to_string())).collect(),
        }
    }

    /// Everything goes to `object` and its identity.
    pub fn constant(source: &FinCat, target: &FinCat, object: &str) -> Result<Functor, CatError> {
        let id = target.identity(object)?.to_string();
        Ok(Functor {
            source: source.clone(),
            target: target.clone(),
            obj_map: source
                .objects()
                .map(|o| (o.to_string(), object.to_string()))
                .collect(),
            arr_map: source
                .arrows()
                .map(|a| (a.to_string(), id.clone()))
                .collect(),
        })
    }

    pub fn ob(&self, o: &str) -> Result<&str, CatError> {
        self.obj_map
            .get(o)
            .map(String::as_str)
            .ok_or_else(|| CatError::UnknownObject(o.to_string()))
    }

    pub fn arr(&self, a: &str) -> Result<&str, CatError> {
        self.arr_map
            .get(a)
            .map(String::as_str)
            .ok_or_else(|| CatError::UnknownArrow(a.to_string()))
    }

    /// Every violated functor equation, checked exhaustively.
    pub fn violations(&self) -> Vec<FunctorViolation> {
        use FunctorViolation::*;
        let mut out = Vec::new();
        for o in self.source.objects() {
            match self.obj_map.get(o) {
                None => out.push(Unmapped {
                    kind: "object",
                    name: o.into(),
                }),
                Some(img) if !self.target.has_object(img) => out.push(UnknownImage {
                    kind: "object",
                    name: o.into(),
                    image: img.clone(),
                }),
                _ => {}
            }
        }
        for a in self.source.arrows() {
            match self.arr_map.get(a) {
                None => out.push(Unmapped {
                    kind: "arrow",
                    name: a.into(),
                }),
                Some(img) if !self.target.has_arrow(img) => out.push(UnknownImage {
                    kind: "arrow",
                    name: a.into(),
                    image: img.clone(),
                }),
                _ => {}
            }
        }
        if !out.is_empty() {
            return out;
        }

        for a in self.source.arrows() {
            let img = &self.arr_map[a];
            let expected = &self.obj_map[self.source.src(a).expect("known")];
            let actual = self.target.src(img).expect("known");
            if expected != actual {
                out.push(SourceNotPreserved {
                    arrow: a.into(),
                    expected: expected.clone(),
                    actual: actual.into(),
                });
            }
            let expected = &self.obj_map[self.source.dst(a).expect("known")];
            let actual = self.target.dst(img).expect("known");
            if expected != actual {
                out.push(TargetNotPreserved {
                    arrow: a.into(),
                    expected: expected.clone(),
                    actual: actual.into(),
                });
            }
        }
        if !out.is_empty() {
            return out;
        }

        for o in self.source.objects() {
            let img = &self.arr_map[self.source.identity(o).expect("known")];
            if !self.target.is_identity(img) {
                out.push(IdentityNotPreserved {
                    object: o.into(),
                    image: img.clone(),
                });
            }
        }
        for (f, g, h) in self.source.composition_table() {
            let left = &self.arr_map[h];
            let right = self
                .target
                .compose(&self.arr_map[f], &self.arr_map[g])
                .expect("endpoints preserved");
            if left != right {
                out.push(CompositionNotPreserved {
                    f: f.into(),
                    g: g.into(),
                    left: left.clone(),
                    right: right.into(),
                });
            }
        }
        out
    }

    /// Diagrammatic composite `self;next`.
    pub fn then(&self, next: &Functor) -> Result<Functor, CatError> {
        if self.target != next.source {
            return Err(CatError::BoundaryMismatch(
                "target of the first functor is not the source of the second".into(),
            ));
        }
        let mut obj_map = BTreeMap::new();
        for (o, img) in &self.obj_map {
            obj_map.insert(o.clone(), next.ob(img)?.to_string());
        }
        let mut arr_map = BTreeMap::new();
        for (a, img) in &self.arr_map {
            arr_map.insert(a.clone(), next.arr(img)?.to_string());
        }
        Ok(Functor {
            source: self.source.clone(),
            target: next.target.clone(),
            obj_map,
            arr_map,
        })
    }

    /// The inverse, if the functor is bijective on objects and arrows.
    pub fn inverse(&self) -> Result<Functor, CatError> {
        let invert = |m: &BTreeMap<String, String>, expected: usize, kind: &str| {
            let inv: BTreeMap<String, String> =
                m.iter().map(|(k, v)| (v.clone(), k.clone())).collect();
            if inv.len() != m.len() || inv.len() != expected {
                return Err(CatError::NotIso(format!("not bijective on {kind}")));
            }
            Ok(inv)
        };
        if !self.violations().is_empty() {
            return Err(CatError::NotIso("not a functor".into()));
        }
        let obj_map = invert(&self.obj_map, self.target.object_count(), "objects")?;
        let arr_map = invert(&self.arr_map, self.target.arrow_count(), "arrows")?;
        Ok(Functor {
            source: self.target.clone(),
            target: self.source.clone(),
            obj_map,
            arr_map,
        })
    }

    /// `F × G` between product categories.
    pub fn product(f: &Functor, g: &Functor) -> Functor {
        let mut obj_map = BTreeMap::new();
        for (x, fx) in &f.obj_map {
            for (y, gy) in &g.obj_map {
                obj_map.insert(pair_name(x, y), pair_name(fx, gy));
            }
        }
        let mut arr_map = BTreeMap::new();
        for (a, fa) in &f.arr_map {
            for (b, gb) in &g.arr_map {
                arr_map.insert(pair_name(a, b), pair_name(fa, gb));
            }
        }
        Functor {
            source: product_category(&f.source, &g.source),
            target: product_category(&f.target, &g.target),
            obj_map,
            arr_map,
        }
    }

    fn by_rewrite(source: FinCat, target: FinCat, rewrite: impl Fn(&str) -> String) -> Functor {
        let obj_map = source
            .objects()
            .map(|o| (o.to_string(), rewrite(o)))
            .collect();
        let arr_map = source
            .arrows()
            .map(|a| (a.to_string(), rewrite(a)))
            .collect();
        Functor {
            source,
            target,
            obj_map,
            arr_map,
        }
    }

    /// `(P×Q)×R → P×(Q×R)`, `((a|b)|c) ↦ (a|(b|c))`.
    pub fn reassociator(p: &FinCat, q: &FinCat, r: &FinCat) -> Functor {
        let source = product_category(&product_category(p, q), r);
        let target = product_category(p, &product_category(q, r));
        Functor::by_rewrite(source, target, |n| {
            let (ab, c) = split_pair(n).expect("product name");
            let (a, b) = split_pair(ab).expect("product name");
            pair_name(a, &pair_name(b, c))
        })
    }

    /// `1×C → C`, `(*|x) ↦ x`.
    pub fn left_unitor(c: &FinCat) -> Functor {
        let source = product_category(&FinCat::terminal(), c);
        Functor::by_rewrite(source, c.clone(), |n| {
            split_pair(n).expect("product name").1.to_string()
        })
    }

    /// `C×1 → C`, `(x|*) ↦ x`.
    pub fn right_unitor(c: &FinCat) -> Functor {
        let source = product_category(c, &FinCat::terminal());
        Functor::by_rewrite(source, c.clone(), |n| {
            split_pair(n).expect("product name").0.to_string()
        })
    }

    /// `A×B → B×A`, `(a|b) ↦ (b|a)`.
    pub fn braiding(a: &FinCat, b: &FinCat) -> Functor {
        Functor::by_rewrite(product_category(a, b), product_category(b, a), |n| {
            let (x, y) = split_pair(n).expect("product name");
            pair_name(y, x)
        })
    }
}

/// A natural transformation between parallel functors of finite categories.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NatTrans {
    pub from: Functor,
    pub to: Functor,
    pub components: BTreeMap<String, String>,
}

impl NatTrans {
    pub fn checked(
        from: Functor,
        to: Functor,
        components: BTreeMap<String, String>,
    ) -> Result<NatTrans, CatError> {
        let t = NatTrans {
            from,
            to,
            components,
        };
        match t.violations().first() {
            None => Ok(t),
            Some(v) => Err(CatError::InvalidFunctor(v.to_string())),
        }
    }

    pub fn identity(f: &Functor) -> NatTrans {
        let components = f
            .source
            .objects()
            .map(|o| {
                let img = f.ob(o).expect("total functor");
                (
                    o.to_string(),
                    f.target.identity(img).expect("valid").to_string(),
                )
            })
            .collect();
        NatTrans {
            from: f.clone(),
            to: f.clone(),
            components,
        }
    }

    pub fn component(&self, o: &str) -> Result<&str, CatError> {
        self.components
            .get(o)
            .map(String::as_str)
            .ok_or_else(|| CatError::UnknownObject(o.to_string()))
    }

    pub fn is_identity(&self) -> bool {
        self.from == self.to
            && self
                .components
                .values()
                .all(|c| self.from.target.is_identity(c))
    }

    /// Component endpoint and naturality violations, checked for every arrow.
    pub fn violations(&self) -> Vec<FunctorViolation> {
        use FunctorViolation::*;
        let (f, g) = (&self.from, &self.to);
        if f.source != g.source || f.target != g.target {
            return vec![NotParallel];
        }
        let t = &f.target;
        let mut out = Vec::new();
        for o in f.source.objects() {
            let Some(c) = self.components.get(o) else {
                out.push(Unmapped {
                    kind: "component",
                    name: o.into(),
                });
                continue;
            };
            let ok = t.src(c).ok() == f.ob(o).ok() && t.dst(c).ok() == g.ob(o).ok();
            if !ok {
                out.push(ComponentEnds {
                    object: o.into(),
                    component: c.clone(),
                });
            }
        }
        if !out.is_empty() {
            return out;
        }
        for u in f.source.arrows() {
            let (s, d) = (
                f.source.src(u).expect("known"),
                f.source.dst(u).expect("known"),
            );
            let (Ok(fu), Ok(gu)) = (f.arr(u), g.arr(u)) else {
                out.push(Unmapped {
                    kind: "arrow",
                    name: u.into(),
                });
                continue;
            };
            let left = t.compose(&self.components[s], gu);
            let right = t.compose(fu, &self.components[d]);
            match (left, right) {
                (Ok(l), Ok(r)) if l == r => {}
                (l, r) => out.push(NotNatural {
                    arrow: u.into(),
                    left: l.map(String::from).unwrap_or_else(|e| e.to_string()),
                    right: r.map(String::from).unwrap_or_else(|e| e.to_string()),
                }),
            }
        }
        out
    }
}

/// Componentwise composite `alpha;beta` of `alpha: F⇒G` and `beta: G⇒H`.
pub fn vertical_compose(alpha: &NatTrans, beta: &NatTrans) -> Result<NatTrans, CatError> {
    if alpha.to != beta.from {
        return Err(CatError::NotComposable {
            first: "alpha".into(),
            second: "beta".into(),
        });
    }
    let t = &alpha.to.target;
    let mut components = BTreeMap::new();
    for (o, a) in &alpha.components {
        components.insert(o.clone(), t.compose(a, beta.component(o)?)?.to_string());
    }
    Ok(NatTrans {
        from: alpha.from.clone(),
        to: beta.to.clone(),
        components,
    })
}

/// Horizontal composite of `alpha: F⇒F′` (A→B) and `beta: G⇒G′` (B→C), a
/// transformation `F;G ⇒ F′;G′`. Both bracketings of the interchange square
/// are computed and must agree.
pub fn godement_product(alpha: &NatTrans, beta: &NatTrans) -> Result<NatTrans, CatError> {
    let (f, f2) = (&alpha.from, &alpha.to);
    let (g, g2) = (&beta.from, &beta.to);
    if f.target != g.source {
        return Err(CatError::BoundaryMismatch(
            "middle categories of the Godement product differ".into(),
        ));
    }
    let c = &g.target;
    let mut components = BTreeMap::new();
    for (o, a) in &alpha.components {
        let left = c.compose(g.arr(a)?, beta.component(f2.ob(o)?)?)?;
        let right = c.compose(beta.component(f.ob(o)?)?, g2.arr(a)?)?;
        if left != right {
            return Err(CatError::InterchangeMismatch {
                object: o.clone(),
                left: left.into(),
                right: right.into(),
            });
        }
        components.insert(o.clone(), left.to_string());
    }
    Ok(NatTrans {
        from: f.then(g)?,
        to: f2.then(g2)?,
        components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{nat_trans_fixture, walking_arrow};

    fn map(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect()
    }

    #[test]
    fn identity_and_constant_functors_are_valid() {
        let c = walking_arrow();
        assert!(Functor::identity(&c).violations().is_empty());
        let t = FinCat::terminal();
        assert!(Functor::constant(&c, &t, "*")
            .unwrap()
            .violations()
            .is_empty());
    }

    #[test]
    fn collapsing_f_to_identity_breaks_target_preservation() {
        let c = walking_arrow();
        let bad = Functor {
            source: c.clone(),
            target: c.clone(),
            obj_map: map(&[("X", "X"), ("Y", "Y")]),
            arr_map: map(&[("idX", "idX"), ("idY", "idY"), ("f", "idX")]),
        };
        let report = bad.violations();
        assert!(report.iter().any(
            |v| matches!(v, FunctorViolation::TargetNotPreserved { arrow, .. } if arrow == "f")
        ));
    }

    #[test]
    fn identity_transformations_compose_to_identity() {
        let c = walking_arrow();
        let id = NatTrans::identity(&Functor::identity(&c));
        let g = godement_product(&id, &id).unwrap();
        assert!(g.is_identity());
        assert_eq!(vertical_compose(&id, &id).unwrap(), id);
    }

    #[test]
    fn whiskering_by_identity_alpha_reads_off_beta() {
        let (_, beta) = nat_trans_fixture();
        let f = Functor::identity(&beta.from.source);
        let alpha = NatTrans::identity(&f);
        let g = godement_product(&alpha, &beta).unwrap();
        for o in f.source.objects() {
            assert_eq!(
                g.component(o).unwrap(),
                beta.component(f.ob(o).unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn godement_on_non_identity_fixture_agrees_both_ways() {
        let (alpha, beta) = nat_trans_fixture();
        assert!(alpha.violations().is_empty());
        assert!(beta.violations().is_empty());
        let g = godement_product(&alpha, &beta).unwrap();
        assert!(g.violations().is_empty());
        // brute force: both bracketings per object
        let c = &beta.from.target;
        for o in alpha.from.source.objects() {
            let a = alpha.component(o).unwrap();
            let left = c
                .compose(
                    beta.from.arr(a).unwrap(),
                    beta.component(alpha.to.ob(o).unwrap()).unwrap(),
                )
                .unwrap();
            let right = c
                .compose(
                    beta.component(alpha.from.ob(o).unwrap()).unwrap(),
                    beta.to.arr(a).unwrap(),
                )
                .unwrap();
            assert_eq!(left, right);
            assert_eq!(g.component(o).unwrap(), left);
        }
    }

    #[test]
    fn vertical_composition_units() {
        let (alpha, _) = nat_trans_fixture();
        let left = NatTrans::identity(&alpha.from);
        let right = NatTrans::identity(&alpha.to);
        assert_eq!(vertical_compose(&left, &alpha).unwrap(), alpha);
        assert_eq!(vertical_compose(&alpha, &right).unwrap(), alpha);
        assert!(vertical_compose(&alpha, &alpha).is_err());
    }

    #[test]
    fn structural_isos_are_invertible() {
        let c = walking_arrow();
        let t = FinCat::terminal();
        for f in [
            Functor::reassociator(&c, &t, &c),
            Functor::left_unitor(&c),
            Functor::right_unitor(&c),
            Functor::braiding(&c, &c),
        ] {
            assert!(f.violations().is_empty());
            let inv = f.inverse().unwrap();
            assert_eq!(f.then(&inv).unwrap(), Functor::identity(&f.source));
        }
        assert!(Functor::constant(&c, &t, "*").unwrap().inverse().is_err());
    }
}
