//! Finite categories and the structure built on them.
//!
//! [`FinCat`] stores a category as explicit tables: objects, arrows with their
//! endpoints, an identity per object and a composition table in diagrammatic
//! order (`f;g` means "first `f`, then `g`"). Every law is checked exhaustively
//! when a category is validated, so the tables are bounded by [`Limits`].
//!
//! The generic [`Category`] trait is what the lens machinery is written
//! against; `FinCat`, [`Product`] and the open model spaces of the
//! `modelspace` and `learner` modules all implement it.

mod category;
mod functor;
mod naming;

pub use category::{Category, Product};
pub use functor::{godement_product, vertical_compose, Functor, FunctorViolation, NatTrans};
pub use naming::{pair_name, split_pair};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised by the categorical substrate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatError {
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("malformed name `{0}`")]
    InvalidName(String),
    #[error("{context} refers to unknown {kind} `{name}`")]
    DanglingReference {
        context: String,
        kind: &'static str,
        name: String,
    },
    #[error("object `{object}` has no identity arrow")]
    MissingIdentity { object: String },
    #[error("identity `{arrow}` of `{object}` is not an endo-arrow on it")]
    BadIdentity { object: String, arrow: String },
    #[error("composition table has no entry for `{first};{second}`")]
    MissingComposite { first: String, second: String },
    #[error("composition entry `{first};{second} = {result}` is ill-typed")]
    InvalidComposite {
        first: String,
        second: String,
        result: String,
    },
    #[error("unit law fails for `{arrow}`")]
    UnitLawViolation { arrow: String },
    #[error("associativity fails for `({f};{g});{h}` vs `{f};({g};{h})`")]
    AssociativityViolation { f: String, g: String, h: String },
    #[error("category too large for exhaustive checks: {objects} objects, {arrows} arrows")]
    TooLarge { objects: usize, arrows: usize },
    #[error("`{first}` and `{second}` are not composable")]
    NotComposable { first: String, second: String },
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("interchange fails at `{object}`: `{left}` vs `{right}`")]
    InterchangeMismatch {
        object: String,
        left: String,
        right: String,
    },
    #[error("naturality fails: `{left}` vs `{right}`")]
    NaturalityMismatch { left: String, right: String },
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("not an isomorphism: {0}")]
    NotIso(String),
    #[error("invalid functor: {0}")]
    InvalidFunctor(String),
}

/// Size guard for exhaustive law checking.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_objects: usize,
    pub max_arrows: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_objects: 64,
            max_arrows: 4096,
        }
    }
}

/// One arrow record of a category file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowSpec {
    pub id: String,
    pub src: String,
    pub dst: String,
}

/// Unvalidated category data, as read from a category file.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategorySpec {
    pub objects: Vec<String>,
    pub arrows: Vec<ArrowSpec>,
    pub identities: BTreeMap<String, String>,
    pub compose: Vec<[String; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Ends {
    src: String,
    dst: String,
}

#[derive(Debug, PartialEq, Eq)]
struct Tables {
    objects: BTreeSet<String>,
    arrows: BTreeMap<String, Ends>,
    identities: BTreeMap<String, String>,
    compose: BTreeMap<(String, String), String>,
    outgoing: BTreeMap<String, Vec<String>>,
}

/// A validated finite category. Cloning is cheap.
#[derive(Clone)]
pub struct FinCat(Arc<Tables>);

impl PartialEq for FinCat {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for FinCat {}

impl fmt::Debug for FinCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCat")
            .field("objects", &self.0.objects)
            .field("arrows", &self.0.arrows.keys().collect::<Vec<_>>())
            .finish()
    }
}

/// Validates raw category data with the default [`Limits`].
pub fn validate_category(raw: &CategorySpec) -> Result<FinCat, CatError> {
    validate_category_with(raw, Limits::default())
}

/// Validates raw category data, checking totality, units and associativity
/// exhaustively.
pub fn validate_category_with(raw: &CategorySpec, limits: Limits) -> Result<FinCat, CatError> {
    if raw.objects.len() > limits.max_objects || raw.arrows.len() > limits.max_arrows {
        return Err(CatError::TooLarge {
            objects: raw.objects.len(),
            arrows: raw.arrows.len(),
        });
    }

    let mut objects = BTreeSet::new();
    for o in &raw.objects {
        naming::check_name(o)?;
        if !objects.insert(o.clone()) {
            return Err(CatError::DuplicateName(o.clone()));
        }
    }

    let mut arrows = BTreeMap::new();
    for a in &raw.arrows {
        naming::check_name(&a.id)?;
        if objects.contains(&a.id) || arrows.contains_key(&a.id) {
            return Err(CatError::DuplicateName(a.id.clone()));
        }
        for end in [&a.src, &a.dst] {
            if !objects.contains(end) {
                return Err(dangling(format!("arrow `{}`", a.id), "object", end));
            }
        }
        arrows.insert(
            a.id.clone(),
            Ends {
                src: a.src.clone(),
                dst: a.dst.clone(),
            },
        );
    }

    for (o, a) in &raw.identities {
        if !objects.contains(o) {
            return Err(dangling("identities".into(), "object", o));
        }
        if !arrows.contains_key(a) {
            return Err(dangling(format!("identity of `{o}`"), "arrow", a));
        }
    }
    let mut identities = BTreeMap::new();
    for o in &objects {
        let Some(a) = raw.identities.get(o) else {
            return Err(CatError::MissingIdentity { object: o.clone() });
        };
        let ends = &arrows[a];
        if &ends.src != o || &ends.dst != o {
            return Err(CatError::BadIdentity {
                object: o.clone(),
                arrow: a.clone(),
            });
        }
        identities.insert(o.clone(), a.clone());
    }

    let mut compose = BTreeMap::new();
    for [f, g, h] in &raw.compose {
        for name in [f, g, h] {
            if !arrows.contains_key(name) {
                return Err(dangling(format!("composite `{f};{g}`"), "arrow", name));
            }
        }
        let (ef, eg, eh) = (&arrows[f], &arrows[g], &arrows[h]);
        if ef.dst != eg.src || eh.src != ef.src || eh.dst != eg.dst {
            return Err(CatError::InvalidComposite {
                first: f.clone(),
                second: g.clone(),
                result: h.clone(),
            });
        }
        if compose.insert((f.clone(), g.clone()), h.clone()).is_some() {
            return Err(CatError::DuplicateName(format!("{f};{g}")));
        }
    }

    let mut outgoing: BTreeMap<String, Vec<String>> =
        objects.iter().map(|o| (o.clone(), Vec::new())).collect();
    for (id, ends) in &arrows {
        outgoing
            .get_mut(&ends.src)
            .expect("checked")
            .push(id.clone());
    }

    // totality on composable pairs
    for (f, ef) in &arrows {
        for g in &outgoing[&ef.dst] {
            if !compose.contains_key(&(f.clone(), g.clone())) {
                return Err(CatError::MissingComposite {
                    first: f.clone(),
                    second: g.clone(),
                });
            }
        }
    }

    let tables = Tables {
        objects,
        arrows,
        identities,
        compose,
        outgoing,
    };

    for (f, ends) in &tables.arrows {
        let left = &tables.compose[&(tables.identities[&ends.src].clone(), f.clone())];
        let right = &tables.compose[&(f.clone(), tables.identities[&ends.dst].clone())];
        if left != f || right != f {
            return Err(CatError::UnitLawViolation { arrow: f.clone() });
        }
    }

    let arrow_ids: Vec<&String> = tables.arrows.keys().collect();
    let assoc = arrow_ids.par_iter().find_map_first(|f| {
        let tf = &tables;
        for g in &tf.outgoing[&tf.arrows[*f].dst] {
            let fg = &tf.compose[&((*f).clone(), g.clone())];
            for h in &tf.outgoing[&tf.arrows[g].dst] {
                let gh = &tf.compose[&(g.clone(), h.clone())];
                let left = &tf.compose[&(fg.clone(), h.clone())];
                let right = &tf.compose[&((*f).clone(), gh.clone())];
                if left != right {
                    return Some(CatError::AssociativityViolation {
                        f: (*f).clone(),
                        g: g.clone(),
                        h: h.clone(),
                    });
                }
            }
        }
        None
    });
    if let Some(err) = assoc {
        return Err(err);
    }

    Ok(FinCat(Arc::new(tables)))
}

fn dangling(context: String, kind: &'static str, name: &str) -> CatError {
    CatError::DanglingReference {
        context,
        kind,
        name: name.to_string(),
    }
}

/// Composite `a1;a2` looked up in the table.
pub fn compose_arrows<'c>(c: &'c FinCat, a1: &str, a2: &str) -> Result<&'c str, CatError> {
    c.compose(a1, a2)
}

impl FinCat {
    /// The category with one object `*` and its identity `id_*`.
    pub fn terminal() -> FinCat {
        FinCat::from_parts(
            ["*"],
            [("id_*", "*", "*")],
            [("*", "id_*")],
            [("id_*", "id_*", "id_*")],
        )
        .expect("terminal category is valid")
    }

    /// The codiscrete category on `names`: one arrow `a->b` for every ordered
    /// pair, with identities `a->a`.
    pub fn codiscrete<S: AsRef<str>>(names: &[S]) -> Result<FinCat, CatError> {
        let names: Vec<&str> = names.iter().map(|s| s.as_ref()).collect();
        let arrow = |a: &str, b: &str| format!("{a}->{b}");
        let mut spec = CategorySpec {
            objects: names.iter().map(|s| s.to_string()).collect(),
            ..Default::default()
        };
        for a in &names {
            spec.identities.insert(a.to_string(), arrow(a, a));
            for b in &names {
                spec.arrows.push(ArrowSpec {
                    id: arrow(a, b),
                    src: a.to_string(),
                    dst: b.to_string(),
                });
                for c in &names {
                    spec.compose.push([arrow(a, b), arrow(b, c), arrow(a, c)]);
                }
            }
        }
        validate_category(&spec)
    }

    /// Builds and validates a category from string tuples.
    pub fn from_parts<'a>(
        objects: impl IntoIterator<Item = &'a str>,
        arrows: impl IntoIterator<Item = (&'a str, &'a str, &'a str)>,
        identities: impl IntoIterator<Item = (&'a str, &'a str)>,
        compose: impl IntoIterator<Item = (&'a str, &'a str, &'a str)>,
    ) -> Result<FinCat, CatError> {
        let spec = CategorySpec {
            objects: objects.into_iter().map(String::from).collect(),
            arrows: arrows
                .into_iter()
                .map(|(id, src, dst)| ArrowSpec {
                    id: id.into(),
                    src: src.into(),
                    dst: dst.into(),
                })
                .collect(),
            identities: identities
                .into_iter()
                .map(|(o, a)| (o.into(), a.into()))
                .collect(),
            compose: compose
                .into_iter()
                .map(|(f, g, h)| [f.into(), g.into(), h.into()])
                .collect(),
        };
        validate_category(&spec)
    }

    pub fn objects(&self) -> impl Iterator<Item = &str> {
        self.0.objects.iter().map(String::as_str)
    }

    pub fn arrows(&self) -> impl Iterator<Item = &str> {
        self.0.arrows.keys().map(String::as_str)
    }

    pub fn object_count(&self) -> usize {
        self.0.objects.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.0.arrows.len()
    }

    pub fn has_object(&self, o: &str) -> bool {
        self.0.objects.contains(o)
    }

    pub fn has_arrow(&self, a: &str) -> bool {
        self.0.arrows.contains_key(a)
    }

    pub fn src(&self, a: &str) -> Result<&str, CatError> {
        self.ends(a).map(|e| e.src.as_str())
    }

    pub fn dst(&self, a: &str) -> Result<&str, CatError> {
        self.ends(a).map(|e| e.dst.as_str())
    }

    fn ends(&self, a: &str) -> Result<&Ends, CatError> {
        self.0
            .arrows
            .get(a)
            .ok_or_else(|| CatError::UnknownArrow(a.to_string()))
    }

    pub fn identity(&self, o: &str) -> Result<&str, CatError> {
        self.0
            .identities
            .get(o)
            .map(String::as_str)
            .ok_or_else(|| CatError::UnknownObject(o.to_string()))
    }

    pub fn is_identity(&self, a: &str) -> bool {
        self.src(a)
            .and_then(|s| self.identity(s))
            .is_ok_and(|id| id == a)
    }

    /// Table lookup of `a1;a2`.
    pub fn compose(&self, a1: &str, a2: &str) -> Result<&str, CatError> {
        let (e1, e2) = (self.ends(a1)?, self.ends(a2)?);
        if e1.dst != e2.src {
            return Err(CatError::NotComposable {
                first: a1.to_string(),
                second: a2.to_string(),
            });
        }
        Ok(self.0.compose[&(a1.to_string(), a2.to_string())].as_str())
    }

    /// Arrows with source `o`, in name order.
    pub fn arrows_from(&self, o: &str) -> Result<&[String], CatError> {
        self.0
            .outgoing
            .get(o)
            .map(Vec::as_slice)
            .ok_or_else(|| CatError::UnknownObject(o.to_string()))
    }

    /// Arrows `x -> y`.
    pub fn hom(&self, x: &str, y: &str) -> Vec<&str> {
        self.0
            .outgoing
            .get(x)
            .into_iter()
            .flatten()
            .filter(|a| self.0.arrows[*a].dst == y)
            .map(String::as_str)
            .collect()
    }

    /// Composable pairs `(f, g)` with their composite.
    pub fn composition_table(&self) -> impl Iterator<Item = (&str, &str, &str)> {
        self.0
            .compose
            .iter()
            .map(|((f, g), h)| (f.as_str(), g.as_str(), h.as_str()))
    }

    pub fn to_spec(&self) -> CategorySpec {
        CategorySpec {
            objects: self.0.objects.iter().cloned().collect(),
            arrows: self
                .0
                .arrows
                .iter()
                .map(|(id, e)| ArrowSpec {
                    id: id.clone(),
                    src: e.src.clone(),
                    dst: e.dst.clone(),
                })
                .collect(),
            identities: self.0.identities.clone(),
            compose: self
                .0
                .compose
                .iter()
                .map(|((f, g), h)| [f.clone(), g.clone(), h.clone()])
                .collect(),
        }
    }
}

/// Cartesian product with canonical pair names `(a|b)`.
pub fn product_category(c1: &FinCat, c2: &FinCat) -> FinCat {
    let mut spec = CategorySpec::default();
    for x in c1.objects() {
        for y in c2.objects() {
            let o = pair_name(x, y);
            let id = pair_name(
                c1.identity(x).expect("valid"),
                c2.identity(y).expect("valid"),
            );
            spec.identities.insert(o.clone(), id);
            spec.objects.push(o);
        }
    }
    for a in c1.arrows() {
        for b in c2.arrows() {
            spec.arrows.push(ArrowSpec {
                id: pair_name(a, b),
                src: pair_name(c1.src(a).expect("valid"), c2.src(b).expect("valid")),
                dst: pair_name(c1.dst(a).expect("valid"), c2.dst(b).expect("valid")),
            });
        }
    }
    for (f1, g1, h1) in c1.composition_table() {
        for (f2, g2, h2) in c2.composition_table() {
            spec.compose
                .push([pair_name(f1, f2), pair_name(g1, g2), pair_name(h1, h2)]);
        }
    }
    let limits = Limits {
        max_objects: usize::MAX,
        max_arrows: usize::MAX,
    };
    validate_category_with(&spec, limits).expect("product of valid categories is valid")
}

/// True when `f` is bijective on objects and on arrows.
pub fn is_isomorphism(f: &Functor) -> bool {
    f.inverse().is_ok()
}
