use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{
    full_domain, point_label, verify_put, AlaLens, Arr, LensError, Ob, ParamGet, PutOf, PutResult,
};
use crate::fincat::{
    validate_category, ArrowSpec, Category, CategorySpec, FinCat, Functor, NatTrans,
};
use crate::pfun::ParamFunctor;

/// One row of a put table, in the lens file layout.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PutRow {
    pub p: String,
    #[serde(rename = "S")]
    pub s: String,
    pub v: String,
    pub e: String,
    pub u: String,
    pub amendment: String,
}

type Key = (String, String, String);

/// A lens over finite categories whose put is an explicit table covering the
/// whole admissible domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableLens {
    get: ParamFunctor,
    rows: BTreeMap<Key, PutResult<String, String, String>>,
}

/// Builds a table lens. Every admissible `(p, S, v)` needs exactly one row and
/// every row must satisfy Putget₀.
pub fn make_lens(
    get: ParamFunctor,
    rows: impl IntoIterator<Item = PutRow>,
) -> Result<TableLens, LensError> {
    let mut table = BTreeMap::new();
    for r in rows {
        let key = (r.p, r.s, r.v);
        let point = format!("(p={}, S={}, v={})", key.0, key.1, key.2);
        let value = PutResult {
            update: r.e,
            request: r.u,
            amendment: r.amendment,
        };
        if table.insert(key, value).is_some() {
            return Err(LensError::InvalidPut {
                point,
                reason: "duplicate row".into(),
            });
        }
    }
    let lens = TableLens { get, rows: table };
    let domain = full_domain(&lens)?;
    for (p, s, v) in &domain {
        if !lens.rows.contains_key(&(p.clone(), s.clone(), v.clone())) {
            return Err(LensError::PutDomainIncomplete {
                point: point_label(&lens, p, s, v),
            });
        }
    }
    if lens.rows.len() != domain.len() {
        let (p, s, v) = lens
            .rows
            .keys()
            .find(|(p, s, v)| lens.admissible(p, s, v).is_err())
            .expect("an extra row exists");
        return Err(LensError::DomainError(format!(
            "row (p={p}, S={s}, v={v}) is outside the put domain"
        )));
    }
    for ((p, s, v), r) in &lens.rows {
        verify_put(&lens, p, s, v, r)?;
    }
    Ok(lens)
}

impl TableLens {
    pub fn get(&self) -> &ParamFunctor {
        &self.get
    }

    pub fn rows(&self) -> Vec<PutRow> {
        self.rows
            .iter()
            .map(|((p, s, v), r)| PutRow {
                p: p.clone(),
                s: s.clone(),
                v: v.clone(),
                e: r.update.clone(),
                u: r.request.clone(),
                amendment: r.amendment.clone(),
            })
            .collect()
    }

    /// Tabulates `put` over the full domain of `get`.
    pub fn from_fn<F>(get: ParamFunctor, mut put: F) -> Result<TableLens, LensError>
    where
        F: FnMut(&str, &str, &str) -> Result<PutResult<String, String, String>, LensError>,
    {
        let mut rows = Vec::new();
        for (p, s, v) in full_domain(&get)? {
            let r = put(&p, &s, &v)?;
            rows.push(PutRow {
                p,
                s,
                v,
                e: r.update,
                u: r.request,
                amendment: r.amendment,
            });
        }
        make_lens(get, rows)
    }

    /// The same lens with one row replaced, skipping validation. Used to
    /// build perturbed fixtures for negative checks.
    pub fn with_row_unchecked(&self, row: PutRow) -> TableLens {
        let mut out = self.clone();
        out.rows.insert(
            (row.p, row.s, row.v),
            PutResult {
                update: row.e,
                request: row.u,
                amendment: row.amendment,
            },
        );
        out
    }

    fn admissible(&self, p: &str, s: &str, v: &str) -> Result<(), LensError> {
        let view = self.get.at(p)?.ob(s)?;
        if self.get.target().src(v)? != view {
            return Err(LensError::DomainError(v.to_string()));
        }
        Ok(())
    }
}

impl ParamGet for TableLens {
    type P = FinCat;
    type S = FinCat;
    type T = FinCat;

    fn params(&self) -> &FinCat {
        self.get.params()
    }
    fn source(&self) -> &FinCat {
        self.get.source()
    }
    fn target(&self) -> &FinCat {
        self.get.target()
    }
    fn get_obj(&self, p: &String, s: &String) -> Result<String, LensError> {
        self.get.get_obj(p, s)
    }
    fn get_arr(&self, p: &String, u: &String) -> Result<String, LensError> {
        self.get.get_arr(p, u)
    }
    fn get_param(&self, e: &String, s: &String) -> Result<String, LensError> {
        self.get.get_param(e, s)
    }
}

impl AlaLens for TableLens {
    fn put(&self, p: &String, s: &String, v: &String) -> Result<PutOf<Self>, LensError> {
        self.rows
            .get(&(p.clone(), s.clone(), v.clone()))
            .cloned()
            .ok_or_else(|| LensError::DomainError(point_label(self, p, s, v)))
    }
}

/// A lens with a programmatic put. Putget₀ is checked on every call.
pub struct FnLens<G, F> {
    get: G,
    put: F,
}

impl<G, F> FnLens<G, F>
where
    G: ParamGet,
    F: Fn(&Ob<G::P>, &Ob<G::S>, &Arr<G::T>) -> Result<PutOf<G>, LensError> + Send + Sync,
{
    pub fn new(get: G, put: F) -> Self {
        FnLens { get, put }
    }

    pub fn get(&self) -> &G {
        &self.get
    }
}

impl<G: ParamGet, F: Send + Sync> ParamGet for FnLens<G, F> {
    type P = G::P;
    type S = G::S;
    type T = G::T;

    fn params(&self) -> &G::P {
        self.get.params()
    }
    fn source(&self) -> &G::S {
        self.get.source()
    }
    fn target(&self) -> &G::T {
        self.get.target()
    }
    fn get_obj(&self, p: &Ob<G::P>, s: &Ob<G::S>) -> Result<Ob<G::T>, LensError> {
        self.get.get_obj(p, s)
    }
    fn get_arr(&self, p: &Ob<G::P>, u: &Arr<G::S>) -> Result<Arr<G::T>, LensError> {
        self.get.get_arr(p, u)
    }
    fn get_param(&self, e: &Arr<G::P>, s: &Ob<G::S>) -> Result<Arr<G::T>, LensError> {
        self.get.get_param(e, s)
    }
    fn get_diag(&self, e: &Arr<G::P>, u: &Arr<G::S>) -> Result<Arr<G::T>, LensError> {
        self.get.get_diag(e, u)
    }
}

impl<G, F> AlaLens for FnLens<G, F>
where
    G: ParamGet,
    F: Fn(&Ob<G::P>, &Ob<G::S>, &Arr<G::T>) -> Result<PutOf<G>, LensError> + Send + Sync,
{
    fn put(&self, p: &Ob<G::P>, s: &Ob<G::S>, v: &Arr<G::T>) -> Result<PutOf<G>, LensError> {
        let r = (self.put)(p, s, v)?;
        verify_put(self, p, s, v, &r)?;
        Ok(r)
    }
}

/// Rebuilds an enumerable category as a [`FinCat`] named by its labels.
pub fn to_fincat<C: Category>(c: &C) -> Result<FinCat, LensError> {
    let objects = c
        .objects()
        .ok_or_else(|| LensError::NotEnumerable("category".into()))?;
    let arrows = c
        .all_arrows()
        .ok_or_else(|| LensError::NotEnumerable("category".into()))?;
    let mut spec = CategorySpec {
        objects: objects.iter().map(|o| c.ob_label(o)).collect(),
        ..CategorySpec::default()
    };
    for o in &objects {
        spec.identities
            .insert(c.ob_label(o), c.arr_label(&c.id(o)?));
    }
    for f in &arrows {
        spec.arrows.push(ArrowSpec {
            id: c.arr_label(f),
            src: c.ob_label(&c.dom(f)?),
            dst: c.ob_label(&c.cod(f)?),
        });
        for g in c.arrows_from(&c.cod(f)?).unwrap_or_default() {
            spec.compose.push([
                c.arr_label(f),
                c.arr_label(&g),
                c.arr_label(&c.compose(f, &g)?),
            ]);
        }
    }
    Ok(validate_category(&spec)?)
}

/// Tabulates any lens over enumerable spaces. Objects and arrows are renamed
/// to their labels, so a composite of table lenses comes out with the same
/// `(a|b)` names as [`crate::fincat::product_category`].
pub fn materialize<L: AlaLens + ?Sized>(lens: &L) -> Result<TableLens, LensError> {
    let (pc, sc, tc) = (lens.params(), lens.source(), lens.target());
    let (params, source, target) = (to_fincat(pc)?, to_fincat(sc)?, to_fincat(tc)?);
    let s_objs = sc.objects().expect("enumerable");
    let s_arrs = sc.all_arrows().expect("enumerable");
    let mut on_obj = BTreeMap::new();
    let mut functors = BTreeMap::new();
    for p in pc.objects().expect("enumerable") {
        let mut obj_map = BTreeMap::new();
        for s in &s_objs {
            obj_map.insert(sc.ob_label(s), tc.ob_label(&lens.get_obj(&p, s)?));
        }
        let mut arr_map = BTreeMap::new();
        for u in &s_arrs {
            arr_map.insert(sc.arr_label(u), tc.arr_label(&lens.get_arr(&p, u)?));
        }
        let f = Functor::checked(source.clone(), target.clone(), obj_map, arr_map)?;
        functors.insert(p.clone(), f.clone());
        on_obj.insert(pc.ob_label(&p), f);
    }
    let mut on_arr = BTreeMap::new();
    for e in pc.all_arrows().expect("enumerable") {
        let mut components = BTreeMap::new();
        for s in &s_objs {
            components.insert(sc.ob_label(s), tc.arr_label(&lens.get_param(&e, s)?));
        }
        let from = functors[&pc.dom(&e)?].clone();
        let to = functors[&pc.cod(&e)?].clone();
        on_arr.insert(pc.arr_label(&e), NatTrans::checked(from, to, components)?);
    }
    let get = ParamFunctor::new(params, source, target, on_obj, on_arr)?;
    let mut rows = Vec::new();
    for (p, s, v) in full_domain(lens)? {
        let r = super::lens_put(lens, &p, &s, &v)?;
        rows.push(PutRow {
            p: pc.ob_label(&p),
            s: sc.ob_label(&s),
            v: tc.arr_label(&v),
            e: pc.arr_label(&r.update),
            u: sc.arr_label(&r.request),
            amendment: tc.arr_label(&r.amendment),
        });
    }
    make_lens(get, rows)
}
