//! Sequential and parallel composition of lenses, the identity and iso
//! lenses, lens equivalence and the policy functoriality check.

mod equiv;
mod policy;

pub use equiv::{
    check_associativity, check_equivalence, check_equivalence_on, find_equivalence, find_isos,
    EquivReport, LeftUnitor, PairSplit, ParamIso, Reassoc, RightUnitor, DEFAULT_ISO_BOUND,
};
pub use policy::{check_policy_functoriality, ComposableGet, LeastChange, UpdatePolicy};

use crate::fincat::{Category, FinCat, Functor, Product};
use crate::lens::{lens_put, AlaLens, Arr, LensError, Ob, ParamGet, PutOf, PutResult};

/// `k;l`: parameters `P×Q`, get `get_k;get_l`, and a put that runs `l` first
/// and feeds its request to `k`.
#[derive(Debug, Clone)]
pub struct SeqLens<K: ParamGet, L: ParamGet> {
    k: K,
    l: L,
    params: Product<K::P, L::P>,
}

pub fn seq_compose<K, L>(k: K, l: L) -> Result<SeqLens<K, L>, LensError>
where
    K: AlaLens,
    L: AlaLens<S = K::T>,
{
    if k.target() != l.source() {
        return Err(LensError::BoundaryMismatch(
            "target of the first lens is not the source of the second".into(),
        ));
    }
    let params = Product(k.params().clone(), l.params().clone());
    Ok(SeqLens { k, l, params })
}

impl<K: ParamGet, L: ParamGet> SeqLens<K, L> {
    pub fn first(&self) -> &K {
        &self.k
    }

    pub fn second(&self) -> &L {
        &self.l
    }
}

impl<K, L> ParamGet for SeqLens<K, L>
where
    K: ParamGet,
    L: ParamGet<S = K::T>,
{
    type P = Product<K::P, L::P>;
    type S = K::S;
    type T = L::T;

    fn params(&self) -> &Self::P {
        &self.params
    }
    fn source(&self) -> &K::S {
        self.k.source()
    }
    fn target(&self) -> &L::T {
        self.l.target()
    }
    fn get_obj(&self, (p, q): &Ob<Self::P>, a: &Ob<K::S>) -> Result<Ob<L::T>, LensError> {
        self.l.get_obj(q, &self.k.get_obj(p, a)?)
    }
    fn get_arr(&self, (p, q): &Ob<Self::P>, u: &Arr<K::S>) -> Result<Arr<L::T>, LensError> {
        self.l.get_arr(q, &self.k.get_arr(p, u)?)
    }
    /// Godement product: `get_l,q(k.e_A) ; l.h_(A_p′)`, with the interchange
    /// asserted by `get_diag`.
    fn get_param(&self, (e, h): &Arr<Self::P>, a: &Ob<K::S>) -> Result<Arr<L::T>, LensError> {
        self.l.get_diag(h, &self.k.get_param(e, a)?)
    }
}

impl<K, L> AlaLens for SeqLens<K, L>
where
    K: AlaLens,
    L: AlaLens<S = K::T>,
{
    fn put(
        &self,
        (p, q): &Ob<Self::P>,
        a: &Ob<K::S>,
        w: &Arr<L::T>,
    ) -> Result<PutOf<Self>, LensError> {
        let b = self.k.get_obj(p, a)?;
        let second = lens_put(&self.l, q, &b, w)?;
        let first = lens_put(&self.k, p, a, &second.request)?;
        let q2 = self.l.params().cod(&second.update)?;
        let amended = self.l.get_arr(&q2, &first.amendment)?;
        Ok(PutResult {
            update: (first.update, second.update),
            request: first.request,
            amendment: self.l.target().compose(&second.amendment, &amended)?,
        })
    }
}

/// `k ⊗ l`: everything componentwise.
#[derive(Debug, Clone)]
pub struct ParLens<K: ParamGet, L: ParamGet> {
    k: K,
    l: L,
    params: Product<K::P, L::P>,
    source: Product<K::S, L::S>,
    target: Product<K::T, L::T>,
}

pub fn par_compose<K: AlaLens, L: AlaLens>(k: K, l: L) -> ParLens<K, L> {
    ParLens {
        params: Product(k.params().clone(), l.params().clone()),
        source: Product(k.source().clone(), l.source().clone()),
        target: Product(k.target().clone(), l.target().clone()),
        k,
        l,
    }
}

impl<K: ParamGet, L: ParamGet> ParLens<K, L> {
    pub fn left(&self) -> &K {
        &self.k
    }

    pub fn right(&self) -> &L {
        &self.l
    }
}

impl<K: ParamGet, L: ParamGet> ParamGet for ParLens<K, L> {
    type P = Product<K::P, L::P>;
    type S = Product<K::S, L::S>;
    type T = Product<K::T, L::T>;

    fn params(&self) -> &Self::P {
        &self.params
    }
    fn source(&self) -> &Self::S {
        &self.source
    }
    fn target(&self) -> &Self::T {
        &self.target
    }
    fn get_obj(
        &self,
        (p, q): &Ob<Self::P>,
        (a, b): &Ob<Self::S>,
    ) -> Result<Ob<Self::T>, LensError> {
        Ok((self.k.get_obj(p, a)?, self.l.get_obj(q, b)?))
    }
    fn get_arr(
        &self,
        (p, q): &Ob<Self::P>,
        (u, w): &Arr<Self::S>,
    ) -> Result<Arr<Self::T>, LensError> {
        Ok((self.k.get_arr(p, u)?, self.l.get_arr(q, w)?))
    }
    fn get_param(
        &self,
        (e, h): &Arr<Self::P>,
        (a, b): &Ob<Self::S>,
    ) -> Result<Arr<Self::T>, LensError> {
        Ok((self.k.get_param(e, a)?, self.l.get_param(h, b)?))
    }
}

impl<K: AlaLens, L: AlaLens> AlaLens for ParLens<K, L> {
    fn put(
        &self,
        (p, q): &Ob<Self::P>,
        (a, b): &Ob<Self::S>,
        (v, w): &Arr<Self::T>,
    ) -> Result<PutOf<Self>, LensError> {
        let x = lens_put(&self.k, p, a, v)?;
        let y = lens_put(&self.l, q, b, w)?;
        Ok(PutResult {
            update: (x.update, y.update),
            request: (x.request, y.request),
            amendment: (x.amendment, y.amendment),
        })
    }
}

/// Identity get over the terminal parameter space. The request replays the
/// view update and the amendment is an identity.
#[derive(Debug, Clone)]
pub struct IdentityLens<C> {
    space: C,
    params: FinCat,
}

pub fn identity_lens<C: Category>(space: C) -> IdentityLens<C> {
    IdentityLens {
        space,
        params: FinCat::terminal(),
    }
}

impl<C: Category> ParamGet for IdentityLens<C> {
    type P = FinCat;
    type S = C;
    type T = C;

    fn params(&self) -> &FinCat {
        &self.params
    }
    fn source(&self) -> &C {
        &self.space
    }
    fn target(&self) -> &C {
        &self.space
    }
    fn get_obj(&self, _: &String, s: &C::Ob) -> Result<C::Ob, LensError> {
        Ok(s.clone())
    }
    fn get_arr(&self, _: &String, u: &C::Arr) -> Result<C::Arr, LensError> {
        Ok(u.clone())
    }
    fn get_param(&self, _: &String, s: &C::Ob) -> Result<C::Arr, LensError> {
        Ok(self.space.id(s)?)
    }
}

impl<C: Category> AlaLens for IdentityLens<C> {
    fn put(&self, _: &String, _: &C::Ob, v: &C::Arr) -> Result<PutOf<Self>, LensError> {
        Ok(PutResult {
            update: "id_*".into(),
            request: v.clone(),
            amendment: self.space.id(&self.space.cod(v)?)?,
        })
    }
}

/// The lens of an isomorphism `ι: A → B`: get is `ι`, the request is
/// `ι⁻¹(v)`, parameters and amendments are trivial.
#[derive(Debug, Clone)]
pub struct IsoLens {
    iota: Functor,
    inverse: Functor,
    params: FinCat,
}

pub fn iso_lens(iota: Functor) -> Result<IsoLens, LensError> {
    let inverse = iota.inverse()?;
    Ok(IsoLens {
        iota,
        inverse,
        params: FinCat::terminal(),
    })
}

impl IsoLens {
    pub fn iota(&self) -> &Functor {
        &self.iota
    }
}

impl ParamGet for IsoLens {
    type P = FinCat;
    type S = FinCat;
    type T = FinCat;

    fn params(&self) -> &FinCat {
        &self.params
    }
    fn source(&self) -> &FinCat {
        &self.iota.source
    }
    fn target(&self) -> &FinCat {
        &self.iota.target
    }
    fn get_obj(&self, _: &String, s: &String) -> Result<String, LensError> {
        Ok(self.iota.ob(s)?.to_string())
    }
    fn get_arr(&self, _: &String, u: &String) -> Result<String, LensError> {
        Ok(self.iota.arr(u)?.to_string())
    }
    fn get_param(&self, _: &String, s: &String) -> Result<String, LensError> {
        let t = &self.iota.target;
        Ok(t.identity(self.iota.ob(s)?)?.to_string())
    }
}

impl AlaLens for IsoLens {
    fn put(&self, _: &String, _: &String, v: &String) -> Result<PutOf<Self>, LensError> {
        let t = &self.iota.target;
        Ok(PutResult {
            update: "id_*".into(),
            request: self.inverse.arr(v)?.to_string(),
            amendment: t.identity(t.dst(v)?)?.to_string(),
        })
    }
}

#[cfg(test)]
mod tests;

/// A lens with pair parameters `(p, q)` seen as one with parameters named
/// `(p|q)` in [`crate::fincat::product_category`].
#[derive(Debug, Clone)]
pub struct FlatParams<L> {
    inner: L,
    params: FinCat,
}

pub fn flatten_params<L>(inner: L) -> FlatParams<L>
where
    L: AlaLens<P = Product<FinCat, FinCat>>,
{
    let Product(a, b) = inner.params();
    let params = crate::fincat::product_category(a, b);
    FlatParams { inner, params }
}

impl<L> FlatParams<L> {
    pub fn inner(&self) -> &L {
        &self.inner
    }
}

fn join((a, b): (String, String)) -> String {
    crate::fincat::pair_name(&a, &b)
}

impl<L> ParamGet for FlatParams<L>
where
    L: ParamGet<P = Product<FinCat, FinCat>>,
{
    type P = FinCat;
    type S = L::S;
    type T = L::T;

    fn params(&self) -> &FinCat {
        &self.params
    }
    fn source(&self) -> &L::S {
        self.inner.source()
    }
    fn target(&self) -> &L::T {
        self.inner.target()
    }
    fn get_obj(&self, p: &String, s: &Ob<L::S>) -> Result<Ob<L::T>, LensError> {
        self.inner.get_obj(&PairSplit.ob(p)?, s)
    }
    fn get_arr(&self, p: &String, u: &Arr<L::S>) -> Result<Arr<L::T>, LensError> {
        self.inner.get_arr(&PairSplit.ob(p)?, u)
    }
    fn get_param(&self, e: &String, s: &Ob<L::S>) -> Result<Arr<L::T>, LensError> {
        self.inner.get_param(&PairSplit.arr(e)?, s)
    }
    fn get_diag(&self, e: &String, u: &Arr<L::S>) -> Result<Arr<L::T>, LensError> {
        self.inner.get_diag(&PairSplit.arr(e)?, u)
    }
}

impl<L> AlaLens for FlatParams<L>
where
    L: AlaLens<P = Product<FinCat, FinCat>>,
{
    fn put(&self, p: &String, s: &Ob<L::S>, v: &Arr<L::T>) -> Result<PutOf<Self>, LensError> {
        let r = self.inner.put(&PairSplit.ob(p)?, s, v)?;
        Ok(PutResult {
            update: join(r.update),
            request: r.request,
            amendment: r.amendment,
        })
    }
}
