//! Asymmetric learning delta lenses with amendment.
//!
//! A lens pairs a parameterized get ([`ParamGet`]) with a put that turns a
//! target update `v: S_p → T′` into three arrows: a parameter update
//! `e: p → p′`, a source update `u: S → S′` and an amendment
//! `v@: T′ → S′_p′`. The object-level consistency condition (Putget₀) is part
//! of the definition and is asserted by [`lens_put`] on every call.

mod laws;
mod table;

pub use laws::{
    check_hippocratic, check_putget, check_putput, check_stability, is_well_behaved,
    Counterexample, Law, LawReport, LawSuite,
};
pub use table::{make_lens, materialize, FnLens, PutRow, TableLens};

use thiserror::Error;

use crate::fincat::{CatError, Category, FinCat};
use crate::pfun::ParamFunctor;

pub type Ob<C> = <C as Category>::Ob;
pub type Arr<C> = <C as Category>::Arr;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LensError {
    #[error(transparent)]
    Cat(#[from] CatError),
    #[error("Putget0 fails at {point}: view of updated source is {actual}, amended target is {expected}")]
    PutgetZeroViolation {
        point: String,
        expected: String,
        actual: String,
    },
    #[error("put table has no row for {point}")]
    PutDomainIncomplete { point: String },
    #[error("put at {point} is ill-formed: {reason}")]
    InvalidPut { point: String, reason: String },
    #[error("update is not anchored at the view: {0}")]
    DomainError(String),
    #[error("{0} is not finite; supply sample points")]
    NotEnumerable(String),
    #[error("isomorphism search needs at most {bound} parameter objects, got {objects}")]
    SearchBoundExceeded { objects: usize, bound: usize },
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("policy undefined: {0}")]
    PolicyUndefined(String),
    #[error("policy inapplicable: {0}")]
    PolicyInapplicable(String),
}

/// The parameterized get of a lens: a functor `get_p: S → T` for each
/// parameter and a natural transformation `get_e` for each parameter delta.
pub trait ParamGet: Send + Sync {
    type P: Category;
    type S: Category;
    type T: Category;

    fn params(&self) -> &Self::P;
    fn source(&self) -> &Self::S;
    fn target(&self) -> &Self::T;

    /// `S_p`.
    fn get_obj(&self, p: &Ob<Self::P>, s: &Ob<Self::S>) -> Result<Ob<Self::T>, LensError>;
    /// `u_p = get_p(u)`.
    fn get_arr(&self, p: &Ob<Self::P>, u: &Arr<Self::S>) -> Result<Arr<Self::T>, LensError>;
    /// `e_S`, the component of `get_e` at `s`.
    fn get_param(&self, e: &Arr<Self::P>, s: &Ob<Self::S>) -> Result<Arr<Self::T>, LensError>;

    /// The diagonal `u_e = e_S;u_p′ = u_p;e_S′` of the naturality square.
    fn get_diag(&self, e: &Arr<Self::P>, u: &Arr<Self::S>) -> Result<Arr<Self::T>, LensError> {
        let (p, p2) = (self.params().dom(e)?, self.params().cod(e)?);
        let (s, s2) = (self.source().dom(u)?, self.source().cod(u)?);
        let t = self.target();
        let left = t.compose(&self.get_param(e, &s)?, &self.get_arr(&p2, u)?)?;
        let right = t.compose(&self.get_arr(&p, u)?, &self.get_param(e, &s2)?)?;
        if left != right {
            return Err(CatError::NaturalityMismatch {
                left: t.arr_label(&left),
                right: t.arr_label(&right),
            }
            .into());
        }
        Ok(left)
    }
}

/// What a put returns.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PutResult<E, U, V> {
    /// Parameter update `e: p → p′`.
    pub update: E,
    /// Source update `u: S → S′`.
    pub request: U,
    /// Amendment `v@: T′ → S′_p′`.
    pub amendment: V,
}

pub type PutOf<L> =
    PutResult<Arr<<L as ParamGet>::P>, Arr<<L as ParamGet>::S>, Arr<<L as ParamGet>::T>>;

/// A point `(p, S, v)` of the put domain.
pub type Point<L> = (
    Ob<<L as ParamGet>::P>,
    Ob<<L as ParamGet>::S>,
    Arr<<L as ParamGet>::T>,
);

pub trait AlaLens: ParamGet {
    /// Raw put. Callers normally go through [`lens_put`], which also checks the
    /// domain and Putget₀.
    fn put(
        &self,
        p: &Ob<Self::P>,
        s: &Ob<Self::S>,
        v: &Arr<Self::T>,
    ) -> Result<PutOf<Self>, LensError>;
}

macro_rules! forward_lens {
    ($($ptr:ty),*) => {$(
        impl<L: ParamGet + ?Sized> ParamGet for $ptr {
            type P = L::P;
            type S = L::S;
            type T = L::T;

            fn params(&self) -> &L::P {
                (**self).params()
            }
            fn source(&self) -> &L::S {
                (**self).source()
            }
            fn target(&self) -> &L::T {
                (**self).target()
            }
            fn get_obj(&self, p: &Ob<L::P>, s: &Ob<L::S>) -> Result<Ob<L::T>, LensError> {
                (**self).get_obj(p, s)
            }
            fn get_arr(&self, p: &Ob<L::P>, u: &Arr<L::S>) -> Result<Arr<L::T>, LensError> {
                (**self).get_arr(p, u)
            }
            fn get_param(&self, e: &Arr<L::P>, s: &Ob<L::S>) -> Result<Arr<L::T>, LensError> {
                (**self).get_param(e, s)
            }
            fn get_diag(&self, e: &Arr<L::P>, u: &Arr<L::S>) -> Result<Arr<L::T>, LensError> {
                (**self).get_diag(e, u)
            }
        }

        impl<L: AlaLens + ?Sized> AlaLens for $ptr {
            fn put(&self, p: &Ob<L::P>, s: &Ob<L::S>, v: &Arr<L::T>) -> Result<PutOf<L>, LensError> {
                (**self).put(p, s, v)
            }
        }
    )*};
}

forward_lens!(&L, Box<L>);

pub fn point_label<L: ParamGet + ?Sized>(
    lens: &L,
    p: &Ob<L::P>,
    s: &Ob<L::S>,
    v: &Arr<L::T>,
) -> String {
    format!(
        "(p={}, S={}, v={})",
        lens.params().ob_label(p),
        lens.source().ob_label(s),
        lens.target().arr_label(v)
    )
}

pub fn put_label<L: ParamGet + ?Sized>(lens: &L, r: &PutOf<L>) -> String {
    format!(
        "(e={}, u={}, v@={})",
        lens.params().arr_label(&r.update),
        lens.source().arr_label(&r.request),
        lens.target().arr_label(&r.amendment)
    )
}

/// Checks the arities of a put result and Putget₀:
/// `get_p′(cod u) = cod v@`.
pub fn verify_put<L: ParamGet + ?Sized>(
    lens: &L,
    p: &Ob<L::P>,
    s: &Ob<L::S>,
    v: &Arr<L::T>,
    r: &PutOf<L>,
) -> Result<(), LensError> {
    let invalid = |reason: String| LensError::InvalidPut {
        point: point_label(lens, p, s, v),
        reason,
    };
    let (pc, sc, tc) = (lens.params(), lens.source(), lens.target());
    if !pc.contains_arr(&r.update) || &pc.dom(&r.update)? != p {
        return Err(invalid(format!(
            "parameter update {} does not start at p",
            pc.arr_label(&r.update)
        )));
    }
    if !sc.contains_arr(&r.request) || &sc.dom(&r.request)? != s {
        return Err(invalid(format!(
            "request {} does not start at S",
            sc.arr_label(&r.request)
        )));
    }
    if !tc.contains_arr(&r.amendment) || tc.dom(&r.amendment)? != tc.cod(v)? {
        return Err(invalid(format!(
            "amendment {} does not start at the target of v",
            tc.arr_label(&r.amendment)
        )));
    }
    let viewed = lens.get_obj(&pc.cod(&r.update)?, &sc.cod(&r.request)?)?;
    let amended = tc.cod(&r.amendment)?;
    if viewed != amended {
        return Err(LensError::PutgetZeroViolation {
            point: point_label(lens, p, s, v),
            expected: tc.ob_label(&amended),
            actual: tc.ob_label(&viewed),
        });
    }
    Ok(())
}

/// Put with its precondition (`v` starts at `S_p`) and Putget₀ enforced.
pub fn lens_put<L: AlaLens + ?Sized>(
    lens: &L,
    p: &Ob<L::P>,
    s: &Ob<L::S>,
    v: &Arr<L::T>,
) -> Result<PutOf<L>, LensError> {
    let view = lens.get_obj(p, s)?;
    if !lens.target().contains_arr(v) || lens.target().dom(v)? != view {
        return Err(LensError::DomainError(format!(
            "{} does not start at S_p = {}",
            lens.target().arr_label(v),
            lens.target().ob_label(&view)
        )));
    }
    let r = lens.put(p, s, v)?;
    verify_put(lens, p, s, v, &r)?;
    Ok(r)
}

/// Every `(p, S, v)` with `v` leaving `S_p`, when all three spaces are finite.
pub fn full_domain<L: ParamGet + ?Sized>(lens: &L) -> Result<Vec<Point<L>>, LensError> {
    let ps = lens
        .params()
        .objects()
        .ok_or_else(|| LensError::NotEnumerable("parameter space".into()))?;
    let ss = lens
        .source()
        .objects()
        .ok_or_else(|| LensError::NotEnumerable("source space".into()))?;
    let mut out = Vec::new();
    for p in &ps {
        for s in &ss {
            let view = lens.get_obj(p, s)?;
            let vs = lens
                .target()
                .arrows_from(&view)
                .ok_or_else(|| LensError::NotEnumerable("target space".into()))?;
            out.extend(vs.into_iter().map(|v| (p.clone(), s.clone(), v)));
        }
    }
    Ok(out)
}

impl ParamGet for ParamFunctor {
    type P = FinCat;
    type S = FinCat;
    type T = FinCat;

    fn params(&self) -> &FinCat {
        ParamFunctor::params(self)
    }
    fn source(&self) -> &FinCat {
        ParamFunctor::source(self)
    }
    fn target(&self) -> &FinCat {
        ParamFunctor::target(self)
    }
    fn get_obj(&self, p: &String, s: &String) -> Result<String, LensError> {
        Ok(self.at(p)?.ob(s)?.to_string())
    }
    fn get_arr(&self, p: &String, u: &String) -> Result<String, LensError> {
        Ok(self.at(p)?.arr(u)?.to_string())
    }
    fn get_param(&self, e: &String, s: &String) -> Result<String, LensError> {
        Ok(self.at_arrow(e)?.component(s)?.to_string())
    }
}

#[cfg(test)]
mod tests;
