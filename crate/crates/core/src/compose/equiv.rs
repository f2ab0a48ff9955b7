use std::collections::{BTreeSet, HashSet};
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use super::{seq_compose, SeqLens};
use crate::fincat::{split_pair, Category, FinCat, Functor, Product};
use crate::lens::{full_domain, lens_put, point_label, AlaLens, Counterexample, LensError, Point};

/// Largest parameter space, in objects, for which isomorphisms are searched.
pub const DEFAULT_ISO_BOUND: usize = 6;

/// An isomorphism of parameter spaces, applied to objects and arrows.
pub trait ParamIso<A: Category, B: Category>: Send + Sync {
    fn ob(&self, x: &A::Ob) -> Result<B::Ob, LensError>;
    fn arr(&self, f: &A::Arr) -> Result<B::Arr, LensError>;
}

impl ParamIso<FinCat, FinCat> for Functor {
    fn ob(&self, x: &String) -> Result<String, LensError> {
        Ok(Functor::ob(self, x)?.to_string())
    }
    fn arr(&self, f: &String) -> Result<String, LensError> {
        Ok(Functor::arr(self, f)?.to_string())
    }
}

/// `(P×Q)×R → P×(Q×R)` on tuples.
#[derive(Debug, Clone, Copy, Default)]
pub struct Reassoc;

impl<A: Category, B: Category, C: Category>
    ParamIso<Product<Product<A, B>, C>, Product<A, Product<B, C>>> for Reassoc
{
    fn ob(
        &self,
        ((a, b), c): &((A::Ob, B::Ob), C::Ob),
    ) -> Result<(A::Ob, (B::Ob, C::Ob)), LensError> {
        Ok((a.clone(), (b.clone(), c.clone())))
    }
    fn arr(
        &self,
        ((a, b), c): &((A::Arr, B::Arr), C::Arr),
    ) -> Result<(A::Arr, (B::Arr, C::Arr)), LensError> {
        Ok((a.clone(), (b.clone(), c.clone())))
    }
}

/// `1×P → P`, dropping the terminal component.
#[derive(Debug, Clone, Copy, Default)]
pub struct LeftUnitor;

impl<B: Category> ParamIso<Product<FinCat, B>, B> for LeftUnitor {
    fn ob(&self, (_, b): &(String, B::Ob)) -> Result<B::Ob, LensError> {
        Ok(b.clone())
    }
    fn arr(&self, (_, b): &(String, B::Arr)) -> Result<B::Arr, LensError> {
        Ok(b.clone())
    }
}

/// `P×1 → P`.
#[derive(Debug, Clone, Copy, Default)]
pub struct RightUnitor;

impl<A: Category> ParamIso<Product<A, FinCat>, A> for RightUnitor {
    fn ob(&self, (a, _): &(A::Ob, String)) -> Result<A::Ob, LensError> {
        Ok(a.clone())
    }
    fn arr(&self, (a, _): &(A::Arr, String)) -> Result<A::Arr, LensError> {
        Ok(a.clone())
    }
}

/// A materialized product `P×Q` (names `(p|q)`) onto the tuple product.
#[derive(Debug, Clone, Copy, Default)]
pub struct PairSplit;

impl PairSplit {
    fn split(name: &str) -> Result<(String, String), LensError> {
        split_pair(name)
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .ok_or_else(|| LensError::BoundaryMismatch(format!("`{name}` is not a pair name")))
    }
}

impl ParamIso<FinCat, Product<FinCat, FinCat>> for PairSplit {
    fn ob(&self, x: &String) -> Result<(String, String), LensError> {
        PairSplit::split(x)
    }
    fn arr(&self, f: &String) -> Result<(String, String), LensError> {
        PairSplit::split(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivReport {
    pub checked: usize,
    /// Points where both puts are inapplicable.
    pub skipped: usize,
    pub mismatches: Vec<Counterexample>,
}

impl EquivReport {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty()
    }
}

impl fmt::Display for EquivReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.holds() {
            "equivalent"
        } else {
            "NOT equivalent"
        };
        write!(
            f,
            "{status} ({} points checked, {} skipped)",
            self.checked, self.skipped
        )?;
        for m in &self.mismatches {
            write!(f, "\n  {m}")?;
        }
        Ok(())
    }
}

fn check_bijective<C: Category, D: Category, I: ParamIso<C, D>>(
    from: &C,
    to: &D,
    iota: &I,
) -> Result<(), LensError> {
    let (Some(xs), Some(ys)) = (from.objects(), to.objects()) else {
        return Ok(());
    };
    let not_iso = |what: &str| {
        LensError::Cat(crate::fincat::CatError::NotIso(format!(
            "not bijective on {what}"
        )))
    };
    let imgs: HashSet<D::Ob> = xs.iter().map(|x| iota.ob(x)).collect::<Result<_, _>>()?;
    if imgs.len() != xs.len() || xs.len() != ys.len() || !imgs.iter().all(|y| to.contains_ob(y)) {
        return Err(not_iso("objects"));
    }
    if let (Some(fs), Some(gs)) = (from.all_arrows(), to.all_arrows()) {
        let imgs: HashSet<D::Arr> = fs.iter().map(|f| iota.arr(f)).collect::<Result<_, _>>()?;
        if imgs.len() != fs.len()
            || fs.len() != gs.len()
            || !imgs.iter().all(|g| to.contains_arr(g))
        {
            return Err(not_iso("arrows"));
        }
    }
    Ok(())
}

/// Compares two lenses with the same source and target after renaming
/// parameters along `iota`, at the given points of the first lens: views,
/// view actions on source and parameter arrows out of each anchor, and the
/// three put components. Equality is strict.
pub fn check_equivalence_on<L, M, I>(
    l: &L,
    m: &M,
    iota: &I,
    points: Vec<Point<L>>,
) -> Result<EquivReport, LensError>
where
    L: AlaLens + ?Sized,
    M: AlaLens<S = L::S, T = L::T> + ?Sized,
    I: ParamIso<L::P, M::P>,
{
    if l.source() != m.source() || l.target() != m.target() {
        return Err(LensError::BoundaryMismatch(
            "lenses have different source or target spaces".into(),
        ));
    }
    check_bijective(l.params(), m.params(), iota)?;
    let anchors: BTreeSet<_> = points
        .iter()
        .map(|(p, s, _)| (p.clone(), s.clone()))
        .collect();
    let anchors: Vec<_> = anchors.into_iter().collect();
    let show = |x: Result<String, LensError>| x.unwrap_or_else(|e| format!("error: {e}"));

    let anchor_checks: Vec<Vec<Counterexample>> = anchors
        .par_iter()
        .map(|(p, s)| -> Result<Vec<Counterexample>, LensError> {
            let (tc, sc, pc) = (l.target(), l.source(), l.params());
            let ph = iota.ob(p)?;
            let at = format!("(p={}, S={})", pc.ob_label(p), sc.ob_label(s));
            let mut out = Vec::new();
            let mut cmp =
                |eq: String, a: Result<String, LensError>, b: Result<String, LensError>| {
                    if a.is_err() || b.is_err() || a != b {
                        out.push(Counterexample {
                            point: at.clone(),
                            equation: eq,
                            expected: show(a),
                            actual: show(b),
                        });
                    }
                };
            let label = |x: Result<_, LensError>| x.map(|t| tc.ob_label(&t));
            cmp(
                "S_p".into(),
                label(l.get_obj(p, s)),
                label(m.get_obj(&ph, s)),
            );
            let alabel = |x: Result<_, LensError>| x.map(|t| tc.arr_label(&t));
            for u in sc.arrows_from(s).unwrap_or_default() {
                cmp(
                    format!("get_p({})", sc.arr_label(&u)),
                    alabel(l.get_arr(p, &u)),
                    alabel(m.get_arr(&ph, &u)),
                );
            }
            for e in pc.arrows_from(p).unwrap_or_default() {
                let eh = iota.arr(&e)?;
                cmp(
                    format!("get_{}(S)", pc.arr_label(&e)),
                    alabel(l.get_param(&e, s)),
                    alabel(m.get_param(&eh, s)),
                );
            }
            Ok(out)
        })
        .collect::<Result<_, _>>()?;

    let put_checks: Vec<(Point<L>, Option<Vec<Counterexample>>)> = points
        .par_iter()
        .map(|pt| -> Result<_, LensError> {
            let (p, s, v) = pt;
            let at = point_label(l, p, s, v);
            let ph = iota.ob(p)?;
            let mut out = Vec::new();
            let mut push = |eq: &str, a: String, b: String| {
                out.push(Counterexample {
                    point: at.clone(),
                    equation: eq.into(),
                    expected: a,
                    actual: b,
                })
            };
            match (lens_put(l, p, s, v), lens_put(m, &ph, s, v)) {
                (Ok(a), Ok(b)) => {
                    let e = iota.arr(&a.update)?;
                    if e != b.update {
                        let (pc, mc) = (l.params(), m.params());
                        push(
                            "ι(e)",
                            mc.arr_label(&e),
                            format!(
                                "{} (from {})",
                                mc.arr_label(&b.update),
                                pc.arr_label(&a.update)
                            ),
                        );
                    }
                    if a.request != b.request {
                        let sc = l.source();
                        push("u", sc.arr_label(&a.request), sc.arr_label(&b.request));
                    }
                    if a.amendment != b.amendment {
                        let tc = l.target();
                        push("v@", tc.arr_label(&a.amendment), tc.arr_label(&b.amendment));
                    }
                }
                (Err(LensError::PolicyInapplicable(_)), Err(LensError::PolicyInapplicable(_))) => {
                    return Ok((pt.clone(), None));
                }
                (a, b) => {
                    let render = |r: Option<LensError>| match r {
                        None => "a put".to_string(),
                        Some(e) => format!("error: {e}"),
                    };
                    push("put", render(a.err()), render(b.err()));
                }
            }
            Ok((pt.clone(), Some(out)))
        })
        .collect::<Result<_, _>>()?;

    let mut sorted = put_checks;
    sorted.sort_by(|a, b| a.0.cmp(&b.0));
    let skipped = sorted.iter().filter(|(_, c)| c.is_none()).count();
    let mut mismatches: Vec<Counterexample> = anchor_checks.into_iter().flatten().collect();
    mismatches.extend(sorted.into_iter().flat_map(|(_, c)| c.unwrap_or_default()));
    Ok(EquivReport {
        checked: points.len() - skipped,
        skipped,
        mismatches,
    })
}

/// [`check_equivalence_on`] over the full domain of `l`.
pub fn check_equivalence<L, M, I>(l: &L, m: &M, iota: &I) -> Result<EquivReport, LensError>
where
    L: AlaLens + ?Sized,
    M: AlaLens<S = L::S, T = L::T> + ?Sized,
    I: ParamIso<L::P, M::P>,
{
    check_equivalence_on(l, m, iota, full_domain(l)?)
}

/// All isomorphisms `p → q` of finite categories.
pub fn find_isos(p: &FinCat, q: &FinCat, bound: usize) -> Result<Vec<Functor>, LensError> {
    let n = p.object_count();
    if n > bound || q.object_count() > bound {
        return Err(LensError::SearchBoundExceeded {
            objects: n.max(q.object_count()),
            bound,
        });
    }
    if n != q.object_count() || p.arrow_count() != q.arrow_count() {
        return Ok(Vec::new());
    }
    let xs: Vec<&str> = p.objects().collect();
    let ys: Vec<&str> = q.objects().collect();
    let mut out = Vec::new();
    for perm in ys.iter().permutations(n) {
        let obj = |x: &str| *perm[xs.iter().position(|y| *y == x).expect("object")];
        let homs: Vec<(Vec<&str>, Vec<&str>)> = xs
            .iter()
            .cartesian_product(xs.iter())
            .map(|(a, b)| (p.hom(a, b), q.hom(obj(a), obj(b))))
            .collect();
        if homs.iter().any(|(h, k)| h.len() != k.len()) {
            continue;
        }
        let choices = homs
            .iter()
            .map(|(h, k)| k.iter().permutations(h.len()).collect::<Vec<_>>())
            .multi_cartesian_product();
        for choice in choices {
            let mut arr_map = std::collections::BTreeMap::new();
            for ((h, _), imgs) in homs.iter().zip(&choice) {
                for (a, b) in h.iter().zip(imgs) {
                    arr_map.insert(a.to_string(), b.to_string());
                }
            }
            let obj_map = xs
                .iter()
                .map(|x| (x.to_string(), obj(x).to_string()))
                .collect();
            if let Ok(f) = Functor::checked(p.clone(), q.clone(), obj_map, arr_map) {
                out.push(f);
            }
        }
    }
    Ok(out)
}

/// Searches for a parameter isomorphism witnessing equivalence.
pub fn find_equivalence<L, M>(l: &L, m: &M, bound: usize) -> Result<Option<Functor>, LensError>
where
    L: AlaLens<P = FinCat> + ?Sized,
    M: AlaLens<P = FinCat, S = L::S, T = L::T> + ?Sized,
{
    let points = full_domain(l)?;
    for iota in find_isos(l.params(), m.params(), bound)? {
        if check_equivalence_on(l, m, &iota, points.clone())?.holds() {
            return Ok(Some(iota));
        }
    }
    Ok(None)
}

/// `(k;l);m` against `k;(l;m)` under [`Reassoc`], exhaustively or at the given
/// points of the left bracketing.
#[allow(clippy::type_complexity)]
pub fn check_associativity<K, L, M>(
    k: &K,
    l: &L,
    m: &M,
    points: Option<Vec<Point<SeqLens<SeqLens<&K, &L>, &M>>>>,
) -> Result<EquivReport, LensError>
where
    K: AlaLens,
    L: AlaLens<S = K::T>,
    M: AlaLens<S = L::T>,
{
    let left = seq_compose(seq_compose(k, l)?, m)?;
    let right = seq_compose(k, seq_compose(l, m)?)?;
    let points = match points {
        Some(p) => p,
        None => full_domain(&left)?,
    };
    check_equivalence_on(&left, &right, &Reassoc, points)
}
