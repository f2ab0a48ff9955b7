use super::equiv::{check_equivalence_on, EquivReport, PairSplit};
use super::seq_compose;
use crate::fincat::{split_pair, FinCat};
use crate::lens::{full_domain, AlaLens, LensError, ParamGet, Point, PutResult, TableLens};
use crate::pfun::{pfun_compose, ParamFunctor};

/// Gets that compose, with parameters named by `(p|q)` pairs.
pub trait ComposableGet: Sized {
    fn then(&self, next: &Self) -> Result<Self, LensError>;
}

impl ComposableGet for ParamFunctor {
    fn then(&self, next: &Self) -> Result<Self, LensError> {
        Ok(pfun_compose(self, next)?)
    }
}

/// A rule choosing a put for each get.
pub trait UpdatePolicy<G>: Sync {
    type Lens: AlaLens<P = FinCat>;

    fn apply(&self, get: &G) -> Result<Self::Lens, LensError>;
}

/// Compares `policy(g1;g2)` with `policy(g1);policy(g2)`, identifying the
/// parameter `(p|q)` with the pair `(p, q)`. Without points the check runs
/// over the full domain of the long lens.
pub fn check_policy_functoriality<G, Pol>(
    policy: &Pol,
    g1: &G,
    g2: &G,
    points: Option<Vec<Point<Pol::Lens>>>,
) -> Result<EquivReport, LensError>
where
    G: ComposableGet,
    Pol: UpdatePolicy<G>,
    Pol::Lens: AlaLens<S = <Pol::Lens as ParamGet>::T>,
{
    let long = policy.apply(&g1.then(g2)?)?;
    let short = seq_compose(policy.apply(g1)?, policy.apply(g2)?)?;
    let points = match points {
        Some(p) => p,
        None => full_domain(&long)?,
    };
    check_equivalence_on(&long, &short, &PairSplit, points)
}

/// For finite p-functors: among all `(e, u, v@)` satisfying Putget, prefer
/// an identity amendment, then an identity parameter update, then an
/// identity request, then the least names. Pair names are compared
/// component by component so that the choice is stable under products.
#[derive(Debug, Clone, Copy, Default)]
pub struct LeastChange;

fn atoms(name: &str) -> Vec<&str> {
    match split_pair(name) {
        Some((a, b)) => {
            let mut v = atoms(a);
            v.extend(atoms(b));
            v
        }
        None => vec![name],
    }
}

impl UpdatePolicy<ParamFunctor> for LeastChange {
    type Lens = TableLens;

    fn apply(&self, get: &ParamFunctor) -> Result<TableLens, LensError> {
        let (pc, sc, tc) = (get.params(), get.source(), get.target());
        TableLens::from_fn(get.clone(), |p, s, v| {
            let mut best = None;
            for e in pc.arrows_from(p)? {
                for u in sc.arrows_from(s)? {
                    let target = get.get_diag(e, u)?;
                    for a in tc.arrows_from(tc.dst(v)?)? {
                        if tc.compose(v, a)? != target {
                            continue;
                        }
                        let key = (
                            !tc.is_identity(a),
                            !pc.is_identity(e),
                            !sc.is_identity(u),
                            atoms(e),
                            atoms(u),
                            atoms(a),
                        );
                        if best.as_ref().is_none_or(|(k, _)| &key < k) {
                            best = Some((key, (e, u, a)));
                        }
                    }
                }
            }
            let (_, (e, u, a)) = best.ok_or_else(|| {
                LensError::PolicyUndefined(format!(
                    "no put satisfies Putget at (p={p}, S={s}, v={v})"
                ))
            })?;
            Ok(PutResult {
                update: e.clone(),
                request: u.clone(),
                amendment: a.clone(),
            })
        })
    }
}
