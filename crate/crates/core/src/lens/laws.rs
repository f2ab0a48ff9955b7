use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::Serialize;

use super::{full_domain, lens_put, point_label, put_label, AlaLens, LensError, Point, PutOf};
use crate::fincat::Category;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Law {
    Stability,
    Putget,
    Hippocratic,
    Putput,
}

impl Law {
    pub const ALL: [Law; 4] = [Law::Stability, Law::Putget, Law::Hippocratic, Law::Putput];

    pub fn name(self) -> &'static str {
        match self {
            Law::Stability => "stability",
            Law::Putget => "putget",
            Law::Hippocratic => "hippocratic",
            Law::Putput => "putput",
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Law {
    type Err = String;

    fn from_str(s: &str) -> Result<Law, String> {
        Law::ALL
            .into_iter()
            .find(|l| l.name() == s.trim())
            .ok_or_else(|| {
                format!("unknown law `{s}` (expected stability, putget, hippocratic or putput)")
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub point: String,
    pub equation: String,
    pub expected: String,
    pub actual: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "at {}: {} expected {}, got {}",
            self.point, self.equation, self.expected, self.actual
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub law: Law,
    /// Points where the law was evaluated.
    pub checked: usize,
    /// Points where the law's premise did not apply.
    pub skipped: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    fn from_results<K: Ord>(law: Law, results: Vec<Outcome<K>>) -> LawReport {
        let mut checked = 0;
        let mut skipped = 0;
        let mut bad = Vec::new();
        for r in results {
            match r {
                Outcome::Ok => checked += 1,
                Outcome::Skip => skipped += 1,
                Outcome::Fail(k, c) => {
                    checked += 1;
                    bad.push((k, c));
                }
            }
        }
        bad.sort_by(|a, b| a.0.cmp(&b.0));
        LawReport {
            law,
            checked,
            skipped,
            counterexamples: bad.into_iter().map(|(_, c)| c).collect(),
        }
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "pass" } else { "FAIL" };
        write!(f, "{}: {status} ({} checked", self.law, self.checked)?;
        if self.skipped > 0 {
            write!(f, ", {} skipped", self.skipped)?;
        }
        write!(f, ")")?;
        for c in &self.counterexamples {
            write!(f, "\n  {c}")?;
        }
        Ok(())
    }
}

enum Outcome<K> {
    Ok,
    Skip,
    Fail(K, Counterexample),
}

type Memo<L> = Mutex<HashMap<Point<L>, Result<PutOf<L>, LensError>>>;

/// Law checking over a fixed set of domain points, with puts memoized so that
/// several laws share one evaluation per point.
pub struct LawSuite<'a, L: AlaLens + ?Sized> {
    lens: &'a L,
    points: Vec<Point<L>>,
    memo: Memo<L>,
}

impl<'a, L: AlaLens + ?Sized> LawSuite<'a, L> {
    /// Every admissible point of a lens over finite spaces.
    pub fn exhaustive(lens: &'a L) -> Result<Self, LensError> {
        Ok(Self::sampled(lens, full_domain(lens)?))
    }

    /// Only the given points; for lenses over open spaces.
    pub fn sampled(lens: &'a L, mut points: Vec<Point<L>>) -> Self {
        points.sort();
        points.dedup();
        LawSuite {
            lens,
            points,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn points(&self) -> &[Point<L>] {
        &self.points
    }

    pub fn put(&self, point: &Point<L>) -> Result<PutOf<L>, LensError> {
        if let Some(r) = self.memo.lock().expect("memo lock").get(point) {
            return r.clone();
        }
        let r = lens_put(self.lens, &point.0, &point.1, &point.2);
        self.memo
            .lock()
            .expect("memo lock")
            .insert(point.clone(), r.clone());
        r
    }

    fn label(&self, pt: &Point<L>) -> String {
        point_label(self.lens, &pt.0, &pt.1, &pt.2)
    }

    fn fail(
        &self,
        pt: &Point<L>,
        equation: &str,
        expected: String,
        actual: String,
    ) -> Outcome<Point<L>> {
        Outcome::Fail(
            pt.clone(),
            Counterexample {
                point: self.label(pt),
                equation: equation.into(),
                expected,
                actual,
            },
        )
    }

    /// `put(p, S, id) = (id_p, id_S, id)` at every `(p, S)` in the point set.
    pub fn stability(&self) -> Result<LawReport, LensError> {
        let lens = self.lens;
        let mut anchors = BTreeSet::new();
        for (p, s, _) in &self.points {
            anchors.insert((p.clone(), s.clone()));
        }
        let mut pts = Vec::new();
        for (p, s) in anchors {
            let view = lens.get_obj(&p, &s)?;
            pts.push((p, s, lens.target().id(&view)?));
        }
        let results = pts
            .par_iter()
            .map(|pt| {
                let expected = super::PutResult {
                    update: lens.params().id(&pt.0)?,
                    request: lens.source().id(&pt.1)?,
                    amendment: pt.2.clone(),
                };
                Ok(match self.put(pt) {
                    Ok(r) if r == expected => Outcome::Ok,
                    Ok(r) => self.fail(
                        pt,
                        "put(id)",
                        put_label(lens, &expected),
                        put_label(lens, &r),
                    ),
                    Err(e) => self.fail(pt, "put(id)", put_label(lens, &expected), e.to_string()),
                })
            })
            .collect::<Result<Vec<_>, LensError>>()?;
        Ok(LawReport::from_results(Law::Stability, results))
    }

    /// `get_e(u) = v;v@` for `(e, u, v@) = put(p, S, v)`.
    pub fn putget(&self) -> Result<LawReport, LensError> {
        let lens = self.lens;
        let results = self
            .points
            .par_iter()
            .map(|pt| {
                let eq = "u_e = v;v@";
                let r = match self.put(pt) {
                    Ok(r) => r,
                    Err(e) => return self.fail(pt, eq, "a put".into(), e.to_string()),
                };
                let rhs = lens
                    .target()
                    .compose(&pt.2, &r.amendment)
                    .map_err(LensError::from);
                let lhs = lens.get_diag(&r.update, &r.request);
                match (lhs, rhs) {
                    (Ok(l), Ok(r)) if l == r => Outcome::Ok,
                    (l, r) => {
                        let t = lens.target();
                        let show = |x: Result<_, _>| match x {
                            Ok(a) => t.arr_label(&a),
                            Err(e) => format!("error: {e}"),
                        };
                        self.fail(pt, eq, show(r), show(l))
                    }
                }
            })
            .collect();
        Ok(LawReport::from_results(Law::Putget, results))
    }

    /// If `v = get_p(u)` for some `u` out of `S`, then `v@` is an identity.
    pub fn hippocratic(&self) -> Result<LawReport, LensError> {
        let lens = self.lens;
        let mut requests = HashMap::new();
        for (_, s, _) in &self.points {
            if !requests.contains_key(s) {
                let us = lens
                    .source()
                    .arrows_from(s)
                    .ok_or_else(|| LensError::NotEnumerable("source space".into()))?;
                requests.insert(s.clone(), us);
            }
        }
        let results = self
            .points
            .par_iter()
            .map(|pt| {
                let (p, s, v) = pt;
                let mut in_image = false;
                for u in &requests[s] {
                    if &lens.get_arr(p, u)? == v {
                        in_image = true;
                        break;
                    }
                }
                if !in_image {
                    return Ok(Outcome::Skip);
                }
                let eq = "v@ = id";
                Ok(match self.put(pt) {
                    Ok(r) if lens.target().is_id(&r.amendment) => Outcome::Ok,
                    Ok(r) => self.fail(
                        pt,
                        eq,
                        "an identity".into(),
                        lens.target().arr_label(&r.amendment),
                    ),
                    Err(e) => self.fail(pt, eq, "an identity".into(), e.to_string()),
                })
            })
            .collect::<Result<Vec<_>, LensError>>()?;
        Ok(LawReport::from_results(Law::Hippocratic, results))
    }

    /// `put(v;v′) = put(v);put(v′)` componentwise. Pairs whose first
    /// amendment is not an identity are skipped, since `v′` would then not
    /// start where the second put expects it. Second steps range over the
    /// target's outgoing arrows, or over the point set when the target is
    /// open.
    #[allow(clippy::type_complexity)]
    pub fn putput(&self) -> Result<LawReport, LensError> {
        let lens = self.lens;
        let (pc, sc, tc) = (lens.params(), lens.source(), lens.target());
        let results = self
            .points
            .par_iter()
            .map(
                |pt| -> Result<Vec<Outcome<(Point<L>, String)>>, LensError> {
                    let Ok(r1) = self.put(pt) else {
                        return Ok(vec![Outcome::Skip]);
                    };
                    if !tc.is_id(&r1.amendment) {
                        return Ok(vec![Outcome::Skip]);
                    }
                    let p2 = pc.cod(&r1.update)?;
                    let s2 = sc.cod(&r1.request)?;
                    let mid = tc.cod(&pt.2)?;
                    let seconds: Vec<_> = match tc.arrows_from(&mid) {
                        Some(vs) => vs,
                        None => self
                            .points
                            .iter()
                            .filter(|q| q.0 == p2 && q.1 == s2)
                            .map(|q| q.2.clone())
                            .collect(),
                    };
                    let mut out = Vec::new();
                    for v2 in seconds {
                        let key = (pt.clone(), tc.arr_label(&v2));
                        let label = format!("{} then v′={}", self.label(pt), key.1);
                        let eq = "put(v;v′) = put(v);put(v′)";
                        let second = (p2.clone(), s2.clone(), v2.clone());
                        let whole = (pt.0.clone(), pt.1.clone(), tc.compose(&pt.2, &v2)?);
                        let (r2, rw) = match (self.put(&second), self.put(&whole)) {
                            (Ok(a), Ok(b)) => (a, b),
                            _ => {
                                out.push(Outcome::Skip);
                                continue;
                            }
                        };
                        let expected = super::PutResult {
                            update: pc.compose(&r1.update, &r2.update)?,
                            request: sc.compose(&r1.request, &r2.request)?,
                            amendment: r2.amendment.clone(),
                        };
                        if expected == rw {
                            out.push(Outcome::Ok);
                        } else {
                            out.push(Outcome::Fail(
                                key,
                                Counterexample {
                                    point: label,
                                    equation: eq.into(),
                                    expected: put_label(lens, &expected),
                                    actual: put_label(lens, &rw),
                                },
                            ));
                        }
                    }
                    Ok(out)
                },
            )
            .collect::<Result<Vec<_>, LensError>>()?;
        Ok(LawReport::from_results(
            Law::Putput,
            results.into_iter().flatten().collect(),
        ))
    }

    pub fn check(&self, law: Law) -> Result<LawReport, LensError> {
        match law {
            Law::Stability => self.stability(),
            Law::Putget => self.putget(),
            Law::Hippocratic => self.hippocratic(),
            Law::Putput => self.putput(),
        }
    }

    pub fn run(&self, laws: &[Law]) -> Result<Vec<LawReport>, LensError> {
        laws.iter().map(|&l| self.check(l)).collect()
    }
}

pub fn check_stability<L: AlaLens + ?Sized>(lens: &L) -> Result<LawReport, LensError> {
    LawSuite::exhaustive(lens)?.stability()
}

pub fn check_putget<L: AlaLens + ?Sized>(lens: &L) -> Result<LawReport, LensError> {
    LawSuite::exhaustive(lens)?.putget()
}

pub fn check_hippocratic<L: AlaLens + ?Sized>(lens: &L) -> Result<LawReport, LensError> {
    LawSuite::exhaustive(lens)?.hippocratic()
}

pub fn check_putput<L: AlaLens + ?Sized>(lens: &L) -> Result<LawReport, LensError> {
    LawSuite::exhaustive(lens)?.putput()
}

/// Stability and Putget. Hippocraticness is reported separately.
pub fn is_well_behaved<L: AlaLens + ?Sized>(lens: &L) -> Result<bool, LensError> {
    let suite = LawSuite::exhaustive(lens)?;
    Ok(suite.stability()?.passed() && suite.putget()?.passed())
}
