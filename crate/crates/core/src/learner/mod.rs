//! Gradient-descent learners as lenses over codiscrete real vector spaces.
//!
//! A learner moves its parameter and its input against the gradient of the
//! total error `E(p, a, b) = Σⱼ err(I(p, a)ⱼ, bⱼ)`. The amendment runs from
//! the training target `b` to the value actually reached, `I(p′, a′)`.

mod fns;
mod grid;
mod spec;

pub use fns::{Affine, Chain, Dims, Identity, Linear, ParamFn, Tanh};
pub use grid::{grid_lens, grid_name};
pub use spec::{LayerSpec, LearnerSpec};

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::lens::{Counterexample, Law, LawReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LearnerError {
    #[error("{what} has dimension {got}, expected {expected}")]
    DimMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("gradient is not finite at {0}")]
    NonFiniteGradient(String),
    #[error("step size must be positive and finite, got {0}")]
    BadStep(f64),
    #[error("unknown error function `{0}`")]
    UnknownErrorFn(String),
    #[error("bad learner spec: {0}")]
    BadSpec(String),
    #[error("no analytic gradient to check")]
    NoAnalyticGradient,
    #[error("{0} leaves the grid")]
    OffGrid(String),
    #[error(transparent)]
    Lens(#[from] crate::lens::LensError),
}

/// A scalar error `err(x, y)` with its derivative in `x`.
pub trait ErrorFn: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;
    fn err(&self, x: f64, y: f64) -> f64;
    fn d_err(&self, x: f64, y: f64) -> f64;
}

/// `(x − y)² / 2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Squared;

impl ErrorFn for Squared {
    fn name(&self) -> &str {
        "squared"
    }
    fn err(&self, x: f64, y: f64) -> f64 {
        (x - y).powi(2) / 2.0
    }
    fn d_err(&self, x: f64, y: f64) -> f64 {
        x - y
    }
}

/// Looks up an error function by name.
pub fn error_fn(name: &str) -> Result<Arc<dyn ErrorFn>, LearnerError> {
    match name {
        "squared" => Ok(Arc::new(Squared)),
        other => Err(LearnerError::UnknownErrorFn(other.into())),
    }
}

/// A codiscrete arrow: an ordered pair of points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VecDelta {
    pub from: Vec<f64>,
    pub to: Vec<f64>,
}

impl VecDelta {
    pub fn difference(&self) -> Vec<f64> {
        self.to.iter().zip(&self.from).map(|(t, f)| t - f).collect()
    }
}

/// Result of a learner put: new parameter, request and amendment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LearnerPut {
    pub p: Vec<f64>,
    pub a: Vec<f64>,
    pub amendment: VecDelta,
}

/// Anything that learns: a single layer or a composite.
pub trait Learner: Send + Sync {
    fn dims(&self) -> Dims;
    fn implement(&self, p: &[f64], a: &[f64]) -> Vec<f64>;
    fn put(&self, p: &[f64], a: &[f64], b: &[f64]) -> Result<LearnerPut, LearnerError>;
}

#[derive(Debug, Clone)]
pub struct LearnerLens {
    pub f: Arc<dyn ParamFn>,
    pub eps: f64,
    /// Step for the request; `eps` when absent.
    pub eps_a: Option<f64>,
    pub err: Arc<dyn ErrorFn>,
}

impl LearnerLens {
    pub fn new(f: Arc<dyn ParamFn>, eps: f64) -> LearnerLens {
        LearnerLens {
            f,
            eps,
            eps_a: None,
            err: Arc::new(Squared),
        }
    }

    pub fn with_eps_a(mut self, eps_a: f64) -> LearnerLens {
        self.eps_a = Some(eps_a);
        self
    }

    pub fn with_err(mut self, err: Arc<dyn ErrorFn>) -> LearnerLens {
        self.err = err;
        self
    }

    fn check_dims(&self, p: &[f64], a: &[f64], b: &[f64]) -> Result<(), LearnerError> {
        let d = self.f.dims();
        for (what, expected, got) in [
            ("parameter", d.k, p.len()),
            ("input", d.m, a.len()),
            ("output", d.n, b.len()),
        ] {
            if expected != got {
                return Err(LearnerError::DimMismatch {
                    what,
                    expected,
                    got,
                });
            }
        }
        Ok(())
    }

    /// `(∇_p E, ∇_a E)`, analytic when available.
    pub fn gradients(&self, p: &[f64], a: &[f64], b: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let y = self.f.eval(p, a);
        let g: Vec<f64> = y
            .iter()
            .zip(b)
            .map(|(y, b)| self.err.d_err(*y, *b))
            .collect();
        match self.f.vjp(p, a, &g) {
            Some(grads) => grads,
            None => numeric_gradients(&*self.f, &*self.err, p, a, b),
        }
    }
}

/// The identity learner on `ℝ^dim`. It has no parameters, so `eps` is
/// never used; the request step is 1, which makes its request exactly the
/// training target and the learner a unit for composition.
pub fn identity_learner(dim: usize, eps: f64) -> LearnerLens {
    LearnerLens::new(Arc::new(Identity { dim }), eps).with_eps_a(1.0)
}

/// `Σⱼ err(yⱼ, bⱼ)`.
pub fn total_error(err: &dyn ErrorFn, y: &[f64], b: &[f64]) -> Result<f64, LearnerError> {
    if y.len() != b.len() {
        return Err(LearnerError::DimMismatch {
            what: "target",
            expected: y.len(),
            got: b.len(),
        });
    }
    Ok(y.iter().zip(b).map(|(y, b)| err.err(*y, *b)).sum())
}

fn check_step(eps: f64) -> Result<(), LearnerError> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(LearnerError::BadStep(eps))
    }
}

/// One gradient step: `p′ = p − ε∇_p E`, `a′ = a − ε_a∇_a E`, amendment
/// `(b, I(p′, a′))`.
pub fn learner_put(
    ll: &LearnerLens,
    p: &[f64],
    a: &[f64],
    b: &[f64],
) -> Result<LearnerPut, LearnerError> {
    ll.check_dims(p, a, b)?;
    check_step(ll.eps)?;
    let eps_a = ll.eps_a.unwrap_or(ll.eps);
    check_step(eps_a)?;
    let (gp, ga) = ll.gradients(p, a, b);
    if gp.iter().chain(&ga).any(|x| !x.is_finite()) {
        return Err(LearnerError::NonFiniteGradient(format!(
            "p={p:?}, a={a:?}, b={b:?}"
        )));
    }
    let p2: Vec<f64> = p.iter().zip(&gp).map(|(x, g)| x - ll.eps * g).collect();
    let a2: Vec<f64> = a.iter().zip(&ga).map(|(x, g)| x - eps_a * g).collect();
    let reached = ll.f.eval(&p2, &a2);
    Ok(LearnerPut {
        p: p2,
        a: a2,
        amendment: VecDelta {
            from: b.to_vec(),
            to: reached,
        },
    })
}

impl Learner for LearnerLens {
    fn dims(&self) -> Dims {
        self.f.dims()
    }
    fn implement(&self, p: &[f64], a: &[f64]) -> Vec<f64> {
        self.f.eval(p, a)
    }
    fn put(&self, p: &[f64], a: &[f64], b: &[f64]) -> Result<LearnerPut, LearnerError> {
        learner_put(self, p, a, b)
    }
}

/// Sequential composite of two learners. Parameters are concatenated.
pub struct SeqLearner<A, B> {
    first: A,
    second: B,
}

pub fn learner_seq_compose<A: Learner, B: Learner>(
    first: A,
    second: B,
) -> Result<SeqLearner<A, B>, LearnerError> {
    let (d1, d2) = (first.dims(), second.dims());
    if d1.n != d2.m {
        return Err(LearnerError::DimMismatch {
            what: "second learner input",
            expected: d1.n,
            got: d2.m,
        });
    }
    Ok(SeqLearner { first, second })
}

impl<A: Learner, B: Learner> Learner for SeqLearner<A, B> {
    fn dims(&self) -> Dims {
        let (d1, d2) = (self.first.dims(), self.second.dims());
        Dims {
            k: d1.k + d2.k,
            m: d1.m,
            n: d2.n,
        }
    }

    fn implement(&self, p: &[f64], a: &[f64]) -> Vec<f64> {
        let (p1, p2) = p.split_at(self.first.dims().k);
        self.second.implement(p2, &self.first.implement(p1, a))
    }

    /// The second learner trains towards `b` and requests a new intermediate
    /// value, which the first learner then trains towards. The amendment
    /// ends at the composite's value under the new parameters.
    fn put(&self, p: &[f64], a: &[f64], b: &[f64]) -> Result<LearnerPut, LearnerError> {
        let d = self.dims();
        if p.len() != d.k {
            return Err(LearnerError::DimMismatch {
                what: "parameter",
                expected: d.k,
                got: p.len(),
            });
        }
        let (p1, p2) = p.split_at(self.first.dims().k);
        let x = self.first.implement(p1, a);
        let second = self.second.put(p2, &x, b)?;
        let first = self.first.put(p1, a, &second.a)?;
        let reached = self.second.implement(&second.p, &first.amendment.to);
        Ok(LearnerPut {
            p: [first.p, second.p].concat(),
            a: first.a,
            amendment: VecDelta {
                from: b.to_vec(),
                to: reached,
            },
        })
    }
}

fn numeric_gradients(
    f: &dyn ParamFn,
    err: &dyn ErrorFn,
    p: &[f64],
    a: &[f64],
    b: &[f64],
) -> (Vec<f64>, Vec<f64>) {
    let e = |p: &[f64], a: &[f64]| total_error(err, &f.eval(p, a), b).expect("dimensions");
    let partial = |v: &[f64], i: usize, at: &dyn Fn(&[f64]) -> f64| {
        let mut hi = v.to_vec();
        let mut lo = v.to_vec();
        hi[i] += FD_STEP;
        lo[i] -= FD_STEP;
        (at(&hi) - at(&lo)) / (2.0 * FD_STEP)
    };
    let gp = (0..p.len()).map(|i| partial(p, i, &|q| e(q, a))).collect();
    let ga = (0..a.len()).map(|i| partial(a, i, &|x| e(p, x))).collect();
    (gp, ga)
}

/// Central difference step.
pub const FD_STEP: f64 = 1e-6;
/// Largest accepted relative error between analytic and numeric gradients.
pub const GRADCHECK_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradEntry {
    /// `"p"` or `"a"`.
    pub wrt: &'static str,
    pub index: usize,
    pub analytic: f64,
    pub numeric: f64,
    pub rel_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradReport {
    pub entries: Vec<GradEntry>,
}

impl GradReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.rel_err < GRADCHECK_TOL)
    }

    pub fn worst(&self) -> Option<&GradEntry> {
        self.entries
            .iter()
            .max_by(|x, y| x.rel_err.total_cmp(&y.rel_err))
    }
}

impl fmt::Display for GradReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "pass" } else { "FAIL" };
        write!(f, "gradcheck: {status}")?;
        if let Some(w) = self.worst() {
            write!(
                f,
                " (worst relative error {:.3e} at {}[{}])",
                w.rel_err, w.wrt, w.index
            )?;
        }
        for e in self.entries.iter().filter(|e| e.rel_err >= GRADCHECK_TOL) {
            write!(
                f,
                "\n  {}[{}]: analytic {} vs numeric {}",
                e.wrt, e.index, e.analytic, e.numeric
            )?;
        }
        Ok(())
    }
}

/// Compares the analytic gradient of `E` with central differences.
pub fn gradcheck(
    f: &dyn ParamFn,
    err: &dyn ErrorFn,
    p: &[f64],
    a: &[f64],
    b: &[f64],
) -> Result<GradReport, LearnerError> {
    let y = f.eval(p, a);
    let g: Vec<f64> = y.iter().zip(b).map(|(y, b)| err.d_err(*y, *b)).collect();
    let (ap, aa) = f.vjp(p, a, &g).ok_or(LearnerError::NoAnalyticGradient)?;
    let (np, na) = numeric_gradients(f, err, p, a, b);
    let mut entries = Vec::new();
    for (wrt, an, nu) in [("p", ap, np), ("a", aa, na)] {
        for (index, (x, y)) in an.iter().zip(&nu).enumerate() {
            let denom = 1f64.max(x.abs()).max(y.abs());
            entries.push(GradEntry {
                wrt,
                index,
                analytic: *x,
                numeric: *y,
                rel_err: (x - y).abs() / denom,
            });
        }
    }
    Ok(GradReport { entries })
}

/// A probe `(p, a, b)`.
pub type Probe = (Vec<f64>, Vec<f64>, Vec<f64>);

/// Stability at consistent probes (`b` replaced by `I(p, a)`) and the
/// amended Putget (amendment from `b` to `I(p′, a′)`) at every probe.
pub fn check_learner_laws<L: Learner + ?Sized>(
    l: &L,
    probes: &[Probe],
) -> Result<(LawReport, LawReport), LearnerError> {
    let mut stab = Vec::new();
    let mut putget = Vec::new();
    for (p, a, b) in probes {
        let at = format!("(p={p:?}, a={a:?}, b={b:?})");
        let consistent = l.implement(p, a);
        let r = l.put(p, a, &consistent)?;
        if &r.p != p || &r.a != a {
            stab.push(Counterexample {
                point: format!("(p={p:?}, a={a:?}, b=I(p,a)={consistent:?})"),
                equation: "put(id) = (id, id, id)".into(),
                expected: format!("p′={p:?}, a′={a:?}"),
                actual: format!("p′={:?}, a′={:?}", r.p, r.a),
            });
        }
        let r = l.put(p, a, b)?;
        let reached = l.implement(&r.p, &r.a);
        if r.amendment.from != *b || r.amendment.to != reached {
            putget.push(Counterexample {
                point: at,
                equation: "v@ = (b, I(p′, a′))".into(),
                expected: format!("({b:?}, {reached:?})"),
                actual: format!("({:?}, {:?})", r.amendment.from, r.amendment.to),
            });
        }
    }
    let report = |law, cx: Vec<Counterexample>| LawReport {
        law,
        checked: probes.len(),
        skipped: 0,
        counterexamples: cx,
    };
    Ok((report(Law::Stability, stab), report(Law::Putget, putget)))
}

#[cfg(test)]
mod tests;
