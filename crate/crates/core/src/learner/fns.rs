use std::fmt::Debug;
use std::sync::Arc;

/// Parameter, input and output dimensions of `I: ℝᵏ × ℝᵐ → ℝⁿ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dims {
    pub k: usize,
    pub m: usize,
    pub n: usize,
}

/// A differentiable parameterized function.
pub trait ParamFn: Send + Sync + Debug {
    fn dims(&self) -> Dims;

    fn eval(&self, p: &[f64], a: &[f64]) -> Vec<f64>;

    /// Pulls an output cotangent `g` back to `(∂/∂p, ∂/∂a)`. `None` means no
    /// analytic gradient; callers fall back to finite differences.
    fn vjp(&self, _p: &[f64], _a: &[f64], _g: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
        None
    }
}

/// `I(W, a) = W·a`, with `W` stored row-major (`out` rows of `inp`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Linear {
    pub inp: usize,
    pub out: usize,
}

impl ParamFn for Linear {
    fn dims(&self) -> Dims {
        Dims {
            k: self.inp * self.out,
            m: self.inp,
            n: self.out,
        }
    }

    fn eval(&self, p: &[f64], a: &[f64]) -> Vec<f64> {
        p.chunks(self.inp)
            .map(|row| row.iter().zip(a).map(|(w, x)| w * x).sum())
            .collect()
    }

    fn vjp(&self, p: &[f64], a: &[f64], g: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
        let mut gp = Vec::with_capacity(p.len());
        for gi in g {
            gp.extend(a.iter().map(|x| gi * x));
        }
        let mut ga = vec![0.0; self.inp];
        for (row, gi) in p.chunks(self.inp).zip(g) {
            for (acc, w) in ga.iter_mut().zip(row) {
                *acc += gi * w;
            }
        }
        Some((gp, ga))
    }
}

/// `I((W, c), a) = W·a + c`; parameters are `W` row-major, then `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Affine {
    pub inp: usize,
    pub out: usize,
}

impl ParamFn for Affine {
    fn dims(&self) -> Dims {
        Dims {
            k: self.inp * self.out + self.out,
            m: self.inp,
            n: self.out,
        }
    }

    fn eval(&self, p: &[f64], a: &[f64]) -> Vec<f64> {
        let (w, c) = p.split_at(self.inp * self.out);
        let lin = Linear {
            inp: self.inp,
            out: self.out,
        };
        lin.eval(w, a).iter().zip(c).map(|(y, c)| y + c).collect()
    }

    fn vjp(&self, p: &[f64], a: &[f64], g: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
        let (w, _) = p.split_at(self.inp * self.out);
        let lin = Linear {
            inp: self.inp,
            out: self.out,
        };
        let (mut gp, ga) = lin.vjp(w, a, g)?;
        gp.extend_from_slice(g);
        Some((gp, ga))
    }
}

/// Elementwise `tanh`, no parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tanh {
    pub dim: usize,
}

impl ParamFn for Tanh {
    fn dims(&self) -> Dims {
        Dims {
            k: 0,
            m: self.dim,
            n: self.dim,
        }
    }

    fn eval(&self, _: &[f64], a: &[f64]) -> Vec<f64> {
        a.iter().map(|x| x.tanh()).collect()
    }

    fn vjp(&self, _: &[f64], a: &[f64], g: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
        let ga = a
            .iter()
            .zip(g)
            .map(|(x, gi)| gi * (1.0 - x.tanh().powi(2)))
            .collect();
        Some((Vec::new(), ga))
    }
}

/// `I(·, a) = a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Identity {
    pub dim: usize,
}

impl ParamFn for Identity {
    fn dims(&self) -> Dims {
        Dims {
            k: 0,
            m: self.dim,
            n: self.dim,
        }
    }

    fn eval(&self, _: &[f64], a: &[f64]) -> Vec<f64> {
        a.to_vec()
    }

    fn vjp(&self, _: &[f64], _: &[f64], g: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
        Some((Vec::new(), g.to_vec()))
    }
}

/// Layers applied in order, parameters concatenated in the same order.
#[derive(Debug, Clone)]
pub struct Chain {
    layers: Vec<Arc<dyn ParamFn>>,
}

impl Chain {
    /// Panics unless consecutive layers agree on dimensions.
    pub fn new(layers: Vec<Arc<dyn ParamFn>>) -> Chain {
        assert!(!layers.is_empty(), "empty chain");
        for w in layers.windows(2) {
            assert_eq!(
                w[0].dims().n,
                w[1].dims().m,
                "layer dimensions do not chain"
            );
        }
        Chain { layers }
    }

    pub fn layers(&self) -> &[Arc<dyn ParamFn>] {
        &self.layers
    }

    fn split<'a>(&self, p: &'a [f64]) -> Vec<&'a [f64]> {
        let mut rest = p;
        let mut out = Vec::new();
        for l in &self.layers {
            let (head, tail) = rest.split_at(l.dims().k);
            out.push(head);
            rest = tail;
        }
        out
    }
}

impl ParamFn for Chain {
    fn dims(&self) -> Dims {
        Dims {
            k: self.layers.iter().map(|l| l.dims().k).sum(),
            m: self.layers[0].dims().m,
            n: self.layers[self.layers.len() - 1].dims().n,
        }
    }

    fn eval(&self, p: &[f64], a: &[f64]) -> Vec<f64> {
        self.layers
            .iter()
            .zip(self.split(p))
            .fold(a.to_vec(), |x, (l, pl)| l.eval(pl, &x))
    }

    fn vjp(&self, p: &[f64], a: &[f64], g: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
        let ps = self.split(p);
        let mut inputs = vec![a.to_vec()];
        for (l, pl) in self.layers.iter().zip(&ps) {
            let next = l.eval(pl, inputs.last().expect("input"));
            inputs.push(next);
        }
        let mut grads = Vec::new();
        let mut g = g.to_vec();
        for (i, l) in self.layers.iter().enumerate().rev() {
            let (gp, ga) = l.vjp(ps[i], &inputs[i], &g)?;
            grads.push(gp);
            g = ga;
        }
        grads.reverse();
        Some((grads.concat(), g))
    }
}
