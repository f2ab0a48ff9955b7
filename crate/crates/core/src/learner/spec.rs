use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{error_fn, Affine, Chain, Identity, LearnerError, LearnerLens, Linear, ParamFn, Tanh};

/// One layer of a learner spec file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum LayerSpec {
    Affine {
        #[serde(rename = "in")]
        inp: usize,
        out: usize,
        #[serde(default)]
        w: Option<Vec<Vec<f64>>>,
        #[serde(default)]
        b: Option<Vec<f64>>,
    },
    Linear {
        #[serde(rename = "in")]
        inp: usize,
        out: usize,
        #[serde(default)]
        w: Option<Vec<Vec<f64>>>,
    },
    Tanh {
        dim: usize,
    },
    Identity {
        dim: usize,
    },
}

fn default_err() -> String {
    "squared".into()
}

/// A learner spec file: layers in order, step sizes and error function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LearnerSpec {
    pub layers: Vec<LayerSpec>,
    pub eps: f64,
    #[serde(default)]
    pub eps_a: Option<f64>,
    #[serde(default = "default_err")]
    pub err: String,
}

fn flatten_w(w: &[Vec<f64>], inp: usize, out: usize) -> Result<Vec<f64>, LearnerError> {
    if w.len() != out || w.iter().any(|r| r.len() != inp) {
        return Err(LearnerError::BadSpec(format!(
            "weights must be {out} rows of {inp}"
        )));
    }
    Ok(w.concat())
}

impl LayerSpec {
    fn function(&self) -> Arc<dyn ParamFn> {
        match *self {
            LayerSpec::Affine { inp, out, .. } => Arc::new(Affine { inp, out }),
            LayerSpec::Linear { inp, out, .. } => Arc::new(Linear { inp, out }),
            LayerSpec::Tanh { dim } => Arc::new(Tanh { dim }),
            LayerSpec::Identity { dim } => Arc::new(Identity { dim }),
        }
    }

    fn params(&self) -> Result<Option<Vec<f64>>, LearnerError> {
        match self {
            LayerSpec::Affine {
                inp,
                out,
                w: Some(w),
                b: Some(b),
            } => {
                if b.len() != *out {
                    return Err(LearnerError::BadSpec(format!(
                        "bias must have length {out}"
                    )));
                }
                let mut p = flatten_w(w, *inp, *out)?;
                p.extend(b);
                Ok(Some(p))
            }
            LayerSpec::Linear {
                inp,
                out,
                w: Some(w),
            } => Ok(Some(flatten_w(w, *inp, *out)?)),
            LayerSpec::Tanh { .. } | LayerSpec::Identity { .. } => Ok(Some(Vec::new())),
            _ => Ok(None),
        }
    }
}

impl LearnerSpec {
    pub fn build(&self) -> Result<LearnerLens, LearnerError> {
        if self.layers.is_empty() {
            return Err(LearnerError::BadSpec("no layers".into()));
        }
        let fns: Vec<Arc<dyn ParamFn>> = self.layers.iter().map(LayerSpec::function).collect();
        for (i, w) in fns.windows(2).enumerate() {
            if w[0].dims().n != w[1].dims().m {
                return Err(LearnerError::BadSpec(format!(
                    "layer {} outputs {} values but layer {} takes {}",
                    i,
                    w[0].dims().n,
                    i + 1,
                    w[1].dims().m
                )));
            }
        }
        for &eps in [Some(self.eps), self.eps_a].iter().flatten() {
            if !(eps > 0.0 && eps.is_finite()) {
                return Err(LearnerError::BadStep(eps));
            }
        }
        let f: Arc<dyn ParamFn> = if fns.len() == 1 {
            fns[0].clone()
        } else {
            Arc::new(Chain::new(fns))
        };
        Ok(LearnerLens {
            f,
            eps: self.eps,
            eps_a: self.eps_a,
            err: error_fn(&self.err)?,
        })
    }

    /// Parameters written into the spec, if every layer carries them.
    pub fn params(&self) -> Result<Option<Vec<f64>>, LearnerError> {
        let mut out = Vec::new();
        for l in &self.layers {
            match l.params()? {
                Some(p) => out.extend(p),
                None => return Ok(None),
            }
        }
        Ok(Some(out))
    }
}
