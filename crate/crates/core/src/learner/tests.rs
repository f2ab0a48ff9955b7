use std::sync::Arc;

use super::*;
use crate::lens::is_well_behaved;

fn scale(eps: f64) -> LearnerLens {
    LearnerLens::new(Arc::new(Linear { inp: 1, out: 1 }), eps)
}

#[test]
fn total_error_examples() {
    let sq = Squared;
    assert_eq!(total_error(&sq, &[4.0, -1.0], &[4.0, -1.0]).unwrap(), 0.0);
    assert_eq!(total_error(&sq, &[2.0], &[3.0]).unwrap(), 0.5);
    assert_eq!(total_error(&sq, &[1.0, 2.0], &[0.0, 0.0]).unwrap(), 2.5);
    assert!(matches!(
        total_error(&sq, &[1.0], &[1.0, 2.0]),
        Err(LearnerError::DimMismatch { .. })
    ));
}

#[test]
fn one_step_on_the_scalar_product() {
    // dE/dp = (pa - b) a = -2, dE/da = (pa - b) p = -1
    let r = learner_put(&scale(0.1), &[1.0], &[2.0], &[3.0]).unwrap();
    assert!((r.p[0] - 1.2).abs() < 1e-12);
    assert!((r.a[0] - 2.1).abs() < 1e-12);
    assert!((r.amendment.to[0] - 2.52).abs() < 1e-12);
    assert_eq!(r.amendment.from, vec![3.0]);
}

#[test]
fn consistent_target_is_a_fixed_point() {
    let r = learner_put(&scale(0.1), &[0.7], &[-1.3], &[0.7 * -1.3]).unwrap();
    assert_eq!((r.p, r.a), (vec![0.7], vec![-1.3]));
    assert_eq!(r.amendment.from, r.amendment.to);
}

#[test]
fn parameterless_learner_moves_only_its_input() {
    let l = LearnerLens::new(Arc::new(Tanh { dim: 2 }), 0.5);
    let r = learner_put(&l, &[], &[0.1, -0.2], &[0.0, 0.0]).unwrap();
    assert!(r.p.is_empty());
    assert_ne!(r.a, vec![0.1, -0.2]);
}

#[test]
fn bad_inputs_are_rejected() {
    let l = scale(0.1);
    assert!(matches!(
        learner_put(&l, &[1.0, 2.0], &[1.0], &[1.0]),
        Err(LearnerError::DimMismatch {
            what: "parameter",
            ..
        })
    ));
    assert!(matches!(
        learner_put(&scale(0.0), &[1.0], &[1.0], &[1.0]),
        Err(LearnerError::BadStep(_))
    ));
    assert!(matches!(
        learner_put(&l, &[f64::INFINITY], &[1.0], &[1.0]),
        Err(LearnerError::NonFiniteGradient(_))
    ));
}

#[test]
fn gradcheck_shipped_functions() {
    let sq = Squared;
    assert!(
        gradcheck(&Linear { inp: 1, out: 1 }, &sq, &[1.0], &[2.0], &[3.0])
            .unwrap()
            .passed()
    );
    let aff = Affine { inp: 2, out: 2 };
    let rep = gradcheck(
        &aff,
        &sq,
        &[0.5, -1.0, 2.0, 0.25, 0.1, -0.3],
        &[1.5, -0.5],
        &[0.0, 1.0],
    )
    .unwrap();
    assert!(rep.passed(), "{rep}");
    let chain = Chain::new(vec![
        Arc::new(aff),
        Arc::new(Tanh { dim: 2 }),
        Arc::new(Linear { inp: 2, out: 1 }),
    ]);
    let p: Vec<f64> = (0..8).map(|i| 0.3 * i as f64 - 1.0).collect();
    let rep = gradcheck(&chain, &sq, &p, &[0.2, 0.4], &[0.5]).unwrap();
    assert!(rep.passed(), "{rep}");
}

#[derive(Debug)]
struct WrongScale;

impl ParamFn for WrongScale {
    fn dims(&self) -> Dims {
        Dims { k: 1, m: 1, n: 1 }
    }
    fn eval(&self, p: &[f64], a: &[f64]) -> Vec<f64> {
        vec![p[0] * a[0]]
    }
    fn vjp(&self, p: &[f64], a: &[f64], g: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
        // the two partials are swapped
        Some((vec![g[0] * p[0]], vec![g[0] * a[0]]))
    }
}

#[test]
fn gradcheck_catches_a_wrong_gradient() {
    let rep = gradcheck(&WrongScale, &Squared, &[1.0], &[2.0], &[3.0]).unwrap();
    assert!(!rep.passed());
    let w = rep.worst().unwrap();
    assert_eq!((w.wrt, w.index), ("p", 0));
}

#[test]
fn identity_learner_is_a_two_sided_unit() {
    let l = scale(0.1);
    let id = identity_learner(1, 0.37);
    let single = learner_put(&l, &[1.0], &[2.0], &[3.0]).unwrap();
    let left = learner_seq_compose(id.clone(), l.clone()).unwrap();
    let right = learner_seq_compose(l.clone(), id).unwrap();
    // the identity learner has no parameters, so the composite parameter is p
    let via_left = left.put(&[1.0], &[2.0], &[3.0]).unwrap();
    assert_eq!(via_left.p, single.p);
    assert_eq!(via_left.amendment, single.amendment);
    let via_right = right.put(&[1.0], &[2.0], &[3.0]).unwrap();
    assert_eq!(via_right.p, single.p);
    assert_eq!(via_right.amendment, single.amendment);

    // A smaller request step makes the identity learner stop short of b.
    let timid = LearnerLens::new(Arc::new(Identity { dim: 1 }), 0.37).with_eps_a(0.37);
    let off = learner_seq_compose(timid, l)
        .unwrap()
        .put(&[1.0], &[2.0], &[3.0])
        .unwrap();
    assert_ne!(off.amendment, single.amendment);
}

#[test]
fn composite_dimension_mismatch() {
    let a = LearnerLens::new(Arc::new(Linear { inp: 1, out: 2 }), 0.1);
    assert!(learner_seq_compose(a.clone(), a).is_err());
}

#[test]
fn spec_round_trip() {
    let text = r#"{"layers":[{"kind":"affine","in":2,"out":1,"w":[[1.0,2.0]],"b":[0.5]}],"eps":0.1,"err":"squared"}"#;
    let spec: LearnerSpec = serde_json::from_str(text).unwrap();
    let l = spec.build().unwrap();
    assert_eq!(l.dims(), Dims { k: 3, m: 2, n: 1 });
    assert_eq!(spec.params().unwrap(), Some(vec![1.0, 2.0, 0.5]));
    assert!(serde_json::from_str::<LearnerSpec>(r#"{"layers":[],"eps":0.1,"extra":1}"#).is_err());
    let bad: LearnerSpec =
        serde_json::from_str(r#"{"layers":[{"kind":"tanh","dim":2}],"eps":0.1,"err":"hinge"}"#)
            .unwrap();
    assert!(matches!(bad.build(), Err(LearnerError::UnknownErrorFn(_))));
}

#[test]
fn grid_lens_is_well_behaved() {
    let t = grid_lens(&scale(1.0), &[-1.0, 0.0, 1.0]).unwrap();
    assert!(is_well_behaved(&t).unwrap());
    assert!(matches!(
        grid_lens(&scale(0.5), &[-1.0, 0.0, 1.0]),
        Err(LearnerError::OffGrid(_))
    ));
}
