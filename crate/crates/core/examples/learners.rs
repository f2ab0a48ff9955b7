//! Gradient-descent learners: one step, composition, gradient checks and a
//! grid tabulation that composes like any finite lens.

use std::sync::Arc;

use lenslab::compose::seq_compose;
use lenslab::learner::{
    error_fn, gradcheck, grid_lens, learner_put, learner_seq_compose, Affine, Chain, Learner,
    LearnerLens, Linear, Tanh,
};
use lenslab::lens::{is_well_behaved, lens_put};

fn main() {
    let scale = LearnerLens::new(Arc::new(Linear { inp: 1, out: 1 }), 0.1);
    let r = learner_put(&scale, &[1.0], &[2.0], &[3.0]).unwrap();
    println!(
        "p' = {:?}, a' = {:?}, amended target = {:?}",
        r.p, r.a, r.amendment.to
    );

    let hidden = LearnerLens::new(
        Arc::new(Chain::new(vec![
            Arc::new(Affine { inp: 2, out: 2 }),
            Arc::new(Tanh { dim: 2 }),
        ])),
        0.05,
    );
    let readout = LearnerLens::new(Arc::new(Linear { inp: 2, out: 1 }), 0.05).with_eps_a(1.0);
    let net = learner_seq_compose(hidden.clone(), readout).unwrap();
    let p = [0.5, -0.3, 0.8, 0.1, 0.1, -0.2, 1.2, -0.7];
    let step = net.put(&p, &[0.4, -1.1], &[0.25]).unwrap();
    println!(
        "two-layer step reaches {:?} (target 0.25)",
        step.amendment.to
    );

    let g = gradcheck(
        &*hidden.f,
        &*error_fn("squared").unwrap(),
        &p[..6],
        &[0.4, -1.1],
        &[0.3, -0.3],
    )
    .unwrap();
    println!("{g}");

    let unit = LearnerLens::new(Arc::new(Linear { inp: 1, out: 1 }), 1.0);
    let table = grid_lens(&unit, &[-1.0, 0.0, 1.0]).unwrap();
    println!(
        "grid lens well behaved: {}",
        is_well_behaved(&table).unwrap()
    );
    let twice = seq_compose(&table, &table).unwrap();
    let r = lens_put(
        &twice,
        &("1".into(), "-1".into()),
        &"1".into(),
        &"-1->1".into(),
    )
    .unwrap();
    println!(
        "grid composite put: e={:?} u={} v@={}",
        r.update, r.request, r.amendment
    );
}
