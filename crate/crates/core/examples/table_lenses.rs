//! Table lenses: puts given row by row, checked against the lens laws.

use lenslab::compose::identity_lens;
use lenslab::fixtures::walking_arrow;
use lenslab::lens::{
    check_hippocratic, check_putget, check_stability, lens_put, materialize, PutRow,
};

fn main() {
    let id = materialize(&identity_lens(walking_arrow())).unwrap();
    let r = lens_put(&id, &"*".to_string(), &"X".to_string(), &"f".to_string()).unwrap();
    println!(
        "put(f) at X: e={} u={} v@={}",
        r.update, r.request, r.amendment
    );
    println!("{}", check_stability(&id).unwrap());
    println!("{}", check_putget(&id).unwrap());
    println!("{}", check_hippocratic(&id).unwrap());

    // an identity view update now moves the source: Stability fails
    let bad = id.with_row_unchecked(PutRow {
        p: "*".into(),
        s: "X".into(),
        v: "idX".into(),
        e: "id_*".into(),
        u: "f".into(),
        amendment: "f".into(),
    });
    println!("{}", check_stability(&bad).unwrap());
}
