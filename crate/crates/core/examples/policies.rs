//! An update policy turns a get into a lens. Least change is functorial on
//! these fixtures: the lens of a composite get is the composite of lenses.

use lenslab::compose::{check_policy_functoriality, LeastChange, UpdatePolicy};
use lenslab::fixtures::pararrow_pfun;
use lenslab::lens::is_well_behaved;

fn main() {
    let g = pararrow_pfun();
    let lens = LeastChange.apply(&g).unwrap();
    println!(
        "least-change lens well behaved: {}",
        is_well_behaved(&lens).unwrap()
    );
    for r in lens.rows().iter().take(4) {
        println!(
            "  at ({}, {}) put {} = ({}, {}, {})",
            r.p, r.s, r.v, r.e, r.u, r.amendment
        );
    }
    let rep = check_policy_functoriality(&LeastChange, &g, &g, None).unwrap();
    println!("{rep}");
}
