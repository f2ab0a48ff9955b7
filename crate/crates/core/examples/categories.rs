//! Finite categories from JSON, functors, and the Godement product.

use lenslab::fincat::{godement_product, validate_category, CategorySpec};
use lenslab::fixtures::nat_trans_fixture;

fn main() {
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/data/cat2.json"
    ))
    .unwrap();
    let spec: CategorySpec = serde_json::from_str(&text).unwrap();
    let c = validate_category(&spec).unwrap();
    println!("{} objects, {} arrows", c.object_count(), c.arrow_count());
    for (a, b, ab) in c.composition_table() {
        println!("  {a} ; {b} = {ab}");
    }

    let mut broken = spec.clone();
    broken.compose.pop();
    match validate_category(&broken) {
        Ok(_) => println!("unexpectedly valid"),
        Err(e) => println!("rejected: {e}"),
    }

    let (alpha, beta) = nat_trans_fixture();
    let ab = godement_product(&alpha, &beta).unwrap();
    println!("alpha * beta components: {:?}", ab.components);
}
