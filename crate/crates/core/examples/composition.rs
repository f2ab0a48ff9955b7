//! Sequential and parallel composition, associativity and units.

use lenslab::compose::{
    check_associativity, check_equivalence, find_equivalence, identity_lens, par_compose,
    seq_compose, LeftUnitor, DEFAULT_ISO_BOUND,
};
use lenslab::fixtures::lens_chain;
use lenslab::lens::{check_putget, check_stability, materialize, ParamGet};
use rand::SeedableRng;

fn main() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let chain = lens_chain(&mut rng, 3);
    let (k, l, m) = (&chain[0], &chain[1], &chain[2]);

    let kl = seq_compose(k, l).unwrap();
    println!("k;l  {}", check_stability(&kl).unwrap());
    println!("k;l  {}", check_putget(&kl).unwrap());
    let both = par_compose(k, m);
    println!("k||m {}", check_putget(&both).unwrap());

    println!(
        "(k;l);m vs k;(l;m): {}",
        check_associativity(k, l, m, None).unwrap()
    );

    let unit = seq_compose(identity_lens(k.source().clone()), k).unwrap();
    println!(
        "id;k vs k: {}",
        check_equivalence(&unit, k, &LeftUnitor).unwrap()
    );

    // materialized composites are plain table lenses again
    let table = materialize(&unit).unwrap();
    let iota = find_equivalence(&table, k, DEFAULT_ISO_BOUND).unwrap();
    println!("searched witness: {:?}", iota.map(|f| f.obj_map));
}
