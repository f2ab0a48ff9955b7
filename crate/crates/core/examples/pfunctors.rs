//! A parameterised get: a functor per parameter, a natural transformation
//! per parameter arrow.

use lenslab::fixtures::pararrow_pfun;
use lenslab::pfun::{pfun_compose, pfun_diag, pfun_get};

fn main() {
    let g = pararrow_pfun();
    for p in ["p", "p'"] {
        for s in ["X", "Y"] {
            println!("get_{p}({s}) = {}", pfun_get(&g, p, s).unwrap());
        }
    }
    // the diagonal: change the parameter along e and the source along f at once
    println!("get_e(f) = {}", pfun_diag(&g, "e", "f").unwrap());

    let gg = pfun_compose(&g, &g).unwrap();
    println!("composite has {} parameters", gg.params().object_count());
    println!(
        "(e|e) at X = {}",
        gg.at_arrow("(e|e)").unwrap().component("X").unwrap()
    );
}
