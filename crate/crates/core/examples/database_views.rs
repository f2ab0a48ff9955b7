//! The employee database: an IT view, an ML view of it, and the quit and
//! trans policies compared on the update w.

use lenslab::compose::ComposableGet;
use lenslab::lens::lens_put;
use lenslab::modelspace::{as_ala_lens, compare_policies, scenario_w, view_get, Policy};

fn main() {
    let w = scenario_w();
    let (it, ml) = (w.first_view().unwrap(), w.second_view().unwrap());
    let (b, _) = view_get(&it, "*", &w.source, None).unwrap();
    let (c, _) = view_get(&ml, "*", &b, None).unwrap();
    println!("A = {}\nB = {b}\nC = {c}", w.source);

    let long = it.then(&ml).unwrap();
    let update = w.update().unwrap();
    for policy in [Policy::Quit, Policy::Trans] {
        let lens = as_ala_lens(policy, &long);
        let r = lens_put(&lens, &w.selected_theta(), &w.source, &update).unwrap();
        println!("{policy}: A' = {}", r.request.to);
    }

    for policy in [Policy::Quit, Policy::Trans] {
        println!("{}", compare_policies(&w, policy).unwrap());
    }
}
