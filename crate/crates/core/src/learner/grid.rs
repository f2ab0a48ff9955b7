//! A one-dimensional learner tabulated on a finite grid, so that it can be
//! composed and checked with the generic finite-category machinery.

use std::collections::BTreeMap;

use super::{learner_put, Learner, LearnerError, LearnerLens};
use crate::fincat::{FinCat, Functor, NatTrans};
use crate::lens::{make_lens, PutRow, TableLens};
use crate::pfun::ParamFunctor;

/// Object name of a grid value.
pub fn grid_name(x: f64) -> String {
    // -0 and 0 are the same grid point
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x}")
    }
}

fn arrow(a: &str, b: &str) -> String {
    format!("{a}->{b}")
}

/// The learner as a table lens whose parameter, source and target spaces are
/// the codiscrete category on `grid`. Fails unless the learner is 1-d and
/// every get and put value stays on the grid.
pub fn grid_lens(ll: &LearnerLens, grid: &[f64]) -> Result<TableLens, LearnerError> {
    let d = ll.dims();
    if (d.k, d.m, d.n) != (1, 1, 1) {
        return Err(LearnerError::BadSpec(
            "grid lenses need k = m = n = 1".into(),
        ));
    }
    let on = |x: f64| -> Result<String, LearnerError> {
        if grid.contains(&x) {
            Ok(grid_name(x))
        } else {
            Err(LearnerError::OffGrid(format!("{x}")))
        }
    };
    let names: Vec<String> = grid.iter().map(|x| grid_name(*x)).collect();
    let space = FinCat::codiscrete(&names).map_err(|e| LearnerError::BadSpec(e.to_string()))?;
    let cat = |e: crate::fincat::CatError| LearnerError::BadSpec(e.to_string());

    let mut on_obj = BTreeMap::new();
    for p in grid {
        let mut obj_map = BTreeMap::new();
        for a in grid {
            obj_map.insert(grid_name(*a), on(ll.implement(&[*p], &[*a])[0])?);
        }
        let arr_map = space
            .arrows()
            .map(|u| {
                let (s, t) = (space.src(u).expect("arrow"), space.dst(u).expect("arrow"));
                (u.to_string(), arrow(&obj_map[s], &obj_map[t]))
            })
            .collect();
        let f = Functor::checked(space.clone(), space.clone(), obj_map, arr_map).map_err(cat)?;
        on_obj.insert(grid_name(*p), f);
    }
    let mut on_arr = BTreeMap::new();
    for e in space.arrows() {
        let (p, p2) = (
            &on_obj[space.src(e).expect("arrow")],
            &on_obj[space.dst(e).expect("arrow")],
        );
        let components = space
            .objects()
            .map(|a| {
                (
                    a.to_string(),
                    arrow(p.ob(a).expect("object"), p2.ob(a).expect("object")),
                )
            })
            .collect();
        on_arr.insert(
            e.to_string(),
            NatTrans::checked(p.clone(), p2.clone(), components).map_err(cat)?,
        );
    }
    let get = ParamFunctor::new(space.clone(), space.clone(), space.clone(), on_obj, on_arr)
        .map_err(cat)?;

    let mut rows = Vec::new();
    for p in grid {
        for a in grid {
            let view = on(ll.implement(&[*p], &[*a])[0])?;
            for b in grid {
                let r = learner_put(ll, &[*p], &[*a], &[*b])?;
                let (p2, a2, reached) = (on(r.p[0])?, on(r.a[0])?, on(r.amendment.to[0])?);
                rows.push(PutRow {
                    p: grid_name(*p),
                    s: grid_name(*a),
                    v: arrow(&view, &grid_name(*b)),
                    e: arrow(&grid_name(*p), &p2),
                    u: arrow(&grid_name(*a), &a2),
                    amendment: arrow(&grid_name(*b), &reached),
                });
            }
        }
    }
    Ok(make_lens(get, rows)?)
}
