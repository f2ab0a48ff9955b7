use std::fmt::Debug;
use std::hash::Hash;

use super::{pair_name, CatError, FinCat};

/// A category whose objects and arrows are plain values.
///
/// Finite categories enumerate their objects and outgoing arrows; open spaces
/// (relational models, real vector spaces) return `None` and are checked on
/// supplied sample points instead.
pub trait Category: Clone + PartialEq + Send + Sync {
    type Ob: Clone + Eq + Ord + Hash + Debug + Send + Sync;
    type Arr: Clone + Eq + Ord + Hash + Debug + Send + Sync;

    fn dom(&self, f: &Self::Arr) -> Result<Self::Ob, CatError>;
    fn cod(&self, f: &Self::Arr) -> Result<Self::Ob, CatError>;
    fn id(&self, x: &Self::Ob) -> Result<Self::Arr, CatError>;
    /// Diagrammatic composite `f;g`.
    fn compose(&self, f: &Self::Arr, g: &Self::Arr) -> Result<Self::Arr, CatError>;

    fn contains_ob(&self, x: &Self::Ob) -> bool;
    fn contains_arr(&self, f: &Self::Arr) -> bool;

    fn objects(&self) -> Option<Vec<Self::Ob>> {
        None
    }

    fn arrows_from(&self, _x: &Self::Ob) -> Option<Vec<Self::Arr>> {
        None
    }

    fn ob_label(&self, x: &Self::Ob) -> String;
    fn arr_label(&self, f: &Self::Arr) -> String;

    fn is_id(&self, f: &Self::Arr) -> bool {
        self.dom(f).and_then(|x| self.id(&x)).is_ok_and(|i| &i == f)
    }

    fn all_arrows(&self) -> Option<Vec<Self::Arr>> {
        let mut out = Vec::new();
        for x in self.objects()? {
            out.extend(self.arrows_from(&x)?);
        }
        Some(out)
    }
}

impl Category for FinCat {
    type Ob = String;
    type Arr = String;

    fn dom(&self, f: &String) -> Result<String, CatError> {
        self.src(f).map(str::to_string)
    }

    fn cod(&self, f: &String) -> Result<String, CatError> {
        self.dst(f).map(str::to_string)
    }

    fn id(&self, x: &String) -> Result<String, CatError> {
        self.identity(x).map(str::to_string)
    }

    fn compose(&self, f: &String, g: &String) -> Result<String, CatError> {
        FinCat::compose(self, f, g).map(str::to_string)
    }

    fn contains_ob(&self, x: &String) -> bool {
        self.has_object(x)
    }

    fn contains_arr(&self, f: &String) -> bool {
        self.has_arrow(f)
    }

    fn objects(&self) -> Option<Vec<String>> {
        Some(FinCat::objects(self).map(str::to_string).collect())
    }

    fn arrows_from(&self, x: &String) -> Option<Vec<String>> {
        FinCat::arrows_from(self, x).ok().map(<[String]>::to_vec)
    }

    fn ob_label(&self, x: &String) -> String {
        x.clone()
    }

    fn arr_label(&self, f: &String) -> String {
        f.clone()
    }
}

/// Product of two categories with tuple objects and arrows.
///
/// Labels use the same `(a|b)` convention as [`super::product_category`], so a
/// finite `Product<FinCat, FinCat>` and the materialized product agree name
/// for name.
#[derive(Debug, Clone, PartialEq)]
pub struct Product<A, B>(pub A, pub B);

impl<A: Category, B: Category> Category for Product<A, B> {
    type Ob = (A::Ob, B::Ob);
    type Arr = (A::Arr, B::Arr);

    fn dom(&self, (f, g): &Self::Arr) -> Result<Self::Ob, CatError> {
        Ok((self.0.dom(f)?, self.1.dom(g)?))
    }

    fn cod(&self, (f, g): &Self::Arr) -> Result<Self::Ob, CatError> {
        Ok((self.0.cod(f)?, self.1.cod(g)?))
    }

    fn id(&self, (x, y): &Self::Ob) -> Result<Self::Arr, CatError> {
        Ok((self.0.id(x)?, self.1.id(y)?))
    }

    fn compose(&self, (f1, f2): &Self::Arr, (g1, g2): &Self::Arr) -> Result<Self::Arr, CatError> {
        Ok((self.0.compose(f1, g1)?, self.1.compose(f2, g2)?))
    }

    fn contains_ob(&self, (x, y): &Self::Ob) -> bool {
        self.0.contains_ob(x) && self.1.contains_ob(y)
    }

    fn contains_arr(&self, (f, g): &Self::Arr) -> bool {
        self.0.contains_arr(f) && self.1.contains_arr(g)
    }

    fn objects(&self) -> Option<Vec<Self::Ob>> {
        let (xs, ys) = (self.0.objects()?, self.1.objects()?);
        Some(
            xs.iter()
                .flat_map(|x| ys.iter().map(move |y| (x.clone(), y.clone())))
                .collect(),
        )
    }

    fn arrows_from(&self, (x, y): &Self::Ob) -> Option<Vec<Self::Arr>> {
        let (fs, gs) = (self.0.arrows_from(x)?, self.1.arrows_from(y)?);
        Some(
            fs.iter()
                .flat_map(|f| gs.iter().map(move |g| (f.clone(), g.clone())))
                .collect(),
        )
    }

    fn ob_label(&self, (x, y): &Self::Ob) -> String {
        pair_name(&self.0.ob_label(x), &self.1.ob_label(y))
    }

    fn arr_label(&self, (f, g): &Self::Arr) -> String {
        pair_name(&self.0.arr_label(f), &self.1.arr_label(g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::product_category;
    use crate::fixtures::walking_arrow;

    #[test]
    fn generic_product_matches_materialized_product() {
        let c = walking_arrow();
        let generic = Product(c.clone(), c.clone());
        let table = product_category(&c, &c);
        let mut labels: Vec<String> = generic
            .all_arrows()
            .unwrap()
            .iter()
            .map(|a| generic.arr_label(a))
            .collect();
        labels.sort();
        let mut names: Vec<String> = table.arrows().map(String::from).collect();
        names.sort();
        assert_eq!(labels, names);

        let f = ("f".to_string(), "idX".to_string());
        let g = ("idY".to_string(), "f".to_string());
        let fg = generic.compose(&f, &g).unwrap();
        assert_eq!(
            generic.arr_label(&fg),
            table
                .compose(&generic.arr_label(&f), &generic.arr_label(&g))
                .unwrap()
        );
    }
}
