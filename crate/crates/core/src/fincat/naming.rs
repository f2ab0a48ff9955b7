//! Canonical names for product objects and arrows.
//!
//! A pair is written `(a|b)`. Plain names may not contain `(`, `)` or `|`,
//! so every name has exactly one parse and reassociating `((a|b)|c)` into
//! `(a|(b|c))` is a string rewrite.

use super::CatError;

pub fn pair_name(a: &str, b: &str) -> String {
    format!("({a}|{b})")
}

/// Splits `(a|b)` at its top-level separator.
pub fn split_pair(name: &str) -> Option<(&str, &str)> {
    let inner = name.strip_prefix('(')?.strip_suffix(')')?;
    let mut depth = 0usize;
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.checked_sub(1)?,
            '|' if depth == 0 => {
                let (a, b) = (&inner[..i], &inner[i + 1..]);
                return (is_well_formed(a) && is_well_formed(b)).then_some((a, b));
            }
            _ => {}
        }
    }
    None
}

fn is_well_formed(name: &str) -> bool {
    if name.is_empty() {
        return false;
    }
    if name.starts_with('(') {
        return split_pair(name).is_some();
    }
    !name.contains(['(', ')', '|'])
}

pub(crate) fn check_name(name: &str) -> Result<(), CatError> {
    if is_well_formed(name) {
        Ok(())
    } else {
        Err(CatError::InvalidName(name.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn nested_pairs_split_at_top_level() {
        assert_eq!(split_pair("((a|b)|c)"), Some(("(a|b)", "c")));
        assert_eq!(split_pair("(a|(b|c))"), Some(("a", "(b|c)")));
        assert_eq!(split_pair("a"), None);
        assert_eq!(split_pair("(a|b|c)"), None);
    }

    #[test]
    fn malformed_names_are_rejected() {
        assert!(check_name("x->y").is_ok());
        assert!(check_name("(x|y)").is_ok());
        assert!(check_name("a|b").is_err());
        assert!(check_name("").is_err());
        assert!(check_name("(a|b").is_err());
    }

    fn atom() -> impl Strategy<Value = String> {
        "[a-z*_>-]{1,4}"
    }

    proptest! {
        #[test]
        fn pair_name_round_trips(a in atom(), b in atom(), c in atom()) {
            let inner = pair_name(&a, &b);
            let outer = pair_name(&inner, &c);
            prop_assert_eq!(split_pair(&outer), Some((inner.as_str(), c.as_str())));
            prop_assert_eq!(split_pair(&inner), Some((a.as_str(), b.as_str())));
        }
    }
}
