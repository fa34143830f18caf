//! The `{F | G}` form of a surreal with finite birthday, where `F` and `G`
//! are its proper initial segments below and above it.

use thiserror::Error;

use crate::ordinal::Ordinal;
use crate::real_bridge::{dyadic_to_se, se_to_dyadic, simplest_between, BridgeError};
use crate::sign_expansion::SignExpansion;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonicalError {
    #[error("{0} has a transfinite birthday")]
    Transfinite(SignExpansion),
    #[error(transparent)]
    Bridge(#[from] BridgeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CanonicalSides {
    pub left: Vec<SignExpansion>,
    pub right: Vec<SignExpansion>,
}

fn finite_length(s: &SignExpansion) -> Result<u64, CanonicalError> {
    s.birthday()
        .as_nat()
        .ok_or_else(|| CanonicalError::Transfinite(s.clone()))
}

/// Proper truncations of `s`, split by comparison with `s`, shortest first.
pub fn canonical_sides(s: &SignExpansion) -> Result<CanonicalSides, CanonicalError> {
    let mut sides = CanonicalSides::default();
    for k in 0..finite_length(s)? {
        let t = s.truncate(&Ordinal::nat(k));
        if t < *s {
            sides.left.push(t);
        } else {
            sides.right.push(t);
        }
    }
    Ok(sides)
}

/// The simplest number strictly between the sides.
pub fn simplest_from_sides(sides: &CanonicalSides) -> Result<SignExpansion, CanonicalError> {
    let lo = sides.left.iter().max().map(se_to_dyadic).transpose()?;
    let hi = sides.right.iter().min().map(se_to_dyadic).transpose()?;
    Ok(dyadic_to_se(&simplest_between(lo.as_ref(), hi.as_ref())))
}

/// `∪_β ∩_{β' ≥ β} X_{β'}` over a finite family of sets.
fn eventual_members(family: &[Vec<SignExpansion>]) -> Vec<SignExpansion> {
    let mut out: Vec<SignExpansion> = Vec::new();
    for start in 0..family.len() {
        for x in &family[start] {
            let everywhere = family[start..].iter().all(|set| set.contains(x));
            if everywhere && !out.contains(x) {
                out.push(x.clone());
            }
        }
    }
    out
}

/// Forms the eventual sides of the rows and checks that they separate the
/// limit (the last row).
pub fn limit_sides_check(rows: &[SignExpansion]) -> Result<bool, CanonicalError> {
    let Some(limit) = rows.last() else {
        return Ok(true);
    };
    let sides = rows
        .iter()
        .map(canonical_sides)
        .collect::<Result<Vec<_>, _>>()?;
    let lefts: Vec<_> = sides.iter().map(|s| s.left.clone()).collect();
    let rights: Vec<_> = sides.iter().map(|s| s.right.clone()).collect();
    let f = eventual_members(&lefts);
    let g = eventual_members(&rights);
    Ok(f.iter().all(|x| x < limit) && g.iter().all(|x| x > limit))
}


#[cfg(test)]
mod props {
    use super::*;
    use crate::test_support::{dyadic, finite_sign_expansion};
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn sides_separate(s in finite_sign_expansion()) {
            let sides = canonical_sides(&s).unwrap();
            prop_assert!(sides.left.iter().all(|x| x < &s));
            prop_assert!(sides.right.iter().all(|x| x > &s));
            prop_assert_eq!(sides.left.len() + sides.right.len(), s.birthday().as_nat().unwrap() as usize);
            prop_assert_eq!(simplest_from_sides(&sides).unwrap(), s);
        }

        #[test]
        fn simplicity_for_dyadics(d in dyadic()) {
            let s = dyadic_to_se(&d);
            prop_assert_eq!(simplest_from_sides(&canonical_sides(&s).unwrap()).unwrap(), s);
        }

        #[test]
        fn limit_sides_hold(rows in prop::collection::vec(finite_sign_expansion(), 1..8)) {
            prop_assert!(limit_sides_check(&rows).unwrap());
        }
    }
}
