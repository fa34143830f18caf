//! Surreal numbers as sign expansions, stored in run-length shorthand.
//!
//! A [`SignExpansion`] is an alternating list of signed runs with ordinal
//! lengths. Place `γ` belongs to run `j` iff `PS(j-1) ≤ γ < PS(j)`, where
//! `PS` is the ordinal prefix sum of the run lengths. Places at or beyond the
//! birthday are undefined; in the surreal order undefined sits between `-`
//! and `+`.

use std::cmp::Ordering;
use std::fmt;

use crate::ordinal::Ordinal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// The content of one place: a sign, or undefined past the birthday.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignQuery {
    Minus,
    Undefined,
    Plus,
}

impl SignQuery {
    fn rank(self) -> u8 {
        match self {
            SignQuery::Minus => 0,
            SignQuery::Undefined => 1,
            SignQuery::Plus => 2,
        }
    }

    pub fn sign(self) -> Option<Sign> {
        match self {
            SignQuery::Plus => Some(Sign::Plus),
            SignQuery::Minus => Some(Sign::Minus),
            SignQuery::Undefined => None,
        }
    }
}

impl From<Sign> for SignQuery {
    fn from(s: Sign) -> Self {
        match s {
            Sign::Plus => SignQuery::Plus,
            Sign::Minus => SignQuery::Minus,
        }
    }
}

impl From<Option<Sign>> for SignQuery {
    fn from(s: Option<Sign>) -> Self {
        s.map_or(SignQuery::Undefined, SignQuery::from)
    }
}

/// `− < undefined < +`.
impl Ord for SignQuery {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl PartialOrd for SignQuery {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Run {
    pub sign: Sign,
    pub len: Ordinal,
}

impl Run {
    pub fn new(sign: Sign, len: Ordinal) -> Self {
        Run { sign, len }
    }

    pub fn plus(len: Ordinal) -> Self {
        Run::new(Sign::Plus, len)
    }

    pub fn minus(len: Ordinal) -> Self {
        Run::new(Sign::Minus, len)
    }
}

/// A surreal number in normalized run-length form. The empty expansion is 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SignExpansion {
    runs: Vec<Run>,
}

impl SignExpansion {
    pub fn zero() -> Self {
        SignExpansion { runs: Vec::new() }
    }

    /// Drops zero-length runs and merges equal-sign neighbours.
    pub fn normalize(raw: impl IntoIterator<Item = Run>) -> Self {
        let mut runs: Vec<Run> = Vec::new();
        for run in raw {
            if run.len.is_zero() {
                continue;
            }
            match runs.last_mut() {
                Some(last) if last.sign == run.sign => last.len = &last.len + &run.len,
                _ => runs.push(run),
            }
        }
        SignExpansion { runs }
    }

    /// The ordinal `α` as `α` pluses.
    pub fn from_ordinal(alpha: &Ordinal) -> Self {
        SignExpansion::normalize([Run::plus(alpha.clone())])
    }

    /// `sign^len` as a single run.
    pub fn run(sign: Sign, len: Ordinal) -> Self {
        SignExpansion::normalize([Run::new(sign, len)])
    }

    /// A finite expansion from an explicit sign list.
    pub fn from_signs(signs: &[Sign]) -> Self {
        SignExpansion::normalize(signs.iter().map(|&s| Run::new(s, Ordinal::one())))
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn is_zero(&self) -> bool {
        self.runs.is_empty()
    }

    /// The length of the expansion: the ordinal sum of the run lengths.
    pub fn birthday(&self) -> Ordinal {
        self.runs
            .iter()
            .fold(Ordinal::zero(), |acc, r| &acc + &r.len)
    }

    /// The expansion as a plain sign list, when the birthday is finite.
    pub fn finite_signs(&self) -> Option<Vec<Sign>> {
        let mut out = Vec::new();
        for r in &self.runs {
            let k = r.len.as_nat()?;
            out.extend(std::iter::repeat_n(r.sign, k as usize));
        }
        Some(out)
    }

    /// True when all runs are `+` (the expansion of an ordinal).
    pub fn as_ordinal(&self) -> Option<Ordinal> {
        match self.runs.as_slice() {
            [] => Some(Ordinal::zero()),
            [r] if r.sign == Sign::Plus => Some(r.len.clone()),
            _ => None,
        }
    }

    pub fn sign_at(&self, place: &Ordinal) -> SignQuery {
        let mut start = Ordinal::zero();
        for r in &self.runs {
            let end = &start + &r.len;
            if *place < end {
                return r.sign.into();
            }
            start = end;
        }
        SignQuery::Undefined
    }

    /// String concatenation.
    pub fn concat(&self, other: &SignExpansion) -> SignExpansion {
        SignExpansion::normalize(self.runs.iter().chain(&other.runs).cloned())
    }

    /// Appends one run.
    pub fn push(&self, sign: Sign, len: Ordinal) -> SignExpansion {
        self.concat(&SignExpansion::run(sign, len))
    }

    /// The restriction to places `< cut`.
    pub fn truncate(&self, cut: &Ordinal) -> SignExpansion {
        let mut runs = Vec::new();
        let mut start = Ordinal::zero();
        for r in &self.runs {
            if *cut <= start {
                break;
            }
            let end = &start + &r.len;
            if *cut < end {
                let len = start.left_sub(cut).expect("start < cut");
                runs.push(Run::new(r.sign, len));
                break;
            }
            runs.push(r.clone());
            start = end;
        }
        SignExpansion { runs }
    }

    pub fn negate(&self) -> SignExpansion {
        SignExpansion {
            runs: self
                .runs
                .iter()
                .map(|r| Run::new(r.sign.flip(), r.len.clone()))
                .collect(),
        }
    }

    /// The least place where the two expansions differ, with the contents of
    /// that place in `self` and `other`; `None` when they are identical.
    pub fn first_difference(
        &self,
        other: &SignExpansion,
    ) -> Option<(Ordinal, SignQuery, SignQuery)> {
        let mut start = Ordinal::zero();
        let mut i = 0;
        loop {
            match (self.runs.get(i), other.runs.get(i)) {
                (None, None) => return None,
                (Some(a), None) => return Some((start, a.sign.into(), SignQuery::Undefined)),
                (None, Some(b)) => return Some((start, SignQuery::Undefined, b.sign.into())),
                (Some(a), Some(b)) => {
                    if a.sign != b.sign {
                        return Some((start, a.sign.into(), b.sign.into()));
                    }
                    match a.len.cmp(&b.len) {
                        Ordering::Equal => {}
                        Ordering::Less => {
                            let place = &start + &a.len;
                            let mine = self.runs.get(i + 1).map(|r| r.sign);
                            return Some((place, mine.into(), b.sign.into()));
                        }
                        Ordering::Greater => {
                            let place = &start + &b.len;
                            let theirs = other.runs.get(i + 1).map(|r| r.sign);
                            return Some((place, a.sign.into(), theirs.into()));
                        }
                    }
                    start = &start + &a.len;
                    i += 1;
                }
            }
        }
    }

    /// The longest common initial segment.
    pub fn common_prefix(&self, other: &SignExpansion) -> SignExpansion {
        match self.first_difference(other) {
            None => self.clone(),
            Some((place, _, _)) => self.truncate(&place),
        }
    }

    /// True when `self` is an initial segment of `other`.
    pub fn is_prefix_of(&self, other: &SignExpansion) -> bool {
        other.truncate(&self.birthday()) == *self
    }
}

/// The surreal order: compare at the first difference with `− < undefined < +`.
impl Ord for SignExpansion {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.first_difference(other) {
            None => Ordering::Equal,
            Some((_, a, b)) => a.cmp(&b),
        }
    }
}

impl PartialOrd for SignExpansion {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SignExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.runs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}{}", r.sign.symbol(), r.len)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(k: u64) -> Ordinal {
        Ordinal::nat(k)
    }

    fn w() -> Ordinal {
        Ordinal::omega()
    }

    fn se(runs: &[(Sign, Ordinal)]) -> SignExpansion {
        SignExpansion::normalize(runs.iter().map(|(s, l)| Run::new(*s, l.clone())))
    }

    use Sign::{Minus as M, Plus as P};

    #[test]
    fn normalization() {
        assert_eq!(se(&[(P, nat(2)), (P, nat(3))]), se(&[(P, nat(5))]));
        assert_eq!(
            se(&[(P, nat(1)), (M, nat(0)), (P, nat(1))]),
            se(&[(P, nat(2))])
        );
        let merged = se(&[(P, w()), (M, nat(1)), (M, nat(1))]);
        assert_eq!(merged.runs(), &[Run::plus(w()), Run::minus(nat(2))]);
        assert_eq!(SignExpansion::normalize(merged.runs().to_vec()), merged);
    }

    #[test]
    fn places() {
        let s = se(&[(P, w()), (M, nat(1))]);
        assert_eq!(s.sign_at(&nat(5)), SignQuery::Plus);
        assert_eq!(s.sign_at(&w()), SignQuery::Minus);
        assert_eq!(s.sign_at(&w().succ()), SignQuery::Undefined);
        assert_eq!(s.birthday(), w().succ());
    }

    #[test]
    fn ordering() {
        let one_over_omega = se(&[(P, nat(1)), (M, w())]);
        assert!(SignExpansion::zero() < one_over_omega);
        let omega = se(&[(P, w())]);
        let omega_minus_one = se(&[(P, w()), (M, nat(1))]);
        assert!(omega > omega_minus_one);
        assert_eq!(omega.cmp(&omega), Ordering::Equal);
        // 1/ω < 1/2 < 1
        let half = se(&[(P, nat(1)), (M, nat(1))]);
        assert!(one_over_omega < half);
        assert!(half < se(&[(P, nat(1))]));
    }

    #[test]
    fn concatenation_and_truncation() {
        let b = se(&[(M, w())]);
        assert_eq!(SignExpansion::zero().concat(&b), b);
        assert_eq!(
            se(&[(P, nat(1))]).concat(&b),
            se(&[(P, nat(1)), (M, w())])
        );
        assert_eq!(se(&[(P, nat(1))]).concat(&se(&[(P, nat(1))])), se(&[(P, nat(2))]));

        let s = se(&[(P, w()), (M, nat(1))]);
        assert_eq!(s.truncate(&w()), se(&[(P, w())]));
        assert_eq!(se(&[(P, nat(5))]).truncate(&nat(2)), se(&[(P, nat(2))]));
        assert_eq!(s.truncate(&nat(0)), SignExpansion::zero());
        assert_eq!(s.truncate(&(&w() * &nat(3))), s);
    }

    #[test]
    fn negation() {
        assert_eq!(SignExpansion::zero().negate(), SignExpansion::zero());
        assert_eq!(
            se(&[(P, nat(1)), (M, w())]).negate(),
            se(&[(M, nat(1)), (P, w())])
        );
        assert_eq!(se(&[(P, nat(2))]).negate(), se(&[(M, nat(2))]));
    }

    #[test]
    fn display() {
        let s = se(&[(P, w()), (M, nat(2)), (P, nat(1))]);
        assert_eq!(s.to_string(), "[+w, -2, +1]");
        assert_eq!(SignExpansion::zero().to_string(), "[]");
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::test_support::{ordinal, sign, sign_expansion};
    use proptest::prelude::*;

    /// `sign_at` on an unnormalized run list: place `γ` lies in run `j` iff
    /// `PS(j-1) ≤ γ < PS(j)`.
    fn raw_sign_at(runs: &[Run], place: &Ordinal) -> SignQuery {
        let mut start = Ordinal::zero();
        for r in runs {
            let end = start.checked_add(&r.len).unwrap();
            if start <= *place && *place < end {
                return SignQuery::from(r.sign);
            }
            start = end;
        }
        SignQuery::Undefined
    }

    proptest! {
        #[test]
        fn order_is_total(a in sign_expansion(), b in sign_expansion(), c in sign_expansion()) {
            prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
            prop_assert_eq!(a == b, a.cmp(&b) == Ordering::Equal);
            if a <= b && b <= c {
                prop_assert!(a <= c);
            }
        }

        #[test]
        fn concatenation(a in sign_expansion(), b in sign_expansion(), c in sign_expansion()) {
            prop_assert_eq!(a.concat(&b).concat(&c), a.concat(&b.concat(&c)));
            prop_assert_eq!(a.concat(&SignExpansion::zero()), a.clone());
            prop_assert_eq!(SignExpansion::zero().concat(&a), a.clone());
            prop_assert_eq!(a.concat(&b).truncate(&a.birthday()), a.clone());
            prop_assert_eq!(a.concat(&b).birthday(), a.birthday().checked_add(&b.birthday()).unwrap());
        }

        #[test]
        fn normalization_keeps_places(
            raw in prop::collection::vec((sign(), ordinal(1).prop_filter("positive", |o| !o.is_zero())), 0..5),
            probe in ordinal(1),
        ) {
            let raw: Vec<Run> = raw.into_iter().map(|(s, l)| Run::new(s, l)).collect();
            let s = SignExpansion::normalize(raw.clone());
            let mut places = vec![probe];
            let mut start = Ordinal::zero();
            for r in &raw {
                places.push(start.clone());
                start = start.checked_add(&r.len).unwrap();
                places.push(start.clone());
            }
            for p in &places {
                prop_assert_eq!(s.sign_at(p), raw_sign_at(&raw, p));
            }
            prop_assert!(s.runs().windows(2).all(|w| w[0].sign != w[1].sign));
        }

        #[test]
        fn negation(a in sign_expansion(), b in sign_expansion()) {
            prop_assert_eq!(a.negate().negate(), a.clone());
            prop_assert_eq!(a.negate().cmp(&b.negate()), b.cmp(&a));
        }

        #[test]
        fn appending(a in sign_expansion(), len in ordinal(1).prop_filter("positive", |o| !o.is_zero())) {
            prop_assert!(a.push(Sign::Plus, len.clone()) > a);
            prop_assert!(a.push(Sign::Minus, len) < a);
        }

        #[test]
        fn prefixes(a in sign_expansion(), cut in ordinal(2)) {
            let t = a.truncate(&cut);
            prop_assert!(t.is_prefix_of(&a));
            prop_assert_eq!(a.common_prefix(&t), t);
        }
    }
}
