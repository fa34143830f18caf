//! Ordinals below ε₀ in hereditary Cantor normal form, and ordinal-valued
//! families in one natural-number parameter `n`.
//!
//! An [`Ordinal`] is a strictly decreasing list of terms `ω^e · c` whose
//! exponents are themselves ordinals. Comparison is lexicographic on the term
//! list. Ordinal sum, natural (Hessenberg) sum and product never increase the
//! hereditary depth, so the only failure they can report is a coefficient
//! overflow.
//!
//! A [`ParamOrdinal`] is an ordinal sum of terms `ω^{e(n)} · (a·n + b)` with
//! `a, b ≥ 0`. Every such family is nondecreasing in `n`; its supremum is
//! computed from the *eventual normal form*, the CNF that the family takes
//! for all sufficiently large `n`.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

/// Default bound on the hereditary nesting depth of accepted ordinals.
pub const DEFAULT_MAX_DEPTH: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("ordinal coefficient overflow")]
    CoefficientOverflow,
    #[error("ordinal nesting depth {depth} exceeds the configured bound {max}")]
    DepthExceeded { depth: usize, max: usize },
    #[error("terms are not in Cantor normal form")]
    NotNormal,
    #[error("parametric family decreases between n={n} and n={}", n + 1)]
    NotMonotone { n: u64 },
    #[error("invalid affine coefficient {slope}*n+{offset}")]
    InvalidCoefficient { slope: u64, offset: u64 },
}

/// A single Cantor-normal-form term `ω^exponent · coefficient`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    exponent: Ordinal,
    coefficient: u64,
}

impl Term {
    pub fn exponent(&self) -> &Ordinal {
        &self.exponent
    }

    pub fn coefficient(&self) -> u64 {
        self.coefficient
    }
}

/// An ordinal below ε₀. The empty term list is 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    terms: Vec<Term>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Ordinal::nat(1)
    }

    pub fn nat(k: u64) -> Self {
        if k == 0 {
            return Ordinal::zero();
        }
        Ordinal {
            terms: vec![Term {
                exponent: Ordinal::zero(),
                coefficient: k,
            }],
        }
    }

    pub fn omega() -> Self {
        Ordinal::omega_pow(Ordinal::one())
    }

    /// `ω^exponent`.
    pub fn omega_pow(exponent: Ordinal) -> Self {
        Ordinal::monomial(exponent, 1)
    }

    /// `ω^exponent · coefficient`; zero coefficient gives 0.
    pub fn monomial(exponent: Ordinal, coefficient: u64) -> Self {
        if coefficient == 0 {
            return Ordinal::zero();
        }
        Ordinal {
            terms: vec![Term {
                exponent,
                coefficient,
            }],
        }
    }

    /// Builds an ordinal from `(exponent, coefficient)` pairs that must already
    /// be in Cantor normal form.
    pub fn from_terms(terms: Vec<(Ordinal, u64)>) -> Result<Self, OrdinalError> {
        for pair in terms.windows(2) {
            if pair[0].0 <= pair[1].0 {
                return Err(OrdinalError::NotNormal);
            }
        }
        if terms.iter().any(|(_, c)| *c == 0) {
            return Err(OrdinalError::NotNormal);
        }
        Ok(Ordinal {
            terms: terms
                .into_iter()
                .map(|(exponent, coefficient)| Term {
                    exponent,
                    coefficient,
                })
                .collect(),
        })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|t| t.exponent.is_zero())
    }

    /// The value as a natural number, when finite.
    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.exponent.is_zero() => Some(t.coefficient),
            _ => None,
        }
    }

    /// True for nonzero ordinals without a last element.
    pub fn is_limit(&self) -> bool {
        self.terms.last().is_some_and(|t| !t.exponent.is_zero())
    }

    pub fn is_successor(&self) -> bool {
        self.terms.last().is_some_and(|t| t.exponent.is_zero())
    }

    pub fn leading_exponent(&self) -> Option<&Ordinal> {
        self.terms.first().map(|t| &t.exponent)
    }

    /// Hereditary nesting depth: 0 for zero, otherwise one more than the
    /// deepest exponent. Naturals have depth 1, ω has depth 2, ω^ω depth 3.
    pub fn depth(&self) -> usize {
        self.terms
            .iter()
            .map(|t| 1 + t.exponent.depth())
            .max()
            .unwrap_or(0)
    }

    pub fn check_depth(&self, max: usize) -> Result<(), OrdinalError> {
        let depth = self.depth();
        if depth > max {
            return Err(OrdinalError::DepthExceeded { depth, max });
        }
        Ok(())
    }

    pub fn succ(&self) -> Ordinal {
        self.checked_add(&Ordinal::one())
            .expect("ordinal coefficient overflow")
    }

    /// Ordinal sum `self + other` (absorbs the terms of `self` below the
    /// leading exponent of `other`).
    pub fn checked_add(&self, other: &Ordinal) -> Result<Ordinal, OrdinalError> {
        let Some(lead) = other.terms.first() else {
            return Ok(self.clone());
        };
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut rest = other.terms.iter();
        for t in &self.terms {
            match t.exponent.cmp(&lead.exponent) {
                Ordering::Greater => terms.push(t.clone()),
                Ordering::Equal => {
                    let coefficient = t
                        .coefficient
                        .checked_add(lead.coefficient)
                        .ok_or(OrdinalError::CoefficientOverflow)?;
                    terms.push(Term {
                        exponent: lead.exponent.clone(),
                        coefficient,
                    });
                    rest.next();
                    break;
                }
                Ordering::Less => break,
            }
        }
        terms.extend(rest.cloned());
        Ok(Ordinal { terms })
    }

    /// Natural (Hessenberg) sum: merge the term lists, adding coefficients of
    /// equal exponents.
    pub fn checked_nat_sum(&self, other: &Ordinal) -> Result<Ordinal, OrdinalError> {
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (a, b) = (&self.terms[i], &other.terms[j]);
            match a.exponent.cmp(&b.exponent) {
                Ordering::Greater => {
                    terms.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    terms.push(b.clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let coefficient = a
                        .coefficient
                        .checked_add(b.coefficient)
                        .ok_or(OrdinalError::CoefficientOverflow)?;
                    terms.push(Term {
                        exponent: a.exponent.clone(),
                        coefficient,
                    });
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend_from_slice(&self.terms[i..]);
        terms.extend_from_slice(&other.terms[j..]);
        Ok(Ordinal { terms })
    }

    /// Ordinal product `self · other`, distributing `self` over the terms of
    /// `other` from the left.
    pub fn checked_mul(&self, other: &Ordinal) -> Result<Ordinal, OrdinalError> {
        let Some(lead) = self.terms.first() else {
            return Ok(Ordinal::zero());
        };
        let mut acc = Ordinal::zero();
        for t in &other.terms {
            let part = if t.exponent.is_zero() {
                let mut terms = self.terms.clone();
                terms[0].coefficient = lead
                    .coefficient
                    .checked_mul(t.coefficient)
                    .ok_or(OrdinalError::CoefficientOverflow)?;
                Ordinal { terms }
            } else {
                Ordinal::monomial(lead.exponent.checked_add(&t.exponent)?, t.coefficient)
            };
            acc = acc.checked_add(&part)?;
        }
        Ok(acc)
    }

    /// Natural multiple `self ⊗ k`: every coefficient multiplied by `k`.
    pub fn checked_nat_scale(&self, k: u64) -> Result<Ordinal, OrdinalError> {
        if k == 0 {
            return Ok(Ordinal::zero());
        }
        let terms = self
            .terms
            .iter()
            .map(|t| {
                Ok(Term {
                    exponent: t.exponent.clone(),
                    coefficient: t
                        .coefficient
                        .checked_mul(k)
                        .ok_or(OrdinalError::CoefficientOverflow)?,
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(Ordinal { terms })
    }

    /// The unique `δ` with `self + δ = target`, if `self ≤ target`.
    pub fn left_sub(&self, target: &Ordinal) -> Option<Ordinal> {
        for (k, t) in self.terms.iter().enumerate() {
            let u = target.terms.get(k)?;
            match t.exponent.cmp(&u.exponent) {
                Ordering::Greater => return None,
                Ordering::Less => {
                    return Some(Ordinal {
                        terms: target.terms[k..].to_vec(),
                    })
                }
                Ordering::Equal => match t.coefficient.cmp(&u.coefficient) {
                    Ordering::Greater => return None,
                    Ordering::Equal => continue,
                    Ordering::Less => {
                        let mut terms = target.terms[k..].to_vec();
                        terms[0].coefficient -= t.coefficient;
                        return Some(Ordinal { terms });
                    }
                },
            }
        }
        Some(Ordinal {
            terms: target.terms[self.terms.len()..].to_vec(),
        })
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let ord = a
                .exponent
                .cmp(&b.exponent)
                .then(a.coefficient.cmp(&b.coefficient));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::ops::Add for &Ordinal {
    type Output = Ordinal;

    fn add(self, rhs: &Ordinal) -> Ordinal {
        self.checked_add(rhs).expect("ordinal coefficient overflow")
    }
}

impl std::ops::Mul for &Ordinal {
    type Output = Ordinal;

    fn mul(self, rhs: &Ordinal) -> Ordinal {
        self.checked_mul(rhs).expect("ordinal coefficient overflow")
    }
}

impl From<u64> for Ordinal {
    fn from(k: u64) -> Self {
        Ordinal::nat(k)
    }
}

/// Writes an exponent: bare when it is a natural number or the parameter,
/// parenthesised otherwise.
fn write_power(f: &mut fmt::Formatter<'_>, exponent: &str) -> fmt::Result {
    if exponent == "1" {
        write!(f, "w")
    } else if exponent == "n" || exponent.bytes().all(|b| b.is_ascii_digit()) {
        write!(f, "w^{exponent}")
    } else {
        write!(f, "w^({exponent})")
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if t.exponent.is_zero() {
                write!(f, "{}", t.coefficient)?;
                continue;
            }
            write_power(f, &t.exponent.to_string())?;
            if t.coefficient != 1 {
                write!(f, "*{}", t.coefficient)?;
            }
        }
        Ok(())
    }
}

/// The result of comparing a family against a fixed ordinal for large `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EventualCmp {
    /// Every member is `≤` the bound (equivalently, the supremum is).
    EventuallyLessOrEqual,
    /// Members exceed the bound from `witness` on.
    EventuallyGreater { witness: u64 },
}

/// Coefficient `slope·n + offset` of a parametric term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Affine {
    pub slope: u64,
    pub offset: u64,
}

impl Affine {
    pub fn constant(offset: u64) -> Self {
        Affine { slope: 0, offset }
    }

    pub fn param() -> Self {
        Affine {
            slope: 1,
            offset: 0,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.slope == 0
    }

    pub fn is_zero(&self) -> bool {
        self.slope == 0 && self.offset == 0
    }

    pub fn eval(&self, n: u64) -> Result<u64, OrdinalError> {
        self.slope
            .checked_mul(n)
            .and_then(|v| v.checked_add(self.offset))
            .ok_or(OrdinalError::CoefficientOverflow)
    }

    pub fn checked_add(&self, other: &Affine) -> Result<Affine, OrdinalError> {
        Ok(Affine {
            slope: self
                .slope
                .checked_add(other.slope)
                .ok_or(OrdinalError::CoefficientOverflow)?,
            offset: self
                .offset
                .checked_add(other.offset)
                .ok_or(OrdinalError::CoefficientOverflow)?,
        })
    }

    /// Product of two affine forms, defined when at least one is constant.
    pub fn checked_mul(&self, other: &Affine) -> Option<Affine> {
        let (k, form) = match (self.is_constant(), other.is_constant()) {
            (true, _) => (self.offset, other),
            (_, true) => (other.offset, self),
            _ => return None,
        };
        Some(Affine {
            slope: form.slope.checked_mul(k)?,
            offset: form.offset.checked_mul(k)?,
        })
    }

    /// The form after substituting `n ↦ scale·n + shift`.
    pub fn substitute(&self, scale: u64, shift: u64) -> Result<Affine, OrdinalError> {
        let overflow = OrdinalError::CoefficientOverflow;
        Ok(Affine {
            slope: self.slope.checked_mul(scale).ok_or(overflow.clone())?,
            offset: self
                .slope
                .checked_mul(shift)
                .and_then(|v| v.checked_add(self.offset))
                .ok_or(overflow)?,
        })
    }

    /// Comparison for all sufficiently large `n`.
    fn eventual_cmp(&self, other: &Affine) -> Ordering {
        self.slope
            .cmp(&other.slope)
            .then(self.offset.cmp(&other.offset))
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.slope, self.offset) {
            (0, b) => write!(f, "{b}"),
            (1, 0) => write!(f, "n"),
            (a, 0) => write!(f, "{a}*n"),
            (1, b) => write!(f, "(n+{b})"),
            (a, b) => write!(f, "({a}*n+{b})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParamTerm {
    exponent: ParamOrdinal,
    coefficient: Affine,
}

impl ParamTerm {
    pub fn exponent(&self) -> &ParamOrdinal {
        &self.exponent
    }

    pub fn coefficient(&self) -> Affine {
        self.coefficient
    }
}

/// An ordinal-valued family `n ↦ Σ ω^{e_i(n)} · (a_i·n + b_i)` (ordinal sum,
/// left to right).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ParamOrdinal {
    terms: Vec<ParamTerm>,
}

impl ParamOrdinal {
    pub fn zero() -> Self {
        ParamOrdinal { terms: Vec::new() }
    }

    /// The identity family `n`.
    pub fn param() -> Self {
        ParamOrdinal::from_terms(vec![(ParamOrdinal::zero(), Affine::param())])
            .expect("valid coefficient")
    }

    /// `ω^exponent · coefficient` as a one-term family.
    pub fn monomial(exponent: ParamOrdinal, coefficient: Affine) -> Result<Self, OrdinalError> {
        ParamOrdinal::from_terms(vec![(exponent, coefficient)])
    }

    /// Builds a family from terms read left to right. Adjacent terms with
    /// identical exponents are merged; a zero coefficient is rejected, as is
    /// a constant coefficient of zero.
    pub fn from_terms(terms: Vec<(ParamOrdinal, Affine)>) -> Result<Self, OrdinalError> {
        let mut out: Vec<ParamTerm> = Vec::with_capacity(terms.len());
        for (exponent, coefficient) in terms {
            if coefficient.is_zero() {
                return Err(OrdinalError::InvalidCoefficient {
                    slope: 0,
                    offset: 0,
                });
            }
            match out.last_mut() {
                Some(last) if last.exponent == exponent => {
                    last.coefficient = last.coefficient.checked_add(&coefficient)?;
                }
                _ => out.push(ParamTerm {
                    exponent,
                    coefficient,
                }),
            }
        }
        Ok(ParamOrdinal { terms: out })
    }

    pub fn terms(&self) -> &[ParamTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when `n` does not occur syntactically.
    pub fn is_closed(&self) -> bool {
        self.terms
            .iter()
            .all(|t| t.coefficient.is_constant() && t.exponent.is_closed())
    }

    /// Ordinal sum of two families.
    pub fn checked_add(&self, other: &ParamOrdinal) -> Result<ParamOrdinal, OrdinalError> {
        let terms = self
            .terms
            .iter()
            .chain(&other.terms)
            .map(|t| (t.exponent.clone(), t.coefficient))
            .collect();
        ParamOrdinal::from_terms(terms)
    }

    /// Substitutes `n`.
    pub fn eval(&self, n: u64) -> Result<Ordinal, OrdinalError> {
        let mut acc = Ordinal::zero();
        for t in &self.terms {
            let c = t.coefficient.eval(n)?;
            if c == 0 {
                continue;
            }
            let e = t.exponent.eval(n)?;
            acc = acc.checked_add(&Ordinal::monomial(e, c))?;
        }
        Ok(acc)
    }

    /// The family `n ↦ self(scale·n + shift)`.
    pub fn substitute(&self, scale: u64, shift: u64) -> Result<ParamOrdinal, OrdinalError> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                Ok((
                    t.exponent.substitute(scale, shift)?,
                    t.coefficient.substitute(scale, shift)?,
                ))
            })
            .collect::<Result<Vec<_>, OrdinalError>>()?;
        // Substitution can only turn a zero slope into a zero slope, so no
        // coefficient becomes identically zero.
        ParamOrdinal::from_terms(terms)
    }

    /// Checks by sampling `n = 0..samples` that every substitution is valid
    /// and that the family never decreases.
    pub fn validate(&self, samples: u64) -> Result<(), OrdinalError> {
        let mut prev = self.eval(0)?;
        for n in 1..=samples {
            let next = self.eval(n)?;
            if next < prev {
                return Err(OrdinalError::NotMonotone { n: n - 1 });
            }
            prev = next;
        }
        Ok(())
    }

    /// The Cantor normal form valid for every sufficiently large `n`:
    /// exponents strictly decreasing and coefficients eventually positive.
    pub fn eventual_form(&self) -> Result<ParamOrdinal, OrdinalError> {
        let mut out: Vec<ParamTerm> = Vec::new();
        for t in &self.terms {
            let exponent = t.exponent.eventual_form()?;
            let mut merged = false;
            while let Some(last) = out.last_mut() {
                match last.exponent.eventual_cmp(&exponent) {
                    Ordering::Less => {
                        out.pop();
                    }
                    Ordering::Equal => {
                        last.coefficient = last.coefficient.checked_add(&t.coefficient)?;
                        merged = true;
                        break;
                    }
                    Ordering::Greater => break,
                }
            }
            if !merged {
                out.push(ParamTerm {
                    exponent,
                    coefficient: t.coefficient,
                });
            }
        }
        Ok(ParamOrdinal { terms: out })
    }

    /// Comparison for all large `n`, valid on eventual forms.
    fn eventual_cmp(&self, other: &ParamOrdinal) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let ord = a
                .exponent
                .eventual_cmp(&b.exponent)
                .then(a.coefficient.eventual_cmp(&b.coefficient));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }

    /// True when the family takes a single value from some `n` on.
    pub fn is_eventually_constant(&self) -> Result<bool, OrdinalError> {
        Ok(self.eventual_form()?.is_closed())
    }

    /// Least upper bound of `{ self(n) : n < ω }`.
    ///
    /// Walks the eventual form: the first term whose coefficient grows
    /// contributes `ω^{e+1}`, the first term whose exponent grows contributes
    /// `ω^{sup e}`, and everything after it is absorbed.
    pub fn sup(&self) -> Result<Ordinal, OrdinalError> {
        let form = self.eventual_form()?;
        let mut prefix = Ordinal::zero();
        for t in &form.terms {
            if !t.exponent.is_closed() {
                let top = Ordinal::omega_pow(t.exponent.sup()?);
                return prefix.checked_add(&top);
            }
            let e = t.exponent.eval(0)?;
            if t.coefficient.is_constant() {
                prefix = prefix.checked_add(&Ordinal::monomial(e, t.coefficient.offset))?;
            } else {
                let top = Ordinal::omega_pow(e.checked_add(&Ordinal::one())?);
                return prefix.checked_add(&top);
            }
        }
        Ok(prefix)
    }

    /// Decides whether the family eventually exceeds `bound`, returning the
    /// least index from which it does.
    pub fn eventual_cmp_with(&self, bound: &Ordinal) -> Result<EventualCmp, OrdinalError> {
        if self.sup()? <= *bound {
            return Ok(EventualCmp::EventuallyLessOrEqual);
        }
        // Nondecreasing, so gallop to an index above the bound and then
        // binary-search the first one.
        let mut hi = 1u64;
        while self.eval(hi)? <= *bound {
            hi = hi.checked_mul(2).ok_or(OrdinalError::CoefficientOverflow)?;
        }
        let mut lo = 0u64;
        if self.eval(0)? > *bound {
            return Ok(EventualCmp::EventuallyGreater { witness: 0 });
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.eval(mid)? > *bound {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(EventualCmp::EventuallyGreater { witness: hi })
    }
}

impl From<&Ordinal> for ParamOrdinal {
    fn from(o: &Ordinal) -> Self {
        ParamOrdinal {
            terms: o
                .terms
                .iter()
                .map(|t| ParamTerm {
                    exponent: ParamOrdinal::from(&t.exponent),
                    coefficient: Affine::constant(t.coefficient),
                })
                .collect(),
        }
    }
}

impl From<Ordinal> for ParamOrdinal {
    fn from(o: Ordinal) -> Self {
        ParamOrdinal::from(&o)
    }
}

impl fmt::Display for ParamOrdinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let single = self.terms.len() == 1;
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            let coeff = t.coefficient.to_string();
            if t.exponent.is_zero() {
                // A lone finite term needs no parentheses.
                if single {
                    write!(f, "{}", coeff.trim_start_matches('(').trim_end_matches(')'))?;
                } else {
                    write!(f, "{coeff}")?;
                }
                continue;
            }
            write_power(f, &t.exponent.to_string())?;
            if t.coefficient != Affine::constant(1) {
                write!(f, "*{coeff}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w() -> Ordinal {
        Ordinal::omega()
    }

    fn nat(k: u64) -> Ordinal {
        Ordinal::nat(k)
    }

    fn wpow(e: Ordinal) -> Ordinal {
        Ordinal::omega_pow(e)
    }

    #[test]
    fn comparisons() {
        assert_eq!(nat(0).cmp(&nat(0)), Ordering::Equal);
        assert_eq!(w().cmp(&w().succ()), Ordering::Less);
        let a = &(&w() * &nat(2)) + &nat(3);
        assert!(a < wpow(nat(2)));
    }

    #[test]
    fn sums_and_products() {
        assert_eq!(&nat(1) + &w(), w());
        assert_eq!(&w() + &nat(1), w().succ());
        assert_eq!(&(&w() + &nat(3)) + &(&w() * &nat(2)), &w() * &nat(3));
        assert_eq!(&w() * &nat(2), Ordinal::monomial(nat(1), 2));
        assert_eq!(&nat(2) * &w(), w());
        assert_eq!(&w().succ() * &w(), wpow(nat(2)));
    }

    #[test]
    fn natural_sum() {
        let a = w().succ();
        assert_eq!(nat(0).checked_nat_sum(&a).unwrap(), a);
        assert_eq!(w().checked_nat_sum(&nat(1)).unwrap(), w().succ());
        assert_eq!(
            a.checked_nat_sum(&a).unwrap(),
            &Ordinal::monomial(nat(1), 2) + &nat(2)
        );
        // 1 ⊕ ω = ω + 1, unlike 1 + ω
        assert_eq!(nat(1).checked_nat_sum(&w()).unwrap(), w().succ());
    }

    #[test]
    fn left_subtraction() {
        let a = &w() + &nat(3);
        let b = &(&w() * &nat(2)) + &nat(1);
        let d = a.left_sub(&b).unwrap();
        assert_eq!(&a + &d, b);
        assert_eq!(nat(5).left_sub(&w()), Some(w()));
        assert_eq!(w().left_sub(&nat(5)), None);
        assert_eq!(w().left_sub(&w()), Some(Ordinal::zero()));
    }

    #[test]
    fn overflow_is_reported() {
        let big = nat(u64::MAX);
        assert_eq!(
            big.checked_add(&nat(1)),
            Err(OrdinalError::CoefficientOverflow)
        );
    }

    #[test]
    fn depth_and_bounds() {
        assert_eq!(nat(0).depth(), 0);
        assert_eq!(nat(4).depth(), 1);
        assert_eq!(w().depth(), 2);
        assert_eq!(wpow(w()).depth(), 3);
        assert!(wpow(w()).check_depth(2).is_err());
    }

    #[test]
    fn from_terms_rejects_non_normal() {
        assert!(Ordinal::from_terms(vec![(nat(0), 1), (nat(1), 1)]).is_err());
        assert!(Ordinal::from_terms(vec![(nat(1), 0)]).is_err());
    }

    fn omega_pow_n() -> ParamOrdinal {
        ParamOrdinal::monomial(ParamOrdinal::param(), Affine::constant(1)).unwrap()
    }

    #[test]
    fn param_eval() {
        assert_eq!(omega_pow_n().eval(0).unwrap(), nat(1));
        assert_eq!(omega_pow_n().eval(3).unwrap(), wpow(nat(3)));
        let p = ParamOrdinal::from_terms(vec![
            (ParamOrdinal::from(nat(1)), Affine::constant(1)),
            (ParamOrdinal::zero(), Affine { slope: 2, offset: 1 }),
        ])
        .unwrap();
        assert_eq!(p.eval(4).unwrap(), &w() + &nat(9));
    }

    #[test]
    fn param_sup() {
        assert_eq!(omega_pow_n().sup().unwrap(), wpow(w()));
        let w_plus_n = ParamOrdinal::from_terms(vec![
            (ParamOrdinal::from(nat(1)), Affine::constant(1)),
            (ParamOrdinal::zero(), Affine::param()),
        ])
        .unwrap();
        assert_eq!(w_plus_n.sup().unwrap(), &w() * &nat(2));
        assert_eq!(ParamOrdinal::from(nat(5)).sup().unwrap(), nat(5));
        // n + ω is constantly ω
        let n_plus_w = ParamOrdinal::from_terms(vec![
            (ParamOrdinal::zero(), Affine::param()),
            (ParamOrdinal::from(nat(1)), Affine::constant(1)),
        ])
        .unwrap();
        assert!(n_plus_w.is_eventually_constant().unwrap());
        assert_eq!(n_plus_w.sup().unwrap(), w());
    }

    #[test]
    fn param_eventual_comparison() {
        let n = ParamOrdinal::param();
        assert_eq!(
            n.eventual_cmp_with(&w()).unwrap(),
            EventualCmp::EventuallyLessOrEqual
        );
        let w_n = ParamOrdinal::monomial(ParamOrdinal::from(nat(1)), Affine::param()).unwrap();
        let bound = &wpow(nat(2)) + &nat(1);
        assert_eq!(
            w_n.eventual_cmp_with(&bound).unwrap(),
            EventualCmp::EventuallyLessOrEqual
        );
        assert_eq!(
            omega_pow_n().eventual_cmp_with(&wpow(nat(3))).unwrap(),
            EventualCmp::EventuallyGreater { witness: 4 }
        );
    }

    #[test]
    fn substitution_reindexes() {
        let n = ParamOrdinal::param();
        let two_n = n.substitute(2, 0).unwrap();
        assert_eq!(two_n.eval(3).unwrap(), nat(6));
        let shifted = omega_pow_n().substitute(1, 2).unwrap();
        assert_eq!(shifted.eval(1).unwrap(), wpow(nat(3)));
    }

    #[test]
    fn display_forms() {
        assert_eq!(Ordinal::zero().to_string(), "0");
        assert_eq!((&(&w() * &nat(2)) + &nat(2)).to_string(), "w*2+2");
        assert_eq!(wpow(w()).to_string(), "w^(w)");
        assert_eq!(
            (&(&Ordinal::monomial(nat(2), 3) + &w()) + &nat(4)).to_string(),
            "w^2*3+w+4"
        );
        assert_eq!(omega_pow_n().to_string(), "w^n");
        let p = ParamOrdinal::from_terms(vec![
            (ParamOrdinal::from(nat(1)), Affine::constant(1)),
            (ParamOrdinal::zero(), Affine { slope: 2, offset: 1 }),
        ])
        .unwrap();
        assert_eq!(p.to_string(), "w+(2*n+1)");
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::test_support::{ordinal, param_ordinal};
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn order_is_total(a in ordinal(2), b in ordinal(2), c in ordinal(2)) {
            prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
            if a <= b && b <= c {
                prop_assert!(a <= c);
            }
        }

        #[test]
        fn addition(a in ordinal(2), b in ordinal(2), c in ordinal(2)) {
            let ab = a.checked_add(&b).unwrap();
            prop_assert_eq!(ab.checked_add(&c).unwrap(), a.checked_add(&b.checked_add(&c).unwrap()).unwrap());
            prop_assert!(ab >= b);
            prop_assert!(ab >= a);
            prop_assert_eq!(a.left_sub(&ab), Some(b.clone()));
            let absorbed = match b.leading_exponent() {
                Some(e) => a.terms().iter().all(|t| t.exponent() < e),
                None => false,
            };
            if absorbed {
                prop_assert_eq!(ab, b);
            }
        }

        #[test]
        fn natural_sum(a in ordinal(2), b in ordinal(2), c in ordinal(2)) {
            let ab = a.checked_nat_sum(&b).unwrap();
            prop_assert_eq!(&ab, &b.checked_nat_sum(&a).unwrap());
            prop_assert_eq!(
                ab.checked_nat_sum(&c).unwrap(),
                a.checked_nat_sum(&b.checked_nat_sum(&c).unwrap()).unwrap()
            );
            prop_assert!(ab >= a.checked_add(&b).unwrap());
            if b < c {
                prop_assert!(ab < a.checked_nat_sum(&c).unwrap());
            }
        }

        #[test]
        fn left_distributive(a in ordinal(1), b in ordinal(1), c in ordinal(1)) {
            let lhs = a.checked_mul(&b.checked_add(&c).unwrap()).unwrap();
            let rhs = a.checked_mul(&b).unwrap().checked_add(&a.checked_mul(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn sup_is_least_upper_bound(p in param_ordinal(), g in ordinal(2)) {
            let sup = p.sup().unwrap();
            for n in 0..16 {
                prop_assert!(p.eval(n).unwrap() <= sup);
            }
            if g < sup {
                prop_assert!((0..64).any(|n| p.eval(n).unwrap() > g));
            }
        }

        #[test]
        fn eventual_cmp_matches_sup(p in param_ordinal(), g in ordinal(2)) {
            let below = p.sup().unwrap() <= g;
            match p.eventual_cmp_with(&g).unwrap() {
                EventualCmp::EventuallyLessOrEqual => prop_assert!(below),
                EventualCmp::EventuallyGreater { witness } => {
                    prop_assert!(!below);
                    for n in witness..witness + 8 {
                        prop_assert!(p.eval(n).unwrap() > g);
                    }
                }
            }
        }
    }
}
