//! Exact conversion between reals and sign expansions.
//!
//! Dyadic rationals are exactly the surreals with finite sign expansions.
//! The conversion follows the bisection construction: start at 0 and, while
//! the target differs from the current point, record `+` or `-` and move to
//! the simplest dyadic strictly inside the remaining interval. The closed-form
//! digit rule in [`dyadic_to_se`] must agree with that construction.
//!
//! Other reals are handled as [`RealStream`]s: rational approximations with a
//! modulus of convergence.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::ordinal::Ordinal;
use crate::sign_expansion::{Run, Sign, SignExpansion};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BridgeError {
    #[error("{0} is not a dyadic rational")]
    NotDyadic(String),
    #[error("dyadic arithmetic overflow")]
    Overflow,
    #[error("empty interval: {lo} is not below {hi}")]
    EmptyInterval { lo: Dyadic, hi: Dyadic },
    #[error("stream {label} violates its modulus at precision 2^-{precision}")]
    Inconsistent { label: String, precision: u32 },
    #[error("stream {label} could not decide place {place} within 2^-{precision}")]
    Undecided {
        label: String,
        place: usize,
        precision: u32,
    },
    #[error("{0} is born after day ω and is not a recognized finite surreal")]
    Unsupported(SignExpansion),
}

/// An exact rational `numerator / 2^exponent` in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dyadic {
    numerator: i128,
    exponent: u32,
}

const MAX_EXPONENT: u32 = 120;

impl Dyadic {
    pub fn new(numerator: i128, exponent: u32) -> Result<Self, BridgeError> {
        let mut d = Dyadic {
            numerator,
            exponent,
        };
        if d.numerator == 0 {
            d.exponent = 0;
        }
        while d.exponent > 0 && d.numerator % 2 == 0 {
            d.numerator /= 2;
            d.exponent -= 1;
        }
        if d.exponent > MAX_EXPONENT {
            return Err(BridgeError::Overflow);
        }
        Ok(d)
    }

    pub fn zero() -> Self {
        Dyadic::integer(0)
    }

    pub fn integer(k: i128) -> Self {
        Dyadic {
            numerator: k,
            exponent: 0,
        }
    }

    pub fn numerator(&self) -> i128 {
        self.numerator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn is_integer(&self) -> bool {
        self.exponent == 0
    }

    pub fn is_zero(&self) -> bool {
        self.numerator == 0
    }

    pub fn is_negative(&self) -> bool {
        self.numerator < 0
    }

    /// Greatest integer `≤ self`.
    pub fn floor(&self) -> i128 {
        self.numerator >> self.exponent
    }

    pub fn checked_neg(&self) -> Result<Dyadic, BridgeError> {
        Ok(Dyadic {
            numerator: self.numerator.checked_neg().ok_or(BridgeError::Overflow)?,
            exponent: self.exponent,
        })
    }

    fn aligned(&self, other: &Dyadic) -> Result<(i128, i128, u32), BridgeError> {
        let e = self.exponent.max(other.exponent);
        let scale = |d: &Dyadic| {
            1i128
                .checked_shl(e - d.exponent)
                .and_then(|f| d.numerator.checked_mul(f))
                .ok_or(BridgeError::Overflow)
        };
        Ok((scale(self)?, scale(other)?, e))
    }

    pub fn checked_add(&self, other: &Dyadic) -> Result<Dyadic, BridgeError> {
        let (a, b, e) = self.aligned(other)?;
        Dyadic::new(a.checked_add(b).ok_or(BridgeError::Overflow)?, e)
    }

    pub fn checked_sub(&self, other: &Dyadic) -> Result<Dyadic, BridgeError> {
        self.checked_add(&other.checked_neg()?)
    }

    /// `self · 2^-k`.
    pub fn checked_halve(&self, k: u32) -> Result<Dyadic, BridgeError> {
        Dyadic::new(
            self.numerator,
            self.exponent.checked_add(k).ok_or(BridgeError::Overflow)?,
        )
    }

    pub fn checked_mul_int(&self, k: i128) -> Result<Dyadic, BridgeError> {
        Dyadic::new(
            self.numerator.checked_mul(k).ok_or(BridgeError::Overflow)?,
            self.exponent,
        )
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.numerator),
            BigInt::one() << self.exponent as usize,
        )
    }

    /// The dyadic equal to `q`, if its denominator is a power of two.
    pub fn from_rational(q: &BigRational) -> Result<Dyadic, BridgeError> {
        let den = q.denom();
        let bits = den.bits();
        if bits == 0 || *den != BigInt::one() << (bits - 1) as usize {
            return Err(BridgeError::NotDyadic(q.to_string()));
        }
        let numerator: i128 = q
            .numer()
            .try_into()
            .map_err(|_| BridgeError::Overflow)?;
        Dyadic::new(numerator, (bits - 1) as u32)
    }

    /// Length of the sign expansion.
    pub fn birthday(&self) -> u128 {
        let magnitude = self.numerator.unsigned_abs();
        let whole = magnitude >> self.exponent;
        if self.exponent == 0 {
            whole
        } else {
            whole + self.exponent as u128 + 1
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.aligned(other) {
            Ok((a, b, _)) => a.cmp(&b),
            Err(_) => self.to_rational().cmp(&other.to_rational()),
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", self.numerator, 1u128 << self.exponent)
        }
    }
}

/// The earliest-born dyadic strictly between the bounds; a missing bound is
/// infinite. Requires `lo < hi` when both are present.
pub fn simplest_between(lo: Option<&Dyadic>, hi: Option<&Dyadic>) -> Dyadic {
    let zero = Dyadic::zero();
    let below_zero = lo.is_none_or(|l| *l < zero);
    let above_zero = hi.is_none_or(|h| *h > zero);
    if below_zero && above_zero {
        return zero;
    }
    if !below_zero {
        let l = lo.expect("bounded below");
        let k = Dyadic::integer(l.floor() + 1);
        if hi.is_none_or(|h| k < *h) {
            return k;
        }
    } else {
        let h = hi.expect("bounded above");
        let ceil = if h.is_integer() { h.floor() } else { h.floor() + 1 };
        let k = Dyadic::integer(ceil - 1);
        if lo.is_none_or(|l| k > *l) {
            return k;
        }
    }
    // No integer inside: both bounds are finite and within one unit.
    let (l, h) = (lo.expect("finite"), hi.expect("finite"));
    for j in 1..=MAX_EXPONENT {
        let scaled = if j >= l.exponent {
            l.numerator
                .checked_shl(j - l.exponent)
                .filter(|v| v >> (j - l.exponent) == l.numerator)
                .expect("dyadic numerator in range")
        } else {
            l.numerator >> (l.exponent - j)
        };
        let m = scaled + 1;
        let candidate = Dyadic::new(m, j).expect("exponent in range");
        if candidate < *h {
            return candidate;
        }
    }
    panic!("interval ({l}, {h}) too narrow for dyadic arithmetic")
}

/// The unique dyadic of minimal birthday in the open interval `(lo, hi)`.
pub fn simplest_dyadic_between(lo: &Dyadic, hi: &Dyadic) -> Result<Dyadic, BridgeError> {
    if lo >= hi {
        return Err(BridgeError::EmptyInterval { lo: *lo, hi: *hi });
    }
    Ok(simplest_between(Some(lo), Some(hi)))
}

/// Sign expansion of a dyadic by the binary-digit rule: for `d = k + f` with
/// `0 < f < 1`, `k+1` pluses, one minus, then the binary digits of `f` except
/// the final 1 (`1 ↦ +`, `0 ↦ -`). Integers are runs of `|d|` equal signs.
pub fn dyadic_to_se(d: &Dyadic) -> SignExpansion {
    if d.is_negative() {
        let magnitude = d.checked_neg().expect("negation of a reduced dyadic");
        return dyadic_to_se(&magnitude).negate();
    }
    let whole = d.floor() as u64;
    if d.is_integer() {
        return SignExpansion::from_ordinal(&Ordinal::nat(whole));
    }
    let k = d.exponent;
    let frac = d.numerator - ((whole as i128) << k);
    let mut runs = vec![Run::plus(Ordinal::nat(whole + 1)), Run::minus(Ordinal::one())];
    for i in 1..k {
        let bit = (frac >> (k - i)) & 1;
        let sign = if bit == 1 { Sign::Plus } else { Sign::Minus };
        runs.push(Run::new(sign, Ordinal::one()));
    }
    SignExpansion::normalize(runs)
}

/// Inverse of [`dyadic_to_se`]; fails for transfinite expansions.
pub fn se_to_dyadic(s: &SignExpansion) -> Result<Dyadic, BridgeError> {
    let runs = s.runs();
    let Some(first) = runs.first() else {
        return Ok(Dyadic::zero());
    };
    if first.sign == Sign::Minus {
        return se_to_dyadic(&s.negate())?.checked_neg();
    }
    let not_dyadic = || BridgeError::NotDyadic(s.to_string());
    let whole = first.len.as_nat().ok_or_else(not_dyadic)?;
    if runs.len() == 1 {
        return Ok(Dyadic::integer(whole as i128));
    }
    // After the leading pluses, the first minus marks the binary point.
    let rest = SignExpansion::normalize(runs[1..].iter().cloned());
    let signs = rest.finite_signs().ok_or_else(not_dyadic)?;
    let digits = &signs[1..];
    if digits.len() as u32 >= MAX_EXPONENT {
        return Err(BridgeError::Overflow);
    }
    let k = digits.len() as u32 + 1;
    let mut frac: i128 = 0;
    for (i, sign) in digits.iter().enumerate() {
        if *sign == Sign::Plus {
            frac |= 1 << (k - 1 - i as u32);
        }
    }
    frac |= 1;
    let whole = (whole as i128 - 1)
        .checked_shl(k)
        .ok_or(BridgeError::Overflow)?;
    Dyadic::new(whole + frac, k)
}

/// First `limit` signs of the expansion of an exact rational, by bisection.
pub fn rational_signs(q: &BigRational, limit: usize) -> Vec<Sign> {
    let mut out = Vec::new();
    let (mut lo, mut hi): (Option<Dyadic>, Option<Dyadic>) = (None, None);
    let mut current = Dyadic::zero();
    while out.len() < limit {
        match q.cmp(&current.to_rational()) {
            Ordering::Equal => break,
            Ordering::Greater => {
                out.push(Sign::Plus);
                lo = Some(current);
            }
            Ordering::Less => {
                out.push(Sign::Minus);
                hi = Some(current);
            }
        }
        current = simplest_between(lo.as_ref(), hi.as_ref());
    }
    out
}

/// A real number given by rational approximants and a modulus: for every
/// `m`, all approximants from index `modulus(m)` on lie within `2^-m` of
/// each other (hence of the limit).
#[derive(Clone)]
pub struct RealStream {
    label: String,
    approx: Arc<dyn Fn(u64) -> BigRational + Send + Sync>,
    modulus: Arc<dyn Fn(u32) -> u64 + Send + Sync>,
    exact: Option<BigRational>,
}

impl fmt::Debug for RealStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealStream")
            .field("label", &self.label)
            .field("exact", &self.exact)
            .finish()
    }
}

impl RealStream {
    pub fn new(
        label: impl Into<String>,
        approx: impl Fn(u64) -> BigRational + Send + Sync + 'static,
        modulus: impl Fn(u32) -> u64 + Send + Sync + 'static,
    ) -> Self {
        RealStream {
            label: label.into(),
            approx: Arc::new(approx),
            modulus: Arc::new(modulus),
            exact: None,
        }
    }

    /// The constant stream at `q`; its value is known exactly.
    pub fn constant(q: BigRational) -> Self {
        let value = q.clone();
        RealStream {
            label: q.to_string(),
            approx: Arc::new(move |_| value.clone()),
            modulus: Arc::new(|_| 0),
            exact: Some(q),
        }
    }

    /// Records that the limit is known to equal `q`.
    pub fn with_exact(mut self, q: BigRational) -> Self {
        self.exact = Some(q);
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn exact(&self) -> Option<&BigRational> {
        self.exact.as_ref()
    }

    pub fn approx(&self, n: u64) -> BigRational {
        (self.approx)(n)
    }

    pub fn modulus(&self, m: u32) -> u64 {
        (self.modulus)(m)
    }

    /// An approximant within `2^-m` of the limit.
    pub fn enclosure(&self, m: u32) -> (BigRational, BigRational) {
        let q = self.approx(self.modulus(m));
        (q, pow2_neg(m))
    }

    /// Spot-checks the modulus on pairs of approximants for precisions
    /// `0..precisions`, `samples` indices past each modulus value.
    pub fn validate(&self, precisions: u32, samples: u64) -> Result<(), BridgeError> {
        for m in 0..precisions {
            let start = self.modulus(m);
            let radius = pow2_neg(m);
            let base = self.approx(start);
            for i in start + 1..start + samples {
                if (self.approx(i) - &base).abs() > radius {
                    return Err(BridgeError::Inconsistent {
                        label: self.label.clone(),
                        precision: m,
                    });
                }
            }
            if let Some(exact) = &self.exact {
                if (exact - &base).abs() > radius {
                    return Err(BridgeError::Inconsistent {
                        label: self.label.clone(),
                        precision: m,
                    });
                }
            }
        }
        Ok(())
    }
}

/// `2^-m` as a rational.
pub fn pow2_neg(m: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << m as usize)
}

/// Largest precision tried by [`real_to_se_prefix`].
pub const DEFAULT_PRECISION_BUDGET: u32 = 512;

/// The first `k` places of the sign expansion of the real determined by `r`.
///
/// Each bisection step needs the sign of `x - c` for a dyadic `c`; the
/// precision is raised until an enclosure of `x` excludes `c`. When the value
/// is known exactly the signs are computed directly.
pub fn real_to_se_prefix(
    r: &RealStream,
    k: usize,
    precision_budget: u32,
) -> Result<SignExpansion, BridgeError> {
    if let Some(q) = r.exact() {
        return Ok(SignExpansion::from_signs(&rational_signs(q, k)));
    }
    let mut signs = Vec::with_capacity(k);
    let (mut lo, mut hi): (Option<Dyadic>, Option<Dyadic>) = (None, None);
    let mut current = Dyadic::zero();
    // Intersection of all enclosures seen so far.
    let mut known: Option<(BigRational, BigRational)> = None;
    let mut m = 0u32;
    while signs.len() < k {
        let c = current.to_rational();
        let sign = loop {
            if m > precision_budget {
                return Err(BridgeError::Undecided {
                    label: r.label.clone(),
                    place: signs.len(),
                    precision: precision_budget,
                });
            }
            let (q, radius) = r.enclosure(m);
            let (a, b) = (&q - &radius, &q + &radius);
            let (a, b) = match known.take() {
                None => (a, b),
                Some((ka, kb)) => (a.max(ka), b.min(kb)),
            };
            if a > b {
                return Err(BridgeError::Inconsistent {
                    label: r.label.clone(),
                    precision: m,
                });
            }
            known = Some((a.clone(), b.clone()));
            if a > c {
                break Sign::Plus;
            }
            if b < c {
                break Sign::Minus;
            }
            m += 1;
        };
        signs.push(sign);
        match sign {
            Sign::Plus => lo = Some(current),
            Sign::Minus => hi = Some(current),
        }
        current = simplest_between(lo.as_ref(), hi.as_ref());
    }
    Ok(SignExpansion::from_signs(&signs))
}

/// Which side of a dyadic an infinitesimal shift goes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Above,
    Below,
}

/// `d + 1/ω` (above) or `d - 1/ω` (below).
pub fn add_eps(d: &Dyadic, direction: Direction) -> SignExpansion {
    let tail = match direction {
        Direction::Above => [Run::plus(Ordinal::one()), Run::minus(Ordinal::omega())],
        Direction::Below => [Run::minus(Ordinal::one()), Run::plus(Ordinal::omega())],
    };
    dyadic_to_se(d).concat(&SignExpansion::normalize(tail))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Infinitesimal {
    Zero,
    PlusOneOverOmega,
    MinusOneOverOmega,
}

impl fmt::Display for Infinitesimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Infinitesimal::Zero => "0",
            Infinitesimal::PlusOneOverOmega => "+1/w",
            Infinitesimal::MinusOneOverOmega => "-1/w",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    Dyadic,
    DyadicPlusEps,
    DyadicMinusEps,
    NondyadicReal,
    NotFinite,
}

impl Classification {
    pub fn name(&self) -> &'static str {
        match self {
            Classification::Dyadic => "dyadic",
            Classification::DyadicPlusEps => "dyadic_plus_eps",
            Classification::DyadicMinusEps => "dyadic_minus_eps",
            Classification::NondyadicReal => "nondyadic_real",
            Classification::NotFinite => "not_finite",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RealPart {
    Dyadic(Dyadic),
    /// A non-dyadic real, named by the stream or rational that defines it.
    Stream(String),
}

/// `s = R(s) + ε(s)` for a finite surreal born by day ω.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub real_part: Option<RealPart>,
    pub eps: Infinitesimal,
    pub classification: Classification,
}

impl Decomposition {
    pub fn nondyadic(tag: impl Into<String>) -> Self {
        Decomposition {
            real_part: Some(RealPart::Stream(tag.into())),
            eps: Infinitesimal::Zero,
            classification: Classification::NondyadicReal,
        }
    }

    pub fn dyadic_part(&self) -> Option<Dyadic> {
        match &self.real_part {
            Some(RealPart::Dyadic(d)) => Some(*d),
            _ => None,
        }
    }
}

/// Splits a sign expansion into real part and infinitesimal.
///
/// Recognizes dyadics (finite expansions), `SE(d)⌢[+1, -ω] = d + 1/ω`,
/// `SE(d)⌢[-1, +ω] = d - 1/ω`, and infinite numbers (a leading run of
/// length `≥ ω`). Anything else born after day ω is reported unsupported.
pub fn decompose(s: &SignExpansion) -> Result<Decomposition, BridgeError> {
    let runs = s.runs();
    if runs.first().is_some_and(|r| !r.len.is_finite()) {
        return Ok(Decomposition {
            real_part: None,
            eps: Infinitesimal::Zero,
            classification: Classification::NotFinite,
        });
    }
    let birthday = s.birthday();
    if birthday.is_finite() {
        return Ok(Decomposition {
            real_part: Some(RealPart::Dyadic(se_to_dyadic(s)?)),
            eps: Infinitesimal::Zero,
            classification: Classification::Dyadic,
        });
    }
    if birthday != Ordinal::omega() {
        return Err(BridgeError::Unsupported(s.clone()));
    }
    // Birthday ω with a finite first run: finite runs, then a run of length ω.
    let (last, prefix) = runs.split_last().expect("nonempty");
    let mut prefix = prefix.to_vec();
    let marker = prefix.last_mut().expect("first run is finite");
    marker.len = Ordinal::nat(marker.len.as_nat().expect("finite run") - 1);
    let d = se_to_dyadic(&SignExpansion::normalize(prefix))?;
    let (eps, classification) = match last.sign {
        Sign::Minus => (Infinitesimal::PlusOneOverOmega, Classification::DyadicPlusEps),
        Sign::Plus => (Infinitesimal::MinusOneOverOmega, Classification::DyadicMinusEps),
    };
    Ok(Decomposition {
        real_part: Some(RealPart::Dyadic(d)),
        eps,
        classification,
    })
}

/// Classification of an exact rational.
pub fn decompose_rational(q: &BigRational) -> Decomposition {
    match Dyadic::from_rational(q) {
        Ok(d) => Decomposition {
            real_part: Some(RealPart::Dyadic(d)),
            eps: Infinitesimal::Zero,
            classification: Classification::Dyadic,
        },
        Err(_) => Decomposition::nondyadic(q.to_string()),
    }
}


#[cfg(test)]
mod props {
    use super::*;
    use crate::test_support::{dyadic, finite_sign_expansion};
    use num_bigint::BigInt;
    use proptest::prelude::*;

    /// Every dyadic born before day `days`, from all sign strings.
    fn born_before(days: usize) -> Vec<Dyadic> {
        let mut out = vec![Dyadic::zero()];
        let mut layer = vec![Vec::<Sign>::new()];
        for _ in 1..days {
            let mut next = Vec::new();
            for s in &layer {
                for sign in [Sign::Plus, Sign::Minus] {
                    let mut t = s.clone();
                    t.push(sign);
                    out.push(se_to_dyadic(&SignExpansion::from_signs(&t)).unwrap());
                    next.push(t);
                }
            }
            layer = next;
        }
        out
    }

    fn key(d: &Dyadic, eps: Infinitesimal) -> (Dyadic, i8) {
        let e = match eps {
            Infinitesimal::MinusOneOverOmega => -1,
            Infinitesimal::Zero => 0,
            Infinitesimal::PlusOneOverOmega => 1,
        };
        (*d, e)
    }

    fn classes() -> impl Strategy<Value = SignExpansion> {
        prop_oneof![
            dyadic().prop_map(|d| dyadic_to_se(&d)),
            dyadic().prop_map(|d| add_eps(&d, Direction::Above)),
            dyadic().prop_map(|d| add_eps(&d, Direction::Below)),
        ]
    }

    proptest! {
        #[test]
        fn round_trip_and_order(a in dyadic(), b in dyadic()) {
            let (sa, sb) = (dyadic_to_se(&a), dyadic_to_se(&b));
            prop_assert_eq!(se_to_dyadic(&sa).unwrap(), a);
            prop_assert_eq!(a.cmp(&b), sa.cmp(&sb));
            prop_assert_eq!(dyadic_to_se(&a.checked_neg().unwrap()), sa.negate());
            prop_assert_eq!(sa.birthday(), Ordinal::nat(a.birthday() as u64));
        }

        #[test]
        fn finite_expansions_are_dyadic(s in finite_sign_expansion()) {
            prop_assert_eq!(dyadic_to_se(&se_to_dyadic(&s).unwrap()), s);
        }

        #[test]
        fn eps_shifts(d in dyadic()) {
            for (dir, eps) in [
                (Direction::Above, Infinitesimal::PlusOneOverOmega),
                (Direction::Below, Infinitesimal::MinusOneOverOmega),
            ] {
                let dec = decompose(&add_eps(&d, dir)).unwrap();
                prop_assert_eq!(dec.dyadic_part(), Some(d));
                prop_assert_eq!(dec.eps, eps);
            }
        }

        #[test]
        fn decomposition_order(a in classes(), b in classes()) {
            let (da, db) = (decompose(&a).unwrap(), decompose(&b).unwrap());
            let ka = key(&da.dyadic_part().unwrap(), da.eps);
            let kb = key(&db.dyadic_part().unwrap(), db.eps);
            prop_assert_eq!(a.cmp(&b), ka.cmp(&kb));
        }

        #[test]
        fn constant_streams(d in dyadic(), k in 0usize..24) {
            let expected = dyadic_to_se(&d).truncate(&Ordinal::nat(k as u64));
            let exact = RealStream::constant(d.to_rational());
            prop_assert_eq!(real_to_se_prefix(&exact, k, 64).unwrap(), expected.clone());
            // Without the exact value, places up to the birthday are decidable.
            let k = k.min(d.birthday() as usize);
            let stream = RealStream::new("c", move |_| d.to_rational(), |_| 0);
            prop_assert_eq!(
                real_to_se_prefix(&stream, k, 64).unwrap(),
                dyadic_to_se(&d).truncate(&Ordinal::nat(k as u64))
            );
        }

        #[test]
        fn rational_signs_follow_dyadic_approximations(p in -300i64..300, q in 1i64..60, k in 1usize..16) {
            let x = BigRational::new(BigInt::from(p), BigInt::from(q));
            let signs = rational_signs(&x, k);
            // Any dyadic sharing the first k signs lies on the same side of
            // every earlier bisection point, so truncations agree.
            let d = se_to_dyadic(&SignExpansion::from_signs(&signs)).unwrap();
            let s = SignExpansion::from_signs(&rational_signs(&d.to_rational(), k));
            prop_assert!(SignExpansion::from_signs(&signs).is_prefix_of(&s) || s == SignExpansion::from_signs(&signs));
        }
    }

    #[test]
    fn simplest_has_least_birthday() {
        let pool = born_before(9);
        let small: Vec<Dyadic> = born_before(7);
        for lo in &small {
            for hi in &small {
                if lo >= hi {
                    continue;
                }
                let s = simplest_dyadic_between(lo, hi).unwrap();
                assert!(lo < &s && &s < hi);
                let earlier = pool
                    .iter()
                    .filter(|c| c.birthday() < s.birthday())
                    .any(|c| lo < c && c < hi);
                assert!(!earlier, "{lo} {hi} -> {s}");
            }
        }
    }
}
