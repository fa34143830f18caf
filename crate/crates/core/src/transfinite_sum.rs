//! Restricted surreal addition and transfinite sums.
//!
//! Addition is implemented only where it is elementary: natural sums of
//! ordinals, dyadic arithmetic, and a dyadic shifted by `±1/ω`. Everything
//! else is refused with [`SumError::UnsupportedAddition`].
//!
//! `∑^s_{α<β} s_α` is `0` for `β = 0`, `s_α + ∑^s_{γ<α}` at `β = α+1`, and the
//! s-limit of the partial sums at limit `β`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::limit_engine::{slim, LimitError, RunTemplate, SeqDescriptor};
use crate::ordinal::{Affine, Ordinal, OrdinalError, ParamOrdinal};
use crate::real_bridge::{
    add_eps, decompose, dyadic_to_se, BridgeError, Classification, Direction, Dyadic,
};
use crate::real_sequence::{RealLimit, RealSequence, Side, SideWitness};
use crate::sign_expansion::{Sign, SignExpansion};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SumError {
    #[error("unsupported addition {0} + {1}")]
    UnsupportedAddition(String, String),
    #[error("unsupported summand sequence: {0}")]
    UnsupportedShape(String),
    #[error(transparent)]
    Limit(#[from] LimitError),
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
    #[error(transparent)]
    Bridge(#[from] BridgeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RestrictedValue {
    Ordinal(Ordinal),
    Dyadic(Dyadic),
    DyadicEps(Dyadic, Direction),
    Raw(SignExpansion),
}

impl RestrictedValue {
    pub fn zero() -> Self {
        RestrictedValue::Ordinal(Ordinal::zero())
    }

    /// Natural numbers are stored as ordinals.
    pub fn dyadic(d: Dyadic) -> Self {
        if d.is_integer() && !d.is_negative() {
            RestrictedValue::Ordinal(Ordinal::nat(d.numerator() as u64))
        } else {
            RestrictedValue::Dyadic(d)
        }
    }

    pub fn to_se(&self) -> SignExpansion {
        match self {
            RestrictedValue::Ordinal(o) => SignExpansion::from_ordinal(o),
            RestrictedValue::Dyadic(d) => dyadic_to_se(d),
            RestrictedValue::DyadicEps(d, dir) => add_eps(d, *dir),
            RestrictedValue::Raw(s) => s.clone(),
        }
    }

    /// The most specific class containing `s`.
    pub fn from_se(s: &SignExpansion) -> Self {
        if let Some(o) = s.as_ordinal() {
            return RestrictedValue::Ordinal(o);
        }
        match decompose(s) {
            Ok(dec) => match (dec.classification, dec.dyadic_part()) {
                (Classification::Dyadic, Some(d)) => RestrictedValue::dyadic(d),
                (Classification::DyadicPlusEps, Some(d)) => {
                    RestrictedValue::DyadicEps(d, Direction::Above)
                }
                (Classification::DyadicMinusEps, Some(d)) => {
                    RestrictedValue::DyadicEps(d, Direction::Below)
                }
                _ => RestrictedValue::Raw(s.clone()),
            },
            Err(_) => RestrictedValue::Raw(s.clone()),
        }
    }

    /// The value as a dyadic, for naturals and dyadics.
    fn as_dyadic(&self) -> Option<Dyadic> {
        match self {
            RestrictedValue::Ordinal(o) => o.as_nat().map(|k| Dyadic::integer(k as i128)),
            RestrictedValue::Dyadic(d) => Some(*d),
            _ => None,
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, RestrictedValue::Ordinal(o) if o.is_zero())
    }
}

impl fmt::Display for RestrictedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RestrictedValue::Ordinal(o) => write!(f, "{o}"),
            RestrictedValue::Dyadic(d) => write!(f, "{d}"),
            RestrictedValue::DyadicEps(d, Direction::Above) => write!(f, "{d}+1/w"),
            RestrictedValue::DyadicEps(d, Direction::Below) => write!(f, "{d}-1/w"),
            RestrictedValue::Raw(s) => write!(f, "{s}"),
        }
    }
}

fn unsupported(a: &RestrictedValue, b: &RestrictedValue) -> SumError {
    SumError::UnsupportedAddition(a.to_string(), b.to_string())
}

/// Surreal addition on the implemented classes.
pub fn add_restricted(a: &RestrictedValue, b: &RestrictedValue) -> Result<RestrictedValue, SumError> {
    use RestrictedValue as V;
    match (a, b) {
        (V::Ordinal(x), V::Ordinal(y)) => Ok(V::Ordinal(x.checked_nat_sum(y)?)),
        (V::DyadicEps(d, dir), other) | (other, V::DyadicEps(d, dir)) => match other {
            V::DyadicEps(e, other_dir) if other_dir != dir => {
                Ok(V::dyadic(d.checked_add(e)?))
            }
            _ => match other.as_dyadic() {
                Some(e) => {
                    let sum = d.checked_add(&e)?;
                    Ok(V::DyadicEps(sum, *dir))
                }
                None => Err(unsupported(a, b)),
            },
        },
        _ => match (a.as_dyadic(), b.as_dyadic()) {
            (Some(x), Some(y)) => Ok(V::dyadic(x.checked_add(&y)?)),
            _ => Err(unsupported(a, b)),
        },
    }
}

/// Values of an ω-block of summands after its explicit prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tail {
    Constant(RestrictedValue),
    /// `scale · 2^(-r-1)` at the `r`-th tail position.
    Halving { scale: Dyadic },
}

/// Summands `s_{ω·b + k}` for `k < ω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub prefix: Vec<RestrictedValue>,
    pub tail: Tail,
}

/// An ordinal-indexed summand sequence below `ω·blocks`, with finitely many
/// positions overridden.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummandSeq {
    pub blocks: Vec<Block>,
    pub overrides: BTreeMap<Ordinal, RestrictedValue>,
}

/// Largest number of ω-blocks below an index bound.
pub const MAX_BLOCKS: u64 = 4;

/// Splits `ω·b + k`.
fn split_index(alpha: &Ordinal) -> Result<(u64, u64), SumError> {
    let mut b = 0;
    let mut k = 0;
    for t in alpha.terms() {
        match t.exponent().as_nat() {
            Some(1) => b = t.coefficient(),
            Some(0) => k = t.coefficient(),
            _ => {
                return Err(SumError::UnsupportedShape(format!(
                    "index {alpha} is not below ω²"
                )))
            }
        }
    }
    Ok((b, k))
}

fn index(b: u64, k: u64) -> Ordinal {
    let omega_b = Ordinal::monomial(Ordinal::one(), b);
    &omega_b + &Ordinal::nat(k)
}

impl SummandSeq {
    pub fn new(blocks: Vec<Block>) -> Self {
        SummandSeq {
            blocks,
            overrides: BTreeMap::new(),
        }
    }

    pub fn summand(&self, alpha: &Ordinal) -> Result<RestrictedValue, SumError> {
        if let Some(v) = self.overrides.get(alpha) {
            return Ok(v.clone());
        }
        let (b, k) = split_index(alpha)?;
        let block = self.blocks.get(b as usize).ok_or_else(|| {
            SumError::UnsupportedShape(format!("no summand at index {alpha}"))
        })?;
        if let Some(v) = block.prefix.get(k as usize) {
            return Ok(v.clone());
        }
        let r = k - block.prefix.len() as u64;
        match &block.tail {
            Tail::Constant(v) => Ok(v.clone()),
            Tail::Halving { scale } => {
                let shift = u32::try_from(r + 1).map_err(|_| BridgeError::Overflow)?;
                Ok(RestrictedValue::dyadic(scale.checked_halve(shift)?))
            }
        }
    }

    /// Index after which block `b` follows its tail rule unaltered.
    fn regular_from(&self, b: u64) -> u64 {
        let prefix = self.blocks.get(b as usize).map_or(0, |bl| bl.prefix.len() as u64);
        let overridden = self
            .overrides
            .keys()
            .filter_map(|a| split_index(a).ok())
            .filter(|(ob, _)| *ob == b)
            .map(|(_, k)| k + 1)
            .max()
            .unwrap_or(0);
        prefix.max(overridden)
    }
}

/// The rearrangement `s'_α = s_{π(α)}`, with `π` given by disjoint cycles:
/// `π` maps each cycle entry to the next one, and the last to the first.
pub fn permute_finite(seq: &SummandSeq, cycles: &[Vec<Ordinal>]) -> Result<SummandSeq, SumError> {
    let mut out = seq.clone();
    let mut seen = std::collections::BTreeSet::new();
    for cycle in cycles {
        for (i, alpha) in cycle.iter().enumerate() {
            if !seen.insert(alpha.clone()) {
                return Err(SumError::UnsupportedShape(format!(
                    "index {alpha} appears in two cycles"
                )));
            }
            let image = &cycle[(i + 1) % cycle.len()];
            out.overrides.insert(alpha.clone(), seq.summand(image)?);
        }
    }
    Ok(out)
}

/// `x ⊕ c·m` as a family in `m`.
fn nat_sum_family(x: &Ordinal, c: &Ordinal) -> Result<ParamOrdinal, SumError> {
    let mut merged: BTreeMap<std::cmp::Reverse<Ordinal>, Affine> = BTreeMap::new();
    for t in x.terms() {
        merged
            .entry(std::cmp::Reverse(t.exponent().clone()))
            .or_insert(Affine::constant(0))
            .offset = t.coefficient();
    }
    for t in c.terms() {
        merged
            .entry(std::cmp::Reverse(t.exponent().clone()))
            .or_insert(Affine::constant(0))
            .slope = t.coefficient();
    }
    let terms = merged
        .into_iter()
        .map(|(e, coef)| (ParamOrdinal::from(&e.0), coef))
        .collect();
    Ok(ParamOrdinal::from_terms(terms)?)
}

/// The limit of `start + Σ_{r<m} tail_r` as `m → ω`.
fn block_limit(start: &RestrictedValue, tail: &Tail, label: &str) -> Result<RestrictedValue, SumError> {
    use RestrictedValue as V;
    let refuse = |t: &dyn fmt::Display| {
        Err(SumError::UnsupportedAddition(start.to_string(), t.to_string()))
    };
    let limit_se = match tail {
        Tail::Constant(v) if v.is_zero() => return Ok(start.clone()),
        Tail::Constant(V::Ordinal(c)) if matches!(start, V::Ordinal(_)) => {
            let V::Ordinal(x) = start else { unreachable!() };
            let family = nat_sum_family(x, c)?;
            let seq = SeqDescriptor::parametric(RunTemplate::new(vec![(Sign::Plus, family)])?);
            slim(&seq)?.value
        }
        Tail::Constant(v) => {
            let (Some(x), Some(c)) = (start.as_dyadic(), v.as_dyadic()) else {
                return refuse(v);
            };
            let (xr, cr) = (x.to_rational(), c.to_rational());
            let up = !c.is_negative();
            let term = {
                let (xr, cr) = (xr.clone(), cr.clone());
                move |m: u64| &xr + &cr * BigRational::from_integer(BigInt::from(m))
            };
            // |x + c·m| ≥ k once m ≥ (k + |x|) / |c|.
            let (ax, ac) = (num_traits::abs(xr), num_traits::abs(cr));
            let modulus = move |k: u32| {
                let need = (BigRational::from_integer(BigInt::from(k)) + &ax) / &ac;
                u64::try_from(need.ceil().to_integer()).unwrap_or(u64::MAX)
            };
            real_limit(RealSequence {
                label: label.into(),
                term: Arc::new(term),
                limit: if up {
                    RealLimit::PlusInfinity
                } else {
                    RealLimit::MinusInfinity
                },
                modulus: Arc::new(modulus),
                side: None,
            })?
        }
        Tail::Halving { scale } => {
            let Some(x) = start.as_dyadic() else {
                return refuse(&format!("halving tail of scale {scale}"));
            };
            if scale.is_zero() {
                return Ok(start.clone());
            }
            let limit = x.checked_add(scale)?;
            let (xr, sr) = (x.to_rational(), scale.to_rational());
            let term = move |m: u64| {
                let left = crate::real_bridge::pow2_neg(m.min(u32::MAX as u64) as u32);
                &xr + &sr * (BigRational::from_integer(1.into()) - left)
            };
            // |scale|·2^-m ≤ 2^-k once m ≥ k + log2 |scale|.
            let magnitude = scale.numerator().unsigned_abs();
            let bits = (128 - magnitude.leading_zeros()) as u64;
            let slack = bits.saturating_sub(scale.exponent() as u64);
            let side = if scale.is_negative() { Side::Above } else { Side::Below };
            real_limit(RealSequence {
                label: label.into(),
                term: Arc::new(term),
                limit: RealLimit::Exact(limit.to_rational()),
                modulus: Arc::new(move |k| k as u64 + slack),
                side: Some(SideWitness { side, from: 0 }),
            })?
        }
    };
    Ok(V::from_se(&limit_se))
}

/// Probe parameters for the limits of dyadic partial sums.
const PROBE_BUDGET: u64 = 32;
const PROBE_DEPTH: u64 = 24;

fn real_limit(seq: RealSequence) -> Result<SignExpansion, SumError> {
    seq.validate(16, 8)?;
    let out = slim(&SeqDescriptor::Oracle(seq.oracle(PROBE_BUDGET, PROBE_DEPTH)?))?;
    if out.horizon.is_some() || out.cut_place.is_some() {
        return Err(SumError::UnsupportedShape(format!(
            "partial sums of {} have no closed-form limit",
            seq.label
        )));
    }
    Ok(out.value)
}

/// The transfinite sum of the summands below `bound`.
pub fn ssum(bound: &Ordinal, seq: &SummandSeq) -> Result<RestrictedValue, SumError> {
    let (blocks, rest) = split_index(bound)?;
    if blocks > MAX_BLOCKS {
        return Err(SumError::UnsupportedShape(format!(
            "index bound {bound} beyond ω·{}",
            MAX_BLOCKS + 1
        )));
    }
    let mut total = RestrictedValue::zero();
    for b in 0..=blocks {
        let steps = if b == blocks { rest } else { seq.regular_from(b) };
        for k in 0..steps {
            total = add_restricted(&seq.summand(&index(b, k))?, &total)?;
        }
        if b < blocks {
            let block = seq.blocks.get(b as usize).ok_or_else(|| {
                SumError::UnsupportedShape(format!("no summands in block {b}"))
            })?;
            // The tail restarts after positions consumed by overrides.
            let consumed = seq.regular_from(b) - block.prefix.len() as u64;
            let tail = match &block.tail {
                Tail::Halving { scale } => Tail::Halving {
                    scale: scale.checked_halve(
                        u32::try_from(consumed).map_err(|_| BridgeError::Overflow)?,
                    )?,
                },
                t => t.clone(),
            };
            let label = format!("partial sums of block {b}");
            total = block_limit(&total, &tail, &label)?;
        }
    }
    Ok(total)
}
