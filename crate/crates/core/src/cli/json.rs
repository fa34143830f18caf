//! JSON schemas for descriptor files and command output.
//!
//! Ordinals, families and sign expansions travel as strings in the literal
//! grammar; rationals as `p/q` strings.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::parse::{parse_literal, parse_ordinal, parse_rational, parse_sign_expansion, parse_template, Literal, ParseError};
use super::CliError;
use crate::limit_engine::{LimitOutcome, SeqDescriptor};
use crate::real_bridge::{Dyadic, RealStream};
use crate::real_sequence::{RealLimit, RealSequence, Side, SideWitness};
use crate::transfinite_sum::{permute_finite, Block, RestrictedValue, SummandSeq, Tail};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case", deny_unknown_fields)]
pub enum SeqDescriptorJson {
    Explicit {
        rows: Vec<String>,
    },
    EventuallyConstant {
        prefix: Vec<String>,
        tail: String,
    },
    Parametric {
        branches: Vec<String>,
    },
    Oracle {
        sequence: RealSequenceJson,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        probe_budget: Option<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        depth: Option<u64>,
    },
}

/// Closed forms for rational rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TermJson {
    /// `target + scale·ratio^n`
    Geometric {
        target: String,
        scale: String,
        ratio: String,
    },
    /// `target + (-1)^(n+1)·scale·ratio^⌊n/2⌋`
    Oscillating {
        target: String,
        scale: String,
        ratio: String,
    },
    /// `slope·n + offset`
    Linear { slope: String, offset: String },
    /// `Σ_{i≤n} 1/i!`
    ExpSeries,
    Constant { value: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LimitJson {
    Exact { value: String },
    /// Euler's number, by its series.
    E,
    PlusInfinity,
    MinusInfinity,
}

/// `N(m) = scale·m + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModulusJson {
    pub scale: u64,
    pub offset: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SideJson {
    Above,
    Below,
    Equal,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SideWitnessJson {
    pub side: SideJson,
    pub from: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealSequenceJson {
    pub label: String,
    pub term: TermJson,
    pub limit: LimitJson,
    pub modulus: ModulusJson,
    #[serde(default)]
    pub side: Option<SideWitnessJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TailJson {
    Constant { value: String },
    Halving { scale: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockJson {
    #[serde(default)]
    pub prefix: Vec<String>,
    pub tail: TailJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SummandsJson {
    pub bound: String,
    pub blocks: Vec<BlockJson>,
    /// Disjoint cycles of a finitely supported permutation.
    #[serde(default)]
    pub cycles: Vec<Vec<String>>,
}

fn rational(s: &str) -> Result<BigRational, CliError> {
    Ok(parse_rational(s)?)
}

fn dyadic(s: &str) -> Result<Dyadic, CliError> {
    Ok(Dyadic::from_rational(&rational(s)?)?)
}

fn pow(q: &BigRational, k: u64) -> BigRational {
    let k = i32::try_from(k).expect("row index fits the exponent range");
    if q.is_zero() {
        return if k == 0 { BigRational::one() } else { BigRational::zero() };
    }
    q.pow(k)
}

fn exp_partial_sum(n: u64) -> BigRational {
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    for i in 0..=n {
        if i > 0 {
            term /= BigRational::from_integer(BigInt::from(i));
        }
        sum += &term;
    }
    sum
}

/// `e` with approximants `Σ_{i≤n} 1/i!`; the tail after `n` is below
/// `2/(n+1)!`, which is at most `2^-m` once `n ≥ m + 2`.
pub fn e_stream() -> RealStream {
    RealStream::new("e", exp_partial_sum, |m| m as u64 + 2)
}

impl TermJson {
    fn build(&self) -> Result<Arc<dyn Fn(u64) -> BigRational + Send + Sync>, CliError> {
        Ok(match self {
            TermJson::Geometric {
                target,
                scale,
                ratio,
            } => {
                let (t, s, r) = (rational(target)?, rational(scale)?, rational(ratio)?);
                Arc::new(move |n| &t + &s * pow(&r, n))
            }
            TermJson::Oscillating {
                target,
                scale,
                ratio,
            } => {
                let (t, s, r) = (rational(target)?, rational(scale)?, rational(ratio)?);
                Arc::new(move |n| {
                    let step = &s * pow(&r, n / 2);
                    if n % 2 == 0 {
                        &t - step
                    } else {
                        &t + step
                    }
                })
            }
            TermJson::Linear { slope, offset } => {
                let (a, b) = (rational(slope)?, rational(offset)?);
                Arc::new(move |n| &a * BigRational::from_integer(BigInt::from(n)) + &b)
            }
            TermJson::ExpSeries => Arc::new(exp_partial_sum),
            TermJson::Constant { value } => {
                let v = rational(value)?;
                Arc::new(move |_| v.clone())
            }
        })
    }
}

impl RealSequenceJson {
    pub fn build(&self) -> Result<RealSequence, CliError> {
        let limit = match &self.limit {
            LimitJson::Exact { value } => RealLimit::Exact(rational(value)?),
            LimitJson::E => RealLimit::Stream(e_stream()),
            LimitJson::PlusInfinity => RealLimit::PlusInfinity,
            LimitJson::MinusInfinity => RealLimit::MinusInfinity,
        };
        let ModulusJson { scale, offset } = self.modulus;
        let side = self.side.map(|w| SideWitness {
            side: match w.side {
                SideJson::Above => Side::Above,
                SideJson::Below => Side::Below,
                SideJson::Equal => Side::Equal,
                SideJson::Both => Side::Both,
            },
            from: w.from,
        });
        Ok(RealSequence {
            label: self.label.clone(),
            term: self.term.build()?,
            limit,
            modulus: Arc::new(move |m| scale.saturating_mul(m as u64).saturating_add(offset)),
            side,
        })
    }
}

/// Probe settings for oracle descriptors read from JSON.
#[derive(Debug, Clone, Copy)]
pub struct ProbeSettings {
    pub probe_budget: u64,
    pub depth: u64,
}

impl SeqDescriptorJson {
    pub fn build(&self, probe: ProbeSettings) -> Result<SeqDescriptor, CliError> {
        let rows = |v: &[String]| -> Result<Vec<_>, ParseError> {
            v.iter().map(|s| parse_sign_expansion(s)).collect()
        };
        Ok(match self {
            SeqDescriptorJson::Explicit { rows: r } => SeqDescriptor::Explicit(rows(r)?),
            SeqDescriptorJson::EventuallyConstant { prefix, tail } => {
                SeqDescriptor::EventuallyConstant {
                    prefix: rows(prefix)?,
                    tail: parse_sign_expansion(tail)?,
                }
            }
            SeqDescriptorJson::Parametric { branches } => SeqDescriptor::Parametric(
                branches
                    .iter()
                    .map(|b| parse_template(b))
                    .collect::<Result<_, _>>()?,
            ),
            SeqDescriptorJson::Oracle {
                sequence,
                probe_budget,
                depth,
            } => {
                let seq = sequence.build()?;
                seq.validate(32, 16)?;
                SeqDescriptor::Oracle(seq.oracle(
                    probe_budget.unwrap_or(probe.probe_budget),
                    depth.unwrap_or(probe.depth),
                )?)
            }
        })
    }
}

/// A summand literal: an ordinal, a dyadic, or a sign expansion.
pub fn restricted_value(text: &str) -> Result<RestrictedValue, CliError> {
    Ok(match parse_literal(text)? {
        Literal::Ordinal(o) => RestrictedValue::Ordinal(o),
        Literal::Rational(q) => RestrictedValue::dyadic(Dyadic::from_rational(&q)?),
        Literal::SignExpansion(s) => RestrictedValue::from_se(&s),
        Literal::Param(_) => {
            return Err(CliError::Domain(format!("summand {text} depends on n")));
        }
    })
}

impl SummandsJson {
    pub fn build(&self) -> Result<(crate::ordinal::Ordinal, SummandSeq), CliError> {
        let bound = parse_ordinal(&self.bound)?;
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                Ok(Block {
                    prefix: b
                        .prefix
                        .iter()
                        .map(|v| restricted_value(v))
                        .collect::<Result<_, CliError>>()?,
                    tail: match &b.tail {
                        TailJson::Constant { value } => Tail::Constant(restricted_value(value)?),
                        TailJson::Halving { scale } => Tail::Halving {
                            scale: dyadic(scale)?,
                        },
                    },
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let cycles = self
            .cycles
            .iter()
            .map(|c| c.iter().map(|a| parse_ordinal(a)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let seq = permute_finite(&SummandSeq::new(blocks), &cycles)?;
        Ok((bound, seq))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitOutcomeJson {
    pub value: String,
    pub cut_place: Option<String>,
    pub full: bool,
    pub status: String,
    pub variant_used: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<u64>,
}

impl From<&LimitOutcome> for LimitOutcomeJson {
    fn from(o: &LimitOutcome) -> Self {
        LimitOutcomeJson {
            value: o.value.to_string(),
            cut_place: o.cut_place.as_ref().map(ToString::to_string),
            full: o.full,
            status: o.status.name().into(),
            variant_used: o.variant_used.name().into(),
            horizon: o.horizon,
        }
    }
}
