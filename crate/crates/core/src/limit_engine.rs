//! String limits of sequences of sign expansions.
//!
//! Rows are given by a [`SeqDescriptor`]. The s-limit keeps a place when,
//! from some index on, all rows agree on it and on every earlier place; the
//! first place where this fails is the cut. The per-column variant slim⋄
//! drops the uniformity requirement, and slim* works on run lengths.
//!
//! For parametric rows everything is decided symbolically from the prefix
//! sums of the run lengths. If `PS_j(n)` is the start of run `j` in row `n`,
//! each `PS_j` is nondecreasing, so place `γ` eventually lies in run `j` iff
//! `sup PS_j ≤ γ < sup PS_{j+1}`. Rows agree uniformly only below
//! `sup PS_j` for the first `j` whose prefix sum keeps growing.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::BigRational;
use thiserror::Error;

use crate::ordinal::{Ordinal, OrdinalError, ParamOrdinal};
use crate::real_bridge::{self, BridgeError};
use crate::sign_expansion::{Run, Sign, SignExpansion, SignQuery};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LimitError {
    #[error("oracle {label} contradicted at place {place}: {detail}")]
    Inconsistent {
        label: String,
        place: u64,
        detail: String,
    },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("filter incompatible with descriptor: {0}")]
    IncompatibleFilter(String),
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
    #[error(transparent)]
    Bridge(#[from] BridgeError),
}

/// A row pattern whose run lengths depend on the parameter `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RunTemplate {
    runs: Vec<(Sign, ParamOrdinal)>,
}

impl RunTemplate {
    /// Drops identically-zero runs and merges equal-sign neighbours.
    pub fn new(runs: Vec<(Sign, ParamOrdinal)>) -> Result<Self, LimitError> {
        let mut out: Vec<(Sign, ParamOrdinal)> = Vec::new();
        for (sign, len) in runs {
            if len.is_zero() {
                continue;
            }
            match out.last_mut() {
                Some((s, l)) if *s == sign => *l = l.checked_add(&len)?,
                _ => out.push((sign, len)),
            }
        }
        Ok(RunTemplate { runs: out })
    }

    /// The template whose every row is `s`.
    pub fn constant(s: &SignExpansion) -> Self {
        RunTemplate {
            runs: s
                .runs()
                .iter()
                .map(|r| (r.sign, ParamOrdinal::from(&r.len)))
                .collect(),
        }
    }

    pub fn runs(&self) -> &[(Sign, ParamOrdinal)] {
        &self.runs
    }

    pub fn eval(&self, n: u64) -> Result<SignExpansion, LimitError> {
        let runs = self
            .runs
            .iter()
            .map(|(s, l)| Ok(Run::new(*s, l.eval(n)?)))
            .collect::<Result<Vec<_>, OrdinalError>>()?;
        Ok(SignExpansion::normalize(runs))
    }

    pub fn concat(&self, other: &RunTemplate) -> Result<RunTemplate, LimitError> {
        RunTemplate::new(self.runs.iter().chain(&other.runs).cloned().collect())
    }

    pub fn substitute(&self, scale: u64, shift: u64) -> Result<RunTemplate, LimitError> {
        let runs = self
            .runs
            .iter()
            .map(|(s, l)| Ok((*s, l.substitute(scale, shift)?)))
            .collect::<Result<Vec<_>, OrdinalError>>()?;
        RunTemplate::new(runs)
    }

    pub fn validate(&self, samples: u64) -> Result<(), LimitError> {
        for (_, len) in &self.runs {
            len.validate(samples)?;
        }
        Ok(())
    }

    /// `PS_0 = 0, PS_1, …, PS_r` (run starts, then the total length).
    fn prefix_sums(&self) -> Result<Vec<ParamOrdinal>, LimitError> {
        let mut sums = vec![ParamOrdinal::zero()];
        for (_, len) in &self.runs {
            let next = sums.last().expect("nonempty").checked_add(len)?;
            sums.push(next);
        }
        Ok(sums)
    }

    /// The eventual sign at every place, as an expansion.
    pub fn eventual_row(&self) -> Result<SignExpansion, LimitError> {
        let sups = self
            .prefix_sums()?
            .iter()
            .map(ParamOrdinal::sup)
            .collect::<Result<Vec<_>, _>>()?;
        let runs = self.runs.iter().enumerate().map(|(j, (sign, _))| {
            let len = sups[j].left_sub(&sups[j + 1]).expect("prefix sums grow");
            Run::new(*sign, len)
        });
        Ok(SignExpansion::normalize(runs))
    }

    /// Index of the first prefix sum that is not eventually constant.
    fn first_moving(&self, sums: &[ParamOrdinal]) -> Result<Option<usize>, LimitError> {
        for (j, ps) in sums.iter().enumerate() {
            if !ps.is_eventually_constant()? {
                return Ok(Some(j));
            }
        }
        Ok(None)
    }

    /// The place below which rows of this template agree uniformly from
    /// some index on; `None` when the rows are eventually identical.
    pub fn uniform_bound(&self) -> Result<Option<Ordinal>, LimitError> {
        let sums = self.prefix_sums()?;
        match self.first_moving(&sums)? {
            None => Ok(None),
            Some(j) => Ok(Some(sums[j].sup()?)),
        }
    }

    /// Common initial segment of all rows `n ≥ 0`.
    fn all_rows_prefix(&self) -> Result<SignExpansion, LimitError> {
        // From n = 1 on no run is empty, so the rows share every run before
        // the first moving prefix sum and part of the one after.
        let sums = self.prefix_sums()?;
        let row1 = self.eval(1)?;
        let tail = match self.first_moving(&sums)? {
            None => row1,
            Some(j) => row1.truncate(&sums[j].eval(1)?),
        };
        Ok(self.eval(0)?.common_prefix(&tail))
    }
}

impl fmt::Display for RunTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (sign, len)) in self.runs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}{}", sign.symbol(), len)?;
        }
        f.write_str("]")
    }
}

/// A row of an oracle sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Row {
    Expansion(SignExpansion),
    /// A rational number, expanded lazily on finite places.
    Rational(BigRational),
}

impl Row {
    /// Contents of places `0..k`.
    pub fn places(&self, k: usize) -> Vec<SignQuery> {
        let mut out: Vec<SignQuery> = match self {
            Row::Expansion(s) => (0..k as u64)
                .map(|p| s.sign_at(&Ordinal::nat(p)))
                .take_while(|q| *q != SignQuery::Undefined)
                .collect(),
            Row::Rational(q) => real_bridge::rational_signs(q, k)
                .into_iter()
                .map(SignQuery::from)
                .collect(),
        };
        out.resize(k, SignQuery::Undefined);
        out
    }

    pub fn to_expansion(&self) -> Result<SignExpansion, LimitError> {
        match self {
            Row::Expansion(s) => Ok(s.clone()),
            Row::Rational(q) => {
                let d = real_bridge::Dyadic::from_rational(q)?;
                Ok(real_bridge::dyadic_to_se(&d))
            }
        }
    }
}

/// Claimed behaviour of one column of an oracle sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stabilization {
    StabilizesAt(u64),
    Oscillates,
}

/// Claim that every finite place from `from` on stabilizes to `sign`, and
/// that the limit ends at place ω.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TailClaim {
    pub from: u64,
    pub sign: Sign,
}

/// A sequence given by a row generator and per-column stabilization claims.
/// Claims are spot-checked, never trusted blindly.
#[derive(Clone)]
pub struct Oracle {
    pub label: String,
    pub gen: Arc<dyn Fn(u64) -> Row + Send + Sync>,
    pub stabilization: Arc<dyn Fn(u64) -> Stabilization + Send + Sync>,
    /// Rows sampled past each claimed index.
    pub probe_budget: u64,
    /// Finite places examined.
    pub depth: u64,
    pub tail: Option<TailClaim>,
}

impl fmt::Debug for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Oracle")
            .field("label", &self.label)
            .field("probe_budget", &self.probe_budget)
            .field("depth", &self.depth)
            .field("tail", &self.tail)
            .finish()
    }
}

#[derive(Debug, Clone)]
pub enum SeqDescriptor {
    Explicit(Vec<SignExpansion>),
    EventuallyConstant {
        prefix: Vec<SignExpansion>,
        tail: SignExpansion,
    },
    /// Row `n` is branch `n mod p` at parameter `⌊n/p⌋`.
    Parametric(Vec<RunTemplate>),
    Oracle(Oracle),
}

impl SeqDescriptor {
    pub fn parametric(template: RunTemplate) -> Self {
        SeqDescriptor::Parametric(vec![template])
    }

    /// Checks the descriptor invariants.
    pub fn validate(&self, monotone_samples: u64) -> Result<(), LimitError> {
        match self {
            SeqDescriptor::Explicit(rows) if rows.is_empty() => Err(
                LimitError::InvalidDescriptor("explicit sequence needs a row".into()),
            ),
            SeqDescriptor::Parametric(branches) if branches.is_empty() => Err(
                LimitError::InvalidDescriptor("parametric sequence needs a branch".into()),
            ),
            SeqDescriptor::Parametric(branches) => {
                for b in branches {
                    b.validate(monotone_samples)?;
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Number of rows, or `None` for an ω-indexed sequence.
    pub fn row_count(&self) -> Option<usize> {
        match self {
            SeqDescriptor::Explicit(rows) => Some(rows.len()),
            _ => None,
        }
    }

    pub fn row(&self, n: u64) -> Result<SignExpansion, LimitError> {
        match self {
            SeqDescriptor::Explicit(rows) => rows.get(n as usize).cloned().ok_or_else(|| {
                LimitError::IncompatibleFilter(format!("row {n} of {} requested", rows.len()))
            }),
            SeqDescriptor::EventuallyConstant { prefix, tail } => {
                Ok(prefix.get(n as usize).unwrap_or(tail).clone())
            }
            SeqDescriptor::Parametric(branches) => {
                let p = branches.len() as u64;
                branches[(n % p) as usize].eval(n / p)
            }
            SeqDescriptor::Oracle(o) => (o.gen)(n).to_expansion(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Certified,
    Probed,
}

impl Status {
    pub fn name(&self) -> &'static str {
        match self {
            Status::Certified => "certified",
            Status::Probed => "probed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Slim,
    SlimDiamond,
    FLimit,
    SlimStar,
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::Slim => "slim",
            Variant::SlimDiamond => "slim_diamond",
            Variant::FLimit => "f_limit",
            Variant::SlimStar => "slim_star",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitOutcome {
    pub value: SignExpansion,
    pub cut_place: Option<Ordinal>,
    pub full: bool,
    pub status: Status,
    pub variant_used: Variant,
    /// For oracle sequences without a tail claim: `value` lists only the
    /// places below this bound.
    pub horizon: Option<u64>,
}

impl LimitOutcome {
    fn certified(value: SignExpansion, variant: Variant) -> Self {
        LimitOutcome {
            value,
            cut_place: None,
            full: true,
            status: Status::Certified,
            variant_used: variant,
            horizon: None,
        }
    }
}

fn eventual_rows(branches: &[RunTemplate]) -> Result<Vec<SignExpansion>, LimitError> {
    branches.iter().map(RunTemplate::eventual_row).collect()
}

/// The least place where some eventual row differs from the first one.
fn branch_split(rows: &[SignExpansion]) -> Option<Ordinal> {
    rows[1..]
        .iter()
        .filter_map(|r| rows[0].first_difference(r).map(|(p, _, _)| p))
        .min()
}

/// Parametric limit truncated at `bound`; reports a cut when some eventual
/// row is still defined there.
fn parametric_outcome(
    eventual: &[SignExpansion],
    bound: Option<Ordinal>,
    variant: Variant,
) -> LimitOutcome {
    let value = match &bound {
        Some(b) => eventual[0].truncate(b),
        None => eventual[0].clone(),
    };
    let end = value.birthday();
    let cut_place = eventual
        .iter()
        .any(|e| e.sign_at(&end) != SignQuery::Undefined)
        .then_some(end.clone());
    let shortest = eventual.iter().map(SignExpansion::birthday).min();
    LimitOutcome {
        full: shortest.is_none_or(|s| end >= s),
        cut_place,
        ..LimitOutcome::certified(value, variant)
    }
}

/// The s-limit.
pub fn slim(seq: &SeqDescriptor) -> Result<LimitOutcome, LimitError> {
    match seq {
        SeqDescriptor::Explicit(rows) => {
            let last = rows.last().ok_or_else(|| {
                LimitError::InvalidDescriptor("explicit sequence needs a row".into())
            })?;
            Ok(LimitOutcome::certified(last.clone(), Variant::Slim))
        }
        SeqDescriptor::EventuallyConstant { tail, .. } => {
            Ok(LimitOutcome::certified(tail.clone(), Variant::Slim))
        }
        SeqDescriptor::Parametric(branches) => {
            let eventual = eventual_rows(branches)?;
            let mut bound = branch_split(&eventual);
            for b in branches {
                if let Some(u) = b.uniform_bound()? {
                    bound = Some(bound.map_or(u.clone(), |x| x.min(u)));
                }
            }
            Ok(parametric_outcome(&eventual, bound, Variant::Slim))
        }
        SeqDescriptor::Oracle(o) => oracle_slim(o),
    }
}

/// The per-column limit slim⋄.
pub fn slim_diamond(seq: &SeqDescriptor) -> Result<LimitOutcome, LimitError> {
    match seq {
        SeqDescriptor::Parametric(branches) => {
            // Every column of a single branch is eventually constant.
            let eventual = eventual_rows(branches)?;
            let bound = branch_split(&eventual);
            Ok(parametric_outcome(&eventual, bound, Variant::SlimDiamond))
        }
        // Oracle columns are examined one at a time, so the probed
        // agreement is already per column.
        _ => Ok(LimitOutcome {
            variant_used: Variant::SlimDiamond,
            ..slim(seq)?
        }),
    }
}

/// True when no column that is eventually defined in the rows is missing
/// from `out.value`.
pub fn full_limit_check(seq: &SeqDescriptor, out: &LimitOutcome) -> Result<bool, LimitError> {
    match seq {
        SeqDescriptor::Explicit(rows) => {
            Ok(rows.last().is_some_and(|r| r.is_prefix_of(&out.value)))
        }
        SeqDescriptor::EventuallyConstant { tail, .. } => Ok(tail.is_prefix_of(&out.value)),
        SeqDescriptor::Parametric(branches) => {
            let shortest = eventual_rows(branches)?
                .iter()
                .map(SignExpansion::birthday)
                .min()
                .expect("nonempty");
            Ok(out.value.birthday() >= shortest)
        }
        SeqDescriptor::Oracle(o) => {
            let Some(cut) = out.cut_place.as_ref().and_then(Ordinal::as_nat) else {
                return Ok(true);
            };
            // The cut column is eventually defined iff the late rows are.
            let start = o.probe_budget;
            let defined = (start..start + o.probe_budget).all(|n| {
                (o.gen)(n).places(cut as usize + 1)[cut as usize] != SignQuery::Undefined
            });
            Ok(!defined)
        }
    }
}

/// Run-wise limit on the shorthand: inferior limits of run lengths, cut at
/// the first run position where signs disagree or rows run out.
pub fn slim_star(seq: &SeqDescriptor) -> Result<LimitOutcome, LimitError> {
    match seq {
        SeqDescriptor::Explicit(_) | SeqDescriptor::EventuallyConstant { .. } => Ok(LimitOutcome {
            variant_used: Variant::SlimStar,
            ..slim(seq)?
        }),
        SeqDescriptor::Parametric(branches) => {
            let mut runs = Vec::new();
            let mut cut = false;
            for j in 0.. {
                let column: Vec<Option<&(Sign, ParamOrdinal)>> =
                    branches.iter().map(|b| b.runs.get(j)).collect();
                if column.iter().all(Option::is_none) {
                    break;
                }
                let Some(Some(&(sign, _))) = column.first() else {
                    cut = true;
                    break;
                };
                if column.iter().any(|c| c.is_none_or(|(s, _)| *s != sign)) {
                    cut = true;
                    break;
                }
                // Lengths never decrease, so each branch's inferior limit is
                // its supremum; interleaving takes the least of them.
                let len = column
                    .iter()
                    .map(|c| c.expect("checked").1.sup())
                    .collect::<Result<Vec<_>, _>>()?
                    .into_iter()
                    .min()
                    .expect("nonempty");
                runs.push(Run::new(sign, len));
            }
            let value = SignExpansion::normalize(runs);
            let cut_place = cut.then(|| value.birthday());
            Ok(LimitOutcome {
                full: !cut,
                cut_place,
                ..LimitOutcome::certified(value, Variant::SlimStar)
            })
        }
        SeqDescriptor::Oracle(_) => Err(LimitError::Unsupported(
            "slim* needs rows in shorthand; oracle rows are only known place by place".into(),
        )),
    }
}

/// A set of row indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum IndexSet {
    Finite(BTreeSet<u64>),
    /// `{start + stride·i : i ≥ 0}`.
    Progression { start: u64, stride: u64 },
}

impl IndexSet {
    fn contains(&self, n: u64) -> bool {
        match self {
            IndexSet::Finite(s) => s.contains(&n),
            IndexSet::Progression { start, stride } => {
                n >= *start && (n - start).is_multiple_of(*stride.max(&1))
            }
        }
    }

    fn intersect(&self, other: &IndexSet) -> IndexSet {
        match (self, other) {
            (IndexSet::Finite(s), o) | (o, IndexSet::Finite(s)) => {
                IndexSet::Finite(s.iter().copied().filter(|n| o.contains(*n)).collect())
            }
            (
                IndexSet::Progression { start: a, stride: k },
                IndexSet::Progression { start: b, stride: l },
            ) => {
                let (k, l) = ((*k).max(1), (*l).max(1));
                let period = k.lcm(&l);
                let first = *a.max(b);
                match (first..first + period).find(|n| self.contains(*n) && other.contains(*n)) {
                    Some(start) => IndexSet::Progression {
                        start,
                        stride: period,
                    },
                    None => IndexSet::Finite(BTreeSet::new()),
                }
            }
        }
    }

    fn is_empty(&self) -> bool {
        matches!(self, IndexSet::Finite(s) if s.is_empty())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FilterDescriptor {
    /// The filter of cofinite sets of ω.
    Frechet,
    Principal(BTreeSet<u64>),
    /// The filter generated by finitely many sets.
    Base(Vec<IndexSet>),
}

/// Longest initial segment on which all rows indexed by `set` agree.
fn agreement(seq: &SeqDescriptor, set: &IndexSet) -> Result<SignExpansion, LimitError> {
    match set {
        IndexSet::Finite(s) => {
            let mut rows = s.iter().map(|&n| seq.row(n));
            let first = rows.next().expect("nonempty set")?;
            rows.try_fold(first, |acc, r| Ok(acc.common_prefix(&r?)))
        }
        IndexSet::Progression { start, stride } => {
            let selector = Selector::stride((*stride).max(1), *start);
            match subsequence(seq, &selector)? {
                SeqDescriptor::EventuallyConstant { prefix, tail } => Ok(prefix
                    .iter()
                    .fold(tail.clone(), |acc, r| acc.common_prefix(r))),
                SeqDescriptor::Parametric(branches) => {
                    let mut out: Option<SignExpansion> = None;
                    for b in &branches {
                        let p = b.all_rows_prefix()?;
                        out = Some(out.map_or(p.clone(), |acc| acc.common_prefix(&p)));
                    }
                    Ok(out.expect("nonempty"))
                }
                _ => unreachable!("subsequence keeps the descriptor kind"),
            }
        }
    }
}

/// The limit along a filter: the longest initial segment on which all rows
/// of some member of the filter agree.
pub fn f_limit(filter: &FilterDescriptor, seq: &SeqDescriptor) -> Result<LimitOutcome, LimitError> {
    let set = match filter {
        FilterDescriptor::Frechet => {
            if seq.row_count().is_some() {
                return Err(LimitError::IncompatibleFilter(
                    "the Fréchet filter needs an ω-indexed sequence".into(),
                ));
            }
            return Ok(LimitOutcome {
                variant_used: Variant::FLimit,
                ..slim(seq)?
            });
        }
        FilterDescriptor::Principal(s) => IndexSet::Finite(s.clone()),
        FilterDescriptor::Base(sets) => {
            let mut iter = sets.iter();
            let first = iter.next().ok_or_else(|| {
                LimitError::InvalidDescriptor("filter base needs a set".into())
            })?;
            // A finite base generates the principal filter at its
            // intersection, which must be nonempty.
            iter.fold(first.clone(), |acc, s| acc.intersect(s))
        }
    };
    if set.is_empty() {
        return Err(LimitError::InvalidDescriptor(
            "filter sets lack the finite intersection property".into(),
        ));
    }
    if let (Some(len), IndexSet::Progression { .. }) = (seq.row_count(), &set) {
        return Err(LimitError::IncompatibleFilter(format!(
            "infinite index set over {len} rows"
        )));
    }
    if matches!(seq, SeqDescriptor::Oracle(_)) && matches!(set, IndexSet::Progression { .. }) {
        return Err(LimitError::Unsupported(
            "infinite filter sets over oracle rows".into(),
        ));
    }
    let value = agreement(seq, &set)?;
    Ok(LimitOutcome::certified(value, Variant::FLimit))
}

/// Selects rows `offsets[r] + period·q` in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Selector {
    period: u64,
    offsets: Vec<u64>,
}

impl Selector {
    pub fn new(period: u64, offsets: Vec<u64>) -> Result<Self, LimitError> {
        let increasing = offsets.windows(2).all(|w| w[0] < w[1]);
        let within = match (offsets.first(), offsets.last()) {
            (Some(a), Some(b)) => offsets.len() == 1 || *b < a + period,
            _ => false,
        };
        if period == 0 || !increasing || !within {
            return Err(LimitError::InvalidDescriptor(format!(
                "selector offsets {offsets:?} with period {period}"
            )));
        }
        Ok(Selector { period, offsets })
    }

    pub fn stride(k: u64, offset: u64) -> Self {
        Selector {
            period: k.max(1),
            offsets: vec![offset],
        }
    }

    pub fn even() -> Self {
        Selector::stride(2, 0)
    }

    pub fn odd() -> Self {
        Selector::stride(2, 1)
    }

    /// The original index of selected row `i`.
    pub fn index(&self, i: u64) -> u64 {
        let m = self.offsets.len() as u64;
        self.offsets[(i % m) as usize] + self.period * (i / m)
    }
}

/// The descriptor of a periodic subsequence.
pub fn subsequence(seq: &SeqDescriptor, selector: &Selector) -> Result<SeqDescriptor, LimitError> {
    match seq {
        SeqDescriptor::Explicit(_) => Err(LimitError::Unsupported(
            "subsequence of a finite sequence".into(),
        )),
        SeqDescriptor::Oracle(_) => Err(LimitError::Unsupported(
            "subsequence of an oracle sequence".into(),
        )),
        SeqDescriptor::EventuallyConstant { prefix, tail } => {
            let kept = (0..)
                .map(|i| selector.index(i))
                .take_while(|&n| (n as usize) < prefix.len())
                .map(|n| prefix[n as usize].clone())
                .collect();
            Ok(SeqDescriptor::EventuallyConstant {
                prefix: kept,
                tail: tail.clone(),
            })
        }
        SeqDescriptor::Parametric(branches) => {
            let p = branches.len() as u64;
            let k = selector.period;
            let m = selector.offsets.len() as u64;
            // Old branches repeat every t selected blocks.
            let t = p / k.gcd(&p);
            let scale = k * t / p;
            let mut out = Vec::new();
            for c in 0..m * t {
                let base = selector.offsets[(c % m) as usize] + k * (c / m);
                let template = &branches[(base % p) as usize];
                out.push(template.substitute(scale, base / p)?);
            }
            Ok(SeqDescriptor::Parametric(out))
        }
    }
}

/// The oracle limit: scan finite places, probing each claim.
fn oracle_slim(o: &Oracle) -> Result<LimitOutcome, LimitError> {
    let depth = o.depth as usize;
    let mut cache: HashMap<u64, Vec<SignQuery>> = HashMap::new();
    let mut places = |n: u64| -> Vec<SignQuery> {
        cache
            .entry(n)
            .or_insert_with(|| (o.gen)(n).places(depth))
            .clone()
    };
    let inconsistent = |place: u64, detail: String| LimitError::Inconsistent {
        label: o.label.clone(),
        place,
        detail,
    };
    if let Some(t) = o.tail {
        if t.from > o.depth {
            return Err(inconsistent(t.from, "tail claim beyond the probed depth".into()));
        }
    }
    let mut signs: Vec<Sign> = Vec::new();
    let mut start = 0u64;
    let mut cut = None;
    let mut ended = false;
    for p in 0..depth {
        match (o.stabilization)(p as u64) {
            Stabilization::StabilizesAt(i) => {
                start = start.max(i);
                let value = places(start)[p];
                for n in start..start + o.probe_budget {
                    let row = places(n);
                    let agrees = row[..p]
                        .iter()
                        .zip(&signs)
                        .all(|(q, s)| *q == SignQuery::from(*s));
                    if !agrees || row[p] != value {
                        return Err(inconsistent(
                            p as u64,
                            format!("row {n} disagrees with the claimed stabilization at {i}"),
                        ));
                    }
                }
                match value.sign() {
                    Some(s) => signs.push(s),
                    None => {
                        ended = true;
                        break;
                    }
                }
            }
            Stabilization::Oscillates => {
                let seen: BTreeSet<SignQuery> = (start..start + o.probe_budget)
                    .map(|n| places(n)[p])
                    .collect();
                if seen.len() < 2 {
                    return Err(inconsistent(
                        p as u64,
                        "claimed oscillation not observed".into(),
                    ));
                }
                cut = Some(p as u64);
                break;
            }
        }
    }
    let stop = signs.len() as u64;
    let value = SignExpansion::from_signs(&signs);
    let horizon_reached = cut.is_none() && !ended;
    match o.tail {
        Some(t) if horizon_reached => {
            if signs[t.from as usize..].iter().any(|s| *s != t.sign) {
                return Err(inconsistent(t.from, "tail claim contradicts probed signs".into()));
            }
            let value = SignExpansion::from_signs(&signs[..t.from as usize])
                .push(t.sign, Ordinal::omega());
            Ok(LimitOutcome {
                status: Status::Probed,
                ..LimitOutcome::certified(value, Variant::Slim)
            })
        }
        Some(t) => Err(inconsistent(
            stop,
            format!("limit ends at place {stop}, before the tail claimed from {}", t.from),
        )),
        None => Ok(LimitOutcome {
            value,
            cut_place: cut.map(Ordinal::nat),
            full: cut.is_none(),
            status: Status::Probed,
            variant_used: Variant::Slim,
            horizon: horizon_reached.then_some(o.depth),
        }),
    }
}

/// Which limit [`generic_slim`] computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenericVariant {
    Slim,
    SlimDiamond,
}

/// Rows over an arbitrary finite alphabet, indexed by a finite order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericMatrix {
    alphabet: BTreeSet<char>,
    rows: Vec<Vec<char>>,
}

impl GenericMatrix {
    pub fn new(alphabet: impl IntoIterator<Item = char>, rows: &[&str]) -> Result<Self, LimitError> {
        let alphabet: BTreeSet<char> = alphabet.into_iter().collect();
        let rows: Vec<Vec<char>> = rows.iter().map(|r| r.chars().collect()).collect();
        if rows.is_empty() {
            return Err(LimitError::InvalidDescriptor("matrix needs a row".into()));
        }
        if let Some(c) = rows.iter().flatten().find(|c| !alphabet.contains(c)) {
            return Err(LimitError::InvalidDescriptor(format!(
                "symbol {c:?} outside the alphabet"
            )));
        }
        Ok(GenericMatrix { alphabet, rows })
    }

    pub fn alphabet(&self) -> &BTreeSet<char> {
        &self.alphabet
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericOutcome {
    pub value: String,
    pub cut_place: Option<usize>,
}

/// The limit definitions over any alphabet, on a finite index order. With a
/// last row, slim is that row; slim⋄ keeps the columns on which every row
/// agrees.
pub fn generic_slim(matrix: &GenericMatrix, variant: GenericVariant) -> GenericOutcome {
    let rows = &matrix.rows;
    match variant {
        GenericVariant::Slim => GenericOutcome {
            value: rows.last().expect("nonempty").iter().collect(),
            cut_place: None,
        },
        GenericVariant::SlimDiamond => {
            let first = &rows[0];
            let len = (0..)
                .find(|&i| rows.iter().any(|r| r.get(i) != first.get(i)) || i >= first.len())
                .expect("bounded by the first row");
            let longer = rows.iter().any(|r| r.len() > len);
            GenericOutcome {
                value: first[..len].iter().collect(),
                cut_place: longer.then_some(len),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordinal::Affine;
    use Sign::{Minus as M, Plus as P};

    fn w() -> Ordinal {
        Ordinal::omega()
    }

    fn nat(k: u64) -> Ordinal {
        Ordinal::nat(k)
    }

    fn n() -> ParamOrdinal {
        ParamOrdinal::param()
    }

    fn c(o: Ordinal) -> ParamOrdinal {
        ParamOrdinal::from(o)
    }

    fn se(runs: &[(Sign, Ordinal)]) -> SignExpansion {
        SignExpansion::normalize(runs.iter().map(|(s, l)| Run::new(*s, l.clone())))
    }

    fn tpl(runs: Vec<(Sign, ParamOrdinal)>) -> RunTemplate {
        RunTemplate::new(runs).unwrap()
    }

    fn param(runs: Vec<(Sign, ParamOrdinal)>) -> SeqDescriptor {
        SeqDescriptor::parametric(tpl(runs))
    }

    #[test]
    fn omega_minus_n() {
        let seq = param(vec![(P, c(w())), (M, n())]);
        let out = slim(&seq).unwrap();
        assert_eq!(out.value, se(&[(P, w()), (M, w())]));
        assert_eq!(out.cut_place, None);
        assert!(out.full);
        assert_eq!(out.status, Status::Certified);
    }

    #[test]
    fn omega_to_the_n() {
        let pow = ParamOrdinal::monomial(n(), Affine::constant(1)).unwrap();
        let out = slim(&param(vec![(P, pow)])).unwrap();
        assert_eq!(out.value, se(&[(P, Ordinal::omega_pow(w()))]));
    }

    #[test]
    fn explicit_takes_last_row() {
        let rows = vec![se(&[(P, nat(1))]), se(&[(M, nat(1))]), se(&[(P, nat(3))])];
        let seq = SeqDescriptor::Explicit(rows);
        assert_eq!(slim(&seq).unwrap().value, se(&[(P, nat(3))]));
        assert_eq!(slim_diamond(&seq).unwrap().value, se(&[(P, nat(3))]));
    }

    #[test]
    fn opposite_branches_cut_at_zero() {
        let seq = SeqDescriptor::Parametric(vec![tpl(vec![(P, n())]), tpl(vec![(M, n())])]);
        let out = slim(&seq).unwrap();
        assert_eq!(out.value, SignExpansion::zero());
        assert_eq!(out.cut_place, Some(Ordinal::zero()));
    }

    #[test]
    fn constant_final_sign_family() {
        // c_n = [+n, -(ω+1)]
        let seq = param(vec![(P, n()), (M, c(&w() + &nat(1)))]);
        let s = slim(&seq).unwrap();
        assert_eq!(s.value, se(&[(P, w())]));
        assert_eq!(s.cut_place, Some(w()));
        assert!(!full_limit_check(&seq, &s).unwrap());
        assert!(!s.full);
        let d = slim_diamond(&seq).unwrap();
        assert_eq!(d.value, se(&[(P, w()), (M, nat(1))]));
        assert!(d.full);
    }

    #[test]
    fn alternating_last_sign() {
        let seq = SeqDescriptor::Parametric(vec![
            tpl(vec![(P, n()), (M, c(w())), (P, c(nat(1)))]),
            tpl(vec![(P, n()), (M, c(&w() + &nat(1)))]),
        ]);
        assert_eq!(slim(&seq).unwrap().value, se(&[(P, w())]));
        assert_eq!(slim_diamond(&seq).unwrap().value, se(&[(P, w())]));
    }

    #[test]
    fn growing_naturals_form_a_full_limit() {
        let seq = param(vec![(P, n())]);
        let out = slim(&seq).unwrap();
        assert_eq!(out.value, se(&[(P, w())]));
        assert!(full_limit_check(&seq, &out).unwrap());
    }

    #[test]
    fn eventually_constant_is_full() {
        let seq = SeqDescriptor::EventuallyConstant {
            prefix: vec![se(&[(M, nat(4))])],
            tail: se(&[(P, nat(1)), (M, nat(2))]),
        };
        let out = slim(&seq).unwrap();
        assert_eq!(out.value, se(&[(P, nat(1)), (M, nat(2))]));
        assert!(full_limit_check(&seq, &out).unwrap());
    }

    #[test]
    fn shorthand_limit() {
        let seq = param(vec![(P, n()), (M, n())]);
        assert_eq!(slim_star(&seq).unwrap().value, se(&[(P, w()), (M, w())]));
        assert_eq!(slim(&seq).unwrap().value, se(&[(P, w())]));
        let single = param(vec![(P, n())]);
        assert_eq!(slim_star(&single).unwrap().value, se(&[(P, w())]));
        let constant = SeqDescriptor::parametric(RunTemplate::constant(&se(&[(M, nat(2))])));
        assert_eq!(slim_star(&constant).unwrap().value, se(&[(M, nat(2))]));
    }

    #[test]
    fn shorthand_limit_cuts_mixed_signs() {
        let seq = SeqDescriptor::Parametric(vec![
            tpl(vec![(P, n()), (M, c(nat(1)))]),
            tpl(vec![(P, c(&nat(2) + &Ordinal::zero())), (P, n()), (P, c(nat(1)))]),
        ]);
        let out = slim_star(&seq).unwrap();
        assert_eq!(out.value, se(&[(P, w())]));
        assert_eq!(out.cut_place, Some(w()));
    }

    #[test]
    fn subsequences() {
        let seq = SeqDescriptor::Parametric(vec![
            tpl(vec![(P, ParamOrdinal::monomial(ParamOrdinal::zero(), Affine { slope: 2, offset: 0 }).unwrap())]),
            tpl(vec![(P, c(w())), (M, c(nat(1)))]),
        ]);
        let even = subsequence(&seq, &Selector::even()).unwrap();
        let SeqDescriptor::Parametric(b) = &even else { panic!() };
        assert_eq!(b.len(), 1);
        for i in 0..5 {
            assert_eq!(even.row(i).unwrap(), seq.row(2 * i).unwrap());
        }
        let stride = subsequence(&param(vec![(P, n())]), &Selector::stride(2, 0)).unwrap();
        assert_eq!(stride.row(3).unwrap(), se(&[(P, nat(6))]));
        let ec = SeqDescriptor::EventuallyConstant {
            prefix: vec![se(&[(P, nat(1))]), se(&[(M, nat(1))]), se(&[(P, nat(2))])],
            tail: SignExpansion::zero(),
        };
        let SeqDescriptor::EventuallyConstant { prefix, .. } =
            subsequence(&ec, &Selector::odd()).unwrap()
        else {
            panic!()
        };
        assert_eq!(prefix, vec![se(&[(M, nat(1))])]);
        assert!(subsequence(&SeqDescriptor::Explicit(vec![SignExpansion::zero()]), &Selector::even()).is_err());
    }

    #[test]
    fn subsequence_reindexes_mixed_periods() {
        let seq = SeqDescriptor::Parametric(vec![
            tpl(vec![(P, n())]),
            tpl(vec![(M, n())]),
            tpl(vec![(P, c(w())), (M, n())]),
        ]);
        let sel = Selector::new(4, vec![1, 2]).unwrap();
        let sub = subsequence(&seq, &sel).unwrap();
        for i in 0..30 {
            assert_eq!(sub.row(i).unwrap(), seq.row(sel.index(i)).unwrap(), "row {i}");
        }
    }

    #[test]
    fn filters() {
        let seq = param(vec![(P, c(w())), (M, n())]);
        assert_eq!(
            f_limit(&FilterDescriptor::Frechet, &seq).unwrap().value,
            se(&[(P, w()), (M, w())])
        );
        let rows: Vec<_> = (0..5).map(|k| se(&[(P, nat(k))])).collect();
        let explicit = SeqDescriptor::Explicit(rows);
        let principal = FilterDescriptor::Principal([3].into());
        assert_eq!(f_limit(&principal, &explicit).unwrap().value, se(&[(P, nat(3))]));
        assert!(f_limit(&FilterDescriptor::Frechet, &explicit).is_err());
        let alternating = SeqDescriptor::Parametric(vec![
            tpl(vec![(P, c(nat(1)))]),
            tpl(vec![(M, c(nat(1)))]),
        ]);
        let base = FilterDescriptor::Base(vec![
            IndexSet::Progression { start: 4, stride: 2 },
            IndexSet::Progression { start: 10, stride: 2 },
        ]);
        assert_eq!(f_limit(&base, &alternating).unwrap().value, se(&[(P, nat(1))]));
        let disjoint = FilterDescriptor::Base(vec![
            IndexSet::Progression { start: 0, stride: 2 },
            IndexSet::Progression { start: 1, stride: 2 },
        ]);
        assert!(matches!(
            f_limit(&disjoint, &alternating),
            Err(LimitError::InvalidDescriptor(_))
        ));
    }

    #[test]
    fn generic_engine() {
        let m = GenericMatrix::new("abcd".chars(), &["ab", "ac", "ad"]).unwrap();
        assert_eq!(generic_slim(&m, GenericVariant::Slim).value, "ad");
        let d = generic_slim(&m, GenericVariant::SlimDiamond);
        assert_eq!(d.value, "a");
        assert_eq!(d.cut_place, Some(1));
        let same = GenericMatrix::new("ab".chars(), &["ab", "ab"]).unwrap();
        assert_eq!(generic_slim(&same, GenericVariant::SlimDiamond).value, "ab");
        assert!(GenericMatrix::new("a".chars(), &["ab"]).is_err());
    }

    fn alternating_oracle(claim: Stabilization) -> Oracle {
        Oracle {
            label: "alt".into(),
            gen: Arc::new(|n| {
                Row::Expansion(if n % 2 == 0 {
                    se(&[(P, nat(2))])
                } else {
                    se(&[(P, nat(1)), (M, nat(1))])
                })
            }),
            stabilization: Arc::new(move |p| {
                if p == 0 {
                    Stabilization::StabilizesAt(0)
                } else {
                    claim
                }
            }),
            probe_budget: 16,
            depth: 8,
            tail: None,
        }
    }

    #[test]
    fn oracle_claims_are_probed() {
        let good = alternating_oracle(Stabilization::Oscillates);
        let out = slim(&SeqDescriptor::Oracle(good)).unwrap();
        assert_eq!(out.value, se(&[(P, nat(1))]));
        assert_eq!(out.cut_place, Some(nat(1)));
        assert_eq!(out.status, Status::Probed);
        let bad = alternating_oracle(Stabilization::StabilizesAt(3));
        assert!(matches!(
            slim(&SeqDescriptor::Oracle(bad)),
            Err(LimitError::Inconsistent { place: 1, .. })
        ));
    }

    #[test]
    fn oracle_tail_claim() {
        // 2^-n: place 0 is +, every later place -.
        let o = Oracle {
            label: "halving".into(),
            gen: Arc::new(|n| Row::Rational(real_bridge::pow2_neg(n as u32))),
            stabilization: Arc::new(|p| Stabilization::StabilizesAt(p + 1)),
            probe_budget: 16,
            depth: 12,
            tail: Some(TailClaim { from: 1, sign: M }),
        };
        let out = slim(&SeqDescriptor::Oracle(o)).unwrap();
        assert_eq!(out.value, se(&[(P, nat(1)), (M, w())]));
        assert_eq!(out.horizon, None);
    }
}
