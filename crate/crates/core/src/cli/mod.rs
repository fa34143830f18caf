//! The `surlim` command line.
//!
//! Exit codes: 0 on success, 1 when the library refuses the input (an
//! unsupported class, an inconsistent oracle, a failed check), 2 on malformed
//! input.

pub mod catalog;
pub mod json;
pub mod parse;
pub mod verify;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::canonical_repr::{canonical_sides, CanonicalError};
use crate::limit_engine::{
    f_limit, slim, slim_diamond, slim_star, subsequence, FilterDescriptor, IndexSet, LimitError,
    LimitOutcome, SeqDescriptor, Selector,
};
use crate::ordinal::{Ordinal, OrdinalError};
use crate::real_bridge::{
    decompose, dyadic_to_se, rational_signs, real_to_se_prefix, se_to_dyadic, BridgeError,
    Dyadic, RealPart, DEFAULT_PRECISION_BUDGET,
};
use crate::sign_expansion::SignExpansion;
use crate::transfinite_sum::{ssum, SumError};
use crate::Config;
use json::{LimitOutcomeJson, ProbeSettings, RealSequenceJson, SeqDescriptorJson, SummandsJson};
use parse::{parse_literal, parse_ordinal, parse_sign_expansion, parse_template, Literal, ParseError};
use verify::{verify_thm1, Thm1ReportJson};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Parse(_) | CliError::Usage(_) => 2,
        }
    }
}

macro_rules! domain_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Domain(e.to_string())
            }
        }
    )*};
}

domain_from!(LimitError, BridgeError, SumError, OrdinalError, CanonicalError);

const FAMILY_HELP: &str = "SEQ is a family name (omega-pow, omega-minus-n, n, plus-minus-n, osc, \
c-family, alt-last, mixed), `param:` followed by templates separated by `|`, explicit rows \
separated by `;`, or a path to a JSON descriptor ending in .json";

#[derive(Debug, Parser)]
#[command(name = "surlim", version, about = "Limits and sums of surreal numbers via sign expansions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print the JSON form of the result.
    #[arg(long, global = true)]
    json: bool,
    /// Places examined for oracle and real-valued inputs.
    #[arg(long, global = true)]
    depth: Option<u64>,
    /// Rows sampled per oracle claim.
    #[arg(long, global = true, env = "SURLIM_PROBE_BUDGET", default_value_t = 64)]
    probe_budget: u64,
    /// Deepest exponent nesting accepted in ordinals.
    #[arg(long, global = true, default_value_t = 8)]
    max_cnf_depth: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Slim,
    Diamond,
    Star,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate an ordinal expression to Cantor normal form.
    Eval { expr: String },
    /// Compare two numbers (sign expansions, ordinals or dyadics).
    Cmp {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// The s-limit of a sequence, or one of its variants.
    #[command(after_help = FAMILY_HELP)]
    Slim {
        seq: String,
        #[arg(long, value_enum, default_value = "slim")]
        variant: VariantArg,
        /// frechet, principal:I,J,..., or base:SET/SET/... with SET either
        /// I,J,... or START+STRIDEk.
        #[arg(long)]
        filter: Option<String>,
        /// even, odd, stride:K,OFFSET, or period:K:O1,O2,...
        #[arg(long)]
        subsequence: Option<String>,
    },
    /// The transfinite s-sum of a named or JSON summand sequence.
    #[command(after_help = "SPEC is omega-plus-one, omega-plus-one-swapped, ones, geometric, or a .json path")]
    Ssum {
        spec: String,
        /// Index bound, overriding the spec's.
        #[arg(long)]
        bound: Option<String>,
    },
    /// Sign expansion of a rational or of `e` (first --depth places when infinite).
    EncodeReal {
        #[arg(allow_hyphen_values = true)]
        x: String,
    },
    /// The dyadic with a given finite sign expansion.
    Decode { se: String },
    /// Split a sign expansion into real part and infinitesimal.
    Decompose { se: String },
    /// The {left | right} sides of a finite sign expansion.
    Canonical { se: String },
    /// Check lim r_n = slim(r_n) + eps for a rational sequence with a modulus.
    #[command(after_help = "SPEC is halving, neg-halving, osc2, from-above, from-below, eseries, diverge, neg-diverge, or a .json path")]
    VerifyThm1 { spec: String },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Ctx {
    config: Config,
    json: bool,
    depth: Option<u64>,
}

impl Ctx {
    fn depth(&self) -> u64 {
        self.depth.unwrap_or(self.config.probe_places)
    }

    fn probe(&self) -> ProbeSettings {
        ProbeSettings {
            probe_budget: self.config.probe_budget,
            depth: self.depth(),
        }
    }

    fn check_ordinal(&self, o: &Ordinal) -> Result<(), CliError> {
        Ok(o.check_depth(self.config.max_cnf_depth)?)
    }

    fn check_se(&self, s: &SignExpansion) -> Result<(), CliError> {
        s.runs().iter().try_for_each(|r| self.check_ordinal(&r.len))
    }

    fn emit(&self, text: String, value: impl Serialize) -> String {
        if self.json {
            let mut s = serde_json::to_string_pretty(&value).expect("serializable");
            s.push('\n');
            s
        } else {
            text
        }
    }
}

/// Runs the command line on `args` (including the program name).
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let (stdout, stderr) = if code == 0 {
                (rendered, String::new())
            } else {
                (String::new(), rendered)
            };
            return Output {
                code,
                stdout,
                stderr,
            };
        }
    };
    let ctx = Ctx {
        config: Config {
            max_cnf_depth: cli.max_cnf_depth,
            probe_budget: cli.probe_budget,
            ..Config::default()
        },
        json: cli.json,
        depth: cli.depth,
    };
    match dispatch(&ctx, &cli.command) {
        Ok((code, stdout)) => Output {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Output {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn dispatch(ctx: &Ctx, command: &Command) -> Result<(i32, String), CliError> {
    let ok = |s: String| Ok((0, s));
    match command {
        Command::Eval { expr } => {
            let o = parse_ordinal(expr)?;
            ctx.check_ordinal(&o)?;
            ok(ctx.emit(format!("{o}\n"), json!({ "value": o.to_string() })))
        }
        Command::Cmp { a, b } => {
            let (x, y) = (number(ctx, a)?, number(ctx, b)?);
            let word = match x.cmp(&y) {
                Ordering::Less => "less",
                Ordering::Equal => "equal",
                Ordering::Greater => "greater",
            };
            ok(ctx.emit(format!("{word}\n"), json!({ "result": word })))
        }
        Command::Slim {
            seq,
            variant,
            filter,
            subsequence: sub,
        } => {
            let mut d = descriptor(ctx, seq)?;
            if let Some(s) = sub {
                d = subsequence(&d, &selector(s)?)?;
            }
            let out = match (filter, variant) {
                (Some(f), VariantArg::Slim) => f_limit(&filter_descriptor(f)?, &d)?,
                (Some(_), _) => {
                    return Err(CliError::Usage("--filter only combines with --variant slim".into()))
                }
                (None, VariantArg::Slim) => slim(&d)?,
                (None, VariantArg::Diamond) => slim_diamond(&d)?,
                (None, VariantArg::Star) => slim_star(&d)?,
            };
            ctx.check_se(&out.value)?;
            ok(ctx.emit(outcome_text(&out), LimitOutcomeJson::from(&out)))
        }
        Command::Ssum { spec, bound } => {
            let spec: SummandsJson = if spec.ends_with(".json") {
                read_json(spec)?
            } else {
                catalog::summands(spec)
                    .ok_or_else(|| CliError::Usage(format!("unknown summand spec {spec:?}")))?
            };
            let (spec_bound, seq) = spec.build()?;
            let bound = match bound {
                Some(b) => parse_ordinal(b)?,
                None => spec_bound,
            };
            ctx.check_ordinal(&bound)?;
            let v = ssum(&bound, &seq)?;
            let se = v.to_se();
            ctx.check_se(&se)?;
            ok(ctx.emit(
                format!("{v}\nexpansion: {se}\n"),
                json!({ "bound": bound.to_string(), "value": v.to_string(), "expansion": se.to_string() }),
            ))
        }
        Command::EncodeReal { x } => encode_real(ctx, x),
        Command::Decode { se } => {
            let s = parse_sign_expansion(se)?;
            let d = se_to_dyadic(&s)?;
            ok(ctx.emit(format!("{d}\n"), json!({ "value": d.to_string() })))
        }
        Command::Decompose { se } => {
            let s = parse_sign_expansion(se)?;
            ctx.check_se(&s)?;
            let dec = decompose(&s)?;
            let real = match &dec.real_part {
                Some(RealPart::Dyadic(d)) => Some(d.to_string()),
                Some(RealPart::Stream(label)) => Some(label.clone()),
                None => None,
            };
            let text = format!(
                "classification: {}\nreal_part: {}\neps: {}\n",
                dec.classification.name(),
                real.as_deref().unwrap_or("none"),
                dec.eps
            );
            ok(ctx.emit(
                text,
                json!({
                    "classification": dec.classification.name(),
                    "real_part": real,
                    "eps": dec.eps.to_string(),
                }),
            ))
        }
        Command::Canonical { se } => {
            let s = parse_sign_expansion(se)?;
            let sides = canonical_sides(&s)?;
            let show = |v: &[SignExpansion]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
            let (left, right) = (show(&sides.left), show(&sides.right));
            ok(ctx.emit(
                format!("{{ {} | {} }}\n", left.join(", "), right.join(", ")),
                json!({ "left": left, "right": right }),
            ))
        }
        Command::VerifyThm1 { spec } => {
            let (spec, default_depth): (RealSequenceJson, Option<u64>) = if spec.ends_with(".json") {
                (read_json(spec)?, None)
            } else {
                let named = catalog::sequence(spec)
                    .ok_or_else(|| CliError::Usage(format!("unknown sequence spec {spec:?}")))?;
                (named, catalog::sequence_depth(spec))
            };
            let depth = ctx.depth.or(default_depth).unwrap_or(ctx.config.probe_places);
            let report = verify_thm1(&spec.build()?, depth, ctx.config.probe_budget)?;
            let j = Thm1ReportJson::from(&report);
            let mut text = String::new();
            for (k, v) in [
                ("spec", &j.spec),
                ("slim", &j.slim),
                ("limit", &j.limit),
                ("classification", &j.classification),
                ("slim_eps", &j.slim_eps),
                ("eps", &j.eps),
                ("status", &j.status),
            ] {
                let _ = writeln!(text, "{k}: {v}");
            }
            if let Some(h) = j.horizon {
                let _ = writeln!(text, "horizon: {h}");
            }
            text.push_str(if j.pass { "PASS\n" } else { "FAIL\n" });
            Ok((if j.pass { 0 } else { 1 }, ctx.emit(text, &j)))
        }
    }
}

/// A number literal as a sign expansion.
fn number(ctx: &Ctx, text: &str) -> Result<SignExpansion, CliError> {
    let s = match parse_literal(text)? {
        Literal::SignExpansion(s) => s,
        Literal::Ordinal(o) => SignExpansion::from_ordinal(&o),
        Literal::Rational(q) => dyadic_to_se(&Dyadic::from_rational(&q)?),
        Literal::Param(p) => return Err(CliError::Domain(format!("{p} depends on n"))),
    };
    ctx.check_se(&s)?;
    Ok(s)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &str) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{path}: {e}")))
}

fn descriptor(ctx: &Ctx, text: &str) -> Result<SeqDescriptor, CliError> {
    let d = if text.ends_with(".json") {
        read_json::<SeqDescriptorJson>(text)?.build(ctx.probe())?
    } else if let Some(rest) = text.strip_prefix("param:") {
        SeqDescriptor::Parametric(
            rest.split('|')
                .map(parse_template)
                .collect::<Result<_, _>>()?,
        )
    } else if let Some(branches) = catalog::family(text) {
        SeqDescriptor::Parametric(
            branches
                .iter()
                .map(|b| parse_template(b))
                .collect::<Result<_, _>>()?,
        )
    } else if text.trim_start().starts_with('[') {
        SeqDescriptor::Explicit(
            text.split(';')
                .map(parse_sign_expansion)
                .collect::<Result<_, _>>()?,
        )
    } else {
        return Err(CliError::Usage(format!("unknown sequence {text:?}")));
    };
    if let SeqDescriptor::Parametric(branches) = &d {
        if branches.len() > ctx.config.max_period {
            return Err(CliError::Domain(format!(
                "period {} exceeds the limit {}",
                branches.len(),
                ctx.config.max_period
            )));
        }
        for b in branches {
            for (_, len) in b.runs() {
                for t in len.terms() {
                    if t.exponent().is_closed() {
                        ctx.check_ordinal(&t.exponent().eval(0)?)?;
                    }
                }
            }
        }
    }
    if let SeqDescriptor::Explicit(rows) = &d {
        rows.iter().try_for_each(|r| ctx.check_se(r))?;
    }
    d.validate(ctx.config.monotone_samples)?;
    Ok(d)
}

fn usize_list(text: &str, what: &str) -> Result<Vec<u64>, CliError> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| CliError::Usage(format!("bad {what} entry {t:?}")))
        })
        .collect()
}

fn selector(text: &str) -> Result<Selector, CliError> {
    let bad = || CliError::Usage(format!("bad subsequence {text:?}"));
    match text {
        "even" => Ok(Selector::even()),
        "odd" => Ok(Selector::odd()),
        _ => {
            if let Some(rest) = text.strip_prefix("stride:") {
                let v = usize_list(rest, "stride")?;
                let [k, o] = v[..] else { return Err(bad()) };
                if k == 0 {
                    return Err(bad());
                }
                Ok(Selector::stride(k, o))
            } else if let Some(rest) = text.strip_prefix("period:") {
                let (k, offsets) = rest.split_once(':').ok_or_else(bad)?;
                let k = k.trim().parse().map_err(|_| bad())?;
                Selector::new(k, usize_list(offsets, "offset")?)
                    .map_err(|e| CliError::Usage(e.to_string()))
            } else {
                Err(bad())
            }
        }
    }
}

fn index_set(text: &str) -> Result<IndexSet, CliError> {
    if let Some((start, stride)) = text.split_once('+') {
        let stride = stride
            .trim()
            .strip_suffix('k')
            .ok_or_else(|| CliError::Usage(format!("bad progression {text:?}")))?;
        let [start] = usize_list(start, "progression")?[..] else {
            unreachable!("one entry")
        };
        let [stride] = usize_list(stride, "progression")?[..] else {
            unreachable!("one entry")
        };
        return Ok(IndexSet::Progression { start, stride });
    }
    Ok(IndexSet::Finite(usize_list(text, "index")?.into_iter().collect()))
}

fn filter_descriptor(text: &str) -> Result<FilterDescriptor, CliError> {
    if text == "frechet" {
        return Ok(FilterDescriptor::Frechet);
    }
    if let Some(rest) = text.strip_prefix("principal:") {
        return Ok(FilterDescriptor::Principal(
            usize_list(rest, "index")?.into_iter().collect::<BTreeSet<_>>(),
        ));
    }
    if let Some(rest) = text.strip_prefix("base:") {
        return Ok(FilterDescriptor::Base(
            rest.split('/').map(index_set).collect::<Result<_, _>>()?,
        ));
    }
    Err(CliError::Usage(format!("bad filter {text:?}")))
}

fn outcome_text(out: &LimitOutcome) -> String {
    let mut s = format!(
        "value: {}\ncut_place: {}\nfull: {}\nstatus: {}\nvariant: {}\n",
        out.value,
        out.cut_place.as_ref().map_or("none".into(), ToString::to_string),
        out.full,
        out.status.name(),
        out.variant_used.name()
    );
    if let Some(h) = out.horizon {
        let _ = writeln!(s, "horizon: {h}");
    }
    s
}

fn encode_real(ctx: &Ctx, x: &str) -> Result<(i32, String), CliError> {
    let depth = ctx.depth();
    let (value, exact) = if x.trim() == "e" {
        let e = json::e_stream();
        (real_to_se_prefix(&e, depth as usize, DEFAULT_PRECISION_BUDGET)?, false)
    } else {
        let q = parse::parse_rational(x)?;
        match Dyadic::from_rational(&q) {
            Ok(d) => (dyadic_to_se(&d), true),
            Err(_) => (SignExpansion::from_signs(&rational_signs(&q, depth as usize)), false),
        }
    };
    let text = if exact {
        format!("{value}\n")
    } else {
        format!("{value} ... (first {depth} places)\n")
    };
    Ok((
        0,
        ctx.emit(
            text,
            json!({ "value": value.to_string(), "exact": exact, "places": value.birthday().as_nat() }),
        ),
    ))
}
