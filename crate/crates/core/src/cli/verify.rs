//! Checks `lim rₙ = slim(rₙ) + ε` for a rational sequence with a modulus.

use serde::Serialize;

use crate::limit_engine::{slim, LimitError, SeqDescriptor, Status};
use crate::ordinal::Ordinal;
use crate::real_bridge::{
    add_eps, decompose, dyadic_to_se, rational_signs, real_to_se_prefix, Classification, Direction,
    Infinitesimal, DEFAULT_PRECISION_BUDGET,
};
use crate::real_sequence::{RealLimit, RealSequence};
use crate::sign_expansion::{Sign, SignExpansion};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thm1Report {
    pub spec: String,
    pub slim: SignExpansion,
    /// Set when only the first `horizon` places of the slim were examined.
    pub horizon: Option<u64>,
    pub status: Status,
    pub limit: String,
    /// `None` when the slim falls outside the recognized classes.
    pub classification: Option<Classification>,
    pub real_part: Option<String>,
    /// `slim = R(slim) + slim_eps`.
    pub slim_eps: Infinitesimal,
    /// `lim = slim + eps`.
    pub eps: Infinitesimal,
    pub pass: bool,
}

fn negate(e: Infinitesimal) -> Infinitesimal {
    match e {
        Infinitesimal::Zero => Infinitesimal::Zero,
        Infinitesimal::PlusOneOverOmega => Infinitesimal::MinusOneOverOmega,
        Infinitesimal::MinusOneOverOmega => Infinitesimal::PlusOneOverOmega,
    }
}

pub fn limit_label(limit: &RealLimit) -> String {
    match limit {
        RealLimit::Exact(q) => q.to_string(),
        RealLimit::Stream(s) => s.label().to_string(),
        RealLimit::PlusInfinity => "+inf".into(),
        RealLimit::MinusInfinity => "-inf".into(),
    }
}

/// Runs the check with `depth` places examined and `probe_budget` rows
/// sampled per claim. Fails when the modulus or a side witness is violated.
pub fn verify_thm1(seq: &RealSequence, depth: u64, probe_budget: u64) -> Result<Thm1Report, LimitError> {
    seq.validate(depth.min(48) as u32, 16)?;
    let out = slim(&SeqDescriptor::Oracle(seq.oracle(probe_budget, depth)?))?;
    let mut report = Thm1Report {
        spec: seq.label.clone(),
        slim: out.value.clone(),
        horizon: out.horizon,
        status: out.status,
        limit: limit_label(&seq.limit),
        classification: None,
        real_part: None,
        slim_eps: Infinitesimal::Zero,
        eps: Infinitesimal::Zero,
        pass: false,
    };
    let uncut = out.cut_place.is_none();
    match &seq.limit {
        RealLimit::PlusInfinity | RealLimit::MinusInfinity => {
            let sign = if matches!(seq.limit, RealLimit::PlusInfinity) {
                Sign::Plus
            } else {
                Sign::Minus
            };
            report.classification = Some(Classification::NotFinite);
            report.pass = uncut && out.value == SignExpansion::run(sign, Ordinal::omega());
        }
        RealLimit::Exact(q) if seq.dyadic_limit().is_some() => {
            let d = seq.dyadic_limit().expect("dyadic");
            if let Ok(dec) = decompose(&out.value) {
                report.classification = Some(dec.classification);
                report.real_part = dec.dyadic_part().map(|r| r.to_string());
                report.slim_eps = dec.eps;
                report.eps = negate(dec.eps);
                let rebuilt = match dec.eps {
                    Infinitesimal::Zero => dyadic_to_se(&d),
                    Infinitesimal::PlusOneOverOmega => add_eps(&d, Direction::Above),
                    Infinitesimal::MinusOneOverOmega => add_eps(&d, Direction::Below),
                };
                report.pass = dec.dyadic_part() == Some(d) && rebuilt == out.value;
            }
            report.limit = q.to_string();
        }
        RealLimit::Exact(q) => {
            report.classification = Some(Classification::NondyadicReal);
            report.real_part = Some(report.limit.clone());
            let expected = SignExpansion::from_signs(&rational_signs(q, depth as usize));
            report.pass = uncut && out.value == expected;
        }
        RealLimit::Stream(s) => {
            report.classification = Some(Classification::NondyadicReal);
            report.real_part = Some(report.limit.clone());
            let expected = real_to_se_prefix(s, depth as usize, DEFAULT_PRECISION_BUDGET)?;
            report.pass = uncut && out.value == expected;
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Thm1ReportJson {
    pub spec: String,
    pub slim: String,
    pub horizon: Option<u64>,
    pub status: String,
    pub limit: String,
    pub classification: String,
    pub real_part: Option<String>,
    pub slim_eps: String,
    pub eps: String,
    pub pass: bool,
}

impl From<&Thm1Report> for Thm1ReportJson {
    fn from(r: &Thm1Report) -> Self {
        Thm1ReportJson {
            spec: r.spec.clone(),
            slim: r.slim.to_string(),
            horizon: r.horizon,
            status: r.status.name().into(),
            limit: r.limit.clone(),
            classification: r.classification.map_or("unsupported", |c| c.name()).into(),
            real_part: r.real_part.clone(),
            slim_eps: r.slim_eps.to_string(),
            eps: r.eps.to_string(),
            pass: r.pass,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::catalog::{sequence, sequence_depth, SEQUENCES};

    fn run(name: &str) -> Thm1Report {
        let seq = sequence(name).unwrap().build().unwrap();
        verify_thm1(&seq, sequence_depth(name).unwrap_or(32), 64).unwrap()
    }

    #[test]
    fn named_sequences_pass() {
        for name in SEQUENCES {
            assert!(run(name).pass, "{name}: {:?}", run(name));
        }
    }

    #[test]
    fn halving() {
        let r = run("halving");
        assert_eq!(r.slim.to_string(), "[+1, -w]");
        assert_eq!(r.limit, "0");
        assert_eq!(r.eps, Infinitesimal::MinusOneOverOmega);
        assert_eq!(r.slim_eps, Infinitesimal::PlusOneOverOmega);
        assert_eq!(run("neg-halving").eps, Infinitesimal::PlusOneOverOmega);
    }

    #[test]
    fn osc2_and_divergence() {
        let r = run("osc2");
        assert_eq!(r.slim.to_string(), "[+2]");
        assert_eq!(r.eps, Infinitesimal::Zero);
        assert_eq!(run("diverge").slim.to_string(), "[+w]");
        assert_eq!(run("neg-diverge").slim.to_string(), "[-w]");
    }
}
