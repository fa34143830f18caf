//! Proptest strategies shared by the unit tests.

use proptest::prelude::*;

use crate::limit_engine::RunTemplate;
use crate::ordinal::{Affine, Ordinal, ParamOrdinal};
use crate::real_bridge::Dyadic;
use crate::sign_expansion::{Run, Sign, SignExpansion};

/// Ordinals of exponent nesting at most `depth`, with at most three terms.
pub fn ordinal(depth: u32) -> BoxedStrategy<Ordinal> {
    let leaf = (0u64..6).prop_map(Ordinal::nat).boxed();
    leaf.prop_recursive(depth, 16, 3, |inner| {
        prop::collection::vec((inner, 1u64..4), 1..4)
            .prop_map(|mut terms| {
                terms.sort_by(|a, b| b.0.cmp(&a.0));
                terms.dedup_by(|a, b| a.0 == b.0);
                Ordinal::from_terms(terms).expect("decreasing exponents")
            })
            .boxed()
    })
    .boxed()
}

pub fn sign() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Plus), Just(Sign::Minus)]
}

pub fn sign_expansion() -> impl Strategy<Value = SignExpansion> {
    let len = ordinal(2).prop_filter("positive", |o| !o.is_zero());
    prop::collection::vec((sign(), len), 0..5)
        .prop_map(|runs| SignExpansion::normalize(runs.into_iter().map(|(s, l)| Run::new(s, l))))
}

pub fn finite_sign_expansion() -> impl Strategy<Value = SignExpansion> {
    prop::collection::vec(sign(), 0..12).prop_map(|s| SignExpansion::from_signs(&s))
}

pub fn dyadic() -> impl Strategy<Value = Dyadic> {
    (-4096i128..=4096, 0u32..=10).prop_map(|(n, k)| Dyadic::new(n, k).expect("in range"))
}

fn affine() -> impl Strategy<Value = Affine> {
    (0u64..3, 0u64..3)
        .prop_filter("nonzero", |(a, b)| a + b > 0)
        .prop_map(|(slope, offset)| Affine { slope, offset })
}

/// Nondecreasing families `ω²·(a·n+b) + ω·(c·n+d) + (e·n+f)`, or `ω^n`.
pub fn param_ordinal() -> impl Strategy<Value = ParamOrdinal> {
    let sum = prop::collection::vec(prop::option::of(affine()), 3).prop_map(|coeffs| {
        let mut out = ParamOrdinal::zero();
        for (e, c) in (0..3u64).rev().zip(coeffs) {
            if let Some(c) = c {
                let m = ParamOrdinal::monomial(ParamOrdinal::from(Ordinal::nat(e)), c).expect("monomial");
                out = out.checked_add(&m).expect("sum");
            }
        }
        out
    });
    prop_oneof![
        4 => sum,
        1 => Just(ParamOrdinal::monomial(ParamOrdinal::param(), Affine::constant(1)).expect("w^n")),
    ]
}

/// Families nondecreasing in the surreal order: minus runs keep a fixed
/// length, plus runs may grow.
pub fn nondecreasing_template() -> impl Strategy<Value = RunTemplate> {
    let closed = ordinal(1).prop_filter("positive", |o| !o.is_zero());
    (sign(), prop::collection::vec((param_ordinal(), closed), 1..4)).prop_map(|(first, runs)| {
        let mut out = Vec::new();
        let mut s = first;
        for (grow, fixed) in runs {
            let len = match s {
                Sign::Plus => grow,
                Sign::Minus => ParamOrdinal::from(fixed),
            };
            out.push((s, len));
            s = s.flip();
        }
        RunTemplate::new(out).expect("template")
    })
}
