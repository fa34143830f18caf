//! Seeded generators shared by the integration tests.

#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use surlim::limit_engine::RunTemplate;
use surlim::ordinal::{Affine, Ordinal, ParamOrdinal};
use surlim::real_bridge::Dyadic;
use surlim::sign_expansion::{Run, Sign, SignExpansion};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn ordinal(rng: &mut StdRng, depth: u32) -> Ordinal {
    if depth == 0 || rng.gen_bool(0.3) {
        return Ordinal::nat(rng.gen_range(0..6));
    }
    let mut terms: Vec<(Ordinal, u64)> = (0..rng.gen_range(1..4))
        .map(|_| (ordinal(rng, depth - 1), rng.gen_range(1..5)))
        .collect();
    terms.sort_by(|a, b| b.0.cmp(&a.0));
    terms.dedup_by(|a, b| a.0 == b.0);
    Ordinal::from_terms(terms).unwrap()
}

pub fn positive_ordinal(rng: &mut StdRng, depth: u32) -> Ordinal {
    loop {
        let o = ordinal(rng, depth);
        if !o.is_zero() {
            return o;
        }
    }
}

pub fn sign(rng: &mut StdRng) -> Sign {
    if rng.gen_bool(0.5) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

pub fn sign_expansion(rng: &mut StdRng, depth: u32) -> SignExpansion {
    let runs: Vec<Run> = (0..rng.gen_range(0..5))
        .map(|_| Run::new(sign(rng), positive_ordinal(rng, depth)))
        .collect();
    SignExpansion::normalize(runs)
}

pub fn finite_sign_expansion(rng: &mut StdRng, max_len: usize) -> SignExpansion {
    let signs: Vec<Sign> = (0..rng.gen_range(0..=max_len)).map(|_| sign(rng)).collect();
    SignExpansion::from_signs(&signs)
}

pub fn dyadic(rng: &mut StdRng) -> Dyadic {
    Dyadic::new(rng.gen_range(-4096..=4096), rng.gen_range(0..=10)).unwrap()
}

fn affine(rng: &mut StdRng) -> Affine {
    loop {
        let (slope, offset) = (rng.gen_range(0..3), rng.gen_range(0..3));
        if slope + offset > 0 {
            return Affine { slope, offset };
        }
    }
}

/// Nondecreasing families `ω²·(a·n+b) + ω·(c·n+d) + (e·n+f)`, or `ω^n`.
pub fn param_ordinal(rng: &mut StdRng) -> ParamOrdinal {
    if rng.gen_bool(0.15) {
        return ParamOrdinal::monomial(ParamOrdinal::param(), Affine::constant(1)).unwrap();
    }
    loop {
        let mut out = ParamOrdinal::zero();
        for e in (0..3u64).rev() {
            if rng.gen_bool(0.5) {
                let m = ParamOrdinal::monomial(ParamOrdinal::from(Ordinal::nat(e)), affine(rng)).unwrap();
                out = out.checked_add(&m).unwrap();
            }
        }
        if !out.is_zero() {
            return out;
        }
    }
}

/// Alternating runs; with `monotone`, minus runs keep a fixed length so the
/// rows never decrease.
pub fn template(rng: &mut StdRng, monotone: bool) -> RunTemplate {
    let mut s = sign(rng);
    let runs = (0..rng.gen_range(1..4))
        .map(|_| {
            let len = if monotone && s == Sign::Minus {
                ParamOrdinal::from(positive_ordinal(rng, 1))
            } else {
                param_ordinal(rng)
            };
            let run = (s, len);
            s = s.flip();
            run
        })
        .collect();
    RunTemplate::new(runs).unwrap()
}
