//! Named families, sequences and summand specs.

use super::json::{
    BlockJson, LimitJson, ModulusJson, RealSequenceJson, SideJson, SideWitnessJson, SummandsJson,
    TailJson, TermJson,
};

/// Parametric families by name, as template strings (one per branch).
pub const FAMILIES: &[(&str, &[&str])] = &[
    ("omega-pow", &["[+(w^n)]"]),
    ("omega-minus-n", &["[+w, -n]"]),
    ("n", &["[+n]"]),
    ("plus-minus-n", &["[+n, -n]"]),
    ("osc", &["[+n]", "[-n]"]),
    ("c-family", &["[+n, -(w+1)]"]),
    ("alt-last", &["[+n, -w, +1]", "[+n, -(w+1)]"]),
    ("mixed", &["[+(2*n)]", "[+w, -1]"]),
];

pub fn family(name: &str) -> Option<&'static [&'static str]> {
    FAMILIES.iter().find(|(n, _)| *n == name).map(|(_, b)| *b)
}

pub const SEQUENCES: &[&str] = &[
    "halving",
    "neg-halving",
    "osc2",
    "from-above",
    "from-below",
    "eseries",
    "diverge",
    "neg-diverge",
];

/// Depth at which a named sequence is checked by default.
pub fn sequence_depth(name: &str) -> Option<u64> {
    (name == "eseries").then_some(24)
}

fn geometric(label: &str, target: &str, scale: &str, side: SideJson) -> RealSequenceJson {
    RealSequenceJson {
        label: label.into(),
        term: TermJson::Geometric {
            target: target.into(),
            scale: scale.into(),
            ratio: "1/2".into(),
        },
        limit: LimitJson::Exact {
            value: target.into(),
        },
        modulus: ModulusJson {
            scale: 1,
            offset: 0,
        },
        side: Some(SideWitnessJson { side, from: 0 }),
    }
}

fn linear(label: &str, slope: &str, limit: LimitJson) -> RealSequenceJson {
    RealSequenceJson {
        label: label.into(),
        term: TermJson::Linear {
            slope: slope.into(),
            offset: "0".into(),
        },
        limit,
        modulus: ModulusJson {
            scale: 1,
            offset: 0,
        },
        side: None,
    }
}

pub fn sequence(name: &str) -> Option<RealSequenceJson> {
    Some(match name {
        "halving" => geometric(name, "0", "1", SideJson::Above),
        "neg-halving" => geometric(name, "0", "-1", SideJson::Below),
        "from-above" => geometric(name, "3/4", "1", SideJson::Above),
        "from-below" => geometric(name, "5/2", "-1", SideJson::Below),
        // 1.99, 2.01, 1.999, 2.001, ...
        "osc2" => RealSequenceJson {
            label: name.into(),
            term: TermJson::Oscillating {
                target: "2".into(),
                scale: "1/100".into(),
                ratio: "1/10".into(),
            },
            limit: LimitJson::Exact { value: "2".into() },
            modulus: ModulusJson {
                scale: 1,
                offset: 0,
            },
            side: Some(SideWitnessJson {
                side: SideJson::Both,
                from: 0,
            }),
        },
        "eseries" => RealSequenceJson {
            label: name.into(),
            term: TermJson::ExpSeries,
            limit: LimitJson::E,
            modulus: ModulusJson {
                scale: 1,
                offset: 2,
            },
            side: None,
        },
        "diverge" => linear(name, "1", LimitJson::PlusInfinity),
        "neg-diverge" => linear(name, "-1", LimitJson::MinusInfinity),
        _ => return None,
    })
}

pub const SUMMANDS: &[&str] = &["omega-plus-one", "omega-plus-one-swapped", "ones", "geometric"];

fn constant(prefix: &[&str], value: &str) -> BlockJson {
    BlockJson {
        prefix: prefix.iter().map(|s| s.to_string()).collect(),
        tail: TailJson::Constant {
            value: value.into(),
        },
    }
}

pub fn summands(name: &str) -> Option<SummandsJson> {
    let omega_plus_one = SummandsJson {
        bound: "w+1".into(),
        blocks: vec![constant(&["0"], "1"), constant(&[], "1")],
        cycles: vec![],
    };
    Some(match name {
        "omega-plus-one" => omega_plus_one,
        "omega-plus-one-swapped" => SummandsJson {
            cycles: vec![vec!["0".into(), "w".into()]],
            ..omega_plus_one
        },
        "ones" => SummandsJson {
            bound: "w".into(),
            blocks: vec![constant(&[], "1"); 3],
            cycles: vec![],
        },
        "geometric" => SummandsJson {
            bound: "w".into(),
            blocks: vec![BlockJson {
                prefix: vec![],
                tail: TailJson::Halving { scale: "1".into() },
            }],
            cycles: vec![],
        },
        _ => return None,
    })
}
