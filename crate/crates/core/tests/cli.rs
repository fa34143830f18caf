use std::path::PathBuf;
use std::process::Command;

use surlim::cli::{run, Output};

fn cli(args: &[&str]) -> Output {
    run(std::iter::once("surlim").chain(args.iter().copied()))
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn input(name: &str) -> String {
    golden_dir().join("inputs").join(name).to_string_lossy().into_owned()
}

/// Compares `--json` output with `tests/golden/<name>.json`; set
/// `UPDATE_GOLDEN=1` to rewrite the files.
fn golden(name: &str, args: &[&str], code: i32) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = cli(&full);
    assert_eq!(out.code, code, "{args:?}: {}", out.stderr);
    let path = golden_dir().join(format!("{name}.json"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &out.stdout).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {path:?}"));
    assert_eq!(out.stdout, expected, "{name}");
}

#[test]
fn limit_outcomes() {
    golden("slim_omega_minus_n", &["slim", "omega-minus-n"], 0);
    golden("slim_omega_pow", &["slim", "omega-pow"], 0);
    golden("slim_osc", &["slim", "osc"], 0);
    golden("slim_c_family", &["slim", "c-family"], 0);
    golden("slim_diamond_c_family", &["slim", "c-family", "--variant", "diamond"], 0);
    golden("slim_star_plus_minus_n", &["slim", "plus-minus-n", "--variant", "star"], 0);
    golden("slim_even_mixed", &["slim", "mixed", "--subsequence", "even"], 0);
    golden("slim_parametric_file", &["slim", &input("parametric.json")], 0);
    golden("slim_explicit_file", &["slim", &input("explicit.json")], 0);
    golden("slim_eventually_constant_file", &["slim", &input("eventually_constant.json")], 0);
    golden("slim_oracle_file", &["slim", &input("oracle.json")], 0);
    golden("f_limit_base", &["slim", "param:[+1]|[-1]", "--filter", "base:4+2k"], 0);
}

#[test]
fn thm1_reports() {
    for name in ["halving", "neg-halving", "osc2", "from-above", "from-below", "eseries", "diverge", "neg-diverge"] {
        golden(&format!("verify_{}", name.replace('-', "_")), &["verify-thm1", name], 0);
    }
    golden("verify_file", &["verify-thm1", &input("sequence.json")], 0);
}

#[test]
fn other_commands() {
    golden("eval", &["eval", "nat_sum(w+1, w+1)"], 0);
    golden("cmp", &["cmp", "[+w]", "[+w,-1]"], 0);
    golden("ssum_geometric", &["ssum", "geometric"], 0);
    golden("ssum_swapped", &["ssum", "omega-plus-one-swapped"], 0);
    golden("ssum_file", &["ssum", &input("summands.json")], 0);
    golden("encode_third", &["--depth", "10", "encode-real", "1/3"], 0);
    golden("encode_e", &["--depth", "10", "encode-real", "e"], 0);
    golden("decode", &["decode", "[+2, -1]"], 0);
    golden("decompose", &["decompose", "[+1, -1, +w]"], 0);
    golden("canonical", &["canonical", "[+1, -1]"], 0);
}

#[test]
fn text_output() {
    assert_eq!(cli(&["cmp", "[+w]", "[+w,-1]"]).stdout, "greater\n");
    assert_eq!(cli(&["eval", "nat_sum(w+1, w+1)"]).stdout, "w*2+2\n");
    assert_eq!(cli(&["decode", "[+2, -1]"]).stdout, "3/2\n");
    assert_eq!(cli(&["encode-real", "-3/4"]).stdout, "[-1, +1, -1]\n");
    assert_eq!(cli(&["ssum", "omega-plus-one"]).stdout, "w+1\nexpansion: [+w+1]\n");
    assert_eq!(cli(&["canonical", "[+2]"]).stdout, "{ [], [+1] |  }\n");
    let v = cli(&["verify-thm1", "diverge"]);
    assert!(v.stdout.contains("slim: [+w]") && v.stdout.ends_with("PASS\n"), "{v:?}");
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&["decode", "[+w]"]).code, 1);
    assert_eq!(cli(&["decompose", "[+1, -w, +1]"]).code, 1);
    assert_eq!(cli(&["slim", "[+1]", "--subsequence", "even"]).code, 1);
    assert_eq!(cli(&["ssum", "ones", "--bound", "w*7"]).code, 1);
    assert_eq!(cli(&["cmp", "[+w", "[+1]"]).code, 2);
    assert_eq!(cli(&["eval", "w^"]).code, 2);
    assert_eq!(cli(&["slim", "no-such-family"]).code, 2);
    assert_eq!(cli(&["slim", "/nonexistent/x.json"]).code, 2);
    assert_eq!(cli(&["eval", "w", "--frobnicate"]).code, 2);
    let err = cli(&["eval", "w + (2"]);
    assert!(err.stderr.contains("line 1, column"), "{err:?}");
}

#[test]
fn help_lists_every_subcommand() {
    let help = cli(&["--help"]);
    assert_eq!(help.code, 0);
    for sub in ["eval", "cmp", "slim", "ssum", "encode-real", "decode", "decompose", "canonical", "verify-thm1"] {
        assert!(help.stdout.contains(sub), "{sub} missing from help");
    }
    for flag in ["--json", "--depth", "--probe-budget", "--max-cnf-depth"] {
        assert!(help.stdout.contains(flag), "{flag} missing from help");
    }
}

#[test]
fn binary_and_environment() {
    let bin = env!("CARGO_BIN_EXE_surlim");
    let ok = Command::new(bin).args(["cmp", "1/2", "[+1, -1]"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), "equal\n");
    let bad = Command::new(bin).args(["decode", "[+w]"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    let parse = Command::new(bin).args(["eval", ")"]).output().unwrap();
    assert_eq!(parse.status.code(), Some(2));
    let probed = Command::new(bin)
        .env("SURLIM_PROBE_BUDGET", "9")
        .args(["--json", "slim", &input("oracle.json")])
        .output()
        .unwrap();
    assert_eq!(probed.status.code(), Some(0));
    let zero = Command::new(bin)
        .env("SURLIM_PROBE_BUDGET", "zero")
        .args(["eval", "w"])
        .output()
        .unwrap();
    assert_eq!(zero.status.code(), Some(2));
}
