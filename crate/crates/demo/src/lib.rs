//! Browser bindings for the playground page. Every function takes text and
//! returns JSON text; failures come back as `{"error": ...}`.

use serde_json::json;
use surlim::cli::{self, catalog, parse::parse_template};
use surlim::limit_engine::{RunTemplate, SeqDescriptor};
use surlim::ordinal::Ordinal;
use wasm_bindgen::prelude::*;

/// Finite places shown per row in the matrix view.
const PLACES: u64 = 24;

fn invoke(args: &[&str]) -> String {
    let out = cli::run(std::iter::once("surlim").chain(args.iter().copied()));
    if out.stdout.is_empty() {
        json!({ "error": out.stderr.trim() }).to_string()
    } else {
        out.stdout
    }
}

fn sequence_arg(family: &str) -> String {
    if catalog::family(family).is_some() {
        family.to_string()
    } else {
        format!("param:{family}")
    }
}

fn branches(family: &str) -> Result<Vec<RunTemplate>, String> {
    let texts: Vec<&str> = match catalog::family(family) {
        Some(b) => b.to_vec(),
        None => family.split('|').collect(),
    };
    texts
        .into_iter()
        .map(|t| parse_template(t).map_err(|e| e.to_string()))
        .collect()
}

/// Names of the bundled families and sequences.
#[wasm_bindgen]
pub fn catalog() -> String {
    let families: Vec<_> = catalog::FAMILIES
        .iter()
        .map(|(name, b)| json!({ "name": name, "branches": b.join(" | ") }))
        .collect();
    json!({ "families": families, "sequences": catalog::SEQUENCES }).to_string()
}

/// The limit of a family given by name or as templates joined by `|`;
/// `variant` is `slim`, `diamond` or `star`.
#[wasm_bindgen]
pub fn limit(family: &str, variant: &str) -> String {
    invoke(&["--json", "slim", &sequence_arg(family), "--variant", variant])
}

/// Rows `0..count` of a family, each with its first finite places spelled
/// out (`.` where the row has ended).
#[wasm_bindgen]
pub fn matrix(family: &str, count: u32) -> String {
    let seq = match branches(family) {
        Ok(b) => SeqDescriptor::Parametric(b),
        Err(e) => return json!({ "error": e }).to_string(),
    };
    let mut rows = Vec::new();
    for n in 0..u64::from(count.min(64)) {
        let row = match seq.row(n) {
            Ok(r) => r,
            Err(e) => return json!({ "error": e.to_string() }).to_string(),
        };
        let places: String = (0..PLACES)
            .map(|p| row.sign_at(&Ordinal::nat(p)).sign().map_or('.', |s| s.symbol()))
            .collect();
        rows.push(json!({ "n": n, "row": row.to_string(), "places": places }));
    }
    json!({ "rows": rows }).to_string()
}

/// Checks a bundled rational sequence against its s-limit.
#[wasm_bindgen]
pub fn verify(name: &str) -> String {
    invoke(&["--json", "verify-thm1", name])
}

/// Evaluates an ordinal expression to Cantor normal form.
#[wasm_bindgen]
pub fn ordinal(expr: &str) -> String {
    invoke(&["--json", "eval", expr])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(text: &str, key: &str) -> String {
        let v: serde_json::Value = serde_json::from_str(text).unwrap();
        v[key].as_str().map(str::to_string).unwrap_or_else(|| v[key].to_string())
    }

    #[test]
    fn bindings() {
        assert_eq!(field(&limit("omega-pow", "slim"), "value"), "[+w^(w)]");
        assert_eq!(field(&limit("[+n, -n]", "star"), "value"), "[+w, -w]");
        assert_eq!(field(&ordinal("w*2+w"), "value"), "w*3");
        assert_eq!(field(&verify("halving"), "pass"), "true");
        assert!(field(&ordinal("w+"), "error").starts_with("error"));
        let m: serde_json::Value = serde_json::from_str(&matrix("n", 3)).unwrap();
        assert_eq!(m["rows"][2]["places"], "++......................");
        assert!(catalog().contains("mixed"));
    }
}
