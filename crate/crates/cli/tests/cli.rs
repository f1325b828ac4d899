use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn seqlearn(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seqlearn")).args(args).current_dir(dir).output().unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = seqlearn(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(dir: &Path, args: &[&str]) -> Value {
    serde_json::from_str(&ok(dir, args)).unwrap()
}

/// Checks the subset of JSON Schema used by the committed schemas: `type`,
/// `enum`, `pattern` (anchored digits only), `minimum`, `required`,
/// `properties` and `items`.
fn conforms(value: &Value, schema: &Value, at: &str) -> Result<(), String> {
    if let Some(ty) = schema.get("type") {
        let types: Vec<&str> = match ty {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().map(|t| t.as_str().unwrap()).collect(),
            _ => unreachable!(),
        };
        let matches = |t: &str| match t {
            "object" => value.is_object(),
            "array" => value.is_array(),
            "string" => value.is_string(),
            "boolean" => value.is_boolean(),
            "number" => value.is_number(),
            "integer" => value.is_u64() || value.is_i64(),
            "null" => value.is_null(),
            other => panic!("unsupported type {other}"),
        };
        if !types.iter().any(|t| matches(t)) {
            return Err(format!("{at}: {value} is not {types:?}"));
        }
    }
    if let Some(Value::Array(options)) = schema.get("enum") {
        if !options.contains(value) {
            return Err(format!("{at}: {value} not in {options:?}"));
        }
    }
    if let (Some(min), Some(x)) = (schema.get("minimum").and_then(Value::as_f64), value.as_f64()) {
        if x < min {
            return Err(format!("{at}: {x} < {min}"));
        }
    }
    if let (Some("^[0-9]+/[0-9]+$"), Some(s)) = (schema.get("pattern").and_then(Value::as_str), value.as_str()) {
        let good = s.split_once('/').is_some_and(|(a, b)| {
            !a.is_empty() && !b.is_empty() && a.bytes().chain(b.bytes()).all(|c| c.is_ascii_digit())
        });
        if !good {
            return Err(format!("{at}: {s:?} is not a ratio"));
        }
    }
    if let Some(Value::Array(required)) = schema.get("required") {
        for key in required {
            if value.get(key.as_str().unwrap()).is_none() {
                return Err(format!("{at}: missing {key}"));
            }
        }
    }
    if let (Some(Value::Object(props)), Some(map)) = (schema.get("properties"), value.as_object()) {
        for (k, sub) in props {
            if let Some(v) = map.get(k) {
                conforms(v, sub, &format!("{at}.{k}"))?;
            }
        }
    }
    if let (Some(items), Some(arr)) = (schema.get("items"), value.as_array()) {
        for (i, v) in arr.iter().enumerate() {
            conforms(v, items, &format!("{at}[{i}]"))?;
        }
    }
    Ok(())
}

fn schema(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn outputs_match_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["gen", "petersen", "--out", "pet.txt"]);
    ok(d, &["gen", "clique", "--n", "5", "--out", "k5.txt"]);
    let cases = [
        ("spectral_report", json(d, &["spectral", "--graph", "pet.txt"])),
        ("bound_report", json(d, &["bounds", "delta", "--p", "3/4", "--d", "3", "--r", "2", "--D", "3"])),
        ("bound_report", json(d, &["bounds", "delta", "--p", "0.9", "--d", "10001", "--r", "30", "--D", "2"])),
        ("llr_report", json(d, &["llr", "--graph", "pet.txt", "--all"])),
        ("sim_result", json(d, &["simulate", "--graph", "k5.txt", "--p", "7/10", "--trials", "100"])),
        (
            "sweep_report",
            json(d, &["robustness", "--graph", "pet.txt", "--p", "7/10", "--trials", "100", "--alpha-grid", "0.5,1", "--strategies", "random,highest-degree"]),
        ),
    ];
    for (name, value) in cases {
        conforms(&value, &schema(name), name).unwrap();
    }
}

#[test]
fn gen_round_trips_through_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let text = ok(d, &["gen", "clique", "--n", "10"]);
    assert!(text.starts_with("10 45\n"));
    std::fs::write(d.join("k10.txt"), &text).unwrap();
    let a = json(d, &["analyze", "--graph", "k10.txt"]);
    assert_eq!((a["n"].as_u64(), a["m"].as_u64(), a["girth"].as_u64()), (Some(10), Some(45), Some(3)));

    ok(d, &["--seed", "3", "gen", "random-regular", "--n", "50", "--d", "3", "--out", "rr.txt"]);
    let side: Value = serde_json::from_str(&std::fs::read_to_string(d.join("rr.txt.json")).unwrap()).unwrap();
    assert_eq!(side["recipe"]["seed"], 3);
    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(d.join("rr.txt.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 3);
    assert_eq!(manifest["command"], "gen");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let code = |args: &[&str]| seqlearn(d, args).status.code().unwrap();
    assert_eq!(code(&["nonsense"]), 1);
    assert_eq!(code(&["simulate", "--graph", "missing.txt", "--p", "2/1"]), 1);
    assert_eq!(code(&["gen", "lps", "--p", "5", "--q", "7"]), 2);
    assert_eq!(code(&["spectral", "--graph", "missing.txt"]), 2);
    ok(d, &["gen", "clique", "--n", "12", "--out", "k12.txt"]);
    assert_eq!(code(&["oracle", "--graph", "k12.txt", "--p", "7/10"]), 3);
    std::fs::write(d.join("bad.txt"), "3 2\n0 1\n1 1\n").unwrap();
    assert_eq!(code(&["analyze", "--graph", "bad.txt"]), 2);
}

#[test]
fn simulate_writes_csv_and_sidecars() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["gen", "star", "--leaves", "3", "--out", "s.txt"]);
    let stdout = ok(d, &["simulate", "--graph", "s.txt", "--p", "3/4", "--trials", "400", "--out", "r.json", "--csv", "r.csv"]);
    assert_eq!(std::fs::read_to_string(d.join("r.json")).unwrap(), stdout);
    let csv = std::fs::read_to_string(d.join("r.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
    assert!(csv.starts_with("vertex,l_hat\n0,"));
    for f in ["r.json.manifest.json", "r.csv.manifest.json"] {
        let m: Value = serde_json::from_str(&std::fs::read_to_string(d.join(f)).unwrap()).unwrap();
        assert_eq!(m["outputs"], serde_json::json!(["r.json", "r.csv"]));
    }
}

#[test]
fn empty_batch() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("empty.toml"), "").unwrap();
    assert_eq!(ok(d, &["batch", "empty.toml"]), "");
    let m: Value = serde_json::from_str(&std::fs::read_to_string(d.join("empty.toml.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["outputs"], serde_json::json!([]));
    assert!(m.get("steps").is_none());
}

#[test]
fn batch_matches_direct_invocation() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("ex1.toml"),
        r#"
[[step]]
args = ["gen", "clique", "--n", "10", "--out", "k10.txt"]

[[step]]
args = ["simulate", "--graph", "k10.txt", "--rule", "cascade", "--p", "7/10", "--trials", "100000"]
out = "batch.json"
"#,
    )
    .unwrap();
    ok(d, &["--seed", "1", "batch", "ex1.toml"]);
    let direct = ok(d, &["--seed", "1", "simulate", "--graph", "k10.txt", "--rule", "cascade", "--p", "7/10", "--trials", "100000"]);
    assert_eq!(std::fs::read_to_string(d.join("batch.json")).unwrap(), direct);
}

#[test]
fn batch_stops_at_first_failure() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("b.toml"),
        r#"
[[step]]
args = ["gen", "cycle", "--n", "7", "--out", "c7.txt"]

[[step]]
args = ["gen", "lps", "--p", "5", "--q", "7", "--out", "bad.txt"]

[[step]]
args = ["gen", "path", "--n", "3", "--out", "never.txt"]
"#,
    )
    .unwrap();
    assert_eq!(seqlearn(d, &["batch", "b.toml"]).status.code(), Some(2));
    assert!(d.join("c7.txt").exists() && d.join("c7.txt.json").exists());
    assert!(!d.join("never.txt").exists());
    let m: Value = serde_json::from_str(&std::fs::read_to_string(d.join("b.toml.manifest.json")).unwrap()).unwrap();
    let steps = m["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 2);
    assert_eq!(steps[1]["exit_code"], 2);
}

#[test]
fn batch_parse_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("bad.toml"), "[[step]]\nargs = [\"gen\"\n").unwrap();
    let out = seqlearn(d, &["batch", "bad.toml"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn table_format() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["gen", "cycle", "--n", "9", "--out", "c9.txt"]);
    let t = ok(d, &["--format", "table", "llr", "--graph", "c9.txt", "--vertex", "0"]);
    assert!(t.lines().next().unwrap().contains("certificate"));
    let t = ok(d, &["--format", "table", "bounds", "localization", "--r", "10", "--D", "2"]);
    assert!(t.contains("failure"));
}
