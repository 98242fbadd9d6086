use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn onion(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_onion"))
        .args(args)
        .env_remove("ONION_SEED")
        .env_remove("ONION_MODE")
        .env_remove("ONION_TOL")
        .env_remove("ONION_OUTPUT")
        .env_remove("ONION_INPUT")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn exact_doc(format: &[usize], ones: &[usize]) -> String {
    let n: usize = format.iter().product();
    let amps: Vec<Value> = (0..n)
        .map(|i| if ones.contains(&i) { json!(["1", "0"]) } else { json!(["0", "0"]) })
        .collect();
    json!({"format": format, "amplitudes": amps, "mode": "exact"}).to_string()
}

const GHZ: &[usize] = &[0, 7];
const W: &[usize] = &[1, 2, 4];

#[test]
fn hyperdet_of_bell() {
    let out = onion(&["hyperdet"], &exact_doc(&[2, 2], &[0, 3]));
    assert!(out.status.success());
    assert_eq!(json_of(&out), json!({"defined": true, "value": "1/1", "degree": 2}));
}

#[test]
fn classify_ghz() {
    let out = onion(&["classify"], &exact_doc(&[2, 2, 2], GHZ));
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["name"], "GHZ");
    assert_eq!(v["onion_level"], 0);
    assert_eq!(v["local_ranks"], json!([2, 2, 2]));
    assert_eq!(v["diagnostics"]["det3"], "1/1");
}

#[test]
fn validation_and_unsupported_exit_codes() {
    let seven = json!({"format": [2, 2, 2], "amplitudes": vec![json!([1, 0]); 7]}).to_string();
    let out = onion(&["classify"], &seven);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["error"]["kind"], "FormatMismatch");

    let out = onion(&["classify"], &exact_doc(&[2, 2, 2, 2, 2], &[0]));
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json_of(&out)["error"]["kind"], "UnsupportedFormat");
}

#[test]
fn malformed_documents_never_panic() {
    let docs = [
        "",
        "not json",
        "{}",
        "[]",
        r#"{"format":[2,2]}"#,
        r#"{"format":[2,2],"amplitudes":[[1,0],["0","0"],[0,0],[0,0]]}"#,
        r#"{"format":[2,2],"amplitudes":[[1],[0],[0],[0]]}"#,
        r#"{"format":[1,2],"amplitudes":[[1,0],[0,0]]}"#,
        r#"{"format":[],"amplitudes":[]}"#,
        r#"{"format":[2,2],"amplitudes":[["1/0","0"],["0","0"],["0","0"],["0","0"]]}"#,
        r#"{"format":[2,2],"amplitudes":[[0,0],[0,0],[0,0],[0,0]]}"#,
        r#"{"format":[2,2],"amplitudes":[[1,0],[0,0],[0,0],[1,0]],"mode":"fuzzy"}"#,
        r#"{"format":[2,2],"amplitudes":[[1,0],[0,0],[0,0],[1,0]],"extra":1}"#,
        r#"{"format":[-2,2],"amplitudes":[[1,0],[0,0],[0,0],[1,0]]}"#,
    ];
    for cmd in ["classify", "hyperdet", "invariants", "canonicalize", "oracle"] {
        for doc in docs {
            let out = onion(&[cmd, "--seed", "1", "--restarts", "2"], doc);
            assert_eq!(out.status.code(), Some(2), "{cmd} on {doc:?}: {}", String::from_utf8_lossy(&out.stderr));
            assert!(json_of(&out)["error"]["kind"].is_string());
        }
    }
}

#[test]
fn reachable_examples() {
    assert_eq!(json_of(&onion(&["reachable", "GHZ", "B2"], ""))["reachable"], true);
    assert_eq!(json_of(&onion(&["reachable", "W", "GHZ"], ""))["reachable"], false);
    assert_eq!(json_of(&onion(&["reachable", "GEN322", "B1", "--family", "format322"], ""))["reachable"], true);
    assert_eq!(onion(&["reachable", "GHZ", "NOPE"], "").status.code(), Some(2));
}

#[test]
fn random_round_trip_is_byte_stable() {
    for mode in ["float", "exact"] {
        let a = onion(&["random", "2", "2", "2", "--seed", "9", "--mode", mode], "");
        let b = onion(&["random", "2", "2", "2", "--seed", "9", "--mode", mode], "");
        assert_eq!(a.stdout, b.stdout);
        let doc = String::from_utf8(a.stdout).unwrap();
        let first = onion(&["classify"], &doc).stdout;
        assert_eq!(first, onion(&["classify"], &doc).stdout);
        assert_eq!(json_of(&onion(&["classify"], &doc))["name"], "GHZ");
    }
}

#[test]
fn random_without_seed_announces_one() {
    let out = onion(&["random", "2", "2"], "");
    let stderr = String::from_utf8(out.stderr.clone()).unwrap();
    let seed: u64 = stderr.trim().strip_prefix("seed: ").unwrap().parse().unwrap();
    assert_eq!(json_of(&out)["seed"], seed);
}

#[test]
fn seed_from_environment() {
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_onion"))
            .args(["random", "3", "2", "2"])
            .env("ONION_SEED", seed)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("5"), onion(&["random", "3", "2", "2", "--seed", "5"], "").stdout);
    assert_ne!(run("5"), run("6"));
}

#[test]
fn input_file_and_text_output_agree_with_json() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(exact_doc(&[2, 2, 2], W).as_bytes()).unwrap();
    let path = file.path().to_str().unwrap();
    let json = json_of(&onion(&["classify", "--input", path], ""));
    let text = String::from_utf8(onion(&["classify", "--input", path, "--output", "text"], "").stdout).unwrap();
    let field = |k: &str| {
        text.lines()
            .find_map(|l| l.strip_prefix(k).map(|v| v.trim().to_string()))
            .unwrap_or_else(|| panic!("{k} missing in {text}"))
    };
    assert_eq!(field("name"), json["name"].as_str().unwrap());
    assert_eq!(field("diagnostics.det3"), json["diagnostics"]["det3"].as_str().unwrap());
    assert_eq!(field("onion_level"), json["onion_level"].to_string());
}

#[test]
fn canonicalize_reports_representative() {
    let doc = String::from_utf8(onion(&["random", "2", "2", "2", "--seed", "4", "--mode", "exact"], "").stdout).unwrap();
    let v = json_of(&onion(&["canonicalize"], &doc));
    assert_eq!(v["label"]["name"], "GHZ");
    assert_eq!(v["operators"].as_array().unwrap().len(), 3);
    assert_eq!(v["representative"]["amplitudes"][7], json!(["1/1", "0/1"]));

    let out = onion(&["canonicalize"], &exact_doc(&[3, 2, 2], &[0]));
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn oracle_reports_formula_and_verdict() {
    let v = json_of(&onion(&["oracle", "--seed", "1"], &exact_doc(&[2, 2, 2], W)));
    assert_eq!(v["found"], true);
    assert_eq!(v["formula"]["zero"], true);
    assert!(v["residual"].as_f64().unwrap() <= 1e-8);
    let v = json_of(&onion(&["oracle", "--seed", "1"], &exact_doc(&[2, 2, 2], GHZ)));
    assert_eq!(v["found"], false);
    assert_eq!(v["formula"]["value"], "1/1");
    assert_eq!(v["witness"], Value::Null);
}

#[test]
fn invariants_of_ghz() {
    let v = json_of(&onion(&["invariants", "--mode", "float"], &exact_doc(&[2, 2, 2], GHZ)));
    assert!((v["tangle"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(v["singularity"]["in_dual"], false);
    let v = json_of(&onion(&["invariants"], &exact_doc(&[2, 2], &[0, 3])));
    assert!((v["concurrence"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn float_det4_warning() {
    let doc = json!({"format": [2, 2, 2, 2], "amplitudes": (0..16).map(|i| if i == 0 || i == 15 { json!([1, 0]) } else { json!([0, 0]) }).collect::<Vec<_>>()});
    let v = json_of(&onion(&["hyperdet"], &doc.to_string()));
    assert!(v["warning"].is_string());
    let v = json_of(&onion(&["hyperdet", "--mode", "exact"], &doc.to_string()));
    assert_eq!(v["value"], "0/1");
    assert!(v.get("warning").is_none());
}

#[test]
fn mixed_ensembles() {
    let member = |w: &str, ones: &[usize]| {
        json!({"weight": w, "state": serde_json::from_str::<Value>(&exact_doc(&[2, 2, 2], ones)).unwrap()})
    };
    let doc = json!({"members": [member("1/2", GHZ), member("1/2", W)]}).to_string();
    let v = json_of(&onion(&["mixed"], &doc));
    assert_eq!(v, json!({"class": "GHZ-class", "bound_kind": "upper-bound", "members": ["GHZ-class", "W-class"]}));

    let doc = json!({"members": [member("1/2", &[0]), member("1/3", &[7])]}).to_string();
    let out = onion(&["mixed"], &doc);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["error"]["kind"], "InvalidWeights");
    let out = onion(&["mixed"], r#"{"members":[]}"#);
    assert_eq!(json_of(&out)["error"]["kind"], "EmptyEnsemble");
}

#[test]
fn selftest_quick_passes() {
    let out = onion(&["selftest", "--level", "quick", "--output", "text"], "");
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 10, "{text}");
}
