use credal::cli::file::{AssessmentFile, ItemSpec, Mode};
use credal::cli::run;
use credal::cli::syntax::{GambleSpec, RationalText};
use credal::rational::parse_rational;
use proptest::prelude::*;
use serde_json::Value;
use std::collections::BTreeMap;

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut argv = vec!["credal", "--json"];
    argv.extend_from_slice(args);
    let outcome = run(argv);
    let value = serde_json::from_str(&outcome.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}\nstdout: {}\nstderr: {}", outcome.stdout, outcome.stderr));
    (outcome.code, value)
}

fn keys(value: &Value) -> Vec<&str> {
    value.as_object().unwrap().keys().map(String::as_str).collect()
}

/// Every string leaf is either a label-like key value or an exact rational;
/// no leaf looks like a decimal.
fn assert_exact(value: &Value) {
    match value {
        Value::String(s) => assert!(!s.contains('.') || s.contains(' '), "decimal-looking value {s}"),
        Value::Number(n) => assert!(n.is_i64() || n.is_u64(), "non-integer number {n}"),
        Value::Array(items) => items.iter().for_each(assert_exact),
        Value::Object(map) => map.values().for_each(assert_exact),
        _ => {}
    }
}

fn binomials(levels: std::ops::RangeInclusive<u32>) -> Vec<String> {
    levels.map(|n| fixture(&format!("binomial{n}.json"))).collect()
}

fn mixtures(levels: std::ops::RangeInclusive<u32>) -> Vec<String> {
    levels.map(|n| fixture(&format!("mixture{n}.json"))).collect()
}

#[test]
fn check_asl_schema() {
    let (code, v) = json(&["check-asl", &fixture("two_items.json")]);
    assert_eq!(code, 1);
    assert_eq!(keys(&v), ["command", "mode", "domain", "avoids_sure_loss", "dominating_mass", "multipliers"]);
    assert_eq!(v["multipliers"], serde_json::json!(["1", "1"]));

    let (code, v) = json(&["check-asl", &fixture("binomial2.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["dominating_mass"]["0:1,1:1"], "1/2");
    assert!(v["multipliers"].is_null());
    assert_exact(&v);
}

#[test]
fn check_coherence_schema() {
    let (code, v) = json(&["check-coherence", &fixture("diaconis.json")]);
    assert_eq!(code, 0);
    assert_eq!(keys(&v), ["command", "mode", "domain", "coherent", "reason", "multipliers", "item", "assessed", "natural_extension"]);
    assert_eq!(v["reason"], "coherent");
}

#[test]
fn coherence_reports_raised_prices() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("raised.json");
    std::fs::write(
        &path,
        r#"{"labels": ["0", "1"], "arity": 1, "items": [
            {"gamble": {"values": {"0": "1"}}, "lower": "1/2"},
            {"gamble": {"values": {"0": "1"}, "default": "1"}, "lower": "1/4"}
        ]}"#,
    )
    .unwrap();
    let (code, v) = json(&["check-coherence", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["reason"], "price_raised");
    assert_eq!(v["item"], 1);
    assert_eq!(v["natural_extension"], "1");
}

#[test]
fn natex_and_vacuous() {
    let (code, v) = json(&["natex", &fixture("binomial2.json"), "--gamble", "1:2=1;0:1,1:1=1/2"]);
    assert_eq!(code, 0);
    assert_eq!(keys(&v), ["command", "mode", "domain", "gamble", "value", "upper"]);
    assert_eq!(v["value"], "1/2");
    assert_eq!(v["upper"], "1/2");

    let (code, v) = json(&["vacuous", &fixture("binary3.json"), "--gamble", "1,0,1=1"]);
    assert_eq!(code, 0);
    assert_eq!(keys(&v), ["command", "mode", "domain", "gamble", "value"]);
    assert_eq!(v["value"], "0");
    let (_, v) = json(&["vacuous", &fixture("binary3.json"), "--gamble", "0,0,1=1;0,1,0=1;1,0,0=1"]);
    assert_eq!(v["value"], "0");
    let (_, v) = json(&["vacuous", &fixture("binary3.json"), "--gamble", "{\"default\": \"1\", \"values\": {\"1,1,1\": \"0\"}}"]);
    assert_eq!(v["value"], "0");
}

#[test]
fn ene_reports_existence() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("local.json");
    std::fs::write(
        &path,
        r#"{"labels": ["0", "1"], "arity": 2, "items": [{"gamble": {"values": {"1,0": "1"}}, "lower": "1/4"}]}"#,
    )
    .unwrap();
    let (code, v) = json(&["ene", path.to_str().unwrap(), "--gamble", "0,1=1"]);
    assert_eq!(code, 0);
    assert_eq!(keys(&v), ["command", "mode", "domain", "gamble", "exists", "multipliers", "value"]);
    assert_eq!(v["value"], "1/4");

    std::fs::write(
        &path,
        r#"{"labels": ["0", "1"], "arity": 2, "items": [
            {"gamble": {"values": {"1,0": "1"}}, "lower": "1/2"},
            {"gamble": {"values": {"0,1": "-1"}}, "lower": "-1/4"}
        ]}"#,
    )
    .unwrap();
    let (code, v) = json(&["ene", path.to_str().unwrap(), "--gamble", "0,1=1"]);
    assert_eq!(code, 1);
    assert_eq!(v["exists"], false);
    assert!(v["value"].is_null());

    let (code, _) = json(&["ene", &fixture("diaconis.json"), "--gamble", "1:2=1"]);
    assert_eq!(code, 2);
}

#[test]
fn extend_schema_and_values() {
    let (code, v) = json(&["extend", &fixture("binomial2.json"), "--to", "4", "--eval", "1:4=1"]);
    assert_eq!(code, 0);
    assert_eq!(
        keys(&v),
        ["command", "mode", "base_level", "target_level", "extendable", "witness", "certificate", "preserves_base", "value"]
    );
    assert_eq!(v["preserves_base"], true);
    assert!(v["certificate"].is_null());
    // the smallest extension of a precise binomial base puts no mass on 1:4
    assert_eq!(v["value"], "0");

    let (code, v) = json(&["extend", &fixture("diaconis.json"), "--to", "3", "--eval", "1:3=1"]);
    assert_eq!(code, 1);
    assert!(v["value"].is_null());
    assert_eq!(v["certificate"]["extended_max"], "2/3");

    let outcome = run(["credal", "extend", &fixture("diaconis.json"), "--to", "2"]);
    assert_eq!(outcome.code, 2);
    assert!(outcome.stderr.contains("--to"));
}

#[test]
fn time_consistency_matrix() {
    let files = binomials(1..=3);
    let mut args = vec!["time-consistent"];
    args.extend(files.iter().map(String::as_str));
    let (code, v) = json(&args);
    assert_eq!(code, 0);
    assert_eq!(keys(&v), ["command", "levels", "consistent", "complete", "pairs"]);
    assert_eq!(v["pairs"].as_array().unwrap().len(), 3);
    assert_eq!(keys(&v["pairs"][0]), ["level", "next", "consistent", "complete", "witness"]);

    // a binomial level followed by a mixture level
    let (code, v) = json(&["time-consistent", &fixture("binomial1.json"), &fixture("mixture2.json")]);
    assert_eq!(code, 1);
    assert_eq!(v["consistent"], false);
    assert!(v["pairs"][0]["witness"]["gamble"].is_object());
}

#[test]
fn represent_and_converge() {
    let files = mixtures(1..=4);
    let mut args = vec!["represent"];
    args.extend(files.iter().map(String::as_str));
    args.extend(["--poly", "1:1=1", "--moments", "2"]);
    let (code, v) = json(&args);
    assert_eq!(code, 0);
    assert_eq!(keys(&v), ["command", "levels", "degree", "value", "upper", "moments"]);
    assert_eq!(v["value"], "1/3");
    assert_eq!(v["upper"], "2/3");
    assert_eq!(v["moments"], serde_json::json!(["1", "1/3", "1/9"]));

    let files = binomials(1..=4);
    let mut args = vec!["converge"];
    args.extend(files.iter().map(String::as_str));
    args.extend(["--poly", "1:2=1", "--levels", "1..4"]);
    let (code, v) = json(&args);
    assert_eq!(code, 0);
    assert_eq!(keys(&v), ["command", "values", "limit"]);
    let values: Vec<&str> = v["values"].as_array().unwrap().iter().map(|e| e["value"].as_str().unwrap()).collect();
    assert_eq!(values, ["1/2", "3/8", "1/3", "5/16"]);
    assert_eq!(v["limit"], "1/4");

    let mut args = vec!["converge"];
    args.extend(files.iter().map(String::as_str));
    args.extend(["--poly", "1:2=1", "--levels", "1..5"]);
    assert_eq!(json(&args).0, 1);
}

#[test]
fn inconsistent_families_do_not_represent() {
    let (code, v) = json(&["represent", &fixture("binomial1.json"), &fixture("mixture2.json"), "--poly", "1:1=1"]);
    assert_eq!(code, 1);
    assert!(v["error"].as_str().unwrap().contains("time consistent"));
}

#[test]
fn meansq_schema() {
    let files = binomials(1..=3);
    let mut args = vec!["meansq"];
    args.extend(files.iter().map(String::as_str));
    args.extend(["--f", "0=0;1=1", "--n", "1", "--p", "2"]);
    let (code, v) = json(&args);
    assert_eq!(code, 0);
    assert_eq!(keys(&v), ["command", "n", "p", "f", "value", "bound", "holds"]);
    // S_3 - S_1 = (X_2 + X_3 - 2 X_1) / 3 has variance 6/9 · 1/4 for a fair coin
    assert_eq!(v["value"], "1/6");
    assert_eq!(v["bound"], "4/3");
}

#[test]
fn bernstein_operations() {
    let (code, v) = json(&["bernstein", "decompose", "--poly", "1:1=1;1:2=-1", "--degree", "3"]);
    assert_eq!(code, 0);
    assert_eq!(keys(&v), ["command", "degree", "coefficients"]);
    assert_eq!(v["coefficients"]["0:2,1:1"], "1/3");

    let (_, v) = json(&["bernstein", "eval", "--coeffs", "0:1,1:1=1/2", "--degree", "2", "--theta", "0:1/3,1:2/3"]);
    assert_eq!(keys(&v), ["command", "degree", "coefficients", "theta", "value"]);
    assert_eq!(v["value"], "2/9");

    let (_, v) = json(&["bernstein", "elevate", "--poly", "1:1=1", "--by", "2"]);
    assert_eq!(v["degree"], 3);
    assert_eq!(v["coefficients"]["0:1,1:2"], "2/3");

    let (_, v) = json(&["bernstein", "enclose", "--poly", "1:1=1;1:2=-1", "--degrees", "2,4,8,16"]);
    assert_eq!(keys(&v), ["command", "steps", "nested", "grid", "grid_min", "grid_max"]);
    assert_eq!(v["steps"][3]["upper"], "4/15");
    assert_eq!(v["nested"], true);

    let (_, v) = json(&["bernstein", "eval", "--labels", "a,b,c", "--poly", "a:1,c:1=6", "--theta", "a:1/2,c:1/2"]);
    assert_eq!(v["value"], "3/2");

    let outcome = run(["credal", "bernstein", "eval", "--poly", "1:1=1", "--theta", "1:1/2"]);
    assert_eq!(outcome.code, 2);
    assert!(outcome.stderr.contains("--theta"));
}

#[test]
fn human_output_has_decimals_and_timing() {
    let outcome = run(["credal", "bernstein", "enclose", "--poly", "1:1=1;1:2=-1", "--degrees", "8"]);
    assert_eq!(outcome.code, 0);
    assert!(outcome.stdout.contains("upper: 2/7  (0.28571428571428571429)"), "{}", outcome.stdout);
    assert!(outcome.stdout.contains("time: "));
    let json = run(["credal", "--json", "bernstein", "enclose", "--poly", "1:1=1;1:2=-1", "--degrees", "8"]);
    assert!(!json.stdout.contains("time"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(["credal", "--help"]).code, 0);
    assert_eq!(run(["credal", "frobnicate"]).code, 2);
    assert_eq!(run(["credal", "check-asl", "/nonexistent/file.json"]).code, 2);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.json");
    std::fs::write(&path, r#"{"labels": ["a","b","c","d","e","f","g","h","i","j"], "arity": 7}"#).unwrap();
    let outcome = run(["credal", "check-asl", path.to_str().unwrap()]);
    assert_eq!(outcome.code, 3, "{}", outcome.stderr);
    let outcome = run(["credal", "natex", &fixture("diaconis.json"), "--gamble", "1:3=1"]);
    assert_eq!(outcome.code, 2);
    assert!(outcome.stderr.contains("--gamble.values[\"1:3\"]"), "{}", outcome.stderr);
}

#[test]
fn documented_invocations_are_stable() {
    let a = run(["credal", "--json", "extend", &fixture("diaconis.json"), "--to", "3"]);
    let b = run(["credal", "--json", "extend", &fixture("diaconis.json"), "--to", "3"]);
    assert_eq!(a, b);
}

fn rational_text() -> impl Strategy<Value = RationalText> {
    prop_oneof![
        (-20i64..20).prop_map(|n| RationalText(n.to_string())),
        (-20i64..20, 1i64..9).prop_map(|(p, q)| RationalText(format!("{p}/{q}"))),
    ]
}

fn gamble_spec(keys: Vec<String>) -> impl Strategy<Value = GambleSpec> {
    let n = keys.len();
    (rational_text(), proptest::collection::vec(proptest::option::of(rational_text()), n)).prop_map(move |(default, values)| {
        let values: BTreeMap<String, RationalText> =
            keys.iter().cloned().zip(values).filter_map(|(k, v)| v.map(|v| (k, v))).collect();
        GambleSpec { default, values }
    })
}

fn assessment_file() -> impl Strategy<Value = AssessmentFile> {
    (1u32..=3, any::<bool>()).prop_flat_map(|(arity, count)| {
        let labels = vec!["x".to_string(), "y".to_string()];
        let keys: Vec<String> = if count {
            (0..=arity).map(|k| format!("x:{},y:{k}", arity - k)).collect()
        } else {
            (0..1u32 << arity)
                .map(|bits| (0..arity).map(|i| if bits >> i & 1 == 1 { "y" } else { "x" }).collect::<Vec<_>>().join(","))
                .collect()
        };
        let items = proptest::collection::vec(
            (gamble_spec(keys), rational_text()).prop_map(|(gamble, lower)| ItemSpec { gamble, lower }),
            0..4,
        );
        items.prop_map(move |items| AssessmentFile {
            labels: labels.clone(),
            arity,
            mode: if count { Mode::Count } else { Mode::Tuple },
            items,
            masses: None,
        })
    })
}

proptest! {
    #[test]
    fn assessment_files_roundtrip(file in assessment_file()) {
        let text = file.to_json();
        let parsed = AssessmentFile::from_json(&text).unwrap();
        prop_assert_eq!(&parsed, &file);
        let validated = parsed.validate().unwrap();
        prop_assert_eq!(validated, file.validate().unwrap());
        let value: Value = serde_json::from_str(&text).unwrap();
        for item in value["items"].as_array().into_iter().flatten() {
            prop_assert!(parse_rational(item["lower"].as_str().unwrap()).is_ok());
        }
    }
}
