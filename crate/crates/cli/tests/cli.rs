use std::process::{Command, Output};

use serde_json::Value;

fn arcalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arcalg"))
        .args(args)
        .env_remove("ARCALG_DIM_CAP")
        .env_remove("ARCALG_WEIGHT_CAP")
        .env_remove("ARCALG_RESOLUTION_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = arcalg(&full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn kl_inverse_check() {
    let o = arcalg(&["kl", "--m", "1", "--n", "1", "--check"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "inverse identity: PASS");
}

#[test]
fn standard_module_report() {
    let o = arcalg(&["module", "--kind", "standard", "--weight", "^vv", "--m", "1", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("dim 2"), "{text}");
    // dim Δ(λ) is the number of μ with μ̲λ oriented.
    let w = arcalg::Weight::parse("^vv").unwrap();
    let count = arcalg::combinatorics::enumerate_weights(1, 2)
        .iter()
        .filter(|mu| mu.cup_diagram().is_oriented(&w))
        .count();
    assert_eq!(count, 2);
    let v = json(&["module", "--kind", "standard", "--weight", "^vv"]);
    assert_eq!(v["dim"], 2);
}

#[test]
fn partitions_are_accepted_as_weights() {
    let a = json(&["module", "--kind", "projective", "--weight", "1", "--m", "1", "--n", "2"]);
    let b = json(&["module", "--kind", "projective", "--weight", "v^v"]);
    assert_eq!(a, b);
}

#[test]
fn verify_all_passes() {
    let o = arcalg(&["verify", "--suite", "all", "--m", "1", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn verify_writes_json_reports() {
    let dir = std::env::temp_dir().join(format!("arcalg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.json");
    let o = arcalg(&["verify", "--suite", "faithfulness", "--m", "1", "--n", "1", "--json", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0]["check"], "0faithful_failure");
    assert_eq!(reports[0]["status"], "pass");
    for key in ["check", "params", "status", "witnesses", "millis"] {
        assert!(reports[0].get(key).is_some(), "{key}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn json_output_round_trips_and_is_stable() {
    for args in [
        vec!["weights", "--m", "2", "--n", "2"],
        vec!["cup", "--weight", "v^v^^vv^^v"],
        vec!["cartan", "--m", "2", "--n", "1"],
        vec!["kl", "--m", "2", "--n", "2", "--inverse"],
        vec!["module", "--kind", "tilting", "--weight", "^v^v"],
        vec!["multiply", "--left", "v^|v^|v^", "--right", "v^|v^|v^"],
    ] {
        let mut full = vec!["--format", "json"];
        full.extend_from_slice(&args);
        let first = stdout(&arcalg(&full));
        let second = stdout(&arcalg(&full));
        assert_eq!(first, second, "{args:?}");
        let v: Value = serde_json::from_str(&first).unwrap();
        let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(v, again);
    }
}

#[test]
fn multiply_accepts_json_and_compact_diagrams() {
    let compact = json(&["multiply", "--left", "v^|^v|^v", "--right", "^v|^v|^v"]);
    let from_json = json(&[
        "multiply",
        "--left",
        r#"{"bottom":"v^","middle":"^v","top":"^v","degree":1}"#,
        "--right",
        "^v|^v|^v",
    ]);
    assert_eq!(compact, from_json);
    assert_eq!(compact[0]["coeff"], 1);
    let zero = json(&["multiply", "--left", "v^|v^|v^", "--right", "^v|^v|^v"]);
    assert_eq!(zero, Value::Array(vec![]));
}

#[test]
fn hom_and_ext_dimensions() {
    let h = json(&["hom", "--left", "projective:v^", "--right", "standard:v^"]);
    assert_eq!(h["hom"], 1);
    let e = json(&["ext", "--left", "simple:^v", "--right", "simple:v^", "--degree", "2"]);
    assert_eq!(e["ext"], serde_json::json!([0, 1, 0]));
    let e = json(&["--char", "2", "ext", "--left", "simple:^v", "--right", "simple:v^", "--degree", "1"]);
    assert_eq!(e["ext"], serde_json::json!([0, 1]));
}

#[test]
fn exit_codes() {
    assert_eq!(arcalg(&["circ", "--weight", "v^x"]).status.code(), Some(2));
    assert_eq!(arcalg(&["weights"]).status.code(), Some(2));
    assert_eq!(arcalg(&["--char", "4", "module", "--kind", "simple", "--weight", "v^"]).status.code(), Some(2));
    assert_eq!(arcalg(&["module", "--kind", "simple", "--weight", "^vv", "--side", "H"]).status.code(), Some(2));
    assert_eq!(arcalg(&["cartan", "--m", "1", "--n", "2", "--dim-cap", "3"]).status.code(), Some(3));
    assert_eq!(arcalg(&["verify", "--m", "2", "--n", "3"]).status.code(), Some(3));
    let o = arcalg(&["circ", "--weight", "v^x"]);
    assert!(!o.stderr.is_empty());
}

#[test]
fn flags_win_over_environment() {
    let run = |env: &str, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_arcalg"));
        c.args(["cartan", "--m", "1", "--n", "2"]).env("ARCALG_DIM_CAP", env);
        if let Some(f) = flag {
            c.args(["--dim-cap", f]);
        }
        c.output().unwrap().status.code()
    };
    assert_eq!(run("3", None), Some(3));
    assert_eq!(run("3", Some("100")), Some(0));
    assert_eq!(run("100", Some("3")), Some(3));
}
