use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fglcert"))
}

fn field(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(format!("../../fields/{name}.json"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn certify_echoes_profile_and_passes() {
    let o = run(&["certify", "gm-rescaled", "--p", "3", "--degree", "40", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["suite"], "gm-rescaled");
    assert_eq!(v["profile"]["trunc_degree"], 40);
    assert_eq!(v["profile"]["n_digits"], 64);
    assert!(v.get("wall_time_ms").is_none());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["certify", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(run(&["show", "no-such-object"]).status.code(), Some(2));
    assert_eq!(run(&["certify", "fontaine", "--p", "4"]).status.code(), Some(2));
    let bad = std::env::temp_dir().join("fglcert-bad-field.json");
    std::fs::write(&bad, r#"{"p": 3, "e": 2, "eisenstein": [3, 1]}"#).unwrap();
    assert_eq!(run(&["certify", "fontaine", "--field", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn output_is_byte_identical() {
    let f = field("quad-ram");
    let args = ["certify", "fontaine", "--field", f.to_str().unwrap(), "--json"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["data"]["period_valuations"]["ord_different"], "1/2");
    assert_eq!(v["data"]["tate_twist"]["ord_p"], "-3/4");
    let names: Vec<&str> = v["results"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
}

#[test]
fn timing_and_out_file() {
    let out = std::env::temp_dir().join("fglcert-report.json");
    let o = run(&["certify", "honda-valuations", "--p", "5", "--json", "--timing", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let written = std::fs::read(&out).unwrap();
    assert_eq!(written, o.stdout);
    let v: serde_json::Value = serde_json::from_slice(&written).unwrap();
    assert!(v["wall_time_ms"].is_u64());
}

#[test]
fn profile_from_environment() {
    let prof = std::env::temp_dir().join("fglcert-profile.json");
    std::fs::write(&prof, r#"{"n_digits": 20, "trunc_degree": 12}"#).unwrap();
    let o = bin().args(["certify", "eisenstein-relation", "--p", "3", "--json"]).env("FGL_PROFILE", &prof).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["profile"]["n_digits"], 20);
    assert_eq!(v["profile"]["trunc_degree"], 12);
    // flags win over the file
    let o = bin().args(["certify", "eisenstein-relation", "--p", "3", "--degree", "9", "--json"]).env("FGL_PROFILE", &prof).output().unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["profile"]["trunc_degree"], 9);
}

#[test]
fn rescaled_gm_is_visibly_sparse_mod_two() {
    let o = run(&["show", "rescaled-gm-log", "--p", "2", "--degree", "16", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let vals = v["exp"]["valuations"].as_array().unwrap();
    let units: Vec<usize> = (1..=16).filter(|&m| vals[m] == "0").collect();
    assert_eq!(units, vec![1, 2, 4, 8, 16]);
}

#[test]
fn kn_p_series_leading_term() {
    let o = run(&["show", "kn-p-series", "--p", "3", "--n", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("mod 3: u^2·T^3"));
    let o = run(&["chromatic", "kn", "--p", "3", "--n", "1", "--degree", "12", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["p_series_mod_p"]["terms"][0], serde_json::json!({"T": 3, "u": 2, "coeff": 1}));
}

#[test]
fn lt_log_json_contract() {
    let f = field("qp");
    let o = run(&["show", "lt-log", "--field", f.to_str().unwrap(), "--json", "--degree", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let s = &v["series"];
    assert_eq!(s["D"], 10);
    assert_eq!(s["ring"], "Q_5");
    assert_eq!(s["coeffs"].as_array().unwrap().len(), 11);
    assert_eq!(s["coeffs"][1]["val"], "0");
    // log = T + T^5/5 + ...
    assert_eq!(s["valuations"][5], "-1");
}

#[test]
fn every_object_renders() {
    for obj in ["gm-log", "honda-log", "lt-law", "p-series", "epsilon0", "kn-law", "chern-class"] {
        let o = run(&["show", obj, "--p", "3", "--degree", "10", "--digits", "12"]);
        assert_eq!(o.status.code(), Some(0), "{obj}");
        assert!(stdout(&o).contains("ord_p"), "{obj}");
    }
}

#[test]
fn orient_reports_integrality() {
    let f = field("unram-quad");
    let o = run(&["orient", "--field", f.to_str().unwrap(), "--degree", "12", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["integral"], false);
    let f = field("quad-ram");
    let o = run(&["orient", "--field", f.to_str().unwrap(), "--degree", "12", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["integral"], true);
}
