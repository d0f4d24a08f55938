use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn twf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twf"))
        .args(args)
        .env_remove("TWF_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn construct_reports_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d0.json");
    let o = twf(&["construct", "--p", "3", "--m", "2", "--d", "2", "--kind", "d0", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("size=24"));
    let v = json(&out);
    assert_eq!(v["size"], 24);
    assert_eq!(v["pairs"].as_array().unwrap().len(), 24);

    let o = twf(&["construct", "--p", "3", "--m", "2", "--d", "2", "--kind", "dstar", "--punctured"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["size"], 8);
    assert_eq!(v["kind"], "punctured-dstar");
}

#[test]
fn invalid_parameters_are_usage_errors() {
    let o = twf(&["construct", "--p", "3", "--m", "2", "--d", "3", "--kind", "d0", "--punctured"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert_eq!(err.lines().count(), 1);
    assert!(err.contains("(p-1) does not divide d"), "{err}");

    assert_eq!(twf(&["construct", "--p", "4", "--m", "2", "--kind", "d0"]).status.code(), Some(2));
    assert_eq!(twf(&["construct", "--p", "3", "--m", "2", "--kind", "dlambda"]).status.code(), Some(2));
    assert_eq!(twf(&["analyze", "--p", "3", "--m", "2", "--kind", "bogus"]).status.code(), Some(2));
    assert_eq!(
        twf(&["construct", "--p", "3", "--m", "2", "--kind", "dlambda", "--lambda", "3"]).status.code(),
        Some(2)
    );
}

#[test]
fn analyze_renders_the_enumerator_and_matches() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("dl.json");
    let o = twf(&[
        "analyze", "--p", "3", "--m", "2", "--d", "2", "--kind", "dlambda", "--lambda", "1", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("1 +24z^{12}+56z^{18}"));
    let v = json(&out);
    assert_eq!(v["parameters"], serde_json::json!([24, 4, 12]));
    assert_eq!(v["diff"]["weight_distribution"], serde_json::json!([]));
    assert_eq!(v["diff"]["cwe"], serde_json::json!([]));
    assert_eq!(v["all_match"], true);
    assert_eq!(v["pless"]["moment_identity"], true);
    assert_eq!(v["griesmer"]["bound"], 19);
}

#[test]
fn analyze_punctured_reports_projectivity() {
    let o = twf(&["analyze", "--p", "3", "--m", "2", "--d", "2", "--kind", "d0", "--punctured"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["projectivity"]["dual_distance"], "3");
    assert_eq!(v["projectivity"]["projective"], true);
    assert_eq!(v["griesmer"]["slack"], 2);
    assert_eq!(v["ab_ratio"]["ratio"], "2/3");
    assert_eq!(v["ab_ratio"]["pass"], false);
    assert_eq!(v["minimality"]["scanned"], true);
    assert!(v["predicted"]["cwe"].is_null());
}

#[test]
fn golden_files() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.json");
    let second = dir.path().join("second.json");
    let args = |out: &Path| {
        vec![
            "analyze".to_string(), "--p".into(), "3".into(), "--m".into(), "2".into(), "--d".into(),
            "2".into(), "--kind".into(), "d0".into(), "--out".into(), out.to_str().unwrap().into(),
        ]
    };
    let run = |extra: &[&str], out: &Path| {
        let mut a = args(out);
        a.extend(extra.iter().map(|s| s.to_string()));
        let a: Vec<&str> = a.iter().map(String::as_str).collect();
        twf(&a)
    };
    assert_eq!(run(&[], &first).status.code(), Some(0));
    assert_eq!(run(&[], &second).status.code(), Some(0));
    assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap(), "output is byte-stable");

    let golden = first.to_str().unwrap();
    assert_eq!(run(&["--golden", golden], &second).status.code(), Some(0));

    let corrupted = dir.path().join("corrupted.json");
    let text = fs::read_to_string(&first).unwrap().replacen("\"18\": 56", "\"18\": 55", 1);
    assert!(text.contains("\"18\": 55"));
    fs::write(&corrupted, text).unwrap();
    let o = run(&["--golden", corrupted.to_str().unwrap()], &second);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&second);
    assert_eq!(v["failures"], serde_json::json!(["golden"]));
    assert_eq!(v["diff"]["golden"]["weight_distribution"]["mismatches"][0]["key"], 18);

    let missing = dir.path().join("missing.json");
    assert_eq!(run(&["--golden", missing.to_str().unwrap()], &second).status.code(), Some(2));
}

#[test]
fn srg_reports() {
    let o = twf(&["srg", "--p", "3", "--m", "2", "--d", "2", "--kind", "d0"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!((v["N"].clone(), v["K"].clone(), v["lambda"].clone(), v["mu"].clone()),
        (81.into(), 24.into(), 9.into(), 6.into()));
    assert_eq!(v["verified"], true);
    assert_eq!(v["source"], "punctured-D0 p=3 m=2 d=2");
    assert!(v.get("note").is_none());

    let o = twf(&["srg", "--p", "3", "--m", "2", "--kind", "dstar"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["K"], 16);
    assert!(v["note"].as_str().unwrap().starts_with("paper-K-discrepancy"));

    let o = twf(&["srg", "--p", "7", "--m", "2", "--d", "6", "--kind", "d0"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["verified"].is_null());
    assert_eq!(v["N"], 2401);
    assert_eq!(v["K"], 336);
    assert!(stderr(&o).contains("predicted only"));
}

#[test]
fn budget_override() {
    let o = Command::new(env!("CARGO_BIN_EXE_twf"))
        .args(["analyze", "--p", "3", "--m", "2", "--kind", "d0"])
        .env("TWF_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("exceeds budget"));
    let o = Command::new(env!("CARGO_BIN_EXE_twf"))
        .args(["analyze", "--p", "3", "--m", "2", "--kind", "d0"])
        .env("TWF_BUDGET", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn grid_with_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("grid.json");
    fs::write(
        &config,
        r#"[
            {"p": 3, "m": 2, "d": 2, "kind": "d0"},
            {"p": 3, "m": 1, "kind": "d0"},
            {"p": 5, "m": 2, "kind": "dlambda", "lambda": 2, "punctured": true}
        ]"#,
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = twf(&["grid", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("theorems require m ≥ 2"));
    let csv = fs::read_to_string(out.join("summary.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "p,m,d,kind,lambda,n,k,weights,match,note");
    assert_eq!(lines[1], "3,2,2,d0,0,24,4,0:1 12:24 18:56,true,");
    assert!(lines[2].starts_with("3,1,1,d0,") && lines[2].contains("skipped"));
    assert!(lines[3].starts_with("5,2,2,punctured-dlambda,2,60,4,"));
    assert!(out.join("p3-m2-d2-d0.json").exists());
    assert!(out.join("p5-m2-d2-punctured-dlambda-l2.json").exists());
}

#[test]
fn empty_grid_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("empty.json");
    fs::write(&config, "[]").unwrap();
    let o = twf(&["grid", "--config", config.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn default_grid_matches() {
    let dir = tempfile::tempdir().unwrap();
    let o = twf(&["grid", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(csv.lines().count(), 321);
    assert!(csv.lines().skip(1).all(|l| l.contains(",true,")));
}
