use std::path::Path;
use std::process::{Command, Output};

fn warpcmp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_warpcmp")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr_json(o: &Output) -> serde_json::Value {
    let text = String::from_utf8(o.stderr.clone()).unwrap();
    serde_json::from_str(text.lines().last().unwrap()).unwrap()
}

fn header(csv: &str) -> serde_json::Value {
    serde_json::from_str(csv.lines().next().unwrap().trim_start_matches("# ")).unwrap()
}

#[test]
fn flat_profile_header() {
    let o = warpcmp(&["profile", "--n", "2", "--k", "0", "--f", "constant:1", "--R", "0", "--M", "0.5"]);
    assert!(o.status.success());
    let csv = stdout(&o);
    let h = header(&csv);
    assert!((h["r_plus"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-9);
    assert_eq!(h["admissible"], true);
    assert_eq!(csv.lines().nth(1), Some("r,U,dU"));
    assert_eq!(csv.lines().count(), 2 + 201);
}

#[test]
fn fig_gap_series_decrease() {
    let o = warpcmp(&["fig-gap", "--n", "2,3,4", "--r-min", "0.5", "--r-max", "6", "--count", "12"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,R,s,dU_minus,dU_plus"));
    let rows: Vec<(u32, f64)> = lines
        .map(|l| {
            let cols: Vec<&str> = l.split(',').collect();
            (cols[0].parse().unwrap(), cols[2].parse().unwrap())
        })
        .collect();
    for n in [2, 3, 4] {
        let s: Vec<f64> = rows.iter().filter(|r| r.0 == n).map(|r| r.1).collect();
        assert_eq!(s.len(), 12);
        assert!(s.iter().all(|&x| x > 0.0));
        assert!(s.windows(2).all(|w| w[1] < w[0]), "n = {n}: {s:?}");
    }
}

#[test]
fn sphere_gap_is_empty() {
    let o = warpcmp(&["gap", "--n", "3", "--k", "1", "--f", "serrin", "--M", "0.5"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["gap"], serde_json::json!([]));
    assert!(v["tau0"].as_f64().unwrap() <= 1.0 + 1e-12);
}

#[test]
fn hyperbolic_gap_is_found() {
    let o = warpcmp(&["gap", "--n", "3", "--k", "-1", "--f", "serrin", "--M", "0.2"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let gap = v["gap"].as_array().unwrap();
    assert_eq!(gap.len(), 1);
    assert!(gap[0]["hi"].as_f64().unwrap() > gap[0]["lo"].as_f64().unwrap());
}

#[test]
fn invalid_input_exits_2() {
    let o = warpcmp(&["profile", "--n", "1", "--k", "0", "--f", "constant:1", "--M", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr_json(&o);
    assert_eq!(e["exit_code"], 2);
    assert_eq!(e["error"], "invalid-parameter");

    let o = warpcmp(&["frob"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "usage");

    let o = warpcmp(&["iso", "--ell", "2", "--m1", "1", "--m2", "1", "--n", "3", "--group", "klein"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "unsupported-group");
}

#[test]
fn numerical_failure_exits_3() {
    let o = warpcmp(&["profile", "--n", "2", "--k", "0", "--f", "constant:-1", "--M", "1"]);
    assert_eq!(o.status.code(), Some(3));
    let e = stderr_json(&o);
    assert_eq!(e["exit_code"], 3);
    assert_eq!(e["error"], "not-admissible");
}

#[test]
fn config_file_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"n": 3, "M": 0.5, "f": "constant:1"}"#).unwrap();
    let c = cfg.to_str().unwrap();
    let o = warpcmp(&["--config", c, "profile", "--n", "2", "--k", "0", "--M", "9", "--points", "3"]);
    assert!(o.status.success());
    let h = header(&stdout(&o));
    assert_eq!(h["n"], 3);
    assert_eq!(h["M"], 0.5);
    // r_+^2 = 2nM for the flat constant source.
    assert!((h["r_plus"].as_f64().unwrap() - 3f64.sqrt()).abs() < 1e-9);

    std::fs::write(&cfg, r#"{"n": 3, "bogus": 1}"#).unwrap();
    let o = warpcmp(&["--config", c, "profile", "--k", "0", "--f", "constant:1", "--M", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn out_files_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let o = warpcmp(&[
            "tau-scan", "--n", "3", "--k", "-1", "--f", "serrin", "--M", "0.2", "--count", "9", "--out",
            path.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        std::fs::read(path).unwrap()
    };
    let (a, b) = (run("a.csv"), run("b.csv"));
    assert_eq!(a, b);
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 2 + 9);
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["tau-scan", "--n", "2", "--k", "-1", "--f", "serrin", "--M", "0.25", "--count", "7"];
    let one = Command::new(env!("CARGO_BIN_EXE_warpcmp")).args(args).env("WARPCMP_THREADS", "1").output().unwrap();
    let four = Command::new(env!("CARGO_BIN_EXE_warpcmp")).args(args).env("WARPCMP_THREADS", "4").output().unwrap();
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);

    let bad = Command::new(env!("CARGO_BIN_EXE_warpcmp")).args(args).env("WARPCMP_THREADS", "zero").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn iso_profile_and_descent() {
    let o = warpcmp(&["iso", "--ell", "2", "--m1", "1", "--m2", "1", "--n", "3", "--f", "constant:1", "--S", "0.7", "--M", "0.02"]);
    assert!(o.status.success());
    let h = header(&stdout(&o));
    assert_eq!(h["domain"], "leaf-band");
    assert!(h["s_minus"].as_f64().unwrap() < 0.7 && 0.7 < h["s_plus"].as_f64().unwrap());

    let o = warpcmp(&["iso", "--ell", "2", "--m1", "1", "--m2", "1", "--n", "3", "--group", "antipodal"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["result"]["descends"].is_boolean());
}

#[test]
fn selftest_artifacts_repeat() {
    let dir = tempfile::tempdir().unwrap();
    let run = |sub: &str| {
        let path = dir.path().join(sub);
        let o = warpcmp(&["selftest", "--out", path.to_str().unwrap()]);
        let text = stdout(&o);
        assert_eq!(text.lines().count(), 12);
        // Exit status follows the criteria lines.
        let all_pass = text.lines().all(|l| l.contains(" PASS "));
        assert_eq!(o.status.success(), all_pass);
        if !all_pass {
            assert_eq!(o.status.code(), Some(3));
        }
        path
    };
    let (a, b) = (run("a"), run("b"));
    let names = ["profile_flat_n3.csv", "tau_serrin_n3_hyperbolic.csv", "gap_serrin_n3_hyperbolic.json", "fig_gap.csv", "fig_mu.csv", "iso_l2_n3.csv"];
    for name in names {
        assert_eq!(std::fs::read(Path::new(&a).join(name)).unwrap(), std::fs::read(b.join(name)).unwrap(), "{name}");
    }
}
