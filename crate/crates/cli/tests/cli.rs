use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cogrowth")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json_gamma(o: &Output) -> Vec<String> {
    let v: Value = serde_json::from_str(&stdout(o)).unwrap();
    v["gamma"].as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect()
}

#[test]
fn count_examples() {
    let cases = [
        ("trivial", "6", vec!["1", "4", "12", "36", "108", "324", "972"]),
        ("z2xz2", "4", vec!["1", "0", "4", "0", "60"]),
        ("zsquared", "4", vec!["1", "0", "0", "0", "8"]),
    ];
    for (preset, n, expected) in cases {
        let o = run(&["count", "--preset", preset, "--nmax", n, "--format", "json"]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert_eq!(json_gamma(&o), expected, "{preset}");
    }
}

#[test]
fn count_output_is_deterministic_and_has_provenance() {
    let args = ["count", "--preset", "s3", "--nmax", "12", "--format", "json"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["provenance"]["source"]["preset"], "s3");
    assert_eq!(v["provenance"]["ball_budget"], 2_000_000);
    assert!(v["provenance"]["version"].is_string());
    assert!(v.get("truncated").is_none());
}

#[test]
fn count_text_and_csv() {
    let o = run(&["count", "--preset", "trivial", "--nmax", "3", "--format", "csv"]);
    let text = stdout(&o);
    assert!(text.starts_with("# provenance "));
    assert!(text.contains("# cogrowth-count-csv v1\nn,gamma,walk\n0,1,1\n1,4,4\n2,12,16\n3,36,64\n"));
    let o = run(&["count", "--preset", "trivial", "--nmax", "3"]);
    assert!(stdout(&o).contains("group trivial (rank 2, q = 3)"));
}

#[test]
fn count_with_bruteforce_oracle() {
    let o = run(&["count", "--preset", "sl2z", "--nmax", "8", "--oracle", "8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = run(&["count", "--preset", "sl2z", "--nmax", "8", "--oracle", "8", "--enum-budget", "10"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn budget_exceeded_writes_partial_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("partial.json");
    let o = run(&[
        "count", "--preset", "sl2z", "--nmax", "12", "--ball-budget", "50", "--format", "json", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("partial"));
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["truncated"]["requested_n_max"], 12);
    let complete = v["truncated"]["complete_through"].as_u64().unwrap() as usize;
    assert!(complete < 12);
    assert_eq!(v["gamma"].as_array().unwrap().len(), complete + 1);
}

#[test]
fn config_errors_exit_2() {
    for args in [
        &["count", "--preset", "trivial", "--nmax", "1"][..],
        &["count", "--preset", "trivial", "--ball-budget", "0"],
        &["count", "--preset", "trivial", "--enum-budget", "0"],
        &["count", "--preset", "no-such-group"],
        &["count"],
        &["verify", "--preset", "trivial", "--which", "eq1"],
        &["verify", "--preset", "trivial", "--nmax", "6", "--order", "9"],
        &["count", "--preset", "trivial", "--format", "xml"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn group_spec_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("klein.json");
    fs::write(&path, cogrowth::groups::preset_spec("z2xz2").unwrap().to_json()).unwrap();
    let o = run(&["count", "--group", path.to_str().unwrap(), "--nmax", "4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(json_gamma(&o), ["1", "0", "4", "0", "60"]);
    fs::write(&path, "{ not json").unwrap();
    assert_eq!(run(&["count", "--group", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn verify_passes_on_presets() {
    let o = run(&["verify", "--preset", "trivial", "--which", "all"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).matches("PASS [").count(), 5);
    let o = run(&["verify", "--preset", "z2xz2", "--which", "grigorchuk", "--order", "20", "--nmax", "20"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS [grigorchuk] return-probability identity"));
    let o = run(&["verify", "--preset", "zsquared", "--nmax", "12"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("SKIP [").count(), 3);
}

#[test]
fn verify_reports_injected_fault() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    let bad = dir.path().join("bad.json");
    let o = run(&["count", "--preset", "z2xz2", "--nmax", "10", "--format", "json", "--out", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&good).unwrap()).unwrap();
    v["gamma"][4] = Value::String("61".into());
    fs::write(&bad, v.to_string()).unwrap();

    let o = run(&["verify", "--counts", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let o = run(&["verify", "--counts", bad.to_str().unwrap(), "--which", "grigorchuk"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("[grigorchuk] return-probability identity at order 5 (index 4)"), "{}", stderr(&o));

    let o = run(&["verify", "--counts", bad.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["passed"], false);
    let outcomes = r["report"]["outcomes"].as_array().unwrap();
    let cheb = outcomes.iter().find(|x| x["check"] == "chebyshev").unwrap();
    assert_eq!((cheb["status"].as_str(), cheb["index"].as_u64()), (Some("fail"), Some(4)));
}

#[test]
fn asymptotics_trivial_kernel() {
    let o = run(&["asymptotics", "--preset", "free2", "--nmax", "12", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["report"]["amenability"]["verdict"], "trivial-kernel");
    let o = run(&["asymptotics", "--preset", "free2", "--nmax", "12"]);
    assert!(stdout(&o).contains("verdict             trivial kernel"));
}

#[test]
fn asymptotics_klein_four_ratio_tends_to_nine() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("ratios.csv");
    let o = run(&["asymptotics", "--preset", "z2xz2", "--nmax", "30", "--format", "json", "--csv", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["report"]["ratio_limit"]["rows"].as_array().unwrap();
    let last = rows.last().unwrap()["ratio"].as_f64().unwrap();
    assert!((last - 9.0).abs() < 1e-5, "{last}");
    assert_eq!(v["report"]["amenability"]["verdict"], "consistent-with-amenable");
    assert!(v["report"]["remark"]["bound_holds"].as_bool().unwrap());
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.contains(cogrowth::asymptotics::CSV_HEADER));
}

#[test]
fn asymptotics_sl2z_is_nonamenable() {
    let o = run(&["asymptotics", "--preset", "sl2z", "--nmax", "28", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["report"]["amenability"]["verdict"], "nonamenable-indicated");
}

#[test]
fn presets_listed() {
    let o = run(&["presets"]);
    let text = stdout(&o);
    for name in cogrowth::groups::preset_names() {
        assert!(text.contains(name));
    }
}
