use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn freqlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freqlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

/// gen a frequency from a spec into `dir`, returning its path.
fn generate(dir: &Path, spec: &str) -> PathBuf {
    let s = write(dir, "spec.json", spec);
    let out = freqlab(&["gen", s.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let f = dir.join("freq.json");
    std::fs::write(&f, &out.stdout).unwrap();
    f
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn gen_records_config_and_resolved_spec() {
    let dir = tempfile::tempdir().unwrap();
    let f = generate(dir.path(), r#"{"type": "bourgain", "p": "5/2", "J": 5}"#);
    let v: Value = serde_json::from_slice(&std::fs::read(f).unwrap()).unwrap();
    assert_eq!(v["schema"], "freqlab/frequency/v1");
    assert_eq!(v["config"]["seed"], 0);
    assert_eq!(
        v["spec"]["seed"], 0,
        "the run seed is written into the spec"
    );
    assert!(!v["values"].as_array().unwrap().is_empty());
}

#[test]
fn malformed_spec_reports_location_and_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "bad.json", "{\"type\": \"union\",\n  \"left\": {\"type\": \"bayart\", \"J\": \"x\"},\n  \"right\": {\"type\": \"log_integers\", \"N\": 3}}");
    let out = freqlab(&["gen", s.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("bad.json:2:") && err.contains("left.J"),
        "{err}"
    );

    let s = write(dir.path(), "unknown.json", r#"{"type": "zeta"}"#);
    assert_eq!(
        freqlab(&["gen", s.to_str().unwrap()]).status.code(),
        Some(3)
    );
    assert_eq!(
        freqlab(&["gen", "/nonexistent/spec.json"]).status.code(),
        Some(3)
    );
}

#[test]
fn verify_passes_and_corruption_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let f = generate(dir.path(), r#"{"type": "log_integers", "N": 30}"#);
    let fp = f.to_str().unwrap();
    let ok = freqlab(&[
        "verify",
        fp,
        "--instances",
        "5",
        "--checks",
        "nikolskii,littlewood,corona",
    ]);
    assert_eq!(
        ok.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&ok.stderr)
    );
    assert_eq!(json(&ok)["result"]["violations"], 0);
    let bad = freqlab(&[
        "verify",
        fp,
        "--instances",
        "5",
        "--checks",
        "nikolskii",
        "--corrupt",
    ]);
    assert_eq!(bad.status.code(), Some(2));
    assert_eq!(
        freqlab(&["verify", fp, "--checks", "nope"]).status.code(),
        Some(3)
    );
}

#[test]
fn budget_exhaustion_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let f = generate(dir.path(), r#"{"type": "log_integers", "N": 400}"#);
    let out = freqlab(&["energy", f.to_str().unwrap(), "--k", "3", "--budget", "100"]);
    assert_eq!(
        out.status.code(),
        Some(4),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn energy_outputs_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let f = generate(dir.path(), r#"{"type": "qli_formal", "sizes": [3, 5]}"#);
    let fp = f.to_str().unwrap();
    let out = freqlab(&["energy", fp, "--k", "2", "--block", "2", "--sup"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["energy"], "45");
    assert_eq!(v["result"]["set_size"], 5);
    let csv = freqlab(&[
        "energy",
        fp,
        "--k",
        "2",
        "--indices",
        "0,1",
        "--format",
        "csv",
    ]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.lines().count() >= 4, "{text}");
}

#[test]
fn report_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let f = generate(dir.path(), r#"{"type": "bayart", "J": 6}"#);
    let out_dir = dir.path().join("out");
    let args = [
        "report",
        f.to_str().unwrap(),
        "--j-max",
        "6",
        "--format",
        "svg",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ];
    let read_all = || {
        let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(&out_dir)
            .unwrap()
            .map(|e| e.unwrap())
            .map(|e| {
                (
                    e.file_name().to_string_lossy().into_owned(),
                    std::fs::read(e.path()).unwrap(),
                )
            })
            .collect();
        files.sort();
        files
    };
    assert_eq!(freqlab(&args).status.code(), Some(0));
    let first = read_all();
    assert_eq!(freqlab(&args).status.code(), Some(0));
    assert_eq!(first, read_all());
    let names: Vec<&str> = first.iter().map(|(n, _)| n.as_str()).collect();
    for want in [
        "report.json",
        "density.csv",
        "s_intervals.csv",
        "t_profile_p2_q4.csv",
        "hyper_k2.csv",
        "density.svg",
    ] {
        assert!(names.contains(&want), "{want} missing from {names:?}");
    }
}

#[test]
fn job_count_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let f = generate(dir.path(), r#"{"type": "log_integers", "N": 120}"#);
    let fp = f.to_str().unwrap();
    let a = json(&freqlab(&["report", fp, "--j-max", "4", "--jobs", "1"]));
    let b = json(&freqlab(&["report", fp, "--j-max", "4", "--jobs", "3"]));
    assert_eq!(a["result"], b["result"]);
}

#[test]
fn norm_and_lambda_commands() {
    let dir = tempfile::tempdir().unwrap();
    let f = generate(dir.path(), r#"{"type": "log_integers", "N": 12}"#);
    let fp = f.to_str().unwrap();
    let even = json(&freqlab(&["norm", fp, "--ones", "1,2,5", "--p", "4"]));
    assert_eq!(even["result"]["norm"]["method"], "exact-even-moment");
    let sup = json(&freqlab(&["norm", fp, "--ones", "1,2", "--p", "inf"]));
    assert!((sup["result"]["sup"]["lower_bound"].as_f64().unwrap() - 2.0).abs() < 1e-6);
    let poly = write(
        dir.path(),
        "poly.json",
        r#"{"terms": [{"index": 1, "re": 1}, {"index": 2, "re": "1/2", "im": -1}]}"#,
    );
    let q = json(&freqlab(&[
        "norm",
        fp,
        "--poly",
        poly.to_str().unwrap(),
        "--p",
        "3/2",
    ]));
    assert_eq!(q["result"]["norm"]["method"], "qmc");

    let l = json(&freqlab(&[
        "lambda",
        fp,
        "--range",
        "0..8",
        "--transfer-to",
        "2,3",
        "--restarts",
        "4",
    ]));
    assert_eq!(l["result"]["report"]["consistent"], true);
    assert_eq!(
        l["result"]["transferred"]["upper"]["method"],
        "interpolated"
    );
    assert_eq!(
        freqlab(&["lambda", fp, "--indices", "99"]).status.code(),
        Some(3)
    );
}

#[test]
fn precision_flag_is_recorded_and_applied() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(
        dir.path(),
        "spec.json",
        r#"{"type": "log_integers", "N": 10}"#,
    );
    let out = freqlab(&["gen", s.to_str().unwrap(), "--precision", "256"]);
    let v = json(&out);
    assert_eq!(v["config"]["precision"], 256);
    assert_eq!(v["registry"]["precision"], 256);
}
