use std::process::Command as Process;

use proptest::prelude::*;
use serde_json::Value;
use toric_okounkov::io::*;

const BIN: &str = env!("CARGO_BIN_EXE_toric-okounkov");

fn run_bin(args: &[&str]) -> (i32, String) {
    let out = Process::new(BIN).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn write_input(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

/// Every `exact` field is a plain integer or fraction.
fn exact_fields_are_rational(v: &Value) -> bool {
    match v {
        Value::Object(m) => m.iter().all(|(k, x)| {
            if k == "exact" {
                x.as_str().is_some_and(|s| {
                    let body = s.strip_prefix('-').unwrap_or(s);
                    let mut parts = body.split('/');
                    let ok = |p: Option<&str>| p.is_some_and(|p| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit()));
                    ok(parts.next()) && parts.clone().count() <= 1 && parts.next().map_or(true, |d| ok(Some(d)))
                })
            } else {
                exact_fields_are_rational(x)
            }
        }),
        Value::Array(a) => a.iter().all(exact_fields_are_rational),
        Value::Number(n) => !n.is_f64(),
        _ => true,
    }
}

#[test]
fn corpus_mode_passes() {
    let (code, out) = run_bin(&["--corpus"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.lines().all(|l| !l.starts_with("FAIL")));
    assert!(out.trim_end().ends_with("checks passed"));
}

#[test]
fn binary_matches_library_on_corpus() {
    let dir = tempfile::tempdir().unwrap();
    for (i, case) in CORPUS.iter().enumerate() {
        let path = write_input(&dir, &format!("case{i}.json"), case.input);
        let (code, out) = run_bin(&[case.command.name(), "--input", &path]);
        let lib = run_str(case.command, case.input, &JobOptions::default());
        assert_eq!(code, 0, "{}", case.name);
        assert_eq!(out, lib.report, "{}", case.name);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert!(exact_fields_are_rational(&v), "{}", case.name);
    }
}

#[test]
fn output_file_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let input = write_input(&dir, "d.json", r#"{"fan": "F1", "terms": [{"weight": 1, "coefficients": [3, 2, 0, 0]}], "fixed_point_flags": true}"#);
    let (code, stdout) = run_bin(&["delta", "--input", &input, "--output", out.to_str().unwrap(), "--candidate", "1,-1"]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["result"]["delta_upper"]["exact"], "6/7");
    assert!(v["result"]["candidates"].as_array().unwrap().iter().any(|c| c["vector"] == serde_json::json!(["1", "-1"])));

    let bad = write_input(&dir, "bad.json", r#"{"fan": "P2", "terms": [{"weight": 1, "coefficients": [0, 0, 0]}]}"#);
    let (code, stdout) = run_bin(&["delta", "--input", &bad]);
    assert_eq!(code, 3);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["error"]["name"], "NotBig");

    let float = write_input(&dir, "float.json", r#"{"b": 0.5, "terms": [{"weight": 1, "degree": 1}]}"#);
    assert_eq!(run_bin(&["curve-delta", "--input", &float]).0, 2);
    assert_eq!(run_bin(&["curve-delta", "--input", "/nonexistent/input.json"]).0, 2);
    assert_eq!(run_bin(&["delta", "--input", &input, "--candidate", "1,x"]).0, 2);
}

#[test]
fn reads_stdin_without_input() {
    use std::io::Write;
    let case = &CORPUS[0];
    let mut child = Process::new(BIN)
        .arg(case.command.name())
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(case.input.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), run_str(case.command, case.input, &JobOptions::default()).report);
}

#[test]
fn precision_changes_only_interval_width() {
    let input = r#"{"polytope": {"dim": 2, "vertices": [[0, 0], [2, 0], [1, 1], [0, 1]]}, "e": "1/2", "t": 2, "u": 2}"#;
    let wide = run_str(Command::BaryBounds, input, &JobOptions { precision: 32, candidates: vec![] });
    let narrow = run_str(Command::BaryBounds, input, &JobOptions { precision: 160, candidates: vec![] });
    assert_eq!(wide.exit_code, 0, "{}", wide.report);
    let w: Value = serde_json::from_str(&wide.report).unwrap();
    let n: Value = serde_json::from_str(&narrow.report).unwrap();
    let b1 = toric_okounkov::exact::parse_rational(w["result"]["exact_b1"]["exact"].as_str().unwrap()).unwrap();
    for (v, key) in [(&w, "lower_bound_h1"), (&n, "lower_bound_h1")] {
        let lo = toric_okounkov::exact::parse_rational(v["result"][key]["lo"]["exact"].as_str().unwrap()).unwrap();
        assert!(lo <= b1);
    }
    let hi = |v: &Value| toric_okounkov::exact::parse_rational(v["result"]["upper_bound_h2"]["hi"]["exact"].as_str().unwrap()).unwrap();
    assert!(hi(&n) <= hi(&w) && b1 <= hi(&n));
}

fn q_strategy() -> impl Strategy<Value = Q> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| Q(toric_okounkov::exact::rat(n, d)))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn problem_round_trip(
        weights in proptest::collection::vec(q_strategy(), 1..4),
        coeffs in proptest::collection::vec(proptest::collection::vec(q_strategy(), 4), 3),
        fixed in any::<bool>(),
    ) {
        let terms = weights.iter().zip(coeffs.iter().cycle()).map(|(w, c)| TermSpec { weight: w.clone(), coefficients: c.clone() }).collect();
        let spec = JobInput::Problem(ProblemSpec {
            fan: FanSpec::Named("F2".into()),
            boundary: None,
            terms,
            candidates: vec![vec![1, 1]],
            flags: vec![FlagSpec { vectors: vec![vec![0, 1], vec![1, 0]], frame: FrameSpec::Quotient }],
            fixed_point_flags: fixed,
        });
        let text = serialize_input(&spec);
        prop_assert_eq!(parse_input(Command::Delta, &text).unwrap(), spec);
    }

    #[test]
    fn geometry_round_trip_and_exact_reports(a in proptest::collection::vec(0i64..=6, 4), b in proptest::collection::vec(0i64..=3, 4)) {
        let spec = JobInput::Geometry(GeometryInput {
            fan: FanSpec::Explicit { rank: 2, rays: vec![vec![1, 0], vec![0, 1], vec![-1, 1], vec![0, -1]], cones: vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]] },
            divisor: Some(a.iter().map(|&x| Q(toric_okounkov::exact::rint(x))).collect()),
            boundary: Some(b.iter().map(|&x| Q(toric_okounkov::exact::rat(x, 4))).collect()),
            flag: Some(FlagSpec { vectors: vec![vec![0, 1], vec![1, 0]], frame: FrameSpec::Ambient }),
            vectors: None,
        });
        let text = serialize_input(&spec);
        prop_assert_eq!(parse_input(Command::FlagS, &text).unwrap(), spec.clone());
        for cmd in [Command::FlagS, Command::SInvariant, Command::LogDiscrepancy, Command::OkounkovBody, Command::ZariskiSurface] {
            let out = run_str(cmd, &text, &JobOptions::default());
            let v: Value = serde_json::from_str(&out.report).unwrap();
            prop_assert!(exact_fields_are_rational(&v));
            prop_assert!(out.exit_code == 0 || v["error"]["name"] == "NotBig", "{}", out.report);
        }
    }
}
