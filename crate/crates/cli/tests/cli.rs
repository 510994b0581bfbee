use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn sullivan(args: &[&str], stdin: Option<&str>) -> Run {
    let mut child = Command::new(env!("CARGO_BIN_EXE_sullivan"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(input) = stdin {
            pipe.write_all(input.as_bytes()).unwrap();
        }
    }
    let out = child.wait_with_output().unwrap();
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn ok(args: &[&str], stdin: Option<&str>) -> String {
    let r = sullivan(args, stdin);
    assert_eq!(r.code, 0, "{args:?} failed: {}", r.stderr);
    r.stdout
}

fn json(args: &[&str], stdin: Option<&str>) -> Value {
    serde_json::from_str(&ok(args, stdin)).unwrap()
}

fn model_file(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "models", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn dims(v: &Value) -> Vec<(u32, u64)> {
    v["dims"]
        .as_object()
        .unwrap()
        .iter()
        .map(|(k, d)| (k.parse().unwrap(), d.as_u64().unwrap()))
        .collect()
}

#[test]
fn torus_pipeline() {
    let torus = ok(&["library", "torus", "2"], None);
    let out = json(
        &["minimal-model", "--max-degree", "4", "--format", "json"],
        Some(&torus),
    );
    assert_eq!(dims(&out), vec![(1, 2), (2, 0), (3, 0), (4, 0)]);
    assert_eq!(out["verification"]["passed"], Value::Bool(true));
}

#[test]
fn two_sphere_homotopy() {
    let s2 = ok(&["library", "sphere", "2"], None);
    let out = json(&["homotopy", "--max-degree", "6", "--format", "json"], Some(&s2));
    assert_eq!(dims(&out), vec![(2, 1), (3, 1), (4, 0), (5, 0), (6, 0)]);
    assert!(!out["hypotheses"].as_array().unwrap().is_empty());
}

#[test]
fn validate_names_the_offending_generator() {
    let r = sullivan(&["validate", &model_file("bad_square.json")], None);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("d(d(y))"), "{}", r.stdout);
    let r = sullivan(&["validate", &model_file("bad_square.json"), "--format", "json"], None);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["issues"][0]["kind"], "differential_square_nonzero");
    assert_eq!(v["issues"][0]["generator"], "y");
    assert_eq!(sullivan(&["validate", &model_file("heisenberg.json")], None).code, 0);
}

#[test]
fn degree_mismatch_is_a_validation_error() {
    let text = r#"{"name": "m", "generators": [{"name": "x", "degree": 2}, {"name": "y", "degree": 3}],
                   "differential": {"x": "0", "y": "x"}}"#;
    let r = sullivan(&["cohomology", "--max-degree", "3"], Some(text));
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("degree"), "{}", r.stderr);
    let fixed = text.replace(r#""y": "x""#, r#""y": "x^2""#);
    ok(&["validate"], Some(&fixed));
}

#[test]
fn parse_errors_exit_one() {
    let r = sullivan(&["validate"], Some("{ not json"));
    assert_eq!(r.code, 1);
    let bad_expr = r#"{"name": "m", "generators": [{"name": "x", "degree": 2}], "differential": {"x": "2*"}}"#;
    let r = sullivan(&["validate"], Some(bad_expr));
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("differential of x"), "{}", r.stderr);
    assert_eq!(
        sullivan(&["cohomology", "/nonexistent.json", "--max-degree", "2"], None).code,
        1
    );
    assert_eq!(sullivan(&["frobnicate"], None).code, 1);
    assert_eq!(sullivan(&["--help"], None).code, 0);
}

#[test]
fn kill_cap_exits_three() {
    let fil = ok(&["library", "ce", &model_file("filiform4_lie.json")], None);
    let r = sullivan(&["minimal-model", "--max-degree", "3", "--kill-cap", "1"], Some(&fil));
    assert_eq!(r.code, 3, "{}", r.stderr);
    let out = json(&["minimal-model", "--max-degree", "3", "--format", "json"], Some(&fil));
    assert_eq!(out["kill_rounds"]["2"], 2);
}

#[test]
fn json_output_is_deterministic() {
    let args = [
        "minimal-model",
        &model_file("cp3.json"),
        "--max-degree",
        "8",
        "--format",
        "json",
    ];
    let first = ok(&args, None);
    assert_eq!(first, ok(&args, None));
    let s2 = model_file("s2.json");
    let cohomology = ["cohomology", s2.as_str(), "--max-degree", "4", "--format", "json"];
    assert_eq!(ok(&cohomology, None), ok(&cohomology, None));
}

#[test]
fn emitted_models_round_trip() {
    for file in ["cp3.json", "heisenberg.json", "filiform4.json"] {
        let out = json(
            &[
                "minimal-model",
                &model_file(file),
                "--max-degree",
                "5",
                "--format",
                "json",
            ],
            None,
        );
        let model = serde_json::to_string_pretty(&out["model"]).unwrap();
        ok(&["validate"], Some(&model));
        // the model of a minimal model reproduces its generator counts
        let again = json(
            &["minimal-model", "--max-degree", "5", "--format", "json"],
            Some(&model),
        );
        assert_eq!(dims(&again), dims(&out), "{file}");
        let parsed = sullivan_core::parse_model(&model).unwrap();
        let emitted = sullivan_core::ModelDescription::from_cdga(&parsed).to_json();
        assert_eq!(sullivan_core::parse_model(&emitted).unwrap(), parsed);
    }
    for args in [
        vec!["sphere", "4"],
        vec!["cpn", "2"],
        vec!["torus", "3"],
        vec!["heisenberg"],
    ] {
        let mut full = vec!["library"];
        full.extend(args);
        let text = ok(&full, None);
        let a = sullivan_core::parse_model(&text).unwrap();
        assert_eq!(sullivan_core::ModelDescription::from_cdga(&a).to_json() + "\n", text);
    }
}

fn text_field(text: &str, prefix: &str) -> Vec<(u32, u64)> {
    text.lines()
        .filter_map(|l| l.trim().strip_prefix(prefix))
        .map(|rest| {
            let (k, d) = rest.split_once(": ").unwrap();
            (k.parse().unwrap(), d.parse().unwrap())
        })
        .collect()
}

#[test]
fn text_and_json_agree() {
    for (file, n) in [("cp3.json", "8"), ("heisenberg.json", "4"), ("filiform4.json", "3")] {
        let f = model_file(file);
        let text = ok(&["minimal-model", &f, "--max-degree", n], None);
        let js = json(&["minimal-model", &f, "--max-degree", n, "--format", "json"], None);
        assert_eq!(text_field(&text, "V^"), dims(&js));
        let gens = js["generators"].as_array().unwrap();
        for g in gens {
            let line = format!(
                "{} (degree {}): d = {}",
                g["name"].as_str().unwrap(),
                g["degree"],
                g["differential"].as_str().unwrap()
            );
            assert!(text.contains(&line), "missing `{line}`");
        }
        let homotopy_text = ok(&["homotopy", &f, "--max-degree", n], None);
        let homotopy_json = json(&["homotopy", &f, "--max-degree", n, "--format", "json"], None);
        assert_eq!(text_field(&homotopy_text, "pi_"), dims(&homotopy_json));

        let text = ok(&["cohomology", &f, "--max-degree", n], None);
        let js = json(&["cohomology", &f, "--max-degree", n, "--format", "json"], None);
        let from_text: Vec<u64> = text
            .lines()
            .skip(3)
            .map(|l| l.split_whitespace().nth(1).unwrap().parse().unwrap())
            .collect();
        let from_json: Vec<u64> = js["betti"]
            .as_array()
            .unwrap()
            .iter()
            .map(|b| b.as_u64().unwrap())
            .collect();
        assert_eq!(from_text, from_json);
    }
}

#[test]
fn ks_check() {
    let base = model_file("ks/base_torus2.json");
    let out = json(
        &[
            "ks-check",
            &base,
            &model_file("ks/fiber_s2.json"),
            &model_file("ks/twist_s2.json"),
            "--format",
            "json",
        ],
        None,
    );
    assert_eq!(out["fiber_order"], serde_json::json!(["w", "z"]));
    assert_eq!(out["minimal"], true);
    assert_eq!(dims(&out), vec![(2, 1), (3, 1)]);

    let out = json(
        &[
            "ks-check",
            &base,
            &model_file("ks/fiber_s3.json"),
            &model_file("ks/untwisted.json"),
            "--format",
            "json",
        ],
        None,
    );
    assert_eq!(out["minimal"], true);
    assert_eq!(dims(&out), vec![(2, 0), (3, 1)]);
    // the fiber generator `e` does not clash with the base, so it keeps its name
    assert_eq!(out["fiber_generators"], serde_json::json!(["e"]));

    let r = sullivan(
        &[
            "ks-check",
            &base,
            &model_file("ks/fiber_uv.json"),
            &model_file("ks/twist_cycle.json"),
            "--format",
            "json",
        ],
        None,
    );
    assert_eq!(r.code, 1);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["obstruction"]["kind"], "cycle");
    assert_eq!(v["obstruction"]["generators"], serde_json::json!(["u", "v"]));
}

#[test]
fn stdin_dash() {
    let h = std::fs::read_to_string(model_file("heisenberg.json")).unwrap();
    let out = json(&["cohomology", "-", "--max-degree", "3", "--format", "json"], Some(&h));
    assert_eq!(out["betti"], serde_json::json!([1, 2, 2, 1]));
}
