use std::process::{Command, Output as ProcessOutput};

use serde_json::Value;

use orbicoh_cli::report::{Output, Report, SCHEMA_VERSION};

fn data(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn orbicoh(args: &[&str]) -> ProcessOutput {
    Command::new(env!("CARGO_BIN_EXE_orbicoh"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &ProcessOutput) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &ProcessOutput) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> (String, Output) {
    let mut all = args.to_vec();
    all.push("--json");
    let o = orbicoh(&all);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
    let text = stdout(&o);
    let parsed: Output = serde_json::from_str(&text).unwrap();
    (text, parsed)
}

fn every_command() -> Vec<Vec<String>> {
    [
        vec!["validate", "cube.json"],
        vec!["validate", "prism.json"],
        vec!["local-groups", "prism.json"],
        vec!["retract", "cube.json"],
        vec!["r-vector", "cube.json"],
        vec!["evenness", "prism.json"],
        vec!["integrality", "cp2_235.json"],
        vec!["cohomology", "cp2_235.json"],
        vec!["tower", "tower.json"],
        vec!["hirzebruch", "hirzebruch.json"],
    ]
    .into_iter()
    .map(|v| vec![v[0].to_string(), data(v[1])])
    .chain(std::iter::once(
        ["hirzebruch", "--alpha", "3", "--beta", "2"].iter().map(|s| s.to_string()).collect(),
    ))
    .collect()
}

#[test]
fn weighted_plane_relation_has_coefficient_thirty() {
    let (text, out) = json(&["cohomology", &data("cp2_235.json")]);
    let Report::Cohomology(r) = out.report else { panic!("wrong report") };
    let ranks: Vec<usize> = r.degrees.iter().map(|d| d.rank).collect();
    assert_eq!(ranks, vec![1, 1, 1]);
    let p = r.presentation.unwrap();
    let first = &p.relations[0];
    assert_eq!(first.text, "w1^2 - 30*w2");
    let coeffs: Vec<i64> = first.terms.iter().map(|(_, c)| c.0.to_string().parse().unwrap()).collect();
    assert!(coeffs.contains(&-30));
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["presentation"]["applicability"]["status"], "unconditional");
}

#[test]
fn cube_r_vector() {
    let o = orbicoh(&["r-vector", &data("cube.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("r-vector: (8, 3)"));
    let (_, out) = json(&["r-vector", &data("cube.json")]);
    let Report::RVector(r) = out.report else { panic!("wrong report") };
    assert_eq!(r.text.as_deref(), Some("(8, 3)"));
    assert_eq!(r.r_vector, vec![(3, 8), (2, 3)]);
}

#[test]
fn hirzebruch_pipeline() {
    let (_, out) = json(&["hirzebruch", "--alpha", "3", "--beta", "2"]);
    let Report::Hirzebruch(r) = out.report else { panic!("wrong report") };
    assert!(r.named.holds);
    assert_eq!(r.named.text, "x^2 = 0, xy = 3z, y^2 = 6z");
    assert_eq!(r.evenness, "satisfied");
    let ranks: Vec<usize> = r.degrees.iter().map(|d| d.rank).collect();
    assert_eq!(ranks, vec![1, 2, 1]);
    assert!(r.degrees.iter().all(|d| d.torsion.is_empty()));
    let text = stdout(&orbicoh(&["hirzebruch", "--alpha", "3", "--beta", "-2"]));
    assert!(text.contains("y^2 = -6z (holds)"), "{text}");
}

#[test]
fn json_reports_round_trip() {
    for args in every_command() {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (text, out) = json(&args);
        assert_eq!(out.schema_version, SCHEMA_VERSION);
        let again = serde_json::to_string(&out).unwrap() + "\n";
        assert_eq!(again, text, "{args:?}");
        let mut pretty = args.clone();
        pretty.extend(["--json", "--pretty"]);
        let p: Output = serde_json::from_str(&stdout(&orbicoh(&pretty))).unwrap();
        assert_eq!(p, out);
    }
}

#[test]
fn output_is_deterministic() {
    for args in every_command() {
        let mut args: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = orbicoh(&args);
        let b = orbicoh(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        args.push("--json");
        assert_eq!(orbicoh(&args).stdout, orbicoh(&args).stdout, "{args:?}");
    }
}

#[test]
fn oracles_agree() {
    for (cmd, file) in [
        ("local-groups", "prism.json"),
        ("retract", "cube.json"),
        ("evenness", "prism.json"),
        ("cohomology", "cp2_235.json"),
    ] {
        let o = orbicoh(&[cmd, &data(file), "--oracle"]);
        assert_eq!(o.status.code(), Some(0));
        let text = stdout(&o);
        assert!(text.contains(" 0 discrepancies"), "{cmd}: {text}");
    }
}

#[test]
fn malformed_input_exits_two_with_position() {
    let o = orbicoh(&["validate", "{\"dim\": 2,\n \"rays\": [[1, 0] [0, 1]]}"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("<inline>:2:"), "{}", stderr(&o));

    let o = orbicoh(&["validate", "{\"dim\": \"two\", \"facets\": 3, \"vertices\": []}"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("<inline>:1:"), "{}", stderr(&o));

    let o = orbicoh(&["validate", "{\"colour\": 1}"]);
    assert_eq!(o.status.code(), Some(2));

    let o = orbicoh(&["validate", &data("missing.json")]);
    assert_eq!(o.status.code(), Some(2));

    let o = orbicoh(&["frobnicate", &data("cube.json")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn failed_preconditions_exit_three() {
    let singular = r#"{"polytope": {"dim": 2, "facets": 3, "vertices": [[1, 2], [1, 3], [2, 3]]},
                       "lambda": [[1, 0], [2, 0], [0, 1]]}"#;
    let o = orbicoh(&["validate", singular]);
    assert_eq!(o.status.code(), Some(3));

    let imprimitive = r#"{"polytope": {"dim": 2, "facets": 3, "vertices": [[1, 2], [1, 3], [2, 3]]},
                          "lambda": [[2, 0], [0, 1], [-1, -1]]}"#;
    assert_eq!(orbicoh(&["evenness", imprimitive]).status.code(), Some(3));

    let incomplete = r#"{"dim": 2, "rays": [[1, 0], [0, 1], [-1, -1]], "max_cones": [[1, 2], [2, 3]]}"#;
    assert_eq!(orbicoh(&["cohomology", incomplete]).status.code(), Some(3));

    let bad_weights = r#"{"weights": [[2, 4]], "twists": {}}"#;
    assert_eq!(orbicoh(&["tower", bad_weights]).status.code(), Some(3));

    assert_eq!(orbicoh(&["evenness", &data("cube.json")]).status.code(), Some(3));
}

#[test]
fn enumeration_cap_is_inconclusive_not_an_error() {
    let o = orbicoh(&["r-vector", &data("cube.json"), "--max-vertices", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("status: inconclusive"));
    let (_, out) = json(&["evenness", &data("prism.json"), "--max-vertices", "4"]);
    let Report::Evenness(r) = out.report else { panic!("wrong report") };
    assert_eq!(r.status, "inconclusive");
}

#[test]
fn violated_certificate_exits_zero() {
    let (_, out) = json(&["evenness", &data("prism.json")]);
    let Report::Evenness(r) = out.report else { panic!("wrong report") };
    assert_eq!(r.status, "violated");
    let w = r.witness.unwrap();
    assert_eq!(w.common_factor.0, 3.into());
}

#[test]
fn inputs_convert_between_kinds() {
    let (_, a) = json(&["integrality", &data("cp2_235.json")]);
    let pair = r#"{"polytope": {"dim": 2, "facets": 3, "vertices": [[1, 2], [1, 3], [2, 3]]},
                   "lambda": [[1, 0], [1, 5], [-1, -3]]}"#;
    let (_, b) = json(&["integrality", pair]);
    let (Report::Integrality(a), Report::Integrality(b)) = (a.report, b.report) else { panic!() };
    assert_eq!(a.rows, b.rows);
    assert_eq!(a.cones, b.cones);
}
