use std::path::PathBuf;
use std::process::Command;

use puhyp_cli::main_with;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("puhyp").chain(args.iter().copied());
    let code = main_with(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, serde_json::Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (code, out, _) = run(&full);
    (code, serde_json::from_str(&out).expect("valid JSON"))
}

#[test]
fn classify_boost_summary() {
    let (code, out, _) = run(&["classify", &fixture("cyclic_boost.json"), "a"]);
    assert_eq!(code, 0);
    assert!(out.contains(
        "summary: Loxodromic, fixed {1.000000+0.000000i, -1.000000+0.000000i}, N=1.718282"
    ));
    assert!(out.contains("# scope:"));
}

#[test]
fn classify_identity_and_parabolic() {
    let (code, out, _) = run(&["classify", &fixture("identity.json"), "e"]);
    assert_eq!(code, 0);
    assert!(out.contains("class: Identity"));
    let (code, out, _) = run(&["classify", &fixture("parabolic.json"), "p0"]);
    assert_eq!(code, 0);
    assert!(out.contains("class: Parabolic"), "{out}");
}

#[test]
fn input_errors_exit_two() {
    let (code, _, err) = run(&["classify", &fixture("non_unitary.json"), "m"]);
    assert_eq!(code, 2);
    assert!(err.contains("residual 3.000e0"), "{err}");
    assert_eq!(run(&["classify", &fixture("cyclic_boost.json"), "zz"]).0, 2);
    assert_eq!(run(&["classify", "/nonexistent/group.json", "a"]).0, 2);
    assert_eq!(run(&["classify"]).0, 2);
}

#[test]
fn malformed_file_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"dim_n\": 1,\n  \"generators\": [oops]\n}\n").unwrap();
    let (code, _, err) = run(&["classify", path.to_str().unwrap(), "a"]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn jorgensen_verdicts() {
    let (code, out, _) = run(&["jorgensen", &fixture("commuting_pair.json"), "a", "b"]);
    assert_eq!(code, 3);
    assert!(out.contains("verdict: Violation"));
    let (code, out, _) = run(&["jorgensen", &fixture("elliptic_n2.json"), "e", "g"]);
    assert_eq!(code, 0);
    assert!(out.contains("branch: Elliptic"));
    assert!(out.contains("N([f,g^3])") && !out.contains("N([f,g^4])"));
    let (code, out, _) = run(&[
        "--elliptic-power-side",
        "f",
        "jorgensen",
        &fixture("elliptic_n2.json"),
        "e",
        "g",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("N([f^3,g])"), "{out}");
}

#[test]
fn jorgensen_identity_not_applicable() {
    let (code, _, err) = run(&["jorgensen", &fixture("identity.json"), "e", "e"]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn analyze_golden_rotation() {
    let f = fixture("golden_rotation.json");
    let (code, out, _) = run(&[
        "--max-depth",
        "100",
        "analyze",
        &f,
        "--mode",
        "test-map",
        "--depth",
        "100",
        "--test-map",
        "h",
    ]);
    assert_eq!(code, 3);
    assert!(out.contains("NearIdentitySequence"));
    assert!(out.contains("r^89"), "{out}");
    let (code, out, _) = run(&[
        "analyze",
        &f,
        "--mode",
        "test-map",
        "--depth",
        "10",
        "--test-map",
        "e",
    ]);
    assert!(out.contains("EXPERIMENTAL"));
    assert_ne!(code, 1);
    assert_eq!(
        run(&[
            "analyze",
            &f,
            "--mode",
            "test-map",
            "--depth",
            "20",
            "--test-map",
            "h"
        ])
        .0,
        2
    );
}

#[test]
fn analyze_cyclic_is_inconclusive() {
    let (code, v) = json(&[
        "analyze",
        &fixture("cyclic_boost.json"),
        "--mode",
        "two-loxodromic",
        "--depth",
        "6",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["schema_version"], 1);
    let text = v.to_string();
    assert!(text.contains("Inconclusive"));
    assert!(text.contains("1.718281828"), "{text}");
}

#[test]
fn analyze_mode_unavailable_and_truncated() {
    let (code, _, _) = run(&[
        "analyze",
        &fixture("rotations.json"),
        "--mode",
        "two-loxodromic",
    ]);
    assert_eq!(code, 4);
    let (code, out, _) = run(&[
        "--max-states",
        "50",
        "analyze",
        &fixture("two_axis.json"),
        "--mode",
        "two-loxodromic",
        "--depth",
        "6",
    ]);
    assert!(code == 5 || code == 3, "{code}");
    if code == 5 {
        assert!(out.contains("TRUNCATED"));
    }
    let (code, _, _) = run(&[
        "--max-states",
        "20",
        "analyze",
        &fixture("cyclic_boost.json"),
        "--mode",
        "two-loxodromic",
        "--depth",
        "12",
    ]);
    assert_eq!(code, 5);
}

#[test]
fn analyze_with_external_test_map() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("map.json");
    std::fs::copy(fixture("cyclic_boost.json"), &map).unwrap();
    let (code, out, err) = run(&[
        "analyze",
        &fixture("commuting_pair.json"),
        "--mode",
        "test-map",
        "--depth",
        "3",
        "--test-map",
        "a",
        "--test-map-file",
        map.to_str().unwrap(),
    ]);
    assert_eq!(code, 3, "{out}{err}");
}

#[test]
fn limitset_rows() {
    let (code, out, _) = run(&["limitset", &fixture("cyclic_boost.json"), "--depth", "8"]);
    assert_eq!(code, 0);
    let rows: Vec<Vec<f64>> = out
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split_whitespace().map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 8);
    for r in &rows {
        assert!(
            (r[0].abs() - 1.0).abs() < 1e-3 && r[1].abs() < 1e-3,
            "{r:?}"
        );
    }
    let (code, out, _) = run(&["limitset", &fixture("trivial.json")]);
    assert_eq!(code, 0);
    assert!(out.lines().all(|l| l.starts_with('#')));
    assert_eq!(
        run(&[
            "limitset",
            &fixture("cyclic_boost.json"),
            "--basepoint",
            "2,0"
        ])
        .0,
        2
    );
}

#[test]
fn limitset_two_axis_clusters() {
    let (code, out, _) = run(&["limitset", &fixture("two_axis.json"), "--depth", "5"]);
    assert_eq!(code, 0);
    let mut hit = [false; 4];
    for l in out.lines().filter(|l| !l.starts_with('#')) {
        let v: Vec<f64> = l.split_whitespace().map(|x| x.parse().unwrap()).collect();
        for (k, (re, im)) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)]
            .iter()
            .enumerate()
        {
            if (v[0] - re).hypot(v[1] - im) < 0.05 {
                hit[k] = true;
            }
        }
    }
    assert_eq!(hit, [true; 4]);
}

#[test]
fn limitset_writes_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cloud.txt");
    let (code, _, _) = run(&[
        "--out",
        out.to_str().unwrap(),
        "limitset",
        &fixture("cyclic_boost.json"),
        "--depth",
        "8",
    ]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(out).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 8);
}

fn transport_args<'a>(f: &'a str, r1: &'a str) -> Vec<&'a str> {
    vec![
        "transport",
        f,
        "--p",
        "p",
        "--q",
        "q",
        "--f",
        "f",
        "--o1",
        "1,0",
        "--r1",
        r1,
        "--o2",
        "0,1",
        "--r2",
        "0.1",
    ]
}

#[test]
fn transport_success_and_overlap() {
    let f = fixture("transport.json");
    let (code, out, err) = run(&transport_args(&f, "0.1"));
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("m = 2") || out.contains("m=2"), "{out}");
    let (code, _, _) = run(&transport_args(&f, "1.9"));
    assert_eq!(code, 2);
    let mut short = transport_args(&f, "0.1");
    short.extend(["--m-max", "1"]);
    assert_eq!(run(&short).0, 5);
}

#[test]
fn stability_and_condition_a() {
    let (code, out, _) = run(&[
        "stability",
        &fixture("cyclic_boost.json"),
        "a",
        "--trials",
        "200",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("200/200"), "{out}");
    assert_eq!(
        run(&["stability", &fixture("rotations.json"), "r_pi2"]).0,
        2
    );
    let (code, out, _) = run(&[
        "--epsilon",
        "1.0",
        "conditiona",
        &fixture("torsion_family.json"),
        "--depth",
        "3",
    ]);
    assert_eq!(code, 3, "{out}");
    let (code, _, _) = run(&["conditiona", &fixture("cyclic_boost.json"), "--depth", "3"]);
    assert_eq!(code, 0);
}

#[test]
fn seed_changes_stability_only_through_header() {
    let f = fixture("cyclic_boost.json");
    let (_, a) = json(&["--seed", "1", "stability", &f, "a", "--trials", "50"]);
    let (_, b) = json(&["--seed", "2", "stability", &f, "a", "--trials", "50"]);
    assert_ne!(a["header"]["seed"], b["header"]["seed"]);
}

#[test]
fn config_file_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let mut base = serde_json::to_value(puhyp::SearchConfig::default()).unwrap();
    base["norm"] = serde_json::json!("frobenius");
    std::fs::write(&cfg, base.to_string()).unwrap();
    let bin = env!("CARGO_BIN_EXE_puhyp");
    let out = Command::new(bin)
        .args(["classify", &fixture("cyclic_boost.json"), "a"])
        .env("PUHYP_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("norm=frobenius"), "{text}");
}

#[test]
fn binary_exit_codes_match_library() {
    let bin = env!("CARGO_BIN_EXE_puhyp");
    let st = Command::new(bin)
        .args(["jorgensen", &fixture("commuting_pair.json"), "a", "b"])
        .output()
        .unwrap()
        .status;
    assert_eq!(st.code(), Some(3));
    let st = Command::new(bin)
        .args(["classify", &fixture("non_unitary.json"), "m"])
        .output()
        .unwrap()
        .status;
    assert_eq!(st.code(), Some(2));
}
