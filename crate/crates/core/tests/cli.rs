use std::path::PathBuf;
use std::process::{Command, Output};

fn kobalab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kobalab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn config(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "configs", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn value_of(text: &str) -> f64 {
    text.split_whitespace().nth(1).unwrap().parse().unwrap()
}

#[test]
fn dist_unit_disc() {
    let o = kobalab(&["dist", "--domain", "unit-disc", "--z", "0", "--w", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!((value_of(&stdout(&o)) - 0.5f64.atanh()).abs() < 1e-15);
}

#[test]
fn dist_annulus_matches_strip() {
    let o = kobalab(&["dist", "--domain", "annulus", "--R", "4", "--z", "0.5", "--w", "2"]);
    assert_eq!(o.status.code(), Some(0));
    // strip {|Re| < a} onto the disc: x -> tan(pi x / (4a))
    let a = 4f64.ln();
    let m = |x: f64| (std::f64::consts::PI * x / (4.0 * a)).tan();
    let (p, q) = (m(0.5f64.ln()), m(2f64.ln()));
    let expected = ((q - p) / (1.0 - p * q)).atanh();
    assert!((value_of(&stdout(&o)) - expected).abs() < 1e-14);
}

#[test]
fn dist_same_point_is_zero() {
    let o = kobalab(&["dist", "--domain", "unit-ball", "--n", "2", "--z", "0.1,0.2i", "--w", "0.1,0.2i"]);
    assert_eq!(value_of(&stdout(&o)), 0.0);
}

#[test]
fn dist_exit_codes() {
    let o = kobalab(&["dist", "--domain", "unit-disc", "--z", "0", "--w", "1.5"]);
    assert_eq!(o.status.code(), Some(3));
    let o = kobalab(&["dist", "--domain", "annulus", "--z", "0", "--w", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = kobalab(&["dist", "--domain", r#"{"kind":"annulus","R":0.3}"#, "--z", "1", "--w", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = kobalab(&["dist", "--domain", "unit-disc", "--z", "oops", "--w", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn dist_batch_csv() {
    let out = std::env::temp_dir().join("kobalab-batch-test.csv");
    let o = kobalab(&["dist", "--config", &config("dist-batch.json"), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "domain,z,w,value,method,gap,deck_index");
    assert_eq!(lines.len(), 5);
    let first: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(first[0], "unit-disc");
    assert_eq!(first[3].parse::<f64>().unwrap(), 0.5f64.atanh());
    assert!(lines[4].starts_with("tube,"));
    assert!(lines[4].contains(",sandwich,"));
    // batch output is reproducible
    let again = kobalab(&["dist", "--config", &config("dist-batch.json")]);
    assert_eq!(stdout(&again), csv);
}

#[test]
fn audit_configs() {
    for (name, verdict) in [
        ("power-disc-audit.json", "isometric-along-family"),
        ("identity-audit.json", "isometric-along-family"),
        ("ball-automorphism-audit.json", "isometric-along-family"),
        ("circle-arcs-audit.json", "violated"),
    ] {
        let o = kobalab(&["audit", "--config", &config(name)]);
        assert_eq!(o.status.code(), Some(0), "{name}");
        assert!(stdout(&o).contains(&format!("verdict {verdict}")), "{name}");
    }
}

#[test]
fn audit_mismatch_and_bad_config() {
    // non-geodesic family with an isometric expectation
    let o = kobalab(&[
        "audit",
        "--map",
        r#"{"kind":"power","n":2}"#,
        "--family",
        r#"{"kind":"circle-arcs"}"#,
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = kobalab(&["audit", "--map", r#"{"kind":"power"}"#, "--family", r#"{"kind":"circle-arcs"}"#]);
    assert_eq!(o.status.code(), Some(2));
    let o = kobalab(&[
        "audit",
        "--map",
        r#"{"kind":"power","n":2}"#,
        "--family",
        r#"{"kind":"disc-radial-rays"}"#,
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn audit_json_report() {
    let o = kobalab(&["audit", "--config", &config("power-disc-audit.json"), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "isometric-along-family");
    assert_eq!(v["per_geodesic"][0]["pairs"], 496);
}

#[test]
fn paper_examples_selected() {
    let o = kobalab(&["paper-examples", "--only", "monomial-tube", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("monomial-tube   PASS"));
    assert!(s.contains("multiplicity 4"));
    let o = kobalab(&["paper-examples", "--only", "exp-annulus"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("non-proper=ok"));
    let o = kobalab(&["paper-examples", "--only", "nothing"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn geodesic_export_and_probe() {
    let o = kobalab(&["geodesic", "--family", "disc-radial-rays", "--count", "2", "--samples", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 11);
    assert!(s.starts_with("member,t,re_z1,im_z1"));
    let o = kobalab(&["probe", "--kind", "persistence", "--eps", "0", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    let o = kobalab(&["probe", "--ts", "0.9,0.5"]);
    assert_eq!(o.status.code(), Some(1));
}
