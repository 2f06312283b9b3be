use std::path::PathBuf;
use std::process::{Command, Output};

const BUNDLED: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/n1_l3.json");

fn qdiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdiff"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn temp(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("qdiff-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

fn generic_config() -> PathBuf {
    temp(
        "generic.json",
        r#"{"field": "rational_function_q", "n": 1, "d": 1, "A": [[1]], "eta": ["q^2"]}"#,
    )
}

#[test]
fn eval_prints_canonical_forms() {
    let cfg = generic_config();
    let c = cfg.to_str().unwrap();
    assert_eq!(
        stdout(&qdiff(&["eval", "d1*x1", "--config", c])).trim(),
        "q*x1*d1 + (q-1)"
    );
    assert_eq!(stdout(&qdiff(&["eval", "x1*x1", "--config", c])).trim(), "x1^2");
    let bad = qdiff(&["eval", "x1^-1", "--config", c]);
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("parse error"));
}

#[test]
fn reduce_uses_the_configured_eta() {
    let cfg = generic_config();
    let c = cfg.to_str().unwrap();
    assert_eq!(stdout(&qdiff(&["reduce", "x1*d1", "--config", c])).trim(), "(q^2-1)");
    // q^{-1} (η − 1)(η − q) at η = q^2
    assert_eq!(
        stdout(&qdiff(&["reduce", "x1^2*d1^2", "--config", c])).trim(),
        "(q^3-q^2-q+1)"
    );
}

#[test]
fn bundled_config_verifies() {
    let out = std::env::temp_dir().join(format!("qdiff-cli-{}-report.json", std::process::id()));
    let o = qdiff(&["verify", "--config", BUNDLED, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["summary"]["failed"], 0);
    assert_eq!(report["tool"], "qdiff");
    assert_eq!(report["config"]["l"], 3);
}

#[test]
fn reports_are_deterministic() {
    let strip = |path: &PathBuf| {
        let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        for c in v["checks"].as_array_mut().unwrap() {
            c.as_object_mut().unwrap().remove("elapsed_ms");
        }
        v.to_string()
    };
    let a = std::env::temp_dir().join(format!("qdiff-cli-{}-a.json", std::process::id()));
    let b = std::env::temp_dir().join(format!("qdiff-cli-{}-b.json", std::process::id()));
    for p in [&a, &b] {
        qdiff(&["verify", "--config", BUNDLED, "--verbose", "--out", p.to_str().unwrap()]);
    }
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn even_l_is_rejected_by_name() {
    let src = std::fs::read_to_string(BUNDLED)
        .unwrap()
        .replace("\"l\": 3", "\"l\": 2");
    let cfg = temp("even.json", &src);
    let o = qdiff(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.lines().any(|l| l.trim_start().starts_with("l:")), "{err}");
}

#[test]
fn zeroed_b_fails_the_irreducibility_check() {
    let src = std::fs::read_to_string(BUNDLED)
        .unwrap()
        .replace(r#""1", "2", "-3""#, r#""1", "0", "-3""#);
    let cfg = temp("zero-b.json", &src);
    let o = qdiff(&["verify", "--config", cfg.to_str().unwrap(), "--only", "rep"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("FAIL rep.2.irreducible")), "{text}");
    assert!(text.lines().any(|l| l.starts_with("pass rep.1.irreducible")), "{text}");
}

#[test]
fn rep_build_writes_matrices() {
    let out = std::env::temp_dir().join(format!("qdiff-cli-{}-reps.json", std::process::id()));
    let o = qdiff(&["rep", "build", "--config", BUNDLED, "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let dump: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let reps = dump["reps"].as_array().unwrap();
    assert_eq!(reps.len(), 3);
    // one X matrix, 3 rows, 3 entries, 2 coordinates over Q(zeta_3)
    let x = &reps[0]["X"][0];
    assert_eq!(x.as_array().unwrap().len(), 3);
    assert_eq!(x[0].as_array().unwrap().len(), 3);
    assert_eq!(x[0][0].as_array().unwrap().len(), 2);
}
