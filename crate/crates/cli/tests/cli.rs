use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data").join(name)
}

fn igkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_igkit"))
        .args(args)
        .env("IGKIT_NO_COLOR", "1")
        .env_remove("IGKIT_PROFILE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn validate_core_corpus_under_core_with_context() {
    let corpus = data("core_corpus.ig");
    let o = igkit(&["validate", "--profile", "IG Core+C_Ext", corpus.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("10 statements, 0 errors"));
}

#[test]
fn validate_reports_profile_violations() {
    let corpus = data("golden.ig");
    let o = igkit(&["validate", "--profile", "IG Core", corpus.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("error[FeatureNotInProfile]"));
}

#[test]
fn validate_is_deterministic() {
    let corpus = data("golden.ig");
    let args = ["validate", "--format", "tree", "--profile", "IG Extended", corpus.to_str().unwrap()];
    let a = igkit(&args);
    let b = igkit(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stderr, b.stderr);
}

#[test]
fn strict_turns_warnings_into_failures() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("w.ig");
    std::fs::write(&f, "( @governance:consequential farmers (A) must (D) comply (I) ) OR ELSE inspectors (A) may (D) fine (I) farmers (Bdir)\n").unwrap();
    let path = f.to_str().unwrap();
    let plain = igkit(&["validate", path]);
    assert!(stderr(&plain).contains("warning"), "{}", stderr(&plain));
    assert_eq!(plain.status.code(), Some(0));
    assert_eq!(igkit(&["validate", "--strict", path]).status.code(), Some(1));
}

#[test]
fn profile_prints_expanded_set() {
    let o = igkit(&["profile", "IG Core--IO"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let symbols: Vec<&str> = out.lines().skip(1).map(str::trim).collect();
    assert_eq!(out.lines().next(), Some("IG Core-IO"));
    assert_eq!(symbols, ["A", "Bdir", "Bind", "D", "Cac", "Cex", "P", "M", "E", "F"]);
    assert_eq!(igkit(&["profile", "IG Core+Q"]).status.code(), Some(2));
}

#[test]
fn decompose_writes_the_two_sentences() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.ig");
    let o = igkit(&["decompose", data("producer.ig").to_str().unwrap(), "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let got = std::fs::read_to_string(out).unwrap();
    assert_eq!(got, std::fs::read_to_string(data("producer_decomposed.ig")).unwrap());
}

#[test]
fn parse_is_canonical_and_tree_is_json() {
    let golden = data("golden.ig");
    let o = igkit(&["parse", golden.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("ID: committee-group\nThe Committee (E) shall (M) consist of (F) a ( President (P(a))"));
    let t = igkit(&["parse", "--format", "tree", golden.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&t.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 20);
    assert_eq!(v[0]["statement"]["type"], "Atomic");
}

#[test]
fn project_flatten_stats_and_export() {
    let golden = data("golden.ig");
    let p = golden.to_str().unwrap();
    let core = igkit(&["project", "--level", "core", p]);
    assert_eq!(core.status.code(), Some(0));
    assert!(stdout(&core).contains("Certified farmers (A) must (D)"));

    let flat = igkit(&["flatten", p]);
    let lines: Vec<_> = stdout(&flat).lines().map(str::to_string).collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("or-else-two-level\t1\t") && lines[1].starts_with("or-else-two-level\t2\t"));

    let stats = igkit(&["stats", "--format", "tree", p]);
    let v: serde_json::Value = serde_json::from_slice(&stats.stdout).unwrap();
    assert_eq!(v["statements"], 20);
    assert_eq!(v["verticalDepth"]["2"], 1);

    let export = igkit(&["export", p]);
    let v: serde_json::Value = serde_json::from_slice(&export.stdout).unwrap();
    assert_eq!(v["schema"], "igkit-1");
}

#[test]
fn preprocess_from_file() {
    let o = igkit(&["preprocess", data("livestock.txt").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), std::fs::read_to_string(data("livestock.expected")).unwrap());
}

#[test]
fn usage_and_io_errors_exit_two() {
    assert_eq!(igkit(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(igkit(&["validate", "/nonexistent/x.ig"]).status.code(), Some(2));
    assert_eq!(igkit(&["project", data("golden.ig").to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn parse_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.ig");
    std::fs::write(&f, "farmers (A must comply (I)\n").unwrap();
    let o = igkit(&["parse", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("UnbalancedDelimiter"));
}

#[test]
fn manifest_supplies_profile_and_taxonomy() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(data("core_corpus.ig"), dir.path().join("rules.ig")).unwrap();
    std::fs::write(dir.path().join("extra.ig"), "farmers (A) must (D) sell (I) in season (Cac;ctx:harvest)\n").unwrap();
    std::fs::write(dir.path().join("local.toml"), "[[node]]\nprefix = \"ctx\"\ncode = \"harvest\"\nparent = \"tim\"\n").unwrap();
    let manifest = dir.path().join("igkit.toml");
    std::fs::write(
        &manifest,
        "name = \"organic\"\nprofile = \"IG Core+C_Ext\"\ntaxonomies = [\"local.toml\"]\ndocuments = [\"rules.ig\", \"extra.ig\"]\n",
    )
    .unwrap();
    let o = igkit(&["validate", manifest.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("11 statements, 0 errors, 0 warnings"), "{}", stdout(&o));
    // The flag wins over the manifest.
    let o = igkit(&["validate", "--profile", "IG Core", manifest.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}
