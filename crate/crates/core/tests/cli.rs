//! Command-line behavior: listings, ad-hoc computations, exit codes and
//! certificate round trips.

use std::fs;
use std::path::PathBuf;

use clap::Parser;
use sepinv::cli::{check_certificate_file, execute, main_with_args, Cli, Outcome};

fn run(args: &[&str]) -> Outcome {
    let cli = Cli::try_parse_from(std::iter::once("sepinv").chain(args.iter().copied())).unwrap();
    execute(&cli).unwrap()
}

fn shipped_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("certificates")
}

#[test]
fn list_shows_table_values() {
    let out = run(&["list"]).output;
    assert_eq!(out.lines().count(), 37);
    let row = out.lines().find(|l| l.starts_with("24,3 ")).unwrap();
    assert!(row.split_whitespace().collect::<Vec<_>>().ends_with(&["12", "12", "catalog"]));
    let json: serde_json::Value = serde_json::from_str(&run(&["--format", "json", "list", "18,3"]).output).unwrap();
    assert_eq!(json["rows"][0]["beta"], 8);
    assert_eq!(json["rows"][0]["beta_sep"], 6);
}

#[test]
fn invariant_bases() {
    let json: serde_json::Value =
        serde_json::from_str(&run(&["--format", "json", "invariants", "27,3", "--module", "W", "--degree", "3"]).output)
            .unwrap();
    assert_eq!(json["dim"], 2);
    let zero = run(&["invariants", "27,3", "--module", "W", "--degree", "0"]).output;
    assert!(zero.contains("dim 1"));
    let none = run(&["invariants", "24,3", "--module", "V", "--degree", "10"]).output;
    assert!(none.contains("dim 0"));
}

#[test]
fn profile_and_davenport() {
    let out = run(&["--max-degree", "8", "profile", "20,3", "--module", "W"]).output;
    assert!(out.contains("{2:1, 3:1, 4:2, 5:2, 6:1, 7:1}"), "{out}");
    let d = |s: &str| {
        let v: serde_json::Value = serde_json::from_str(&run(&["--format", "json", "davenport", s]).output).unwrap();
        v["davenport"].as_u64().unwrap()
    };
    assert_eq!(d("C3xC3"), 5);
    assert_eq!(d("C1"), 1);
    assert_eq!(d("C6"), 6);
}

#[test]
fn verify_reports_and_exit_codes() {
    let o = run(&["--format", "json", "verify", "prop-C5C4-mingen"]);
    assert!(o.passed);
    let v: serde_json::Value = serde_json::from_str(&o.output).unwrap();
    assert_eq!(v["theorems"][0]["checks"][0]["source"], "stated");
    assert!(v["theorems"][0]["checks"][0]["detail"].as_str().unwrap().contains("{2: 1, 3: 1, 4: 2, 5: 2, 6: 1, 7: 1}"));
    let again = run(&["--format", "json", "verify", "prop-C5C4-mingen"]);
    assert_eq!(o.output, again.output);
    assert_eq!(main_with_args(["sepinv", "verify", "prop-H27"]), 0);
    assert_eq!(main_with_args(["sepinv", "verify", "no-such-theorem"]), 1);
    assert_eq!(main_with_args(["sepinv", "--guard", "0", "list"]), 2);
}

#[test]
fn finite_fields_are_validated() {
    let cli = Cli::try_parse_from(["sepinv", "--field", "gf:9", "invariants", "27,3", "--module", "W", "--degree", "3"]).unwrap();
    assert!(execute(&cli).is_err());
    assert!(Cli::try_parse_from(["sepinv", "--field", "gf:6", "list"]).is_err());
    let out = run(&["--field", "gf:4", "finite-sep", "27,3", "--module", "W"]).output;
    assert!(out.contains("β_sep = 6"), "{out}");
}

#[test]
fn emitted_certificates_match_the_shipped_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert!(run(&["--out", out, "certificate", "emit"]).passed);
    let mut emitted: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    emitted.sort();
    assert_eq!(emitted.len(), 6);
    for path in &emitted {
        let shipped = shipped_dir().join(path.file_name().unwrap());
        assert_eq!(fs::read(path).unwrap(), fs::read(&shipped).unwrap(), "{}", shipped.display());
        check_certificate_file(path).unwrap();
    }
}

#[test]
fn tampered_certificate_fails_the_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("H27.json");
    let text = fs::read_to_string(shipped_dir().join("H27.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["values"][0] = v["values"][1].clone();
    fs::write(&path, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    let o = run(&["certificate", "check", path.to_str().unwrap()]);
    assert!(!o.passed, "{}", o.output);
    fs::write(&path, "{ not json").unwrap();
    let o = run(&["certificate", "check", path.to_str().unwrap()]);
    assert!(!o.passed && o.output.contains("line 1"), "{}", o.output);
}
