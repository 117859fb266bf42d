use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn trinoperm(results: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trinoperm"))
        .args(args)
        .env("TRINOPERM_RESULTS", results)
        .output()
        .expect("spawn trinoperm")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn pp_check_reports_clause() {
    let dir = tempfile::tempdir().unwrap();
    let out = trinoperm(
        dir.path(),
        &[
            "pp", "check", "--p", "5", "--m", "1", "--a", "3", "--b", "0",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["is_pp"], true);
    assert_eq!(json["predicate"], "A(iii)");
    assert!(json.get("witness").is_none());
}

#[test]
fn pp_check_gives_witness_for_non_permutation() {
    let dir = tempfile::tempdir().unwrap();
    let out = trinoperm(
        dir.path(),
        &["pp", "check", "--p", "5", "--a", "0", "--b", "0"],
    );
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["is_pp"], false);
    assert!(json["predicate"].is_null());
    assert_eq!(json["witness"].as_array().unwrap().len(), 2);
}

#[test]
fn degenerate_and_malformed_input_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let zero = [
        "pp", "check", "--p", "5", "--a", "0", "--b", "0", "--c", "0",
    ];
    assert_eq!(trinoperm(dir.path(), &zero).status.code(), Some(2));
    let range = ["pp", "check", "--p", "5", "--a", "5", "--b", "0"];
    assert_eq!(trinoperm(dir.path(), &range).status.code(), Some(2));
    let composite = ["field", "info", "--p", "6"];
    assert_eq!(trinoperm(dir.path(), &composite).status.code(), Some(2));
    assert_eq!(
        trinoperm(dir.path(), &["pp", "frobnicate"]).status.code(),
        Some(2)
    );
}

#[test]
fn unwritable_results_dir_is_environment_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let out = trinoperm(&blocker.join("sub"), &["verify", "identities"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn enumerate_csv_has_versioned_header_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = trinoperm(
        dir.path(),
        &["pp", "enumerate", "--p", "2", "--m", "2", "--format", "csv"],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# trinoperm x-set v1"));
    assert!(lines.next().unwrap().contains("modulus="));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 1 + 6);
    let saved = fs::read_to_string(dir.path().join("pp-enumerate/x-set-q4.csv")).unwrap();
    assert_eq!(saved, text);
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap())
            .unwrap();
    let entry = &manifest["artifacts"]["pp-enumerate/x-set-q4.csv"];
    assert_eq!(entry["fields"][0]["q"], 4);
    assert!(dir.path().join("moduli.txt").exists());
}

#[test]
fn desirable_table_flags_disagreement() {
    let dir = tempfile::tempdir().unwrap();
    let out = trinoperm(dir.path(), &["gnq", "desirable", "--p", "2", "--m", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("q,alpha,beta,n,predicate,bruteforce,agree"));
    let rows: Vec<Vec<&str>> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('q'))
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 6);
    for row in &rows {
        let (alpha, beta): (u32, u32) = (row[1].parse().unwrap(), row[2].parse().unwrap());
        assert_eq!(row[3], (4u64.pow(alpha) - 4u64.pow(beta) - 1).to_string());
        assert_eq!(row[6], "true");
    }

    let beyond = trinoperm(
        dir.path(),
        &[
            "gnq",
            "desirable",
            "--p",
            "2",
            "--m",
            "2",
            "--alpha-max",
            "4",
        ],
    );
    assert_eq!(beyond.status.code(), Some(0));
    assert!(stdout(&beyond)
        .lines()
        .any(|l| l.starts_with("4,4,0,") && l.ends_with(",")));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "fields = [\"3\"]\nformat = \"csv\"\n").unwrap();
    let cfg_arg = cfg.to_str().unwrap();
    let out = trinoperm(dir.path(), &["--config", cfg_arg, "verify", "lemmas"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 1);
    assert_eq!(json[0]["field"]["q"], 3);

    let flagged = trinoperm(
        dir.path(),
        &["--config", cfg_arg, "--fields", "5,7", "verify", "lemmas"],
    );
    let json: serde_json::Value = serde_json::from_str(&stdout(&flagged)).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 2);

    fs::write(&cfg, "colour = 1\n").unwrap();
    assert_eq!(
        trinoperm(dir.path(), &["--config", cfg_arg, "verify", "lemmas"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn hermite_and_identities_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = trinoperm(dir.path(), &["verify", "hermite", "--p", "5", "--all-ab"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "[]");

    let ids = trinoperm(dir.path(), &["verify", "identities"]);
    let text = stdout(&ids);
    assert_eq!(
        text.lines()
            .filter(|l| l.starts_with("PASS") || l.starts_with("FAIL"))
            .count(),
        7
    );
    assert_eq!(
        ids.status.code(),
        Some(if text.contains("FAIL") { 1 } else { 0 })
    );
}

#[test]
fn thread_count_does_not_change_artifacts() {
    let run = |threads: &str| {
        let dir = tempfile::tempdir().unwrap();
        let out = trinoperm(
            dir.path(),
            &[
                "--threads",
                threads,
                "gnq",
                "desirable",
                "--p",
                "3",
                "--m",
                "1",
            ],
        );
        let table = fs::read(dir.path().join("gnq-desirable/q3-e2-alpha5.csv")).unwrap();
        (
            out.status.code(),
            table,
            fs::read(dir.path().join("manifest.json")).unwrap(),
        )
    };
    assert_eq!(run("1"), run("3"));
}
