mod common;

use std::fs;
use std::path::Path;
use std::process::Command;

use common::{fixture, registry_card, rng};
use qtmc::card_parser::{parse_card, serialize_card};
use qtmc::identity::{card_pid, content_hash, hash_bytes};

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn qtmc_env(args: &[&str], config: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qtmc"));
    cmd.args(args).env_remove("QTMC_CONFIG");
    if let Some(path) = config {
        cmd.env("QTMC_CONFIG", path);
    }
    let out = cmd.output().unwrap();
    Output {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn qtmc(args: &[&str]) -> Output {
    qtmc_env(args, None)
}

fn path(rel: &str) -> String {
    fixture(rel).to_string_lossy().into_owned()
}

fn seeded(rule: &str) -> String {
    path(&format!("seeded/{rule}.qtmc.json"))
}

#[test]
fn clean_card_lints_silently() {
    let out = qtmc(&["lint", &path("clean.qtmc.json")]);
    assert_eq!((out.code, out.stdout.as_str(), out.stderr.as_str()), (0, "", ""));
}

#[test]
fn seeded_error_exits_one_with_one_line() {
    let out = qtmc(&["lint", &seeded("E-18W")]);
    assert_eq!(out.code, 1);
    let lines: Vec<&str> = out.stderr.lines().collect();
    assert_eq!(lines.len(), 1, "{}", out.stderr);
    assert!(lines[0].starts_with("error E-18W /entity/purpose: "), "{}", lines[0]);
    assert!(out.stdout.is_empty());
}

#[test]
fn added_rules_fire_on_their_fixtures() {
    for rule in ["E-DUP-ID", "E-ENV-BOUNDS"] {
        let out = qtmc(&["lint", &seeded(rule)]);
        assert_eq!(out.code, 1, "{rule}");
        assert!(out.stderr.lines().all(|l| l.starts_with(&format!("error {rule} "))), "{}", out.stderr);
    }
}

#[test]
fn warnings_alone_pass_unless_strict() {
    let file = seeded("W-ENV");
    let lenient = qtmc(&["lint", &file]);
    assert_eq!(lenient.code, 0);
    assert!(lenient.stderr.starts_with("warning W-ENV "));
    assert_eq!(qtmc(&["lint", "--strict", &file]).code, 1);
}

#[test]
fn config_file_and_environment_override_severity() {
    let dir = tempfile::tempdir().unwrap();
    let off = dir.path().join("off.json");
    fs::write(&off, r#"{"E-18W": "off"}"#).unwrap();
    let warn = dir.path().join("warn.json");
    fs::write(&warn, r#"{"E-18W": "warning"}"#).unwrap();
    let file = seeded("E-18W");

    let out = qtmc(&["lint", "--config", off.to_str().unwrap(), &file]);
    assert_eq!((out.code, out.stderr.as_str()), (0, ""));

    let out = qtmc_env(&["lint", &file], Some(&warn));
    assert_eq!(out.code, 0);
    assert!(out.stderr.starts_with("warning E-18W "), "{}", out.stderr);

    // The flag wins over the environment.
    let out = qtmc_env(&["lint", "--config", off.to_str().unwrap(), &file], Some(&warn));
    assert_eq!((out.code, out.stderr.as_str()), (0, ""));

    let unknown = dir.path().join("unknown.json");
    fs::write(&unknown, r#"{"E-NOPE": "off"}"#).unwrap();
    assert_eq!(qtmc(&["lint", "--config", unknown.to_str().unwrap(), &file]).code, 2);
}

#[test]
fn jsonl_lines_are_json_objects() {
    let out = qtmc(&["lint", "--format", "jsonl", &seeded("E-18W")]);
    assert_eq!(out.code, 1);
    let v: serde_json::Value = serde_json::from_str(out.stderr.trim_end()).unwrap();
    assert_eq!(v["rule_id"], "E-18W");
    assert_eq!(v["severity"], "error");
    assert_eq!(v["path"], "/entity/purpose");
}

#[test]
fn several_files_report_in_argument_order_with_prefixes() {
    let rules = ["W-ENV", "E-18W", "E-REQ", "W-BENCH", "E-RPN"];
    let files: Vec<String> = rules.iter().map(|r| seeded(r)).collect();
    let mut args = vec!["lint"];
    args.extend(files.iter().map(String::as_str));
    let out = qtmc(&args);
    assert_eq!(out.code, 1);
    let order: Vec<&str> = out
        .stderr
        .lines()
        .map(|l| {
            let (file, _) = l.split_once(": ").unwrap();
            rules[files.iter().position(|f| f == file).unwrap()]
        })
        .collect();
    let mut dedup = order.clone();
    dedup.dedup();
    assert_eq!(dedup, rules);
}

#[test]
fn unparseable_card_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.qtmc.json");
    fs::write(&bad, "{\n").unwrap();
    let out = qtmc(&["lint", bad.to_str().unwrap()]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.starts_with("error P-SYNTAX (root) (byte "), "{}", out.stderr);
    assert_eq!(qtmc(&["lint", dir.path().join("missing.json").to_str().unwrap()]).code, 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(qtmc(&["frob"]).code, 2);
    assert_eq!(qtmc(&["lint"]).code, 2);
    let help = qtmc(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("lint"));
}

#[test]
fn pid_hash_and_fair() {
    let file = path("clean.qtmc.json");
    assert_eq!(qtmc(&["pid", &file]).stdout, "acme-qpu-one@1.2.0\n");
    assert_eq!(
        qtmc(&["pid", &file, "--pointer", "/performance/metrics/0"]).stdout,
        "acme-qpu-one@1.2.0#/performance/metrics/0\n"
    );
    assert_eq!(qtmc(&["pid", &file, "--pointer", "/no/such/element"]).code, 2);

    let bytes = fs::read(fixture("clean.qtmc.json")).unwrap();
    let card = parse_card(&bytes).card.unwrap();
    let hash = qtmc(&["hash", &file]).stdout;
    assert_eq!(hash.trim_end(), content_hash(&card));
    assert_eq!(hash.trim_end(), hash_bytes(&serialize_card(&card)));

    let fair: serde_json::Value = serde_json::from_str(&qtmc(&["fair", &file]).stdout).unwrap();
    assert_eq!(fair["identifier"], "acme-qpu-one@1.2.0");
    assert_eq!(fair["content_hash"], hash.trim_end());
    assert_eq!(fair["release_date"], "2025-03-14");
}

#[test]
fn new_scaffold_parses() {
    let out = qtmc(&["new", "Photon Source", "0.1.0", "--type", "communication", "--date", "2026-01-02"]);
    assert_eq!(out.code, 0);
    let card = parse_card(out.stdout.as_bytes()).card.unwrap();
    assert_eq!(card.entity.name, "Photon Source");
    assert_eq!(card.entity.release_date.to_string(), "2026-01-02");
    assert_eq!(qtmc(&["new", "x", "1.0.0", "--date", "yesterday"]).code, 2);
}

#[test]
fn render_matches_golden_files() {
    let file = path("clean.qtmc.json");
    let md = qtmc(&["render", &file]);
    assert_eq!(md.stdout, fs::read_to_string(fixture("golden.md")).unwrap());
    let html = qtmc(&["render", "--format", "html", &file]);
    assert_eq!(html.stdout, fs::read_to_string(fixture("golden.html")).unwrap());
    let full = qtmc(&["render", "--include-empty", &file]).stdout;
    assert!(full.len() >= md.stdout.len());
}

#[test]
fn fmea_check_ranks_rows_and_reports_coverage() {
    let out = qtmc(&["fmea-check", &path("clean.qtmc.json"), &path("fmea.csv")]);
    assert_eq!(out.code, 1);
    assert_eq!(out.stderr.lines().count(), 1);
    assert!(out.stderr.starts_with("error E-FMEA-COVERAGE "));
    let ids: Vec<&str> = out.stdout.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(ids, ["F2", "F1", "F5", "F4", "F3"]);
}

#[test]
fn index_find_and_compare_a_registry() {
    let dir = tempfile::tempdir().unwrap();
    let mut r = rng(11);
    let mut expected = Vec::new();
    for (i, name) in ["Alpha Chip", "Beta Chip", "Gamma Chip"].iter().enumerate() {
        let (card, metric) = registry_card(&mut r, name, &format!("1.{i}.0"));
        let pid = card_pid(&card).unwrap();
        fs::write(dir.path().join(pid.file_name()), serialize_card(&card)).unwrap();
        expected.push((pid, content_hash(&card), metric));
    }
    let d = dir.path().to_str().unwrap();

    let out = qtmc(&["index", d]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let listed: Vec<String> = out.stdout.lines().map(String::from).collect();
    let want: Vec<String> = expected.iter().map(|(p, h, _)| format!("{p}\t{h}")).collect();
    assert_eq!(listed, want);
    assert!(dir.path().join("index.cache.json").exists());

    let out = qtmc(&["find", d]);
    assert_eq!(out.stdout.lines().count(), 3);
    assert!(out.stdout.starts_with("alpha-chip@1.0.0\tPurpose of Alpha Chip"));
    assert_eq!(qtmc(&["find", d, "--class", "no such class"]).stdout, "");

    let reporting: Vec<_> = expected.iter().filter(|(_, _, m)| m.is_some()).collect();
    let out = qtmc(&["compare", d, "--metric", "T1"]);
    if reporting.is_empty() {
        assert_eq!(out.code, 2);
    } else {
        assert_eq!(out.code, 0, "{}", out.stderr);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert!(v.is_object());
    }
    assert_eq!(qtmc(&["compare", d, "--metric", "Nonexistent metric"]).code, 2);

    // Tampering with a registered file is reported on the next load.
    let victim = dir.path().join(expected[0].0.file_name());
    let mut card = parse_card(&fs::read(&victim).unwrap()).card.unwrap();
    card.entity.citation.push_str(" (edited)");
    fs::write(&victim, serialize_card(&card)).unwrap();
    let out = qtmc(&["index", d]);
    assert_eq!(out.code, 1);
    assert!(!out.stderr.is_empty());
}
