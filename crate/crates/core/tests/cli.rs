use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value;

use psi_audit::cli::{run, EXIT_CENSORED, EXIT_INVALID, EXIT_NO_ROOT, EXIT_OK, EXIT_USAGE};
use psi_audit::fixtures::bundled_fixture_dir;

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv: Vec<&str> = std::iter::once("psi-audit").chain(args.iter().copied()).collect();
    let code = run(argv, &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn fixture(name: &str) -> String {
    bundled_fixture_dir()
        .join(format!("{name}.snapshot.json"))
        .display()
        .to_string()
}

fn psi(report: &Value, policy: &str, profile: &str) -> f64 {
    report["results"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["policy"] == policy)
        .unwrap()["psiByProfile"][profile]
        .as_f64()
        .unwrap()
}

#[test]
fn copresent_costs_the_same_under_both_policies() {
    let o = cli(&["audit", "--snapshot", &fixture("copresent"), "--policy", "both"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let r: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(psi(&r, "POINTER", "default"), psi(&r, "KEYBOARD", "default"));
    for res in r["results"].as_array().unwrap() {
        assert_eq!(res["components"]["focusLoops"], 0);
        assert!(res["evidence"].is_object());
    }
}

#[test]
fn trap_makes_keyboard_costlier() {
    let o = cli(&["audit", "--snapshot", &fixture("multistep_trap")]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let r: Value = serde_json::from_str(&o.stdout).unwrap();
    assert!(psi(&r, "KEYBOARD", "default") > psi(&r, "POINTER", "default"));
}

#[test]
fn profiles_are_keyed_by_name() {
    let o = cli(&[
        "audit",
        "--snapshot",
        &fixture("scrollwall"),
        "--profile",
        "default,accessibility",
        "--policy",
        "keyboard",
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let r: Value = serde_json::from_str(&o.stdout).unwrap();
    let keys: Vec<&String> = r["results"][0]["psiByProfile"].as_object().unwrap().keys().collect();
    assert_eq!(keys, ["accessibility", "default"]);
    assert!(psi(&r, "KEYBOARD", "accessibility") >= psi(&r, "KEYBOARD", "default"));
}

#[test]
fn censored_runs_exit_four_and_still_write_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("censor.report.json");
    let o = cli(&["audit", "--snapshot", &fixture("censor"), "--out", out.to_str().unwrap()]);
    assert_eq!(o.code, EXIT_CENSORED);
    let r: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    for res in r["results"].as_array().unwrap() {
        assert_eq!(res["components"]["censored"], true);
        assert!(res.get("evidence").is_none(), "no evidence without a terminal");
    }
}

#[test]
fn bad_input_maps_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let garbage = dir.path().join("garbage.snapshot.json");
    fs::write(&garbage, "{ not json").unwrap();
    assert_eq!(cli(&["audit", "--snapshot", garbage.to_str().unwrap()]).code, EXIT_INVALID);

    let text = fs::read_to_string(fixture("copresent")).unwrap();
    let mut doc: Value = serde_json::from_str(&text).unwrap();
    doc["surface"]["rootNodeId"] = "missing".into();
    let rootless = dir.path().join("rootless.snapshot.json");
    fs::write(&rootless, doc.to_string()).unwrap();
    let o = cli(&["audit", "--snapshot", rootless.to_str().unwrap()]);
    assert_eq!(o.code, EXIT_NO_ROOT);
    assert!(o.stderr.contains("missing"));

    assert_eq!(cli(&["audit", "--snapshot", &fixture("copresent"), "--profile", "harsh"]).code, EXIT_USAGE);
    assert_eq!(cli(&["audit", "--snapshot", &fixture("copresent"), "--policy", "mouse"]).code, EXIT_USAGE);
    assert_eq!(cli(&["audit"]).code, EXIT_USAGE);
    assert_eq!(cli(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(cli(&["audit", "--snapshot", "/nonexistent/x.json"]).code, EXIT_INVALID);
    // a lone "Got it" is not an accept control, so companion signals are undefined
    assert_eq!(cli(&["audit", "--snapshot", &fixture("euphemism-05")]).code, EXIT_INVALID);

    let help = cli(&["--help"]);
    assert_eq!(help.code, EXIT_OK);
    assert!(help.stdout.contains("audit"));
}

#[test]
fn custom_weights_parse_from_the_command_line() {
    let o = cli(&["audit", "--snapshot", &fixture("vignette"), "--profile", "custom:0,1,0,0", "--policy", "pointer"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let r: Value = serde_json::from_str(&o.stdout).unwrap();
    let time = r["results"][0]["components"]["timeS"].as_f64().unwrap();
    assert!((psi(&r, "POINTER", "custom:0,1,0,0") - time).abs() < 1e-12);
}

#[test]
fn text_format_and_svg_evidence() {
    let dir = tempfile::tempdir().unwrap();
    let o = cli(&[
        "audit",
        "--snapshot",
        &fixture("vignette"),
        "--format",
        "text",
        "--svg",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert!(o.stdout.contains("EV_SCROLL -> EV_EXPAND -> EV_TOGGLE -> EV_ACTION"));
    let svg = fs::read_to_string(dir.path().join("vignette-pointer.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
}

fn read_dir_bytes(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| (p.strip_prefix(dir).unwrap().to_path_buf(), fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

#[test]
fn generate_corpus_summarize_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        let o = cli(&["generate", "--count", "3", "--seed", "9", "--out", d.to_str().unwrap()]);
        assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    }
    assert_eq!(read_dir_bytes(&a), read_dir_bytes(&b));
    let manifest: Value = serde_json::from_str(&fs::read_to_string(a.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 9);
    assert_eq!(manifest["items"].as_array().unwrap().len(), 12);

    let reports = dir.path().join("reports");
    let o = cli(&["corpus", "--snapshots", a.to_str().unwrap(), "--out", reports.to_str().unwrap()]);
    assert!(o.code == EXIT_OK || o.code == EXIT_CENSORED, "{}", o.stderr);
    let direct: Value = serde_json::from_str(&o.stdout).unwrap();
    let s = cli(&["summarize", "--reports", reports.to_str().unwrap()]);
    assert_eq!(s.code, EXIT_OK, "{}", s.stderr);
    let summarized: Value = serde_json::from_str(&s.stdout).unwrap();
    assert_eq!(direct, summarized);
    assert_eq!(summarized["archetypes"].as_array().unwrap().len(), 4);

    assert_eq!(cli(&["summarize", "--reports", a.to_str().unwrap()]).code, EXIT_INVALID);
    assert_eq!(cli(&["generate", "--count", "3"]).code, EXIT_USAGE);
}

#[test]
fn single_archetype_generation() {
    let o = cli(&["generate", "--archetype", "scroll_wall", "--calibrated"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let snap = psi_audit::snapshot::parse_snapshot(&o.stdout).unwrap();
    assert_eq!(snap.viewport.width, 1440);
    assert_eq!(cli(&["generate", "--archetype", "scroll_wall", "--scroll-depth-vh", "0.5"]).code, EXIT_USAGE);
    assert_eq!(cli(&["generate", "--archetype", "popup"]).code, EXIT_USAGE);
}

#[test]
fn eval_reads_label_and_prediction_files() {
    let dir = tempfile::tempdir().unwrap();
    let labels = dir.path().join("labels.json");
    let preds = dir.path().join("preds.json");
    fs::write(
        &labels,
        r#"{"a": {"visible": true, "actionable": true}, "b": {"visible": true, "actionable": false}, "c": {"visible": false, "actionable": false}}"#,
    )
    .unwrap();
    fs::write(
        &preds,
        r#"{"a": {"visible": true, "actionable": false}, "b": {"visible": true, "actionable": false}, "c": {"visible": true, "actionable": false}}"#,
    )
    .unwrap();
    let o = cli(&["eval", "--labels", labels.to_str().unwrap(), "--predictions", preds.to_str().unwrap()]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let r: Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(r["visibility"]["precision"].as_f64().unwrap(), 2.0 / 3.0);
    assert_eq!(r["visibility"]["recall"].as_f64().unwrap(), 1.0);
    assert_eq!(r["actionability"]["recall"].as_f64().unwrap(), 0.0);
    assert_eq!(cli(&["eval", "--labels", labels.to_str().unwrap()]).code, EXIT_USAGE);

    let bundled = cli(&["eval"]);
    assert_eq!(bundled.code, EXIT_OK);
    let r: Value = serde_json::from_str(&bundled.stdout).unwrap();
    assert!(r["actionability"]["precision"].as_f64().unwrap() >= 0.80);
}

#[test]
fn power_command() {
    let o = cli(&["power", "--r", "0.30", "--format", "text"]);
    assert_eq!((o.code, o.stdout.as_str()), (EXIT_OK, "n = 85\n"));
    assert_eq!(cli(&["power", "--r", "1.5"]).code, EXIT_USAGE);
}

#[test]
fn lexicon_override_changes_classification() {
    let dir = tempfile::tempdir().unwrap();
    let lex = dir.path().join("lexicon.json");
    fs::write(&lex, "{").unwrap();
    assert_eq!(cli(&["audit", "--snapshot", &fixture("copresent"), "--lexicon", lex.to_str().unwrap()]).code, EXIT_INVALID);
}
