use psi_audit::archetype::{generate_corpus, CorpusSpec};
use psi_audit::cli::run;
use psi_audit::detector::Detector;
use psi_audit::detector::ControlClass;
use psi_audit::error::AuditError;
use psi_audit::fixtures::{load_fixture_corpus, LabeledFixture};
use psi_audit::report::{canonical_json, run_audit, AuditConfig};
use psi_audit::scoring::named_profile;

/// Banners whose only affirmative control is a euphemism ("Got it") carry no
/// accept control, so their companion signals cannot be computed.
fn has_accept(f: &LabeledFixture) -> bool {
    let det = Detector::default();
    f.snapshot
        .nodes
        .iter()
        .any(|n| n.is_interactive() && det.class_of(n, &f.snapshot) == ControlClass::Accept)
}

fn cli_stdout(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let argv: Vec<&str> = std::iter::once("psi-audit").chain(args.iter().copied()).collect();
    let code = run(argv, &mut out, &mut std::io::sink());
    (code, String::from_utf8(out).unwrap())
}

#[test]
fn audits_are_byte_identical_across_runs() {
    let det = Detector::default();
    let cfg = AuditConfig {
        profiles: ["default", "accessibility", "delay", "disclosure"]
            .iter()
            .map(|n| named_profile(n).unwrap())
            .collect(),
        ..AuditConfig::default()
    };
    for f in load_fixture_corpus().unwrap() {
        if !has_accept(&f) {
            continue;
        }
        let a = run_audit(&f.snapshot, &f.id, Some(f.archetype), &cfg, &det).unwrap().to_canonical_json();
        let b = run_audit(&f.snapshot, &f.id, Some(f.archetype), &cfg, &det).unwrap().to_canonical_json();
        assert_eq!(a, b, "{}", f.id);
    }
}

#[test]
fn evidence_is_present_exactly_when_an_alternative_is_reached() {
    let det = Detector::default();
    let cfg = AuditConfig::default();
    for f in load_fixture_corpus().unwrap() {
        if !has_accept(&f) {
            let err = run_audit(&f.snapshot, &f.id, Some(f.archetype), &cfg, &det).unwrap_err();
            assert_eq!(err, AuditError::NoAcceptControl, "{}", f.id);
            continue;
        }
        let report = run_audit(&f.snapshot, &f.id, Some(f.archetype), &cfg, &det).unwrap();
        for r in &report.results {
            assert_eq!(r.evidence.is_some(), !r.components.censored, "{} {}", f.id, r.policy);
            if let Some(frame) = &r.evidence {
                assert_eq!(Some(&frame.node_id), r.trace.terminal_node_id.as_ref());
            }
        }
    }
}

#[test]
fn corpus_generation_is_seed_stable() {
    let spec = CorpusSpec {
        count_per_archetype: 5,
        ..CorpusSpec::default()
    };
    let a = generate_corpus(&spec).unwrap();
    let b = generate_corpus(&spec).unwrap();
    assert_eq!(a.len(), 20);
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.snapshot.to_canonical_json(), y.snapshot.to_canonical_json());
        assert_eq!(canonical_json(&x.provenance), canonical_json(&y.provenance));
    }
    let other = generate_corpus(&CorpusSpec { seed: spec.seed + 1, ..spec }).unwrap();
    assert!(a.iter().zip(&other).any(|(x, y)| x.snapshot != y.snapshot));
}

#[test]
fn cli_outputs_repeat_exactly() {
    for args in [
        vec!["sensitivity", "--profiles", "50", "--count", "4", "--seed", "3"],
        vec!["corpus", "--count", "4", "--seed", "3", "--format", "text"],
        vec!["eval"],
    ] {
        let first = cli_stdout(&args);
        let second = cli_stdout(&args);
        assert!(first.0 == 0 || first.0 == 4, "{args:?} exited {}", first.0);
        assert_eq!(first, second, "{args:?}");
    }
}
