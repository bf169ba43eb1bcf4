//! Bundled labeled fixture corpus and detector evaluation against it.
//!
//! Fixtures live under `fixtures/v1` next to a manifest carrying, per fixture,
//! ground-truth labels for every interactive control on the initial pane and
//! the expected route under each policy.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::archetype::ArchetypeKind;
use crate::detector::{ControlClass, Detector};
use crate::error::AuditError;
use crate::snapshot::{parse_snapshot, rect_in_viewport, Snapshot};
use crate::state::{Policy, TraversalState};
use crate::stats::Confusion2x2;

pub const FIXTURE_COUNT: usize = 60;

/// Directory of the bundled corpus.
pub fn bundled_fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join("v1")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ControlLabel {
    pub node_id: String,
    /// Perceivable in the first viewport.
    pub visible: bool,
    /// A meaningful alternative usable with one primary interaction.
    pub actionable: bool,
    pub control_class: ControlClass,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ExpectedRun {
    pub strip: String,
    pub terminal_node_id: Option<String>,
    /// `[D/vh, T, F, H]`.
    pub components: [f64; 4],
    pub censored: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedRuns {
    pub pointer: ExpectedRun,
    pub keyboard: ExpectedRun,
}

impl ExpectedRuns {
    pub fn get(&self, policy: Policy) -> &ExpectedRun {
        match policy {
            Policy::Pointer => &self.pointer,
            Policy::Keyboard => &self.keyboard,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestEntry {
    id: String,
    snapshot: String,
    archetype: ArchetypeKind,
    tags: Vec<String>,
    note: String,
    labels: Vec<ControlLabel>,
    expected: ExpectedRuns,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct Manifest {
    version: u32,
    schema_version: u32,
    fixtures: Vec<ManifestEntry>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledFixture {
    pub id: String,
    pub path: PathBuf,
    pub snapshot: Snapshot,
    pub archetype: ArchetypeKind,
    pub tags: Vec<String>,
    pub note: String,
    pub labels: Vec<ControlLabel>,
    pub expected: ExpectedRuns,
}

impl LabeledFixture {
    pub fn has_tag(&self, tag: &str) -> bool {
        self.tags.iter().any(|t| t == tag)
    }
}

/// Loads the bundled corpus. Any invalid fixture fails the whole load.
pub fn load_fixture_corpus() -> Result<Vec<LabeledFixture>, AuditError> {
    let fixtures = load_fixture_dir(&bundled_fixture_dir())?;
    if fixtures.len() != FIXTURE_COUNT {
        return Err(AuditError::Fixture(format!("expected {FIXTURE_COUNT} fixtures, found {}", fixtures.len())));
    }
    Ok(fixtures)
}

pub fn load_fixture_dir(dir: &Path) -> Result<Vec<LabeledFixture>, AuditError> {
    let bad = |m: String| AuditError::Fixture(m);
    let manifest_path = dir.join("manifest.json");
    let text = fs::read_to_string(&manifest_path).map_err(|e| bad(format!("{}: {e}", manifest_path.display())))?;
    let manifest: Manifest = serde_json::from_str(&text).map_err(|e| bad(format!("manifest: {e}")))?;
    if manifest.version != 1 || manifest.schema_version != crate::snapshot::SCHEMA_VERSION {
        return Err(bad(format!("unsupported manifest version {}", manifest.version)));
    }
    let mut out = Vec::with_capacity(manifest.fixtures.len());
    for e in manifest.fixtures {
        let path = dir.join(&e.snapshot);
        let doc = fs::read_to_string(&path).map_err(|err| bad(format!("{}: {err}", path.display())))?;
        let snapshot = parse_snapshot(&doc).map_err(|err| bad(format!("{}: {err}", e.id)))?;
        for label in &e.labels {
            match snapshot.node(&label.node_id) {
                Some(n) if n.is_interactive() => {}
                _ => return Err(bad(format!("{}: label for unknown control `{}`", e.id, label.node_id))),
            }
        }
        out.push(LabeledFixture {
            id: e.id,
            path,
            snapshot,
            archetype: e.archetype,
            tags: e.tags,
            note: e.note,
            labels: e.labels,
            expected: e.expected,
        });
    }
    Ok(out)
}

/// Detector verdicts for one control at first encounter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub visible: bool,
    pub actionable: bool,
}

/// Detector verdicts for every labeled control, keyed `fixture#node`.
pub fn predict(fixtures: &[LabeledFixture], detector: &Detector) -> Result<BTreeMap<String, Verdict>, AuditError> {
    let mut out = BTreeMap::new();
    for f in fixtures {
        let state = TraversalState::initial(&f.snapshot);
        for label in &f.labels {
            let node = f.snapshot.node_or_err(&label.node_id)?;
            let visible = state.is_visible(node) && rect_in_viewport(&node.bounds, 0.0, &f.snapshot);
            let actionable = detector
                .is_meaningful_alternative(node, &state, Policy::Pointer, &f.snapshot)?
                .meaningful;
            out.insert(format!("{}#{}", f.id, label.node_id), Verdict { visible, actionable });
        }
    }
    Ok(out)
}

/// Ground truth in the same shape as [`predict`].
pub fn ground_truth(fixtures: &[LabeledFixture]) -> BTreeMap<String, Verdict> {
    fixtures
        .iter()
        .flat_map(|f| {
            f.labels.iter().map(move |l| {
                (
                    format!("{}#{}", f.id, l.node_id),
                    Verdict {
                        visible: l.visible,
                        actionable: l.actionable,
                    },
                )
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DetectorEvaluation {
    pub visibility: Confusion2x2,
    pub actionability: Confusion2x2,
    /// Items present in the labels but absent from the predictions.
    pub missing: u64,
}

/// Scores predictions against labels item by item.
pub fn evaluate(labels: &BTreeMap<String, Verdict>, predictions: &BTreeMap<String, Verdict>) -> DetectorEvaluation {
    let mut ev = DetectorEvaluation::default();
    for (id, truth) in labels {
        let Some(p) = predictions.get(id) else {
            ev.missing += 1;
            continue;
        };
        ev.visibility.record(p.visible, truth.visible);
        ev.actionability.record(p.actionable, truth.actionable);
    }
    ev
}

pub fn evaluate_detector(fixtures: &[LabeledFixture], detector: &Detector) -> Result<DetectorEvaluation, AuditError> {
    Ok(evaluate(&ground_truth(fixtures), &predict(fixtures, detector)?))
}
