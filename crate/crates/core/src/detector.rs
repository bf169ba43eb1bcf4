//! Rule-based consent-control classification and the meaningful-alternative test.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::AuditError;
use crate::focus::FocusRing;
use crate::snapshot::{rect_in_viewport, EffectKind, Role, Snapshot, UiNode};
use crate::state::{Policy, TraversalState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ControlClass {
    Accept,
    Reject,
    Settings,
    Save,
    Reversibility,
    Informational,
    Unknown,
}

impl ControlClass {
    /// Reject, settings and save paths.
    pub fn is_non_accept_path(self) -> bool {
        matches!(self, ControlClass::Reject | ControlClass::Settings | ControlClass::Save)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ControlClass::Accept => "ACCEPT",
            ControlClass::Reject => "REJECT",
            ControlClass::Settings => "SETTINGS",
            ControlClass::Save => "SAVE",
            ControlClass::Reversibility => "REVERSIBILITY",
            ControlClass::Informational => "INFORMATIONAL",
            ControlClass::Unknown => "UNKNOWN",
        }
    }
}

impl fmt::Display for ControlClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

const DEFAULT_LEXICON: &str = include_str!("../assets/lexicon.json");

/// Per-class phrase lists plus euphemisms that never establish a path on their own.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabelLexicon {
    pub version: u32,
    pub classes: BTreeMap<ControlClass, Vec<String>>,
    #[serde(default)]
    pub euphemisms: Vec<String>,
}

impl Default for LabelLexicon {
    fn default() -> Self {
        LabelLexicon::from_json(DEFAULT_LEXICON).expect("bundled lexicon is valid")
    }
}

/// Lowercases and collapses everything but letters, digits and apostrophes into single spaces.
pub fn normalize_label(text: &str) -> String {
    let cleaned: String = text
        .chars()
        .map(|c| {
            if c.is_alphanumeric() || c == '\'' {
                c.to_lowercase().next().unwrap_or(c)
            } else {
                ' '
            }
        })
        .collect();
    cleaned.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn contains_phrase(haystack: &[&str], phrase: &[&str]) -> bool {
    !phrase.is_empty() && haystack.windows(phrase.len()).any(|w| w == phrase)
}

impl LabelLexicon {
    pub fn from_json(text: &str) -> Result<LabelLexicon, AuditError> {
        let lex: LabelLexicon =
            serde_json::from_str(text).map_err(|e| AuditError::Lexicon(e.to_string()))?;
        lex.validate()?;
        Ok(lex)
    }

    pub fn validate(&self) -> Result<(), AuditError> {
        let accept: Vec<String> = self
            .classes
            .get(&ControlClass::Accept)
            .map(|v| v.iter().map(|p| normalize_label(p)).collect())
            .unwrap_or_default();
        for class in [ControlClass::Reject, ControlClass::Settings, ControlClass::Save] {
            for phrase in self.classes.get(&class).into_iter().flatten() {
                if accept.contains(&normalize_label(phrase)) {
                    return Err(AuditError::Lexicon(format!(
                        "`{phrase}` listed under both ACCEPT and {class}"
                    )));
                }
            }
        }
        if self.classes.contains_key(&ControlClass::Unknown) {
            return Err(AuditError::Lexicon("UNKNOWN cannot carry phrases".into()));
        }
        Ok(())
    }

    /// Longest whole-word phrase match wins; euphemisms win ties and map to
    /// UNKNOWN, as do ties between classes.
    pub fn match_label(&self, text: &str) -> ControlClass {
        let norm = normalize_label(text);
        let words: Vec<&str> = norm.split(' ').filter(|w| !w.is_empty()).collect();
        if words.is_empty() {
            return ControlClass::Unknown;
        }
        let mut best_len = 0usize;
        let mut best: Option<ControlClass> = None;
        let mut euphemism_len = 0usize;
        let mut tied = false;
        for phrase in &self.euphemisms {
            let p = normalize_label(phrase);
            let pw: Vec<&str> = p.split(' ').collect();
            if contains_phrase(&words, &pw) {
                euphemism_len = euphemism_len.max(pw.len());
            }
        }
        for (class, phrases) in &self.classes {
            for phrase in phrases {
                let p = normalize_label(phrase);
                let pw: Vec<&str> = p.split(' ').collect();
                if !contains_phrase(&words, &pw) {
                    continue;
                }
                if pw.len() > best_len {
                    best_len = pw.len();
                    best = Some(*class);
                    tied = false;
                } else if pw.len() == best_len && best != Some(*class) {
                    tied = true;
                }
            }
        }
        if euphemism_len >= best_len && euphemism_len > 0 {
            return ControlClass::Unknown;
        }
        if tied {
            return ControlClass::Unknown;
        }
        best.unwrap_or(ControlClass::Unknown)
    }
}

/// Stage-one classification from the accessible name (falling back to the label).
pub fn classify_control(node: &UiNode, lexicon: &LabelLexicon) -> Result<ControlClass, AuditError> {
    if !node.is_interactive() {
        return Err(AuditError::NotInteractive(node.id.clone()));
    }
    Ok(lexicon.match_label(node.name()))
}

/// A second-stage classifier consulted only for controls stage one leaves UNKNOWN.
pub trait SecondStageClassifier: Send + Sync {
    fn classify(&self, node: &UiNode, snapshot: &Snapshot) -> Option<ControlClass>;
}

/// Stage-one lexicon plus an optional second stage.
#[derive(Clone, Default)]
pub struct Detector {
    pub lexicon: LabelLexicon,
    pub second_stage: Option<Arc<dyn SecondStageClassifier>>,
}

impl fmt::Debug for Detector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Detector")
            .field("lexicon_version", &self.lexicon.version)
            .field("second_stage", &self.second_stage.is_some())
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DetectionResult {
    pub node_id: String,
    pub control_class: ControlClass,
    pub meaningful: bool,
    pub reasons: Vec<String>,
}

pub mod reason {
    pub const INACTIVE_PANE: &str = "inactive-pane";
    pub const NON_ACCEPT: &str = "non-accept-class";
    pub const NOT_NON_ACCEPT: &str = "not-non-accept-class";
    pub const IN_VIEWPORT: &str = "in-viewport";
    pub const HIDDEN: &str = "hidden";
    pub const OFFSCREEN: &str = "offscreen";
    pub const ONE_INTERACTION: &str = "one-interaction";
    pub const DISABLED: &str = "disabled";
    pub const NOT_FOCUSABLE: &str = "not-focusable";
    pub const ADVANCES: &str = "substantive-advance";
    pub const NO_ADVANCE: &str = "no-substantive-advance";
}

impl Detector {
    pub fn new(lexicon: LabelLexicon) -> Detector {
        Detector {
            lexicon,
            second_stage: None,
        }
    }

    pub fn with_second_stage(mut self, stage: Arc<dyn SecondStageClassifier>) -> Detector {
        self.second_stage = Some(stage);
        self
    }

    pub fn classify(&self, node: &UiNode, snapshot: &Snapshot) -> Result<ControlClass, AuditError> {
        let first = classify_control(node, &self.lexicon)?;
        if first != ControlClass::Unknown {
            return Ok(first);
        }
        Ok(self
            .second_stage
            .as_ref()
            .and_then(|s| s.classify(node, snapshot))
            .unwrap_or(ControlClass::Unknown))
    }

    /// Class of an interactive node; non-interactive nodes report UNKNOWN.
    pub fn class_of(&self, node: &UiNode, snapshot: &Snapshot) -> ControlClass {
        self.classify(node, snapshot).unwrap_or(ControlClass::Unknown)
    }

    /// Material controls: non-accept paths and category toggles.
    pub fn is_material(&self, node: &UiNode, snapshot: &Snapshot) -> bool {
        node.role.is_toggle() || (node.is_interactive() && self.class_of(node, snapshot).is_non_accept_path())
    }

    /// Whether activating `node` advances refusal, narrowing or revision.
    ///
    /// Only buttons and links qualify: disclosures and toggles are steps on the
    /// way, not alternatives. Reject and save controls advance by definition; a
    /// settings control must reveal or navigate to a reject/save control or a
    /// category toggle.
    fn advances(&self, node: &UiNode, class: ControlClass, snapshot: &Snapshot) -> bool {
        if !matches!(node.role, Role::Button | Role::Link) {
            return false;
        }
        match class {
            ControlClass::Reject | ControlClass::Save => true,
            ControlClass::Settings => node.effects.iter().any(|e| {
                let exposed: Vec<&UiNode> = match e.kind {
                    EffectKind::Reveal => {
                        let ids = snapshot.subtree(&e.target);
                        snapshot.nodes.iter().filter(|n| ids.contains(&n.id)).collect()
                    }
                    EffectKind::Navigate => snapshot.nodes.iter().filter(|n| n.pane_id == e.target).collect(),
                    _ => Vec::new(),
                };
                exposed.iter().any(|n| {
                    n.id != node.id
                        && (n.role.is_toggle()
                            || (n.is_interactive()
                                && matches!(
                                    self.class_of(n, snapshot),
                                    ControlClass::Reject | ControlClass::Save
                                )))
                })
            }),
            _ => false,
        }
    }

    /// Tests the four meaningful-alternative criteria at `state`: non-accept
    /// class, fully in the viewport, one primary interaction under `policy`,
    /// and substantive advance. Fired rules are listed in `reasons`.
    pub fn is_meaningful_alternative(
        &self,
        node: &UiNode,
        state: &TraversalState,
        policy: Policy,
        snapshot: &Snapshot,
    ) -> Result<DetectionResult, AuditError> {
        let class = self.classify(node, snapshot)?;
        let mut result = DetectionResult {
            node_id: node.id.clone(),
            control_class: class,
            meaningful: false,
            reasons: Vec::new(),
        };
        if node.pane_id != state.active_pane {
            result.reasons.push(reason::INACTIVE_PANE.into());
            return Ok(result);
        }
        let mut ok = true;
        let mut fire = |pass: bool, yes: &str, no: &str, reasons: &mut Vec<String>| {
            reasons.push(if pass { yes } else { no }.to_string());
            ok &= pass;
        };

        fire(class.is_non_accept_path(), reason::NON_ACCEPT, reason::NOT_NON_ACCEPT, &mut result.reasons);

        let shown = state.is_visible(node);
        if shown {
            let in_vp = rect_in_viewport(&node.bounds, state.scroll_offset, snapshot);
            fire(in_vp, reason::IN_VIEWPORT, reason::OFFSCREEN, &mut result.reasons);
        } else {
            fire(false, "", reason::HIDDEN, &mut result.reasons);
        }

        let enabled = state.is_enabled(node);
        if !enabled {
            fire(false, "", reason::DISABLED, &mut result.reasons);
        } else {
            match policy {
                Policy::Pointer => fire(shown, reason::ONE_INTERACTION, reason::HIDDEN, &mut result.reasons),
                Policy::Keyboard => {
                    let ring = FocusRing::build(snapshot, state);
                    fire(ring.contains(&node.id), reason::ONE_INTERACTION, reason::NOT_FOCUSABLE, &mut result.reasons)
                }
            }
        }

        fire(self.advances(node, class, snapshot), reason::ADVANCES, reason::NO_ADVANCE, &mut result.reasons);
        result.reasons.dedup();
        result.meaningful = ok;
        Ok(result)
    }

    /// A meaningful alternative is visible and actionable on the first pane without scroll or reveal.
    pub fn granularity_exposed(&self, snapshot: &Snapshot, policy: Policy) -> bool {
        let state = TraversalState::initial(snapshot);
        snapshot.nodes.iter().any(|n| {
            n.is_interactive()
                && n.pane_id == state.active_pane
                && self
                    .is_meaningful_alternative(n, &state, policy, snapshot)
                    .map(|r| r.meaningful)
                    .unwrap_or(false)
        })
    }

    /// A persistent, enabled, visible "change consent" style affordance exists.
    pub fn detect_reversibility(&self, snapshot: &Snapshot) -> bool {
        snapshot.nodes.iter().any(|n| {
            n.is_interactive()
                && n.enabled
                && n.visible
                && snapshot.is_persistent(&n.id)
                && self.class_of(n, snapshot) == ControlClass::Reversibility
        })
    }
}
