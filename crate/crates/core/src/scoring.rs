//! PSI components, weighting profiles and companion signals.

use serde::{Deserialize, Serialize};

use crate::detector::{ControlClass, Detector};
use crate::error::AuditError;
use crate::snapshot::{effective_viewport_height, salience, visible_in_viewport, Snapshot, UiNode};
use crate::state::{Policy, TraversalState};
use crate::traversal::{count_hidden_reveals, replay, EventKind, EventTrace};

/// Pixels between a toggle and its rationale for the rationale to count as local.
pub const RATIONALE_RADIUS_PX: f64 = 120.0;

/// Accept-to-alternative salience ratio above which accept is dominant.
pub const SALIENCE_RATIO: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PsiComponents {
    pub distance_vh: f64,
    pub time_s: f64,
    pub focus_loops: u32,
    pub hidden_reveals: u32,
    pub censored: bool,
}

impl PsiComponents {
    pub fn new(distance_vh: f64, time_s: f64, focus_loops: u32, hidden_reveals: u32) -> PsiComponents {
        PsiComponents {
            distance_vh,
            time_s,
            focus_loops,
            hidden_reveals,
            censored: false,
        }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [
            self.distance_vh,
            self.time_s,
            f64::from(self.focus_loops),
            f64::from(self.hidden_reveals),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightProfile {
    pub name: String,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

pub const PROFILE_NAMES: [&str; 4] = ["default", "accessibility", "delay", "disclosure"];

impl WeightProfile {
    pub fn new(name: &str, alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<WeightProfile, AuditError> {
        let p = WeightProfile {
            name: name.to_string(),
            alpha,
            beta,
            gamma,
            delta,
        };
        if p.weights().iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(AuditError::InvalidParams(format!("profile `{name}` has a negative or non-finite weight")));
        }
        Ok(p)
    }

    pub fn weights(&self) -> [f64; 4] {
        [self.alpha, self.beta, self.gamma, self.delta]
    }
}

pub fn named_profile(name: &str) -> Result<WeightProfile, AuditError> {
    let (a, b, g, d) = match name {
        "default" => (1.0, 1.0, 1.0, 1.0),
        "accessibility" => (1.0, 1.0, 2.0, 1.0),
        "delay" => (1.0, 2.0, 1.0, 1.0),
        "disclosure" => (1.0, 1.0, 1.0, 2.0),
        _ => {
            return Err(AuditError::UnknownProfile {
                name: name.to_string(),
                valid: PROFILE_NAMES.join(", "),
            })
        }
    };
    WeightProfile::new(name, a, b, g, d)
}

/// Resolves a profile name, or `custom:a,b,g,d` for explicit weights.
pub fn parse_profile(spec: &str) -> Result<WeightProfile, AuditError> {
    if let Some(rest) = spec.strip_prefix("custom:") {
        let parts: Vec<f64> = rest
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| AuditError::InvalidParams(format!("cannot parse weights in `{spec}`")))?;
        if parts.len() != 4 {
            return Err(AuditError::InvalidParams(format!("`{spec}` needs four weights")));
        }
        return WeightProfile::new(spec, parts[0], parts[1], parts[2], parts[3]);
    }
    named_profile(spec)
}

pub fn compute_psi(components: &PsiComponents, profile: &WeightProfile) -> f64 {
    components
        .as_array()
        .iter()
        .zip(profile.weights())
        .fold(0.0, |acc, (c, w)| acc + c * w)
}

pub fn compute_components(trace: &EventTrace, snapshot: &Snapshot, detector: &Detector) -> Result<PsiComponents, AuditError> {
    replay(trace, snapshot)?;
    let evh = effective_viewport_height(snapshot);
    let px = trace.events.iter().fold(0.0, |acc, e| acc + e.scroll_px);
    Ok(PsiComponents {
        distance_vh: px / evh,
        time_s: trace.events.iter().fold(0.0, |acc, e| acc + e.cost),
        focus_loops: trace.count(EventKind::FocusLoop) as u32,
        hidden_reveals: count_hidden_reveals(trace, snapshot, detector)?,
        censored: trace.is_censored(),
    })
}

fn initial_pane_nodes(snapshot: &Snapshot) -> impl Iterator<Item = &UiNode> {
    let pane = snapshot.initial_pane_id().to_string();
    snapshot.nodes.iter().filter(move |n| n.pane_id == pane)
}

fn accept_control<'s>(snapshot: &'s Snapshot, detector: &Detector) -> Result<&'s UiNode, AuditError> {
    initial_pane_nodes(snapshot)
        .filter(|n| n.is_interactive() && detector.class_of(n, snapshot) == ControlClass::Accept)
        .max_by(|a, b| {
            salience(a)
                .unwrap_or(0.0)
                .total_cmp(&salience(b).unwrap_or(0.0))
                .then_with(|| b.id.cmp(&a.id))
        })
        .ok_or(AuditError::NoAcceptControl)
}

/// Assurance cues, one point each: accept out-salients the strongest
/// meaningful alternative by more than 1.5x (or there is none); celebratory or
/// progress copy on the first pane; accept is the single most salient control
/// visible at first encounter.
pub fn compute_aai(snapshot: &Snapshot, policy: Policy, detector: &Detector) -> Result<u8, AuditError> {
    let accept = accept_control(snapshot, detector)?;
    let accept_s = salience(accept)?;
    let state = TraversalState::initial(snapshot);

    let best_alt = initial_pane_nodes(snapshot)
        .filter(|n| n.is_interactive())
        .filter(|n| {
            detector
                .is_meaningful_alternative(n, &state, policy, snapshot)
                .map(|r| r.meaningful)
                .unwrap_or(false)
        })
        .filter_map(|n| salience(n).ok())
        .fold(None, |acc: Option<f64>, s| Some(acc.map_or(s, |a| a.max(s))));
    let ratio_fires = match best_alt {
        None => true,
        Some(alt) if alt <= 0.0 => true,
        Some(alt) => accept_s / alt > SALIENCE_RATIO,
    };

    let celebratory = initial_pane_nodes(snapshot).any(|n| n.celebratory);

    let dominant = initial_pane_nodes(snapshot)
        .filter(|n| n.is_interactive() && n.id != accept.id && visible_in_viewport(n, 0.0, snapshot))
        .filter_map(|n| salience(n).ok())
        .all(|s| s < accept_s)
        && visible_in_viewport(accept, 0.0, snapshot);

    Ok(u8::from(ratio_fires) + u8::from(celebratory) + u8::from(dominant))
}

fn sentence_marks(text: &str) -> usize {
    text.chars().filter(|c| matches!(c, '.' | '!' | '?')).count()
}

/// Every material toggle visible at first encounter has a short rationale
/// within 120 px. False when no such toggle exists.
pub fn local_rationales(snapshot: &Snapshot) -> bool {
    let toggles: Vec<&UiNode> = initial_pane_nodes(snapshot)
        .filter(|n| n.role.is_toggle() && visible_in_viewport(n, 0.0, snapshot))
        .collect();
    if toggles.is_empty() {
        return false;
    }
    toggles.iter().all(|t| {
        snapshot.nodes.iter().any(|r| {
            r.rationale_for.as_deref() == Some(t.id.as_str())
                && r.visible
                && t.bounds.edge_distance(&r.bounds) <= RATIONALE_RADIUS_PX
                && sentence_marks(r.name()) <= 1
        })
    })
}

/// Comprehension affordances, one point each: granularity exposed, local
/// rationales, persistent reversibility.
pub fn compute_csi(snapshot: &Snapshot, policy: Policy, detector: &Detector) -> u8 {
    u8::from(detector.granularity_exposed(snapshot, policy))
        + u8::from(local_rationales(snapshot))
        + u8::from(detector.detect_reversibility(snapshot))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CompanionSignals {
    pub time_to_primary_s: f64,
    pub distance_to_choice_vh: f64,
    pub granularity_exposed: bool,
    pub reversibility: bool,
    pub aai: u8,
    pub csi: u8,
    pub div: i8,
}

pub fn companion_signals(
    snapshot: &Snapshot,
    trace: &EventTrace,
    components: &PsiComponents,
    detector: &Detector,
) -> Result<CompanionSignals, AuditError> {
    let aai = compute_aai(snapshot, trace.policy, detector)?;
    let csi = compute_csi(snapshot, trace.policy, detector);
    Ok(CompanionSignals {
        time_to_primary_s: components.time_s,
        distance_to_choice_vh: components.distance_vh,
        granularity_exposed: detector.granularity_exposed(snapshot, trace.policy),
        reversibility: detector.detect_reversibility(snapshot),
        aai,
        csi,
        div: aai as i8 - csi as i8,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_examples() {
        let d = named_profile("default").unwrap();
        assert_eq!(compute_psi(&PsiComponents::new(1.0, 1.0, 1, 1), &d), 4.0);
        assert_eq!(compute_psi(&PsiComponents::default(), &named_profile("delay").unwrap()), 0.0);
        let acc = named_profile("accessibility").unwrap();
        assert_eq!(compute_psi(&PsiComponents::new(1.0, 1.0, 2, 0), &acc), 6.0);
        assert_eq!(compute_psi(&PsiComponents::new(2.0, 1.5, 0, 1), &d), 4.5);
    }

    #[test]
    fn named_profiles_and_lookup_errors() {
        assert_eq!(named_profile("disclosure").unwrap().weights(), [1.0, 1.0, 1.0, 2.0]);
        assert_eq!(named_profile("delay").unwrap().weights(), [1.0, 2.0, 1.0, 1.0]);
        match named_profile("harsh") {
            Err(AuditError::UnknownProfile { valid, .. }) => assert!(valid.contains("accessibility")),
            other => panic!("{other:?}"),
        }
        assert_eq!(parse_profile("custom:1,0,0,0.5").unwrap().weights(), [1.0, 0.0, 0.0, 0.5]);
        assert!(parse_profile("custom:1,-1,0,0").is_err());
        assert!(parse_profile("custom:1,1").is_err());
    }

    #[test]
    fn sentence_check_is_punctuation_count() {
        assert_eq!(sentence_marks("Helps us measure traffic."), 1);
        assert_eq!(sentence_marks("No marks at all"), 0);
        assert_eq!(sentence_marks("One. Two!"), 2);
    }
}
