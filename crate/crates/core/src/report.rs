//! Audit configuration, per-snapshot reports, evidence frames and corpus summaries.
//!
//! Reports serialize canonically: keys sorted, no timestamps, so identical
//! inputs give byte-identical documents.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::archetype::ArchetypeKind;
use crate::detector::Detector;
use crate::error::AuditError;
use crate::scoring::{companion_signals, compute_components, compute_psi, CompanionSignals, PsiComponents, WeightProfile};
use crate::snapshot::{visible_in_viewport, Rect, Snapshot, Viewport};
use crate::state::Policy;
use crate::stats::median_iqr;
use crate::traversal::{render_event_strip, replay, Budget, Engine, EventTrace, Terminal, TimingConstants};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicySelection {
    Pointer,
    Keyboard,
    #[default]
    Both,
}

impl PolicySelection {
    pub fn policies(self) -> Vec<Policy> {
        match self {
            PolicySelection::Pointer => vec![Policy::Pointer],
            PolicySelection::Keyboard => vec![Policy::Keyboard],
            PolicySelection::Both => Policy::ALL.to_vec(),
        }
    }
}

impl std::str::FromStr for PolicySelection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "pointer" => Ok(PolicySelection::Pointer),
            "keyboard" => Ok(PolicySelection::Keyboard),
            "both" => Ok(PolicySelection::Both),
            other => Err(format!("unknown policy `{other}` (pointer, keyboard, both)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AuditConfig {
    pub policy: PolicySelection,
    pub profiles: Vec<WeightProfile>,
    /// Viewport override: a named breakpoint or `WIDTHxHEIGHT`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub breakpoint: Option<String>,
    pub budget: Budget,
    pub timing: TimingConstants,
    /// Lexicon path as given; echoed for reproducibility.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lexicon: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            policy: PolicySelection::Both,
            profiles: vec![crate::scoring::named_profile("default").expect("built-in profile")],
            breakpoint: None,
            budget: Budget::default(),
            timing: TimingConstants::default(),
            lexicon: None,
            seed: None,
        }
    }
}

impl AuditConfig {
    pub fn validate(&self) -> Result<(), AuditError> {
        if self.profiles.is_empty() {
            return Err(AuditError::InvalidParams("at least one profile is required".into()));
        }
        if let Some(bp) = &self.breakpoint {
            parse_viewport(bp)?;
        }
        self.budget.validate()?;
        self.timing.validate()
    }
}

/// A named breakpoint or an explicit `WIDTHxHEIGHT`.
pub fn parse_viewport(spec: &str) -> Result<Viewport, AuditError> {
    if let Some(v) = Viewport::named(spec) {
        return Ok(v);
    }
    let bad = || AuditError::InvalidParams(format!("unknown breakpoint `{spec}` (desktop, mobile or WIDTHxHEIGHT)"));
    let (w, h) = spec.split_once('x').ok_or_else(bad)?;
    let width: u32 = w.trim().parse().map_err(|_| bad())?;
    let height: u32 = h.trim().parse().map_err(|_| bad())?;
    if width == 0 || height == 0 {
        return Err(bad());
    }
    Ok(Viewport {
        width,
        height,
        name: None,
    })
}

/// Where the qualifying alternative became visible and actionable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EvidenceFrame {
    pub node_id: String,
    pub pane_id: String,
    pub bounds: Rect,
    pub scroll_offset: f64,
    /// Index of the terminal ACTION in the trace.
    pub step_index: usize,
    pub reasons: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PolicyResult {
    pub policy: Policy,
    pub components: PsiComponents,
    pub psi_by_profile: BTreeMap<String, f64>,
    pub signals: CompanionSignals,
    pub strip: String,
    pub trace: EventTrace,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evidence: Option<EvidenceFrame>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SnapshotInfo {
    pub id: String,
    pub viewport: Viewport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub breakpoint: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub archetype: Option<ArchetypeKind>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AuditReport {
    pub schema_version: u32,
    pub snapshot: SnapshotInfo,
    pub config: AuditConfig,
    pub results: Vec<PolicyResult>,
}

impl AuditReport {
    pub fn any_censored(&self) -> bool {
        self.results.iter().any(|r| r.trace.is_censored())
    }

    pub fn result(&self, policy: Policy) -> Option<&PolicyResult> {
        self.results.iter().find(|r| r.policy == policy)
    }

    /// Sorted-key JSON with a trailing newline.
    pub fn to_canonical_json(&self) -> String {
        canonical_json(self)
    }
}

pub fn canonical_json<T: Serialize>(value: &T) -> String {
    // serde_json maps are BTreeMap-backed here, so routing through Value sorts keys
    let v = serde_json::to_value(value).expect("report types serialize");
    let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
    s.push('\n');
    s
}

fn apply_breakpoint(snapshot: &Snapshot, spec: &str) -> Result<Snapshot, AuditError> {
    let vp = parse_viewport(spec)?;
    let mut s = snapshot.clone();
    if s.viewport.width == vp.width && s.viewport.height == vp.height {
        return Ok(s);
    }
    s.meta.breakpoint = vp.name.clone();
    s.viewport = vp;
    if !s.surface.scrollable {
        s.surface.scroll_height = s.surface.scroll_height.max(f64::from(s.viewport.height));
    }
    s.validate()
        .map_err(|e| AuditError::InvalidParams(format!("snapshot does not fit breakpoint `{spec}`: {e}")))?;
    Ok(s)
}

fn evidence(trace: &EventTrace, snapshot: &Snapshot, detector: &Detector) -> Result<Option<EvidenceFrame>, AuditError> {
    if trace.terminal != Terminal::AlternativeReached {
        return Ok(None);
    }
    let Some(id) = &trace.terminal_node_id else {
        return Ok(None);
    };
    let states = replay(trace, snapshot)?;
    let step = trace.events.len() - 1;
    let at = &states[step];
    let node = snapshot.node_or_err(id)?;
    let det = detector.is_meaningful_alternative(node, at, trace.policy, snapshot)?;
    if !det.meaningful {
        return Err(AuditError::TraceMismatch(format!("terminal `{id}` is not meaningful at its step")));
    }
    Ok(Some(EvidenceFrame {
        node_id: id.clone(),
        pane_id: node.pane_id.clone(),
        bounds: node.bounds,
        scroll_offset: at.scroll_offset,
        step_index: step,
        reasons: det.reasons,
    }))
}

/// Audits one snapshot under every policy the config selects.
pub fn run_audit(
    snapshot: &Snapshot,
    id: &str,
    archetype: Option<ArchetypeKind>,
    config: &AuditConfig,
    detector: &Detector,
) -> Result<AuditReport, AuditError> {
    config.validate()?;
    let snapshot = match &config.breakpoint {
        Some(bp) => apply_breakpoint(snapshot, bp)?,
        None => snapshot.clone(),
    };
    let engine = Engine {
        detector,
        budget: config.budget,
        timing: config.timing,
    };
    let mut results = Vec::new();
    for policy in config.policy.policies() {
        let trace = engine.traverse(&snapshot, policy)?;
        let components = compute_components(&trace, &snapshot, detector)?;
        let psi_by_profile = config
            .profiles
            .iter()
            .map(|p| (p.name.clone(), compute_psi(&components, p)))
            .collect();
        results.push(PolicyResult {
            policy,
            components,
            psi_by_profile,
            signals: companion_signals(&snapshot, &trace, &components, detector)?,
            strip: render_event_strip(&trace),
            evidence: evidence(&trace, &snapshot, detector)?,
            trace,
        });
    }
    Ok(AuditReport {
        schema_version: REPORT_SCHEMA_VERSION,
        snapshot: SnapshotInfo {
            id: id.to_string(),
            viewport: snapshot.viewport.clone(),
            breakpoint: snapshot.meta.breakpoint.clone().or_else(|| snapshot.viewport.name.clone()),
            archetype,
        },
        config: config.clone(),
        results,
    })
}

/// Text rendering: one block per policy with the strip and the scores.
pub fn render_text(report: &AuditReport) -> String {
    let mut out = String::new();
    for r in &report.results {
        let c = &r.components;
        let _ = writeln!(out, "{} [{}]", report.snapshot.id, r.policy);
        let _ = writeln!(out, "  strip: {}", if r.strip.is_empty() { "(none)" } else { &r.strip });
        let _ = writeln!(
            out,
            "  D/vh={:.3} T={:.3}s F={} H={}{}",
            c.distance_vh,
            c.time_s,
            c.focus_loops,
            c.hidden_reveals,
            if c.censored { " (censored, lower bounds)" } else { "" }
        );
        for (name, psi) in &r.psi_by_profile {
            let _ = writeln!(out, "  PSI[{name}] = {psi:.3}");
        }
        let s = &r.signals;
        let _ = writeln!(out, "  AAI={} CSI={} DIV={}", s.aai, s.csi, s.div);
        if let Some(e) = &r.evidence {
            let _ = writeln!(
                out,
                "  evidence: {} on {} at offset {:.0}px, step {} ({})",
                e.node_id,
                e.pane_id,
                e.scroll_offset,
                e.step_index,
                e.reasons.join(", ")
            );
        }
    }
    out
}

/// Vector overlay of the evidence pane: node rectangles, the qualifying control
/// outlined, and the viewport band at the evidence offset.
pub fn evidence_svg(snapshot: &Snapshot, frame: &EvidenceFrame) -> String {
    let height = snapshot.surface.scroll_height.max(f64::from(snapshot.viewport.height));
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        snapshot.viewport.width, height, snapshot.viewport.width, height
    );
    let evh = crate::snapshot::effective_viewport_height(snapshot);
    let _ = writeln!(
        out,
        "  <rect x=\"0\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#eef\" stroke=\"#99c\"/>",
        frame.scroll_offset, snapshot.viewport.width, evh
    );
    for n in snapshot.nodes.iter().filter(|n| n.pane_id == frame.pane_id && n.is_interactive()) {
        let b = n.bounds;
        let (stroke, width) = if n.id == frame.node_id { ("#d00", 3) } else { ("#888", 1) };
        let dash = if visible_in_viewport(n, frame.scroll_offset, snapshot) { "" } else { " stroke-dasharray=\"4 3\"" };
        let _ = writeln!(
            out,
            "  <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"{width}\"{dash}><title>{}</title></rect>",
            b.x,
            b.y,
            b.w,
            b.h,
            xml_escape(&n.id)
        );
    }
    out.push_str("</svg>\n");
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// One audited run, the unit the summary reducer folds over.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunRecord {
    pub archetype: Option<ArchetypeKind>,
    pub breakpoint: String,
    pub policy: Policy,
    pub components: PsiComponents,
}

impl RunRecord {
    pub fn from_report(report: &AuditReport) -> Vec<RunRecord> {
        report
            .results
            .iter()
            .map(|r| RunRecord {
                archetype: report.snapshot.archetype,
                breakpoint: report.snapshot.breakpoint.clone().unwrap_or_else(|| "custom".into()),
                policy: r.policy,
                components: r.components,
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Spread {
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
}

impl Spread {
    fn of(values: &[f64]) -> Spread {
        let (median, q1, q3) = median_iqr(values).expect("groups are non-empty and finite");
        Spread { median, q1, q3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SummaryRow {
    pub group: String,
    pub n: usize,
    pub censored: usize,
    pub distance_vh: Spread,
    pub time_s: Spread,
    pub focus_loops: Spread,
    pub hidden_reveals: Spread,
    pub psi: BTreeMap<String, Spread>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CorpusSummary {
    pub conditions: Vec<SummaryRow>,
    pub archetypes: Vec<SummaryRow>,
}

fn summary_row(group: String, runs: &[&RunRecord], profiles: &[WeightProfile]) -> SummaryRow {
    let col = |f: &dyn Fn(&PsiComponents) -> f64| Spread::of(&runs.iter().map(|r| f(&r.components)).collect::<Vec<_>>());
    SummaryRow {
        group,
        n: runs.len(),
        censored: runs.iter().filter(|r| r.components.censored).count(),
        distance_vh: col(&|c| c.distance_vh),
        time_s: col(&|c| c.time_s),
        focus_loops: col(&|c| f64::from(c.focus_loops)),
        hidden_reveals: col(&|c| f64::from(c.hidden_reveals)),
        psi: profiles
            .iter()
            .map(|p| (p.name.clone(), col(&|c| compute_psi(c, p))))
            .collect(),
    }
}

/// Median and IQR per breakpoint x policy and per archetype. The result does
/// not depend on the order of `runs`.
pub fn summarize_corpus(runs: &[RunRecord], profiles: &[WeightProfile]) -> Result<CorpusSummary, AuditError> {
    if runs.is_empty() {
        return Err(AuditError::InvalidParams("no reports to summarize".into()));
    }
    if profiles.is_empty() {
        return Err(AuditError::InvalidParams("at least one profile is required".into()));
    }
    let mut by_condition: BTreeMap<(String, Policy), Vec<&RunRecord>> = BTreeMap::new();
    let mut by_kind: BTreeMap<ArchetypeKind, Vec<&RunRecord>> = BTreeMap::new();
    for r in runs {
        by_condition.entry((r.breakpoint.clone(), r.policy)).or_default().push(r);
        if let Some(k) = r.archetype {
            by_kind.entry(k).or_default().push(r);
        }
    }
    Ok(CorpusSummary {
        conditions: by_condition
            .into_iter()
            .map(|((bp, policy), rs)| summary_row(format!("{bp}-{policy}"), &rs, profiles))
            .collect(),
        archetypes: by_kind
            .into_iter()
            .map(|(k, rs)| summary_row(k.to_string(), &rs, profiles))
            .collect(),
    })
}

/// Markdown tables: components and PSI as `median [q1, q3]`.
pub fn render_summary(summary: &CorpusSummary) -> String {
    let mut out = String::new();
    let profiles: Vec<&String> = summary
        .conditions
        .first()
        .map(|r| r.psi.keys().collect())
        .unwrap_or_default();
    let fmt = |s: &Spread| format!("{:.2} [{:.2}, {:.2}]", s.median, s.q1, s.q3);
    for (title, rows) in [("Condition", &summary.conditions), ("Archetype", &summary.archetypes)] {
        if rows.is_empty() {
            continue;
        }
        let _ = write!(out, "| {title} | n | D/vh | T (s) | F | H |");
        for p in &profiles {
            let _ = write!(out, " PSI {p} |");
        }
        out.push('\n');
        out.push_str(&"|---".repeat(6 + profiles.len()));
        out.push_str("|\n");
        for r in rows.iter() {
            let _ = write!(
                out,
                "| {} | {} | {} | {} | {} | {} |",
                r.group,
                r.n,
                fmt(&r.distance_vh),
                fmt(&r.time_s),
                fmt(&r.focus_loops),
                fmt(&r.hidden_reveals)
            );
            for p in &profiles {
                let _ = write!(out, " {} |", r.psi.get(*p).map(fmt).unwrap_or_default());
            }
            out.push('\n');
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn viewport_specs() {
        assert_eq!(parse_viewport("mobile").unwrap().height, 844);
        let v = parse_viewport("1280x720").unwrap();
        assert_eq!((v.width, v.height, v.name), (1280, 720, None));
        assert!(parse_viewport("tablet").is_err());
        assert!(parse_viewport("0x10").is_err());
    }

    #[test]
    fn policy_selection() {
        assert_eq!("both".parse::<PolicySelection>().unwrap().policies(), Policy::ALL.to_vec());
        assert_eq!("Keyboard".parse::<PolicySelection>().unwrap().policies(), vec![Policy::Keyboard]);
        assert!("mouse".parse::<PolicySelection>().is_err());
    }

    #[test]
    fn single_run_summary_is_the_run() {
        let r = RunRecord {
            archetype: Some(ArchetypeKind::CoPresent),
            breakpoint: "desktop".into(),
            policy: Policy::Pointer,
            components: PsiComponents::new(0.5, 0.2, 1, 0),
        };
        let p = crate::scoring::named_profile("default").unwrap();
        let s = summarize_corpus(std::slice::from_ref(&r), std::slice::from_ref(&p)).unwrap();
        assert_eq!(s.conditions.len(), 1);
        assert_eq!(s.conditions[0].psi["default"].median, 1.7);
        assert_eq!(s.archetypes[0].distance_vh.q3, 0.5);
        assert!(summarize_corpus(&[], &[p]).is_err());
    }
}
