//! Snapshot document model for a first-encounter consent surface.
//!
//! A snapshot is the serialized state of a consent surface at page load: the
//! viewport it was captured at, the panes of a staged flow, and every node with
//! its geometry, accessible name, focus attributes and activation effects.
//! Geometry is in CSS pixels relative to the surface origin, `y` growing
//! downward. Hidden nodes carry the bounds they occupy once revealed.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{AuditError, SnapshotError};

pub const SCHEMA_VERSION: u32 = 1;

pub const DESKTOP: (u32, u32) = (1440, 900);
pub const MOBILE: (u32, u32) = (390, 844);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Viewport {
    pub width: u32,
    pub height: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl Viewport {
    /// Resolves a named breakpoint (`desktop` or `mobile`).
    pub fn named(name: &str) -> Option<Viewport> {
        let (width, height) = match name {
            "desktop" => DESKTOP,
            "mobile" => MOBILE,
            _ => return None,
        };
        Some(Viewport {
            width,
            height,
            name: Some(name.to_string()),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rect {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl Rect {
    pub fn new(x: f64, y: f64, w: f64, h: f64) -> Rect {
        Rect { x, y, w, h }
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    pub fn bottom(&self) -> f64 {
        self.y + self.h
    }

    pub fn right(&self) -> f64 {
        self.x + self.w
    }

    /// Euclidean gap between the nearest edges of two rectangles (0 when they touch or overlap).
    pub fn edge_distance(&self, other: &Rect) -> f64 {
        let dx = (other.x - self.right()).max(self.x - other.right()).max(0.0);
        let dy = (other.y - self.bottom()).max(self.y - other.bottom()).max(0.0);
        dx.hypot(dy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Button,
    Link,
    Toggle,
    Checkbox,
    Expander,
    Text,
    Container,
}

impl Role {
    pub fn is_interactive(self) -> bool {
        !matches!(self, Role::Text | Role::Container)
    }

    /// Category toggles and checkboxes.
    pub fn is_toggle(self) -> bool {
        matches!(self, Role::Toggle | Role::Checkbox)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Emphasis {
    Primary,
    Secondary,
    #[default]
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum EffectKind {
    /// Sets `visible` on the target node and its subtree.
    Reveal,
    /// Switches the active pane.
    Navigate,
    /// Enables the target control (e.g. a save button unlocked by a toggle).
    ToggleState,
    /// Closes the surface. Never taken by the audit agent.
    Dismiss,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Effect {
    pub kind: EffectKind,
    pub target: String,
}

fn is_false(b: &bool) -> bool {
    !*b
}

fn is_zero(v: &u32) -> bool {
    *v == 0
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct UiNode {
    pub id: String,
    pub pane_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent_id: Option<String>,
    pub role: Role,
    #[serde(default)]
    pub label: String,
    #[serde(default)]
    pub accessible_name: String,
    pub bounds: Rect,
    #[serde(default = "default_true")]
    pub visible: bool,
    #[serde(default = "default_true")]
    pub enabled: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tab_index: Option<i32>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub roving_tab_index: bool,
    #[serde(default)]
    pub emphasis_class: Emphasis,
    #[serde(default, skip_serializing_if = "is_false")]
    pub celebratory: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rationale_for: Option<String>,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub animation_ms: u32,
    /// Activation visibly gates the next state but no duration was captured.
    #[serde(default, skip_serializing_if = "is_false")]
    pub gated: bool,
    /// Container whose focusable descendants trap keyboard focus in a cycle.
    #[serde(default, skip_serializing_if = "is_false")]
    pub focus_trap: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub effects: Vec<Effect>,
}

impl UiNode {
    pub fn is_interactive(&self) -> bool {
        self.role.is_interactive()
    }

    /// Accessible name, falling back to the visible label.
    pub fn name(&self) -> &str {
        if self.accessible_name.trim().is_empty() {
            &self.label
        } else {
            &self.accessible_name
        }
    }

    pub fn has_effect(&self, kind: EffectKind) -> bool {
        self.effects.iter().any(|e| e.kind == kind)
    }

    /// Activation gates access to a new state: it carries an animation, a gate
    /// flag, or a reveal/navigate effect.
    pub fn is_gating(&self) -> bool {
        self.animation_ms > 0
            || self.gated
            || self.has_effect(EffectKind::Reveal)
            || self.has_effect(EffectKind::Navigate)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Surface {
    pub root_node_id: String,
    pub scrollable: bool,
    pub scroll_height: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub effective_viewport_height: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pane {
    pub id: String,
    pub initial: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Meta {
    #[serde(default)]
    pub source: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub capture_note: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub breakpoint: Option<String>,
    /// Node ids flagged as persistent affordances (outside the dismissible surface).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub persistent: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Snapshot {
    pub version: u32,
    #[serde(default)]
    pub meta: Meta,
    pub viewport: Viewport,
    pub surface: Surface,
    pub panes: Vec<Pane>,
    pub nodes: Vec<UiNode>,
}

/// Validation findings that do not reject a snapshot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Flag {
    UnnamedInteractive(String),
}

/// Parses and validates a snapshot document.
pub fn parse_snapshot(document: &str) -> Result<Snapshot, SnapshotError> {
    let de = &mut serde_json::Deserializer::from_str(document);
    let snapshot: Snapshot = serde_path_to_error::deserialize(de).map_err(|err| {
        let path = err.path().to_string();
        let inner = err.into_inner();
        SnapshotError::Parse {
            path,
            line: inner.line(),
            column: inner.column(),
            message: inner.to_string(),
        }
    })?;
    snapshot.validate()?;
    Ok(snapshot)
}

impl Snapshot {
    pub fn validate(&self) -> Result<(), SnapshotError> {
        if self.version != SCHEMA_VERSION {
            return Err(SnapshotError::Version(self.version));
        }

        let mut dup = Vec::new();
        let mut pane_ids = BTreeSet::new();
        for p in &self.panes {
            if !pane_ids.insert(p.id.as_str()) {
                dup.push(format!("pane:{}", p.id));
            }
        }
        let mut node_ids = BTreeSet::new();
        for n in &self.nodes {
            if !node_ids.insert(n.id.as_str()) {
                dup.push(format!("node:{}", n.id));
            }
        }
        if !dup.is_empty() {
            return Err(SnapshotError::DuplicateId(dup));
        }

        let mut dangling = Vec::new();
        for n in &self.nodes {
            if !pane_ids.contains(n.pane_id.as_str()) {
                dangling.push(format!("{}.paneId={}", n.id, n.pane_id));
            }
            if let Some(p) = &n.parent_id {
                if !node_ids.contains(p.as_str()) {
                    dangling.push(format!("{}.parentId={}", n.id, p));
                }
            }
            if let Some(r) = &n.rationale_for {
                if !node_ids.contains(r.as_str()) {
                    dangling.push(format!("{}.rationaleFor={}", n.id, r));
                }
            }
            for e in &n.effects {
                let ok = match e.kind {
                    EffectKind::Reveal | EffectKind::ToggleState => {
                        node_ids.contains(e.target.as_str())
                    }
                    EffectKind::Navigate => pane_ids.contains(e.target.as_str()),
                    EffectKind::Dismiss => {
                        node_ids.contains(e.target.as_str()) || pane_ids.contains(e.target.as_str())
                    }
                };
                if !ok {
                    dangling.push(format!("{}.effects[{:?}]={}", n.id, e.kind, e.target));
                }
            }
        }
        for id in &self.meta.persistent {
            if !node_ids.contains(id.as_str()) {
                dangling.push(format!("meta.persistent={id}"));
            }
        }
        if !dangling.is_empty() {
            return Err(SnapshotError::DanglingReference(dangling));
        }
        if !node_ids.contains(self.surface.root_node_id.as_str()) {
            return Err(SnapshotError::NoSurfaceRoot(self.surface.root_node_id.clone()));
        }

        let mut problems = Vec::new();
        let vp = &self.viewport;
        if vp.width == 0 || vp.height == 0 {
            problems.push("viewport dimensions must be positive".to_string());
        }
        if let Some(name) = &vp.name {
            if let Some(named) = Viewport::named(name) {
                if (named.width, named.height) != (vp.width, vp.height) {
                    problems.push(format!(
                        "breakpoint `{name}` must be {}x{}",
                        named.width, named.height
                    ));
                }
            }
        }
        let initial = self.panes.iter().filter(|p| p.initial).count();
        if initial != 1 {
            problems.push(format!("expected exactly one initial pane, found {initial}"));
        }
        if let Some(evh) = self.surface.effective_viewport_height {
            if !(evh > 0.0) {
                problems.push("effectiveViewportHeight must be positive".to_string());
            }
        }
        if self.surface.scrollable && self.surface.scroll_height < effective_viewport_height(self) {
            problems.push("scrollHeight is smaller than the effective viewport height".to_string());
        }
        for n in &self.nodes {
            let b = &n.bounds;
            if !(b.w >= 0.0 && b.h >= 0.0) {
                problems.push(format!("{}: negative bounds", n.id));
            }
            if b.x < 0.0 || b.right() > f64::from(vp.width) {
                problems.push(format!("{}: wider than the viewport", n.id));
            }
        }
        for n in &self.nodes {
            for e in &n.effects {
                if e.kind == EffectKind::Reveal && pane_ids.contains(e.target.as_str()) {
                    problems.push(format!("{}: reveal must target a node", n.id));
                }
            }
        }
        if let Some(init) = self.initial_pane() {
            if !self.nodes.iter().any(|n| n.pane_id == init.id && n.visible) {
                problems.push("no visible node on the initial pane".to_string());
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(SnapshotError::Invalid(problems))
        }
    }

    pub fn initial_pane(&self) -> Option<&Pane> {
        self.panes.iter().find(|p| p.initial)
    }

    pub fn initial_pane_id(&self) -> &str {
        self.initial_pane().map(|p| p.id.as_str()).unwrap_or("")
    }

    pub fn node(&self, id: &str) -> Option<&UiNode> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn node_or_err(&self, id: &str) -> Result<&UiNode, AuditError> {
        self.node(id).ok_or_else(|| AuditError::UnknownNode(id.to_string()))
    }

    pub fn has_pane(&self, id: &str) -> bool {
        self.panes.iter().any(|p| p.id == id)
    }

    /// Ids of `id` and all of its descendants.
    pub fn subtree(&self, id: &str) -> BTreeSet<String> {
        let mut children: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for n in &self.nodes {
            if let Some(p) = &n.parent_id {
                children.entry(p.as_str()).or_default().push(n.id.as_str());
            }
        }
        let mut out = BTreeSet::new();
        let mut stack = vec![id];
        while let Some(cur) = stack.pop() {
            if out.insert(cur.to_string()) {
                if let Some(kids) = children.get(cur) {
                    stack.extend(kids.iter().copied());
                }
            }
        }
        out
    }

    /// True when `id` lies inside the subtree rooted at `ancestor`.
    pub fn is_descendant_of(&self, id: &str, ancestor: &str) -> bool {
        let mut cur = Some(id);
        let mut hops = 0;
        while let Some(c) = cur {
            if c == ancestor {
                return true;
            }
            hops += 1;
            if hops > self.nodes.len() {
                return false;
            }
            cur = self.node(c).and_then(|n| n.parent_id.as_deref());
        }
        false
    }

    /// Persistent affordances live outside the dismissible surface or are flagged in `meta`.
    pub fn is_persistent(&self, id: &str) -> bool {
        self.meta.persistent.iter().any(|p| p == id)
            || !self.is_descendant_of(id, &self.surface.root_node_id)
    }

    pub fn flags(&self) -> Vec<Flag> {
        self.nodes
            .iter()
            .filter(|n| n.is_interactive() && n.name().trim().is_empty())
            .map(|n| Flag::UnnamedInteractive(n.id.clone()))
            .collect()
    }

    /// Canonical form: nodes and panes ordered by id.
    pub fn canonicalized(&self) -> Snapshot {
        let mut s = self.clone();
        s.nodes.sort_by(|a, b| a.id.cmp(&b.id));
        s.panes.sort_by(|a, b| a.id.cmp(&b.id));
        s
    }

    /// Canonical serialization: alphabetical keys, nodes and panes sorted by id.
    pub fn to_canonical_json(&self) -> String {
        let value = serde_json::to_value(self.canonicalized()).expect("snapshot serializes");
        let mut out = serde_json::to_string_pretty(&value).expect("value serializes");
        out.push('\n');
        out
    }
}

/// Height used to normalize scroll distance: the consent surface's own viewport
/// when it scrolls independently, otherwise the page viewport.
pub fn effective_viewport_height(snapshot: &Snapshot) -> f64 {
    match (snapshot.surface.scrollable, snapshot.surface.effective_viewport_height) {
        (true, Some(evh)) => evh,
        _ => f64::from(snapshot.viewport.height),
    }
}

/// Largest scroll offset the surface admits.
pub fn max_scroll(snapshot: &Snapshot) -> f64 {
    if snapshot.surface.scrollable {
        (snapshot.surface.scroll_height - effective_viewport_height(snapshot)).max(0.0)
    } else {
        0.0
    }
}

/// Pure geometric containment: the rectangle lies fully inside the visible band
/// `[offset, offset + evh)` vertically and `[0, width)` horizontally.
pub fn rect_in_viewport(bounds: &Rect, scroll_offset: f64, snapshot: &Snapshot) -> bool {
    let evh = effective_viewport_height(snapshot);
    bounds.y >= scroll_offset
        && bounds.bottom() <= scroll_offset + evh
        && bounds.x >= 0.0
        && bounds.right() <= f64::from(snapshot.viewport.width)
}

/// Whether the node is rendered and fully inside the viewport at `scroll_offset`.
/// Partially visible nodes do not count.
pub fn visible_in_viewport(node: &UiNode, scroll_offset: f64, snapshot: &Snapshot) -> bool {
    node.visible && rect_in_viewport(&node.bounds, scroll_offset, snapshot)
}

/// Smallest scroll move from `current` that brings `bounds` fully into view,
/// or `None` when the surface cannot show it whole.
pub fn scroll_to_reveal(bounds: &Rect, current: f64, snapshot: &Snapshot) -> Option<f64> {
    let evh = effective_viewport_height(snapshot);
    if bounds.h > evh {
        return None;
    }
    let target = if bounds.y < current {
        bounds.y
    } else if bounds.bottom() > current + evh {
        bounds.bottom() - evh
    } else {
        current
    };
    if target < 0.0 || target > max_scroll(snapshot) + 1e-9 {
        return None;
    }
    if !rect_in_viewport(bounds, target, snapshot) {
        return None;
    }
    Some(target)
}

/// Emphasis multipliers used by [`salience`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SalienceModel {
    pub primary: f64,
    pub secondary: f64,
    pub plain: f64,
}

impl Default for SalienceModel {
    fn default() -> Self {
        SalienceModel {
            primary: 2.0,
            secondary: 1.25,
            plain: 1.0,
        }
    }
}

impl SalienceModel {
    pub fn multiplier(&self, emphasis: Emphasis) -> f64 {
        match emphasis {
            Emphasis::Primary => self.primary,
            Emphasis::Secondary => self.secondary,
            Emphasis::Plain => self.plain,
        }
    }

    pub fn score(&self, node: &UiNode) -> Result<f64, AuditError> {
        if !node.is_interactive() {
            return Err(AuditError::NotInteractive(node.id.clone()));
        }
        Ok(node.bounds.area() * self.multiplier(node.emphasis_class))
    }
}

/// Area times emphasis multiplier under the default model.
pub fn salience(node: &UiNode) -> Result<f64, AuditError> {
    SalienceModel::default().score(node)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn minimal_doc() -> String {
        r#"{
          "version": 1,
          "meta": {"source": "unit"},
          "viewport": {"width": 1440, "height": 900, "name": "desktop"},
          "surface": {"rootNodeId": "root", "scrollable": false, "scrollHeight": 900},
          "panes": [{"id": "main", "initial": true}],
          "nodes": [
            {"id": "root", "paneId": "main", "role": "container", "bounds": {"x": 0, "y": 0, "w": 800, "h": 400}},
            {"id": "accept", "paneId": "main", "parentId": "root", "role": "button", "label": "Accept all",
             "bounds": {"x": 20, "y": 100, "w": 200, "h": 50}}
          ]
        }"#
        .to_string()
    }

    fn node_at(y: f64, h: f64) -> UiNode {
        UiNode {
            id: "n".into(),
            pane_id: "main".into(),
            parent_id: None,
            role: Role::Button,
            label: "x".into(),
            accessible_name: String::new(),
            bounds: Rect::new(10.0, y, 100.0, h),
            visible: true,
            enabled: true,
            tab_index: None,
            roving_tab_index: false,
            emphasis_class: Emphasis::Plain,
            celebratory: false,
            rationale_for: None,
            animation_ms: 0,
            gated: false,
            focus_trap: false,
            effects: vec![],
        }
    }

    #[test]
    fn parses_minimal_document() {
        let s = parse_snapshot(&minimal_doc()).unwrap();
        assert_eq!(s.panes.len(), 1);
        assert_eq!(s.nodes.iter().filter(|n| n.is_interactive()).count(), 1);
    }

    #[test]
    fn reveal_targeting_a_pane_is_rejected() {
        let doc = minimal_doc().replace(
            r#""label": "Accept all","#,
            r#""label": "Accept all", "effects": [{"kind": "reveal", "target": "main"}],"#,
        );
        let err = parse_snapshot(&doc).unwrap_err();
        assert!(matches!(err, SnapshotError::DanglingReference(_)), "{err}");
    }

    #[test]
    fn unknown_keys_are_rejected_with_a_path() {
        let doc = minimal_doc().replace(r#""source": "unit""#, r#""source": "unit", "bogus": 1"#);
        match parse_snapshot(&doc).unwrap_err() {
            SnapshotError::Parse { path, .. } => assert!(path.starts_with("meta"), "{path}"),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let doc = minimal_doc().replace(r#""id": "accept""#, r#""id": "root""#);
        assert!(matches!(parse_snapshot(&doc), Err(SnapshotError::DuplicateId(_))));
    }

    #[test]
    fn missing_root_is_its_own_error() {
        let doc = minimal_doc().replace(r#""rootNodeId": "root""#, r#""rootNodeId": "nope""#);
        assert!(matches!(parse_snapshot(&doc), Err(SnapshotError::NoSurfaceRoot(_))));
    }

    #[test]
    fn wide_nodes_are_rejected() {
        let doc = minimal_doc().replace(r#""x": 20, "y": 100, "w": 200"#, r#""x": 1400, "y": 100, "w": 200"#);
        assert!(matches!(parse_snapshot(&doc), Err(SnapshotError::Invalid(_))));
    }

    #[test]
    fn named_breakpoint_must_match() {
        let doc = minimal_doc().replace(r#""height": 900, "name""#, r#""height": 800, "name""#);
        assert!(matches!(parse_snapshot(&doc), Err(SnapshotError::Invalid(_))));
        assert_eq!(Viewport::named("mobile").map(|v| (v.width, v.height)), Some((390, 844)));
    }

    #[test]
    fn effective_height_rules() {
        let mut s = parse_snapshot(&minimal_doc()).unwrap();
        assert_eq!(effective_viewport_height(&s), 900.0);
        s.surface.scrollable = true;
        s.surface.scroll_height = 2000.0;
        s.surface.effective_viewport_height = Some(600.0);
        assert_eq!(effective_viewport_height(&s), 600.0);
        s.surface.effective_viewport_height = None;
        s.viewport = Viewport::named("mobile").unwrap();
        assert_eq!(effective_viewport_height(&s), 844.0);
    }

    #[test]
    fn full_containment_visibility() {
        let s = parse_snapshot(&minimal_doc()).unwrap();
        assert!(visible_in_viewport(&node_at(100.0, 40.0), 0.0, &s));
        assert!(!visible_in_viewport(&node_at(880.0, 40.0), 0.0, &s));
        assert!(visible_in_viewport(&node_at(880.0, 40.0), 20.0, &s));
        let mut hidden = node_at(100.0, 40.0);
        hidden.visible = false;
        assert!(!visible_in_viewport(&hidden, 0.0, &s));
    }

    #[test]
    fn salience_examples() {
        let mut n = node_at(0.0, 50.0);
        n.bounds.w = 200.0;
        assert_eq!(salience(&n).unwrap(), 10000.0);
        n.emphasis_class = Emphasis::Primary;
        assert_eq!(salience(&n).unwrap(), 20000.0);
        let mut plain = node_at(0.0, 44.0);
        plain.bounds.w = 120.0;
        let ratio = salience(&n).unwrap() / salience(&plain).unwrap();
        assert!((ratio - 20000.0 / 5280.0).abs() < 1e-12 && ratio > 1.5);
        n.role = Role::Text;
        assert!(salience(&n).is_err());
    }

    #[test]
    fn edge_distance_between_rects() {
        let a = Rect::new(0.0, 0.0, 10.0, 10.0);
        assert_eq!(a.edge_distance(&Rect::new(20.0, 0.0, 5.0, 5.0)), 10.0);
        assert_eq!(a.edge_distance(&Rect::new(13.0, 14.0, 5.0, 5.0)), 5.0);
        assert_eq!(a.edge_distance(&Rect::new(5.0, 5.0, 10.0, 10.0)), 0.0);
    }

    #[test]
    fn unnamed_interactive_nodes_are_flagged_not_rejected() {
        let doc = minimal_doc().replace(r#""label": "Accept all","#, r#""label": "","#);
        let s = parse_snapshot(&doc).unwrap();
        assert_eq!(s.flags(), vec![Flag::UnnamedInteractive("accept".into())]);
    }

    #[test]
    fn canonical_output_is_sorted_and_stable() {
        let s = parse_snapshot(&minimal_doc()).unwrap();
        let a = s.to_canonical_json();
        let b = parse_snapshot(&a).unwrap().to_canonical_json();
        assert_eq!(a, b);
        assert!(a.find("\"accept\"").unwrap() < a.find("\"root\"").unwrap());
    }
}
