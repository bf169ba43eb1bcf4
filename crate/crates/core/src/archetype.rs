//! Parameterized archetype snapshots and seeded synthetic corpora.
//!
//! Every archetype carries the same inventory: one accept, one reject, one
//! settings path, a save button and three category toggles with one-sentence
//! rationales. Only placement, disclosure and pane structure differ.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::AuditError;
use crate::snapshot::{Effect, EffectKind, Emphasis, Meta, Pane, Rect, Role, Snapshot, Surface, UiNode, Viewport};

/// Text reflow on the narrow breakpoint: body copy grows by this factor.
pub const MOBILE_REFLOW: f64 = 1.6;

const CALIBRATION: &str = include_str!("../assets/calibration.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ArchetypeKind {
    ScrollWall,
    Accordion,
    MultiStep,
    CoPresent,
}

impl ArchetypeKind {
    pub const ALL: [ArchetypeKind; 4] = [
        ArchetypeKind::ScrollWall,
        ArchetypeKind::Accordion,
        ArchetypeKind::MultiStep,
        ArchetypeKind::CoPresent,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ArchetypeKind::ScrollWall => "SCROLL_WALL",
            ArchetypeKind::Accordion => "ACCORDION",
            ArchetypeKind::MultiStep => "MULTI_STEP",
            ArchetypeKind::CoPresent => "CO_PRESENT",
        }
    }
}

impl fmt::Display for ArchetypeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ArchetypeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.to_ascii_uppercase().replace('-', "_");
        ArchetypeKind::ALL
            .into_iter()
            .find(|k| k.as_str() == norm || k.as_str().replace('_', "") == norm)
            .ok_or_else(|| format!("unknown archetype `{s}` (scroll_wall, accordion, multi_step, co_present)"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ArchetypeParams {
    /// Bottom edge of the reject row, in viewports (scroll wall).
    #[serde(default = "defaults::depth")]
    pub scroll_depth_vh: f64,
    /// Number of sequential disclosures (accordion).
    #[serde(default = "defaults::one")]
    pub reveal_count: u32,
    /// Number of panes (multi-step).
    #[serde(default = "defaults::two")]
    pub pane_count: u32,
    /// Activation gate on expanders and pane transitions.
    #[serde(default)]
    pub animation_ms_per_gate: u32,
    /// Settle animation on the reject, save and settings controls.
    #[serde(default)]
    pub choice_settle_ms: u32,
    #[serde(default)]
    pub focus_trap: bool,
    #[serde(default = "defaults::breakpoint")]
    pub breakpoint: String,
}

mod defaults {
    pub fn depth() -> f64 {
        2.0
    }
    pub fn one() -> u32 {
        1
    }
    pub fn two() -> u32 {
        2
    }
    pub fn breakpoint() -> String {
        "desktop".into()
    }
}

impl Default for ArchetypeParams {
    fn default() -> Self {
        ArchetypeParams {
            scroll_depth_vh: defaults::depth(),
            reveal_count: 1,
            pane_count: 2,
            animation_ms_per_gate: 0,
            choice_settle_ms: 0,
            focus_trap: false,
            breakpoint: defaults::breakpoint(),
        }
    }
}

impl ArchetypeParams {
    pub fn validate(&self, kind: ArchetypeKind) -> Result<(), AuditError> {
        let bad = |m: String| Err(AuditError::InvalidParams(m));
        if Viewport::named(&self.breakpoint).is_none() {
            return bad(format!("unknown breakpoint `{}`", self.breakpoint));
        }
        match kind {
            ArchetypeKind::ScrollWall if !(self.scroll_depth_vh > 1.0 && self.scroll_depth_vh <= 50.0) => {
                bad(format!("scrollDepthVh must be in (1, 50], got {}", self.scroll_depth_vh))
            }
            ArchetypeKind::Accordion if !(1..=12).contains(&self.reveal_count) => {
                bad(format!("revealCount must be in 1..=12, got {}", self.reveal_count))
            }
            ArchetypeKind::MultiStep if !(2..=12).contains(&self.pane_count) => {
                bad(format!("paneCount must be in 2..=12, got {}", self.pane_count))
            }
            _ => Ok(()),
        }
    }
}

/// Bundled parameters reproducing the canonical base PSI values.
pub fn canonical_calibration() -> BTreeMap<ArchetypeKind, ArchetypeParams> {
    serde_json::from_str(CALIBRATION).expect("bundled calibration is valid")
}

const TOGGLES: [(&str, &str); 3] = [
    ("Analytics", "Helps us count visits and measure site performance."),
    ("Advertising", "Lets partners show ads based on your browsing."),
    ("Personalisation", "Tailors articles to topics you read most."),
];

struct Builder {
    nodes: Vec<UiNode>,
    desktop: bool,
    x0: f64,
    width: f64,
    y: f64,
    pane: String,
}

fn node(id: &str, pane: &str, parent: Option<&str>, role: Role, label: &str, bounds: Rect) -> UiNode {
    UiNode {
        id: id.to_string(),
        pane_id: pane.to_string(),
        parent_id: parent.map(str::to_string),
        role,
        label: label.to_string(),
        accessible_name: String::new(),
        bounds,
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
        effects: Vec::new(),
    }
}

impl Builder {
    fn new(desktop: bool, pane: &str) -> Builder {
        let (x0, width) = if desktop { (320.0, 800.0) } else { (15.0, 360.0) };
        Builder {
            nodes: Vec::new(),
            desktop,
            x0,
            width,
            y: 56.0,
            pane: pane.to_string(),
        }
    }

    fn reflow(&self, h: f64) -> f64 {
        if self.desktop {
            h
        } else {
            (h * MOBILE_REFLOW).round()
        }
    }

    fn push(&mut self, n: UiNode) -> &mut UiNode {
        self.nodes.push(n);
        self.nodes.last_mut().expect("just pushed")
    }

    fn text(&mut self, id: &str, parent: &str, label: &str, h: f64) -> &mut UiNode {
        let h = self.reflow(h);
        let r = Rect::new(self.x0, self.y, self.width, h);
        self.y += h + 16.0;
        let pane = self.pane.clone();
        self.push(node(id, &pane, Some(parent), Role::Text, label, r))
    }

    /// Places controls in a row (desktop) or a stack (mobile).
    fn controls(&mut self, mut items: Vec<UiNode>) {
        for (i, mut n) in items.drain(..).enumerate() {
            n.pane_id = self.pane.clone();
            if self.desktop {
                n.bounds = Rect::new(self.x0 + 260.0 * i as f64, self.y, 240.0, 48.0);
            } else {
                n.bounds = Rect::new(self.x0, self.y, self.width, 48.0);
                self.y += 60.0;
            }
            self.nodes.push(n);
        }
        if self.desktop {
            self.y += 64.0;
        } else {
            self.y += 4.0;
        }
    }

    fn toggle_rows(&mut self, parent: &str, which: &[usize], hidden: bool, enables: &[&str]) {
        for &i in which {
            let (label, why) = TOGGLES[i];
            let tid = format!("toggle-{}", i + 1);
            let pane = self.pane.clone();
            let mut t = node(&tid, &pane, Some(parent), Role::Toggle, label, Rect::new(self.x0, self.y, 60.0, 32.0));
            t.visible = !hidden;
            t.effects = enables
                .iter()
                .map(|e| Effect {
                    kind: EffectKind::ToggleState,
                    target: e.to_string(),
                })
                .collect();
            self.nodes.push(t);
            let rh = self.reflow(32.0);
            let mut r = node(
                &format!("rationale-{}", i + 1),
                &pane,
                Some(parent),
                Role::Text,
                why,
                Rect::new(self.x0 + 80.0, self.y, self.width - 80.0, rh),
            );
            r.visible = !hidden;
            r.rationale_for = Some(tid);
            self.nodes.push(r);
            self.y += rh.max(32.0) + 16.0;
        }
    }

    fn trap(&mut self, id: &str, parent: &str) {
        let pane = self.pane.clone();
        let (w, step) = if self.desktop { (120.0, 130.0) } else { (110.0, 120.0) };
        let mut c = node(id, &pane, Some(parent), Role::Container, "", Rect::new(self.x0, self.y, self.width, 24.0));
        c.focus_trap = true;
        self.nodes.push(c);
        for (i, label) in ["Privacy policy", "Cookie policy", "Vendor list"].iter().enumerate() {
            let mut l = node(
                &format!("{id}-{}", i + 1),
                &pane,
                Some(id),
                Role::Link,
                label,
                Rect::new(self.x0 + step * i as f64, self.y, w, 24.0),
            );
            l.tab_index = Some(1);
            self.nodes.push(l);
        }
        self.y += 40.0;
    }
}

fn button(id: &str, role: Role, label: &str, emphasis: Emphasis, animation_ms: u32) -> UiNode {
    let mut n = node(id, "", Some("root"), role, label, Rect::new(0.0, 0.0, 0.0, 0.0));
    n.emphasis_class = emphasis;
    n.animation_ms = animation_ms;
    n
}

fn effect(kind: EffectKind, target: &str) -> Effect {
    Effect {
        kind,
        target: target.to_string(),
    }
}

fn header(b: &mut Builder, params: &ArchetypeParams) {
    b.text("title", "root", "We value your privacy", 32.0);
    b.text(
        "body",
        "root",
        "We and our partners use cookies to store and access information on your device.",
        60.0,
    );
    if params.focus_trap {
        b.trap("trap", "root");
    }
}

/// Hidden panel with the save button (and the toggles unless they are inline), revealed by settings.
fn settings_panel(b: &mut Builder, settle: u32, toggles: bool) {
    let top = b.y;
    let pane = b.pane.clone();
    b.nodes.push(node("settings-panel", &pane, Some("root"), Role::Container, "", Rect::new(b.x0, top, b.width, 0.0)));
    if toggles {
        b.toggle_rows("settings-panel", &[0, 1, 2], true, &[]);
    }
    let mut save = button("save", Role::Button, "Save choices", Emphasis::Plain, settle);
    save.parent_id = Some("settings-panel".into());
    save.visible = false;
    b.controls(vec![save]);
    let h = b.y - top;
    b.nodes.iter_mut().find(|n| n.id == "settings-panel").expect("panel").bounds.h = h;
}

fn finish(
    b: Builder,
    kind: ArchetypeKind,
    params: &ArchetypeParams,
    seed: u64,
    panes: Vec<Pane>,
    extra_height: f64,
    persistent: bool,
) -> Snapshot {
    let viewport = Viewport::named(&params.breakpoint).expect("validated breakpoint");
    let mut nodes = b.nodes;
    let content_bottom = nodes
        .iter()
        .map(|n| n.bounds.bottom())
        .fold(0.0, f64::max)
        .max(extra_height);
    let root_h = content_bottom + 24.0 - 40.0;
    nodes.insert(
        0,
        node(
            "root",
            &panes[0].id,
            None,
            Role::Container,
            "",
            Rect::new(b.x0 - (b.x0.min(15.0)), 40.0, b.width + 2.0 * b.x0.min(15.0), root_h),
        ),
    );
    if persistent {
        nodes.push(node("change-consent", &panes[0].id, None, Role::Link, "Change consent", Rect::new(8.0, 8.0, 140.0, 24.0)));
    }
    let vh = f64::from(viewport.height);
    let scroll_height = (content_bottom + 24.0).max(vh).ceil();
    Snapshot {
        version: crate::snapshot::SCHEMA_VERSION,
        meta: Meta {
            source: format!("archetype:{kind}"),
            capture_note: format!("seed={seed}"),
            breakpoint: Some(params.breakpoint.clone()),
            persistent: Vec::new(),
        },
        viewport,
        surface: Surface {
            root_node_id: "root".into(),
            scrollable: scroll_height > vh,
            scroll_height,
            effective_viewport_height: None,
        },
        panes,
        nodes,
    }
}

fn single_pane() -> Vec<Pane> {
    vec![Pane {
        id: "main".into(),
        initial: true,
    }]
}

fn co_present(params: &ArchetypeParams, seed: u64) -> Snapshot {
    let desktop = params.breakpoint == "desktop";
    let mut b = Builder::new(desktop, "main");
    header(&mut b, params);
    b.toggle_rows("root", &[0, 1, 2], false, &[]);
    let settle = params.choice_settle_ms;
    let mut settings = button("settings", Role::Button, "Manage settings", Emphasis::Plain, settle);
    settings.effects.push(effect(EffectKind::Reveal, "settings-panel"));
    b.controls(vec![
        button("accept", Role::Button, "Accept all", Emphasis::Primary, 0),
        button("reject", Role::Button, "Reject all", Emphasis::Primary, settle),
        settings,
    ]);
    settings_panel(&mut b, settle, false);
    finish(b, ArchetypeKind::CoPresent, params, seed, single_pane(), 0.0, true)
}

fn scroll_wall(params: &ArchetypeParams, seed: u64) -> Snapshot {
    let desktop = params.breakpoint == "desktop";
    let vh = f64::from(Viewport::named(&params.breakpoint).expect("validated").height);
    let mut b = Builder::new(desktop, "main");
    header(&mut b, params);
    b.controls(vec![button("accept", Role::Button, "Accept all", Emphasis::Primary, 0)]);
    let reflow = if desktop { 1.0 } else { MOBILE_REFLOW };
    let row_bottom = (params.scroll_depth_vh * vh * reflow).round();
    let row_top = row_bottom - 48.0;
    let wall_h = (row_top - 16.0 - b.y).max(0.0);
    let top = b.y;
    b.nodes.push(node(
        "policy-text",
        "main",
        Some("root"),
        Role::Text,
        "Full cookie notice, purposes and vendor descriptions.",
        Rect::new(b.x0, top, b.width, wall_h),
    ));
    b.y = top + wall_h + 16.0;
    let settle = params.choice_settle_ms;
    let mut settings = button("settings", Role::Button, "Manage settings", Emphasis::Plain, settle);
    settings.effects.push(effect(EffectKind::Reveal, "settings-panel"));
    b.controls(vec![button("reject", Role::Button, "Reject all", Emphasis::Plain, settle), settings]);
    settings_panel(&mut b, settle, true);
    finish(b, ArchetypeKind::ScrollWall, params, seed, single_pane(), 0.0, false)
}

/// Toggle indices shown in each of `groups` consecutive containers; the last group always gets the last toggle.
fn split_toggles(groups: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); groups];
    for i in 0..3 {
        let g = if i == 2 { groups - 1 } else { (i * groups / 3).min(groups - 1) };
        out[g].push(i);
    }
    out
}

fn accordion(params: &ArchetypeParams, seed: u64) -> Snapshot {
    let desktop = params.breakpoint == "desktop";
    let n = params.reveal_count as usize;
    let mut b = Builder::new(desktop, "main");
    header(&mut b, params);
    let mut first = button("expand-1", Role::Expander, "Manage settings", Emphasis::Plain, params.animation_ms_per_gate);
    first.effects.push(effect(EffectKind::Reveal, "panel-1"));
    b.controls(vec![button("accept", Role::Button, "Accept all", Emphasis::Primary, 0), first]);
    let groups = split_toggles(n);
    let settle = params.choice_settle_ms;
    for (k, toggles) in groups.iter().enumerate() {
        let pid = format!("panel-{}", k + 1);
        let top = b.y;
        b.nodes.push(node(&pid, "main", Some("root"), Role::Container, "", Rect::new(b.x0, top, b.width, 0.0)));
        b.text(&format!("panel-{}-intro", k + 1), &pid, "Purposes we use.", 24.0).visible = false;
        let last = k + 1 == n;
        let enables: &[&str] = if last { &["reject", "save"] } else { &[] };
        b.toggle_rows(&pid, toggles, true, enables);
        if last {
            let mut reject = button("reject", Role::Button, "Reject all", Emphasis::Plain, settle);
            let mut save = button("save", Role::Button, "Save choices", Emphasis::Plain, settle);
            for c in [&mut reject, &mut save] {
                c.parent_id = Some(pid.clone());
                c.visible = false;
                c.enabled = false;
            }
            b.controls(vec![reject, save]);
        } else {
            let mut next = button(
                &format!("expand-{}", k + 2),
                Role::Expander,
                "More purposes",
                Emphasis::Plain,
                params.animation_ms_per_gate,
            );
            next.parent_id = Some(pid.clone());
            next.visible = false;
            next.effects.push(effect(EffectKind::Reveal, &format!("panel-{}", k + 2)));
            b.controls(vec![next]);
        }
        let h = b.y - top;
        b.nodes.iter_mut().find(|x| x.id == pid).expect("panel").bounds.h = h;
    }
    finish(b, ArchetypeKind::Accordion, params, seed, single_pane(), 0.0, false)
}

fn multi_step(params: &ArchetypeParams, seed: u64) -> Snapshot {
    let desktop = params.breakpoint == "desktop";
    let p = params.pane_count as usize;
    let panes: Vec<Pane> = (1..=p)
        .map(|k| Pane {
            id: format!("step-{k}"),
            initial: k == 1,
        })
        .collect();
    let gate = params.animation_ms_per_gate;
    let settle = params.choice_settle_ms;

    let mut b = Builder::new(desktop, "step-1");
    b.text("title", "root", "We value your privacy", 32.0);
    b.text("progress", "root", &format!("Step 1 of {p}. Almost done!"), 24.0).celebratory = true;
    b.text(
        "body",
        "root",
        "We and our partners use cookies to store and access information on your device.",
        60.0,
    );
    if params.focus_trap {
        b.trap("trap", "root");
    }
    let mut cont = button("settings", Role::Button, "Continue", Emphasis::Plain, gate);
    cont.effects.push(effect(EffectKind::Navigate, "step-2"));
    b.controls(vec![button("accept", Role::Button, "Accept all", Emphasis::Primary, 0), cont]);
    let mut deepest = b.y;

    let groups = split_toggles(p - 1);
    for (g, toggles) in groups.iter().enumerate() {
        let k = g + 2;
        let pane = format!("step-{k}");
        b.pane = pane.clone();
        b.y = 56.0;
        b.text(&format!("step-{k}-title"), "root", &format!("Step {k} of {p}"), 32.0);
        if params.focus_trap {
            b.trap(&format!("trap-step-{k}"), "root");
        }
        let last = k == p;
        let enables: &[&str] = if last { &["reject", "save"] } else { &[] };
        b.toggle_rows("root", toggles, false, enables);
        if last {
            let mut reject = button("reject", Role::Button, "Reject all", Emphasis::Plain, settle);
            let mut save = button("save", Role::Button, "Save choices", Emphasis::Plain, settle);
            reject.enabled = false;
            save.enabled = false;
            b.controls(vec![reject, save]);
        } else {
            let mut next = button(&format!("next-{k}"), Role::Button, "Next", Emphasis::Plain, gate);
            next.effects.push(effect(EffectKind::Navigate, &format!("step-{}", k + 1)));
            b.controls(vec![next]);
        }
        deepest = deepest.max(b.y);
    }
    finish(b, ArchetypeKind::MultiStep, params, seed, panes, deepest, false)
}

/// Deterministic archetype snapshot. The seed is recorded in the capture note.
pub fn generate_archetype(kind: ArchetypeKind, params: &ArchetypeParams, seed: u64) -> Result<Snapshot, AuditError> {
    params.validate(kind)?;
    let snap = match kind {
        ArchetypeKind::CoPresent => co_present(params, seed),
        ArchetypeKind::ScrollWall => scroll_wall(params, seed),
        ArchetypeKind::Accordion => accordion(params, seed),
        ArchetypeKind::MultiStep => multi_step(params, seed),
    };
    snap.validate()
        .map_err(|e| AuditError::InvalidParams(format!("generated snapshot is invalid: {e}")))?;
    Ok(snap)
}

/// Adds a focus-trap container with three informational links ahead of the
/// alternative on the initial pane.
pub fn inject_focus_trap(snapshot: &Snapshot) -> Snapshot {
    let mut s = snapshot.clone();
    let pane = s.initial_pane_id().to_string();
    let root = s.surface.root_node_id.clone();
    let mut id = "injected-trap".to_string();
    while s.node(&id).is_some() {
        id.push('_');
    }
    let mut c = node(&id, &pane, Some(&root), Role::Container, "", Rect::new(0.0, 0.0, 390.0, 24.0));
    c.focus_trap = true;
    s.nodes.push(c);
    for (i, label) in ["Privacy policy", "Cookie policy", "Vendor list"].iter().enumerate() {
        let mut l = node(
            &format!("{id}-{}", i + 1),
            &pane,
            Some(&id),
            Role::Link,
            label,
            Rect::new(130.0 * i as f64, 0.0, 120.0, 24.0),
        );
        l.tab_index = Some(1);
        s.nodes.push(l);
    }
    s
}

/// Hides `target` behind an expander drawn in its place, so reaching it costs
/// one extra disclosure step.
pub fn inject_expander(snapshot: &Snapshot, target: &str) -> Result<Snapshot, AuditError> {
    let mut s = snapshot.clone();
    let idx = s
        .nodes
        .iter()
        .position(|n| n.id == target)
        .ok_or_else(|| AuditError::InvalidParams(format!("no node `{target}`")))?;
    let mut id = format!("{target}-expander");
    while s.node(&id).is_some() {
        id.push('_');
    }
    let t = &mut s.nodes[idx];
    t.visible = false;
    let mut e = node(&id, &t.pane_id, t.parent_id.as_deref(), Role::Expander, "More options", t.bounds);
    e.tab_index = t.tab_index;
    e.effects.push(effect(EffectKind::Reveal, target));
    s.nodes.insert(idx, e);
    s.validate()
        .map_err(|e| AuditError::InvalidParams(format!("injected snapshot is invalid: {e}")))?;
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Span<T> {
    pub min: T,
    pub max: T,
}

impl<T: PartialOrd + Copy> Span<T> {
    pub fn new(min: T, max: T) -> Span<T> {
        Span { min, max }
    }

    fn valid(&self) -> bool {
        self.min <= self.max
    }
}

/// Parameter ranges for one archetype in a corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct KindDistribution {
    pub scroll_depth_vh: Span<f64>,
    pub reveal_count: Span<u32>,
    pub pane_count: Span<u32>,
    pub animation_ms_per_gate: Span<u32>,
    pub choice_settle_ms: Span<u32>,
    pub focus_trap_probability: f64,
}

impl KindDistribution {
    fn sample(&self, rng: &mut ChaCha8Rng, breakpoint: &str) -> ArchetypeParams {
        let depth = if self.scroll_depth_vh.min < self.scroll_depth_vh.max {
            rng.random_range(self.scroll_depth_vh.min..self.scroll_depth_vh.max)
        } else {
            self.scroll_depth_vh.min
        };
        ArchetypeParams {
            scroll_depth_vh: (depth * 1000.0).round() / 1000.0,
            reveal_count: rng.random_range(self.reveal_count.min..=self.reveal_count.max),
            pane_count: rng.random_range(self.pane_count.min..=self.pane_count.max),
            animation_ms_per_gate: rng.random_range(self.animation_ms_per_gate.min..=self.animation_ms_per_gate.max),
            choice_settle_ms: rng.random_range(self.choice_settle_ms.min..=self.choice_settle_ms.max),
            focus_trap: rng.random_bool(self.focus_trap_probability.clamp(0.0, 1.0)),
            breakpoint: breakpoint.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct CorpusSpec {
    pub count_per_archetype: u32,
    pub seed: u64,
    pub breakpoints: Vec<String>,
    pub policies: Vec<crate::state::Policy>,
    pub distributions: BTreeMap<ArchetypeKind, KindDistribution>,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        let d = |depth: (f64, f64), reveal: (u32, u32), panes: (u32, u32), gate: (u32, u32), settle: (u32, u32), trap: f64| {
            KindDistribution {
                scroll_depth_vh: Span::new(depth.0, depth.1),
                reveal_count: Span::new(reveal.0, reveal.1),
                pane_count: Span::new(panes.0, panes.1),
                animation_ms_per_gate: Span::new(gate.0, gate.1),
                choice_settle_ms: Span::new(settle.0, settle.1),
                focus_trap_probability: trap,
            }
        };
        let mut distributions = BTreeMap::new();
        distributions.insert(ArchetypeKind::CoPresent, d((2.0, 2.0), (1, 1), (2, 2), (0, 0), (100, 300), 0.2));
        distributions.insert(ArchetypeKind::ScrollWall, d((1.05, 1.4), (1, 1), (2, 2), (0, 0), (200, 500), 0.5));
        distributions.insert(ArchetypeKind::Accordion, d((2.0, 2.0), (1, 2), (2, 2), (150, 350), (100, 300), 0.5));
        distributions.insert(ArchetypeKind::MultiStep, d((2.0, 2.0), (1, 1), (3, 4), (250, 500), (100, 300), 0.7));
        CorpusSpec {
            count_per_archetype: 50,
            seed: 42,
            breakpoints: vec!["desktop".into(), "mobile".into()],
            policies: crate::state::Policy::ALL.to_vec(),
            distributions,
        }
    }
}

impl CorpusSpec {
    pub fn validate(&self) -> Result<(), AuditError> {
        let bad = |m: &str| Err(AuditError::InvalidParams(m.to_string()));
        if self.count_per_archetype == 0 {
            return bad("countPerArchetype must be positive");
        }
        if self.breakpoints.is_empty() || self.breakpoints.iter().any(|b| Viewport::named(b).is_none()) {
            return bad("breakpoints must be a non-empty list of desktop/mobile");
        }
        if self.policies.is_empty() {
            return bad("policies must be non-empty");
        }
        if self.distributions.is_empty() {
            return bad("distributions must be non-empty");
        }
        for d in self.distributions.values() {
            let ok = d.scroll_depth_vh.valid()
                && d.scroll_depth_vh.min > 1.0
                && d.reveal_count.valid()
                && d.reveal_count.min >= 1
                && d.pane_count.valid()
                && d.pane_count.min >= 2
                && d.animation_ms_per_gate.valid()
                && d.choice_settle_ms.valid()
                && (0.0..=1.0).contains(&d.focus_trap_probability);
            if !ok {
                return bad("distribution ranges must be non-empty and within parameter domains");
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Provenance {
    pub item_id: String,
    pub kind: ArchetypeKind,
    pub params: ArchetypeParams,
    pub breakpoint: String,
    pub seed: u64,
    pub stream: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusItem {
    pub snapshot: Snapshot,
    pub provenance: Provenance,
}

/// Seeded corpus. Item `i` of every kind draws from its own ChaCha8 stream, so
/// items can be regenerated independently.
pub fn generate_corpus(spec: &CorpusSpec) -> Result<Vec<CorpusItem>, AuditError> {
    spec.validate()?;
    let mut out = Vec::new();
    for (k, (kind, dist)) in spec.distributions.iter().enumerate() {
        for i in 0..spec.count_per_archetype {
            let stream = k as u64 * u64::from(spec.count_per_archetype) + u64::from(i);
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            rng.set_stream(stream);
            let breakpoint = &spec.breakpoints[i as usize % spec.breakpoints.len()];
            let params = dist.sample(&mut rng, breakpoint);
            let snapshot = generate_archetype(*kind, &params, spec.seed)?;
            out.push(CorpusItem {
                snapshot,
                provenance: Provenance {
                    item_id: format!("{}-{:03}", kind.as_str().to_ascii_lowercase(), i),
                    kind: *kind,
                    params,
                    breakpoint: breakpoint.clone(),
                    seed: spec.seed,
                    stream,
                },
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn calibration_covers_all_kinds() {
        let c = canonical_calibration();
        for k in ArchetypeKind::ALL {
            let p = &c[&k];
            p.validate(k).unwrap();
            generate_archetype(k, p, 0).unwrap();
        }
    }

    #[test]
    fn parameter_domains_are_enforced() {
        let p = ArchetypeParams {
            scroll_depth_vh: 0.8,
            ..ArchetypeParams::default()
        };
        assert!(generate_archetype(ArchetypeKind::ScrollWall, &p, 0).is_err());
        let p = ArchetypeParams {
            pane_count: 1,
            ..ArchetypeParams::default()
        };
        assert!(generate_archetype(ArchetypeKind::MultiStep, &p, 0).is_err());
        let p = ArchetypeParams {
            breakpoint: "tablet".into(),
            ..ArchetypeParams::default()
        };
        assert!(generate_archetype(ArchetypeKind::CoPresent, &p, 0).is_err());
    }

    #[test]
    fn kind_names_parse() {
        assert_eq!("multi_step".parse::<ArchetypeKind>().unwrap(), ArchetypeKind::MultiStep);
        assert_eq!("CoPresent".parse::<ArchetypeKind>().unwrap(), ArchetypeKind::CoPresent);
        assert!("wall".parse::<ArchetypeKind>().is_err());
    }

    #[test]
    fn toggle_split_ends_on_last_group() {
        assert_eq!(split_toggles(1), vec![vec![0, 1, 2]]);
        assert_eq!(split_toggles(2), vec![vec![0, 1], vec![2]]);
        assert_eq!(split_toggles(3), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(split_toggles(5).last().unwrap(), &vec![2]);
    }
}
