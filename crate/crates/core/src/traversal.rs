//! Interaction graph and least-effort traversal.
//!
//! A graph edge is one primary interaction together with its approach: under
//! the pointer policy the approach is the minimal scroll that brings the
//! control fully into view; under the keyboard policy it is the tab walk from
//! the current focus (with any focus loops it incurs) plus the implicit scroll
//! that follows focus. An edge whose control is a meaningful alternative at the
//! post-approach state is terminal.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::detector::{ControlClass, Detector};
use crate::error::AuditError;
use crate::focus::FocusRing;
use crate::snapshot::{
    effective_viewport_height, rect_in_viewport, scroll_to_reveal, EffectKind, Role, Snapshot,
    UiNode,
};
use crate::state::{Policy, TraversalState};

/// Graph construction aborts once this many distinct states are reached.
pub const MAX_STATES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EventKind {
    Scroll,
    Expand,
    Toggle,
    FocusLoop,
    Action,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::Scroll => "SCROLL",
            EventKind::Expand => "EXPAND",
            EventKind::Toggle => "TOGGLE",
            EventKind::FocusLoop => "FOCUS_LOOP",
            EventKind::Action => "ACTION",
        }
    }

    pub fn compact(self) -> &'static str {
        match self {
            EventKind::Scroll => "scroll",
            EventKind::Expand => "expand",
            EventKind::Toggle => "toggle",
            EventKind::FocusLoop => "focus-loop",
            EventKind::Action => "action",
        }
    }

    /// Event class produced by activating a control with `role`.
    pub fn for_role(role: Role) -> Option<EventKind> {
        match role {
            Role::Expander => Some(EventKind::Expand),
            Role::Toggle | Role::Checkbox => Some(EventKind::Toggle),
            Role::Button | Role::Link => Some(EventKind::Action),
            Role::Text | Role::Container => None,
        }
    }

    pub fn is_interaction(self) -> bool {
        !matches!(self, EventKind::Scroll | EventKind::FocusLoop)
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AuditEvent {
    pub kind: EventKind,
    /// Activated control, scroll target, or focus-trap container.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_id: Option<String>,
    pub scroll_px: f64,
    pub cost: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Terminal {
    AlternativeReached,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EventTrace {
    pub events: Vec<AuditEvent>,
    pub terminal: Terminal,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terminal_node_id: Option<String>,
    pub policy: Policy,
}

impl EventTrace {
    pub fn censored(policy: Policy) -> EventTrace {
        EventTrace {
            events: Vec::new(),
            terminal: Terminal::BudgetExhausted,
            terminal_node_id: None,
            policy,
        }
    }

    pub fn is_censored(&self) -> bool {
        self.terminal == Terminal::BudgetExhausted
    }

    pub fn count(&self, kind: EventKind) -> usize {
        self.events.iter().filter(|e| e.kind == kind).count()
    }

    pub fn interactions(&self) -> usize {
        self.events.iter().filter(|e| e.kind.is_interaction()).count()
    }

    pub fn kinds(&self) -> Vec<EventKind> {
        self.events.iter().map(|e| e.kind).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Budget {
    pub max_interactions: u32,
    pub max_pane_depth: u32,
    pub wait_budget_ms: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_interactions: 25,
            max_pane_depth: 6,
            wait_budget_ms: 300,
        }
    }
}

impl Budget {
    pub fn validate(&self) -> Result<(), AuditError> {
        if self.max_interactions == 0 || self.max_pane_depth == 0 || self.wait_budget_ms == 0 {
            return Err(AuditError::InvalidParams("budget fields must be positive".into()));
        }
        Ok(())
    }
}

/// Deterministic timing model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TimingConstants {
    /// Scripted cost of one primary interaction.
    pub handling_s: f64,
    /// Cost of scrolling one effective viewport.
    pub scroll_s_per_viewport: f64,
    /// Cost of one tab stop inside a focus loop.
    pub focus_step_s: f64,
}

impl Default for TimingConstants {
    fn default() -> Self {
        TimingConstants {
            handling_s: 0.100,
            scroll_s_per_viewport: 0.05,
            focus_step_s: 0.05,
        }
    }
}

impl TimingConstants {
    pub fn validate(&self) -> Result<(), AuditError> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !(ok(self.handling_s) && ok(self.scroll_s_per_viewport) && ok(self.focus_step_s)) {
            return Err(AuditError::InvalidParams("timing constants must be positive".into()));
        }
        Ok(())
    }

    pub fn scroll_cost(&self, px: f64, evh: f64) -> f64 {
        px * self.scroll_s_per_viewport / evh
    }

    pub fn loop_cost(&self, stops: usize) -> f64 {
        stops as f64 * self.focus_step_s
    }

    /// Handling plus the activation gate: the captured animation, or the wait
    /// budget when a flagged gate of unknown duration opens a reveal or pane.
    pub fn interaction_cost(&self, node: &UiNode, budget: &Budget) -> f64 {
        let opens = node.has_effect(EffectKind::Reveal) || node.has_effect(EffectKind::Navigate);
        let gate_ms = if node.animation_ms > 0 {
            node.animation_ms
        } else if node.gated && opens {
            budget.wait_budget_ms
        } else {
            0
        };
        f64::from(gate_ms) / 1000.0 + self.handling_s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeTarget {
    State(usize),
    Terminal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphEdge {
    pub from: usize,
    pub to: EdgeTarget,
    pub node_id: String,
    /// Approach events followed by the interaction event.
    pub events: Vec<AuditEvent>,
}

impl GraphEdge {
    pub fn scroll_px(&self) -> f64 {
        self.events.iter().fold(0.0, |acc, e| acc + e.scroll_px)
    }
}

/// Summed cost of an edge's events.
pub fn transition_cost(edge: &GraphEdge) -> f64 {
    edge.events.iter().map(|e| e.cost).sum()
}

#[derive(Debug, Clone, Default)]
pub struct InteractionGraph {
    pub states: Vec<TraversalState>,
    pub edges: Vec<GraphEdge>,
}

impl InteractionGraph {
    pub fn edges_from(&self, state: usize) -> impl Iterator<Item = &GraphEdge> {
        self.edges.iter().filter(move |e| e.from == state)
    }

    pub fn terminal_edges(&self) -> impl Iterator<Item = &GraphEdge> {
        self.edges.iter().filter(|e| e.to == EdgeTarget::Terminal)
    }
}

/// Traversal configuration shared by graph construction and search.
#[derive(Debug, Clone)]
pub struct Engine<'a> {
    pub detector: &'a Detector,
    pub budget: Budget,
    pub timing: TimingConstants,
}

struct Approach {
    state: TraversalState,
    events: Vec<AuditEvent>,
}

impl<'a> Engine<'a> {
    pub fn new(detector: &'a Detector) -> Engine<'a> {
        Engine {
            detector,
            budget: Budget::default(),
            timing: TimingConstants::default(),
        }
    }

    fn candidate(&self, node: &UiNode, state: &TraversalState, snapshot: &Snapshot) -> bool {
        node.is_interactive()
            && node.pane_id == state.active_pane
            && state.is_visible(node)
            && state.is_enabled(node)
            && !node.has_effect(EffectKind::Dismiss)
            && self.detector.class_of(node, snapshot) != ControlClass::Accept
    }

    fn approach(
        &self,
        node: &UiNode,
        state: &TraversalState,
        policy: Policy,
        snapshot: &Snapshot,
    ) -> Option<Approach> {
        let mut events = Vec::new();
        let mut next = state.clone();
        if policy == Policy::Keyboard {
            let ring = FocusRing::build(snapshot, state);
            for lp in ring.walk(state.focus.as_deref(), &node.id)? {
                events.push(AuditEvent {
                    kind: EventKind::FocusLoop,
                    node_id: Some(lp.trap_id),
                    scroll_px: 0.0,
                    cost: self.timing.loop_cost(lp.stops),
                });
            }
            next.focus = Some(node.id.clone());
        }
        let target = scroll_to_reveal(&node.bounds, state.scroll_offset, snapshot)?;
        let px = (target - state.scroll_offset).abs();
        if px > 0.0 {
            events.push(AuditEvent {
                kind: EventKind::Scroll,
                node_id: Some(node.id.clone()),
                scroll_px: px,
                cost: self.timing.scroll_cost(px, effective_viewport_height(snapshot)),
            });
            next.scroll_offset = target;
        }
        Some(Approach { state: next, events })
    }

    fn interaction_event(&self, node: &UiNode) -> AuditEvent {
        AuditEvent {
            kind: EventKind::for_role(node.role).unwrap_or(EventKind::Action),
            node_id: Some(node.id.clone()),
            scroll_px: 0.0,
            cost: self.timing.interaction_cost(node, &self.budget),
        }
    }

    /// Builds the reachable state graph within the budget.
    pub fn build_graph(&self, snapshot: &Snapshot, policy: Policy) -> Result<InteractionGraph, AuditError> {
        self.budget.validate()?;
        let mut graph = InteractionGraph::default();
        let mut index = HashMap::new();
        let init = TraversalState::initial(snapshot);
        index.insert(init.key(), 0usize);
        graph.states.push(init);

        let mut nodes: Vec<&UiNode> = snapshot.nodes.iter().collect();
        nodes.sort_by(|a, b| a.id.cmp(&b.id));

        let mut cursor = 0;
        while cursor < graph.states.len() {
            let state = graph.states[cursor].clone();
            if state.interactions_used >= self.budget.max_interactions {
                cursor += 1;
                continue;
            }
            for node in &nodes {
                if !self.candidate(node, &state, snapshot) {
                    continue;
                }
                let Some(Approach { state: mut at, mut events }) = self.approach(node, &state, policy, snapshot)
                else {
                    continue;
                };
                let meaningful = self
                    .detector
                    .is_meaningful_alternative(node, &at, policy, snapshot)?
                    .meaningful;
                events.push(self.interaction_event(node));
                if meaningful {
                    graph.edges.push(GraphEdge {
                        from: cursor,
                        to: EdgeTarget::Terminal,
                        node_id: node.id.clone(),
                        events,
                    });
                    continue;
                }
                if !apply_effects(&mut at, node, policy, snapshot) {
                    continue;
                }
                if at.pane_depth > self.budget.max_pane_depth {
                    continue;
                }
                at.interactions_used = state.interactions_used + 1;
                at.elapsed = state.elapsed + events.iter().map(|e| e.cost).sum::<f64>();
                let key = at.key();
                let to = match index.get(&key) {
                    Some(&i) => i,
                    None => {
                        if graph.states.len() >= MAX_STATES {
                            return Err(AuditError::StateSpaceExceeded(MAX_STATES));
                        }
                        graph.states.push(at);
                        index.insert(key, graph.states.len() - 1);
                        graph.states.len() - 1
                    }
                };
                graph.edges.push(GraphEdge {
                    from: cursor,
                    to: EdgeTarget::State(to),
                    node_id: node.id.clone(),
                    events,
                });
            }
            cursor += 1;
        }
        Ok(graph)
    }

    /// Least-cost route to the first meaningful alternative.
    pub fn traverse(&self, snapshot: &Snapshot, policy: Policy) -> Result<EventTrace, AuditError> {
        let graph = self.build_graph(snapshot, policy)?;
        Ok(shortest_route(&graph, policy))
    }
}

/// Applies activation effects. Returns false when nothing observable changes.
fn apply_effects(state: &mut TraversalState, node: &UiNode, policy: Policy, snapshot: &Snapshot) -> bool {
    let mut changed = false;
    let mut newly: BTreeSet<String> = BTreeSet::new();
    let mut navigated = false;
    for effect in &node.effects {
        match effect.kind {
            EffectKind::Reveal => {
                for id in snapshot.subtree(&effect.target) {
                    if let Some(n) = snapshot.node(&id) {
                        if !state.is_visible(n) {
                            state.revealed.insert(id.clone());
                            newly.insert(id);
                            changed = true;
                        }
                    }
                }
            }
            EffectKind::Navigate => {
                if state.active_pane != effect.target {
                    state.active_pane = effect.target.clone();
                    state.scroll_offset = 0.0;
                    state.pane_depth += 1;
                    navigated = true;
                    changed = true;
                }
            }
            EffectKind::ToggleState => {
                if let Some(t) = snapshot.node(&effect.target) {
                    if !state.is_enabled(t) {
                        state.enabled.insert(t.id.clone());
                        changed = true;
                    }
                }
            }
            EffectKind::Dismiss => {}
        }
    }
    if policy == Policy::Keyboard {
        if navigated {
            state.focus = None;
        } else if !newly.is_empty() {
            let ring = FocusRing::build(snapshot, state);
            if let Some(stop) = ring.stops.iter().find(|s| s.members.iter().any(|m| newly.contains(m))) {
                state.focus = Some(stop.node_id.clone());
            }
        }
    } else {
        state.focus = None;
    }
    changed
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct RouteCost {
    interactions: u32,
    /// Milli-pixels.
    scroll: i64,
    /// Microseconds.
    time: i64,
    ids: Vec<String>,
}

impl RouteCost {
    fn extend(&self, edge: &GraphEdge) -> RouteCost {
        let mut ids = self.ids.clone();
        ids.push(edge.node_id.clone());
        RouteCost {
            interactions: self.interactions + 1,
            scroll: self.scroll + (edge.scroll_px() * 1000.0).round() as i64,
            time: self.time + (transition_cost(edge) * 1e6).round() as i64,
            ids,
        }
    }
}

fn shortest_route(graph: &InteractionGraph, policy: Policy) -> EventTrace {
    let n = graph.states.len();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in graph.edges.iter().enumerate() {
        out[e.from].push(i);
    }
    let mut best: Vec<Option<RouteCost>> = vec![None; n];
    let mut via: Vec<Option<usize>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    best[0] = Some(RouteCost {
        interactions: 0,
        scroll: 0,
        time: 0,
        ids: Vec::new(),
    });
    heap.push(Reverse((best[0].clone().unwrap(), 0usize)));
    let mut goal: Option<(RouteCost, usize)> = None;

    while let Some(Reverse((cost, s))) = heap.pop() {
        if done[s] {
            continue;
        }
        if goal.as_ref().is_some_and(|(g, _)| *g <= cost) {
            break;
        }
        done[s] = true;
        for &ei in &out[s] {
            let edge = &graph.edges[ei];
            let next = cost.extend(edge);
            match edge.to {
                EdgeTarget::Terminal => {
                    if goal.as_ref().is_none_or(|(g, _)| next < *g) {
                        goal = Some((next, ei));
                    }
                }
                EdgeTarget::State(t) => {
                    if !done[t] && best[t].as_ref().is_none_or(|b| next < *b) {
                        best[t] = Some(next.clone());
                        via[t] = Some(ei);
                        heap.push(Reverse((next, t)));
                    }
                }
            }
        }
    }

    let Some((_, last)) = goal else {
        return EventTrace::censored(policy);
    };
    let mut chain = vec![last];
    let mut s = graph.edges[last].from;
    while let Some(ei) = via[s] {
        chain.push(ei);
        s = graph.edges[ei].from;
    }
    chain.reverse();
    let events = chain.iter().flat_map(|&ei| graph.edges[ei].events.clone()).collect();
    EventTrace {
        events,
        terminal: Terminal::AlternativeReached,
        terminal_node_id: Some(graph.edges[last].node_id.clone()),
        policy,
    }
}

/// Builds the interaction graph with default budget and timing.
pub fn build_interaction_graph(
    snapshot: &Snapshot,
    policy: Policy,
    detector: &Detector,
) -> Result<InteractionGraph, AuditError> {
    Engine::new(detector).build_graph(snapshot, policy)
}

/// Least-effort traversal with default timing constants.
pub fn least_effort_traverse(
    snapshot: &Snapshot,
    policy: Policy,
    detector: &Detector,
    budget: Budget,
) -> Result<EventTrace, AuditError> {
    Engine {
        detector,
        budget,
        timing: TimingConstants::default(),
    }
    .traverse(snapshot, policy)
}

/// Re-executes a trace against its snapshot. Returns the state before each
/// event followed by the final state.
pub fn replay(trace: &EventTrace, snapshot: &Snapshot) -> Result<Vec<TraversalState>, AuditError> {
    let mismatch = |i: usize, msg: &str| AuditError::TraceMismatch(format!("event {i}: {msg}"));
    let mut state = TraversalState::initial(snapshot);
    let mut states = vec![state.clone()];
    for (i, ev) in trace.events.iter().enumerate() {
        let node = match &ev.node_id {
            Some(id) => Some(snapshot.node(id).ok_or_else(|| mismatch(i, &format!("unknown node `{id}`")))?),
            None => None,
        };
        match ev.kind {
            EventKind::Scroll => {
                let node = node.ok_or_else(|| mismatch(i, "scroll without target"))?;
                let target = scroll_to_reveal(&node.bounds, state.scroll_offset, snapshot)
                    .ok_or_else(|| mismatch(i, "scroll target cannot be shown"))?;
                if !(ev.scroll_px > 0.0) || ((target - state.scroll_offset).abs() - ev.scroll_px).abs() > 1e-6 {
                    return Err(mismatch(i, "scroll distance disagrees with geometry"));
                }
                state.scroll_offset = target;
            }
            EventKind::FocusLoop => {
                if trace.policy != Policy::Keyboard {
                    return Err(mismatch(i, "focus loop under pointer policy"));
                }
            }
            kind => {
                let node = node.ok_or_else(|| mismatch(i, "interaction without node"))?;
                if EventKind::for_role(node.role) != Some(kind) {
                    return Err(mismatch(i, "event kind does not match control role"));
                }
                if node.pane_id != state.active_pane || !state.is_visible(node) || !state.is_enabled(node) {
                    return Err(mismatch(i, &format!("`{}` is not actionable", node.id)));
                }
                if !rect_in_viewport(&node.bounds, state.scroll_offset, snapshot) {
                    return Err(mismatch(i, &format!("`{}` is outside the viewport", node.id)));
                }
                if trace.policy == Policy::Keyboard {
                    state.focus = Some(node.id.clone());
                }
                apply_effects(&mut state, node, trace.policy, snapshot);
                state.interactions_used += 1;
            }
        }
        if ev.scroll_px < 0.0 || ev.cost < 0.0 {
            return Err(mismatch(i, "negative cost"));
        }
        state.elapsed += ev.cost;
        states.push(state.clone());
    }
    Ok(states)
}

fn material_exposed(state: &TraversalState, snapshot: &Snapshot, detector: &Detector) -> BTreeSet<String> {
    snapshot
        .nodes
        .iter()
        .filter(|n| n.pane_id == state.active_pane && state.is_visible(n) && detector.is_material(n, snapshot))
        .map(|n| n.id.clone())
        .collect()
}

/// Number of non-terminal EXPAND/ACTION events that newly exposed a material
/// control (reject, settings, save, or a category toggle).
pub fn count_hidden_reveals(trace: &EventTrace, snapshot: &Snapshot, detector: &Detector) -> Result<u32, AuditError> {
    let states = replay(trace, snapshot)?;
    let last = trace.events.len().checked_sub(1);
    let mut count = 0;
    for (i, ev) in trace.events.iter().enumerate() {
        if !matches!(ev.kind, EventKind::Expand | EventKind::Action) {
            continue;
        }
        if Some(i) == last && trace.terminal == Terminal::AlternativeReached {
            continue;
        }
        let before = material_exposed(&states[i], snapshot, detector);
        let after = material_exposed(&states[i + 1], snapshot, detector);
        if after.difference(&before).next().is_some() {
            count += 1;
        }
    }
    Ok(count)
}

/// `EV_SCROLL -> EV_EXPAND -> ...`, with a `[BUDGET_EXHAUSTED]` marker on censored traces.
pub fn render_event_strip(trace: &EventTrace) -> String {
    let mut out = trace
        .events
        .iter()
        .map(|e| format!("EV_{}", e.kind.as_str()))
        .collect::<Vec<_>>()
        .join(" -> ");
    if trace.is_censored() {
        if !out.is_empty() {
            out.push_str(" ... ");
        }
        out.push_str("[BUDGET_EXHAUSTED]");
    }
    out
}

/// Lowercase strip such as `expand -> toggle -> action`.
pub fn compact_strip(trace: &EventTrace) -> String {
    trace
        .events
        .iter()
        .map(|e| e.kind.compact())
        .collect::<Vec<_>>()
        .join(" -> ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::snapshot::parse_snapshot;

    fn doc(nodes: &str, panes: &str, scroll_height: u32) -> Snapshot {
        let text = format!(
            r#"{{"version": 1,
              "viewport": {{"width": 1440, "height": 900}},
              "surface": {{"rootNodeId": "root", "scrollable": true, "scrollHeight": {scroll_height}}},
              "panes": [{{"id": "main", "initial": true}}{panes}],
              "nodes": [
                {{"id": "root", "paneId": "main", "role": "container", "bounds": {{"x": 0, "y": 0, "w": 800, "h": 800}}}},
                {{"id": "accept", "paneId": "main", "parentId": "root", "role": "button", "label": "Accept all",
                  "bounds": {{"x": 20, "y": 100, "w": 200, "h": 50}}}}
                {nodes}
              ]}}"#
        );
        parse_snapshot(&text).unwrap()
    }

    fn run(s: &Snapshot, policy: Policy) -> EventTrace {
        least_effort_traverse(s, policy, &Detector::default(), Budget::default()).unwrap()
    }

    #[test]
    fn transition_cost_examples() {
        let t = TimingConstants::default();
        let s = doc("", "", 900);
        let mut n = s.node("accept").unwrap().clone();
        n.animation_ms = 300;
        assert!((t.interaction_cost(&n, &Budget::default()) - 0.4).abs() < 1e-12);
        n.animation_ms = 0;
        assert!((t.interaction_cost(&n, &Budget::default()) - 0.1).abs() < 1e-12);
        n.gated = true;
        assert!((t.interaction_cost(&n, &Budget::default()) - 0.1).abs() < 1e-12);
        n.effects.push(crate::snapshot::Effect {
            kind: EffectKind::Reveal,
            target: "root".into(),
        });
        assert!((t.interaction_cost(&n, &Budget::default()) - 0.4).abs() < 1e-12);
        assert!((t.scroll_cost(900.0, 900.0) - 0.05).abs() < 1e-12);
    }

    #[test]
    fn co_present_is_a_single_action() {
        let s = doc(
            r#",{"id": "reject", "paneId": "main", "parentId": "root", "role": "button", "label": "Reject all",
                "bounds": {"x": 240, "y": 100, "w": 200, "h": 50}}"#,
            "",
            900,
        );
        for policy in Policy::ALL {
            let t = run(&s, policy);
            assert_eq!(t.kinds(), vec![EventKind::Action]);
            assert_eq!(t.terminal_node_id.as_deref(), Some("reject"));
            assert_eq!(render_event_strip(&t), "EV_ACTION");
        }
    }

    #[test]
    fn offscreen_reject_needs_a_minimal_scroll() {
        let s = doc(
            r#",{"id": "reject", "paneId": "main", "parentId": "root", "role": "button", "label": "Reject all",
                "bounds": {"x": 240, "y": 1700, "w": 200, "h": 50}}"#,
            "",
            2000,
        );
        let t = run(&s, Policy::Pointer);
        assert_eq!(t.kinds(), vec![EventKind::Scroll, EventKind::Action]);
        assert_eq!(t.events[0].scroll_px, 850.0);
        assert_eq!(replay(&t, &s).unwrap().last().unwrap().scroll_offset, 850.0);
    }

    #[test]
    fn accordion_strip_and_reveal_count() {
        let s = doc(
            r#",{"id": "expand-1", "paneId": "main", "parentId": "root", "role": "expander", "label": "Manage settings",
                 "animationMs": 300, "effects": [{"kind": "reveal", "target": "panel"}],
                 "bounds": {"x": 240, "y": 100, "w": 200, "h": 50}},
               {"id": "panel", "paneId": "main", "parentId": "root", "role": "container", "visible": false,
                 "bounds": {"x": 0, "y": 200, "w": 800, "h": 300}},
               {"id": "t1", "paneId": "main", "parentId": "panel", "role": "toggle", "label": "Analytics", "visible": false,
                 "effects": [{"kind": "toggleState", "target": "reject"}], "bounds": {"x": 20, "y": 220, "w": 60, "h": 30}},
               {"id": "reject", "paneId": "main", "parentId": "panel", "role": "button", "label": "Reject all",
                 "visible": false, "enabled": false, "bounds": {"x": 20, "y": 300, "w": 200, "h": 50}}"#,
            "",
            900,
        );
        let d = Detector::default();
        let t = run(&s, Policy::Pointer);
        assert_eq!(compact_strip(&t), "expand -> toggle -> action");
        assert_eq!(count_hidden_reveals(&t, &s, &d).unwrap(), 1);
        let graph = build_interaction_graph(&s, Policy::Pointer, &d).unwrap();
        for e in graph.terminal_edges() {
            assert!(graph.states[e.from].revealed.contains("reject"));
        }
    }

    #[test]
    fn unreachable_alternative_is_censored() {
        let s = doc("", "", 900);
        let t = run(&s, Policy::Pointer);
        assert!(t.is_censored() && t.events.is_empty());
        assert_eq!(render_event_strip(&t), "[BUDGET_EXHAUSTED]");
    }

    #[test]
    fn focus_trap_adds_loops_only_under_keyboard() {
        let s = doc(
            r#",{"id": "reject", "paneId": "main", "parentId": "root", "role": "button", "label": "Reject all",
                "bounds": {"x": 240, "y": 100, "w": 200, "h": 50}},
               {"id": "trap", "paneId": "main", "parentId": "root", "role": "container", "focusTrap": true,
                "bounds": {"x": 0, "y": 400, "w": 800, "h": 100}},
               {"id": "l1", "paneId": "main", "parentId": "trap", "role": "link", "label": "Privacy policy", "tabIndex": 1,
                "bounds": {"x": 20, "y": 420, "w": 100, "h": 20}},
               {"id": "l2", "paneId": "main", "parentId": "trap", "role": "link", "label": "Cookie policy", "tabIndex": 1,
                "bounds": {"x": 140, "y": 420, "w": 100, "h": 20}}"#,
            "",
            900,
        );
        let p = run(&s, Policy::Pointer);
        let k = run(&s, Policy::Keyboard);
        assert_eq!(p.kinds(), vec![EventKind::Action]);
        assert_eq!(k.kinds(), vec![EventKind::FocusLoop, EventKind::Action]);
        assert!((k.events[0].cost - 0.1).abs() < 1e-12);
    }

    #[test]
    fn tiny_budget_censors() {
        let s = doc(
            r#",{"id": "next", "paneId": "main", "parentId": "root", "role": "button", "label": "Continue",
                "effects": [{"kind": "navigate", "target": "p2"}], "bounds": {"x": 240, "y": 100, "w": 200, "h": 50}},
               {"id": "reject", "paneId": "p2", "role": "button", "label": "Reject all",
                "bounds": {"x": 240, "y": 100, "w": 200, "h": 50}}"#,
            r#",{"id": "p2", "initial": false}"#,
            900,
        );
        let d = Detector::default();
        let ok = least_effort_traverse(&s, Policy::Pointer, &d, Budget::default()).unwrap();
        assert_eq!(compact_strip(&ok), "action -> action");
        assert_eq!(count_hidden_reveals(&ok, &s, &d).unwrap(), 1);
        let tight = Budget {
            max_interactions: 1,
            ..Budget::default()
        };
        assert!(least_effort_traverse(&s, Policy::Pointer, &d, tight).unwrap().is_censored());
    }

    #[test]
    fn replay_rejects_foreign_traces() {
        let s = doc("", "", 900);
        let bogus = EventTrace {
            events: vec![AuditEvent {
                kind: EventKind::Action,
                node_id: Some("missing".into()),
                scroll_px: 0.0,
                cost: 0.1,
            }],
            terminal: Terminal::AlternativeReached,
            terminal_node_id: Some("missing".into()),
            policy: Policy::Pointer,
        };
        assert!(matches!(replay(&bogus, &s), Err(AuditError::TraceMismatch(_))));
    }
}
