//! Strategies and invariant checks shared by the property suite and the
//! acceptance report.
#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use serde_json::json;

use psi_audit::archetype::{generate_archetype, inject_expander, inject_focus_trap, ArchetypeKind, ArchetypeParams};
use psi_audit::detector::Detector;
use psi_audit::scoring::{compute_components, compute_psi, PsiComponents, WeightProfile};
use psi_audit::snapshot::{parse_snapshot, Snapshot};
use psi_audit::state::Policy;
use psi_audit::traversal::{least_effort_traverse, Budget, EventTrace};

pub const REJECT: &str = "reject";

/// A one-alternative banner: accept near the top, the reject somewhere down
/// the page, optional filler links and an optional focus trap.
#[derive(Debug, Clone)]
pub struct MinimalSurface {
    pub mobile: bool,
    pub accept_y: f64,
    pub reject_y: f64,
    pub reject_animation_ms: u32,
    pub links: usize,
    pub trap: bool,
}

impl MinimalSurface {
    pub fn snapshot(&self) -> Snapshot {
        let (vw, vh, name): (f64, f64, &str) = if self.mobile { (390.0, 844.0, "mobile") } else { (1440.0, 900.0, "desktop") };
        let (x, w) = (10.0, vw - 20.0);
        let height = (self.reject_y + 100.0).max(vh);
        let bounds = |y: f64, h: f64| json!({"x": x + 10.0, "y": y, "w": (w - 20.0).min(240.0), "h": h});
        let mut nodes = vec![
            json!({"id": "root", "paneId": "main", "role": "container", "bounds": {"x": x, "y": 0.0, "w": w, "h": height}}),
            json!({"id": "accept", "paneId": "main", "parentId": "root", "role": "button", "label": "Accept all",
                   "bounds": bounds(self.accept_y, 48.0), "emphasisClass": "primary"}),
        ];
        for i in 0..self.links {
            nodes.push(json!({"id": format!("link-{i}"), "paneId": "main", "parentId": "root", "role": "link",
                              "label": "Privacy policy", "bounds": bounds(self.accept_y + 60.0 + 30.0 * i as f64, 24.0)}));
        }
        if self.trap {
            nodes.push(json!({"id": "trap", "paneId": "main", "parentId": "root", "role": "container", "focusTrap": true,
                              "bounds": bounds(self.accept_y + 60.0, 24.0)}));
            for i in 1..=3 {
                nodes.push(json!({"id": format!("trap-{i}"), "paneId": "main", "parentId": "trap", "role": "link",
                                  "label": "Vendor list", "tabIndex": 1, "bounds": bounds(self.accept_y + 60.0, 24.0)}));
            }
        }
        nodes.push(json!({"id": REJECT, "paneId": "main", "parentId": "root", "role": "button", "label": "Reject all",
                          "animationMs": self.reject_animation_ms, "bounds": bounds(self.reject_y, 48.0)}));
        let doc = json!({
            "version": 1,
            "meta": {"source": "authored", "breakpoint": name},
            "viewport": {"width": vw as u32, "height": vh as u32, "name": name},
            "surface": {"rootNodeId": "root", "scrollable": height > vh, "scrollHeight": height},
            "panes": [{"id": "main", "initial": true}],
            "nodes": nodes,
        });
        parse_snapshot(&doc.to_string()).expect("minimal surface is valid")
    }
}

pub fn minimal_surface() -> impl Strategy<Value = MinimalSurface> {
    (any::<bool>(), 0.0..200.0f64, 300.0..4000.0f64, prop_oneof![Just(0u32), 0u32..600], 0usize..4, any::<bool>()).prop_map(
        |(mobile, accept_y, reject_y, reject_animation_ms, links, trap)| MinimalSurface {
            mobile,
            accept_y: accept_y.round(),
            reject_y: reject_y.round(),
            reject_animation_ms,
            links,
            trap,
        },
    )
}

/// Any archetype with parameters drawn from the valid domain.
pub fn archetype_snapshot() -> impl Strategy<Value = Snapshot> {
    let kind = prop_oneof![
        Just(ArchetypeKind::CoPresent),
        Just(ArchetypeKind::ScrollWall),
        Just(ArchetypeKind::Accordion),
        Just(ArchetypeKind::MultiStep),
    ];
    (kind, 1.01..6.0f64, 1u32..5, 2u32..6, 0u32..600, 0u32..600, any::<bool>(), any::<bool>(), any::<u64>()).prop_map(
        |(kind, depth, reveals, panes, gate, settle, trap, mobile, seed)| {
            let params = ArchetypeParams {
                scroll_depth_vh: depth,
                reveal_count: reveals,
                pane_count: panes,
                animation_ms_per_gate: gate,
                choice_settle_ms: settle,
                focus_trap: trap,
                breakpoint: if mobile { "mobile" } else { "desktop" }.into(),
            };
            generate_archetype(kind, &params, seed).expect("params are in range")
        },
    )
}

pub fn surface() -> impl Strategy<Value = Snapshot> {
    prop_oneof![minimal_surface().prop_map(|m| m.snapshot()), archetype_snapshot()]
}

/// Non-negative weights with at least one positive entry.
pub fn weights() -> impl Strategy<Value = WeightProfile> {
    (0.0..5.0f64, 0.0..5.0f64, 0.0..5.0f64, 0.0..5.0f64)
        .prop_filter("all-zero profile", |(a, b, g, d)| a + b + g + d > 0.0)
        .prop_map(|(a, b, g, d)| WeightProfile::new("custom", a, b, g, d).unwrap())
}

pub fn policy() -> impl Strategy<Value = Policy> {
    prop_oneof![Just(Policy::Pointer), Just(Policy::Keyboard)]
}

pub fn components() -> impl Strategy<Value = PsiComponents> {
    (0.0..20.0f64, 0.0..30.0f64, 0u32..10, 0u32..10).prop_map(|(d, t, f, h)| PsiComponents::new(d, t, f, h))
}

pub fn audit(snapshot: &Snapshot, policy: Policy) -> (EventTrace, PsiComponents) {
    let det = Detector::default();
    let trace = least_effort_traverse(snapshot, policy, &det, Budget::default()).expect("traversal");
    let comps = compute_components(&trace, snapshot, &det).expect("components");
    (trace, comps)
}

const EPS: f64 = 1e-9;

/// (a) When a meaningful alternative is exposed up front the audit never
/// reveals anything, stays within one viewport, and PSI is at least the
/// weighted time term.
pub fn check_copresence(snapshot: &Snapshot, policy: Policy, profile: &WeightProfile) -> Result<(), TestCaseError> {
    if !Detector::default().granularity_exposed(snapshot, policy) {
        return Ok(());
    }
    let (_, c) = audit(snapshot, policy);
    prop_assert!(!c.censored);
    prop_assert_eq!(c.hidden_reveals, 0);
    prop_assert!(c.distance_vh <= 1.0 + EPS, "D/vh = {}", c.distance_vh);
    prop_assert!(compute_psi(&c, profile) + EPS >= profile.beta * c.time_s);
    Ok(())
}

/// (b) Putting the only alternative behind an expander strictly raises PSI
/// whenever disclosure is weighted.
pub fn check_expander(surface: &MinimalSurface, policy: Policy, profile: &WeightProfile) -> Result<(), TestCaseError> {
    prop_assume!(profile.delta > 0.0);
    let base = surface.snapshot();
    let injected = inject_expander(&base, REJECT).expect("inject");
    let (_, before) = audit(&base, policy);
    let (_, after) = audit(&injected, policy);
    prop_assert!(!before.censored && !after.censored);
    prop_assert_eq!(after.hidden_reveals, before.hidden_reveals + 1);
    prop_assert!(compute_psi(&after, profile) > compute_psi(&before, profile));
    Ok(())
}

/// (c) A focus trap is invisible to a pointer user and strictly costlier for
/// a keyboard user.
pub fn check_trap(snapshot: &Snapshot, profile: &WeightProfile) -> Result<(), TestCaseError> {
    prop_assume!(profile.gamma > 0.0);
    let trapped = inject_focus_trap(snapshot);
    let (p0, pc0) = audit(snapshot, Policy::Pointer);
    let (p1, pc1) = audit(&trapped, Policy::Pointer);
    prop_assert_eq!(p0.events, p1.events);
    prop_assert_eq!(compute_psi(&pc0, profile), compute_psi(&pc1, profile));
    let (_, k0) = audit(snapshot, Policy::Keyboard);
    let (_, k1) = audit(&trapped, Policy::Keyboard);
    prop_assume!(!k0.censored && !k1.censored);
    prop_assert!(k1.focus_loops > k0.focus_loops);
    prop_assert!(compute_psi(&k1, profile) > compute_psi(&k0, profile));
    Ok(())
}

/// (d) PSI is linear in the weights and monotone in weights and components.
pub fn check_linearity(
    c: &PsiComponents,
    w1: &WeightProfile,
    w2: &WeightProfile,
    k: f64,
    bump: (usize, f64),
) -> Result<(), TestCaseError> {
    let [a1, b1, g1, d1] = w1.weights();
    let [a2, b2, g2, d2] = w2.weights();
    let sum = WeightProfile::new("sum", a1 + a2, b1 + b2, g1 + g2, d1 + d2).unwrap();
    let scaled = WeightProfile::new("scaled", k * a1, k * b1, k * g1, k * d1).unwrap();
    let p1 = compute_psi(c, w1);
    let p2 = compute_psi(c, w2);
    let tol = 1e-9 * (1.0 + p1.abs() + p2.abs());
    prop_assert!((compute_psi(c, &sum) - (p1 + p2)).abs() <= tol);
    prop_assert!((compute_psi(c, &scaled) - k * p1).abs() <= tol * (1.0 + k));

    // hand-expanded sum as an independent oracle
    let [d, t, f, h] = c.as_array();
    prop_assert!((p1 - (a1 * d + b1 * t + g1 * f + d1 * h)).abs() <= tol);

    let (which, amount) = bump;
    let mut bigger = *c;
    match which {
        0 => bigger.distance_vh += amount,
        1 => bigger.time_s += amount,
        2 => bigger.focus_loops += 1,
        _ => bigger.hidden_reveals += 1,
    }
    prop_assert!(compute_psi(&bigger, w1) + tol >= p1);
    prop_assert!(compute_psi(c, &sum) + tol >= p1);
    Ok(())
}

/// Runs every invariant with `cases` cases each; returns (name, outcome).
pub fn run_invariants(cases: u32) -> Vec<(&'static str, Result<(), String>)> {
    let cfg = || Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let mut out = Vec::new();
    let mut r = TestRunner::new_with_rng(cfg(), proptest::test_runner::TestRng::deterministic_rng(cfg().rng_algorithm));
    out.push((
        "co-presence lower bound",
        r.run(&(surface(), policy(), weights()), |(s, p, w)| check_copresence(&s, p, &w))
            .map_err(|e| e.to_string()),
    ));
    let mut r = TestRunner::new_with_rng(cfg(), proptest::test_runner::TestRng::deterministic_rng(cfg().rng_algorithm));
    out.push((
        "expander injection",
        r.run(&(minimal_surface(), policy(), weights()), |(m, p, w)| check_expander(&m, p, &w))
            .map_err(|e| e.to_string()),
    ));
    let mut r = TestRunner::new_with_rng(cfg(), proptest::test_runner::TestRng::deterministic_rng(cfg().rng_algorithm));
    out.push((
        "focus-trap injection",
        r.run(&(surface(), weights()), |(s, w)| check_trap(&s, &w)).map_err(|e| e.to_string()),
    ));
    let mut r = TestRunner::new_with_rng(cfg(), proptest::test_runner::TestRng::deterministic_rng(cfg().rng_algorithm));
    out.push((
        "linearity and monotonicity",
        r.run(
            &(components(), weights(), weights(), 0.0..10.0f64, (0usize..4, 0.0..5.0f64)),
            |(c, w1, w2, k, bump)| check_linearity(&c, &w1, &w2, k, bump),
        )
        .map_err(|e| e.to_string()),
    ));
    out
}
