//! Keyboard tab ring of the active pane.
//!
//! Stops are ordered by positive `tabIndex` ascending, then by document order.
//! Snapshots carry no DOM order, so document order is reading order
//! `(y, x, id)`. Roving-tabindex siblings collapse into a single stop.

use std::cmp::Ordering;

use crate::snapshot::{Snapshot, UiNode};
use crate::state::TraversalState;

#[derive(Debug, Clone, PartialEq)]
pub struct Stop {
    /// Node that receives focus on Tab.
    pub node_id: String,
    /// All nodes reachable from this stop (roving group members, or just the node).
    pub members: Vec<String>,
    /// Enclosing focus-trap container, if any.
    pub trap: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FocusLoop {
    pub trap_id: String,
    /// Tab presses needed to cycle the trap once.
    pub stops: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FocusRing {
    pub stops: Vec<Stop>,
}

fn reading_order(a: &UiNode, b: &UiNode) -> Ordering {
    a.bounds
        .y
        .total_cmp(&b.bounds.y)
        .then(a.bounds.x.total_cmp(&b.bounds.x))
        .then(a.id.cmp(&b.id))
}

pub fn is_focusable(node: &UiNode, state: &TraversalState) -> bool {
    node.is_interactive()
        && node.pane_id == state.active_pane
        && state.is_visible(node)
        && state.is_enabled(node)
        && node.tab_index.is_none_or(|t| t >= 0)
}

fn enclosing_trap(snapshot: &Snapshot, node: &UiNode) -> Option<String> {
    let mut cur = node.parent_id.as_deref();
    let mut hops = 0;
    while let Some(id) = cur {
        let parent = snapshot.node(id)?;
        if parent.focus_trap {
            return Some(parent.id.clone());
        }
        hops += 1;
        if hops > snapshot.nodes.len() {
            return None;
        }
        cur = parent.parent_id.as_deref();
    }
    None
}

impl FocusRing {
    pub fn build(snapshot: &Snapshot, state: &TraversalState) -> FocusRing {
        let mut nodes: Vec<&UiNode> = snapshot
            .nodes
            .iter()
            .filter(|n| is_focusable(n, state))
            .collect();
        nodes.sort_by(|a, b| {
            let pa = a.tab_index.filter(|t| *t > 0);
            let pb = b.tab_index.filter(|t| *t > 0);
            match (pa, pb) {
                (Some(x), Some(y)) => x.cmp(&y).then_with(|| reading_order(a, b)),
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (None, None) => reading_order(a, b),
            }
        });

        let mut stops: Vec<Stop> = Vec::new();
        for n in nodes {
            if n.roving_tab_index {
                if let Some(stop) = stops.iter_mut().find(|s| {
                    s.members.first().and_then(|m| snapshot.node(m)).is_some_and(|first| {
                        first.roving_tab_index && first.parent_id == n.parent_id
                    })
                }) {
                    stop.members.push(n.id.clone());
                    continue;
                }
            }
            stops.push(Stop {
                node_id: n.id.clone(),
                members: vec![n.id.clone()],
                trap: enclosing_trap(snapshot, n),
            });
        }
        FocusRing { stops }
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.stops
            .iter()
            .position(|s| s.members.iter().any(|m| m == id))
    }

    pub fn contains(&self, id: &str) -> bool {
        self.position(id).is_some()
    }

    fn trap_size(&self, trap: &str) -> usize {
        self.stops
            .iter()
            .filter(|s| s.trap.as_deref() == Some(trap))
            .count()
    }

    /// Focus loops incurred tabbing forward from `from` (or from before the
    /// first stop) to `to`. `None` when `to` is not in the ring.
    ///
    /// Leaving a trap, or crossing one on the way, costs one full cycle of it.
    pub fn walk(&self, from: Option<&str>, to: &str) -> Option<Vec<FocusLoop>> {
        let target = self.position(to)?;
        let target_trap = self.stops[target].trap.as_deref();
        let n = self.stops.len();
        let start = from.and_then(|f| self.position(f));

        let mut crossed: Vec<&str> = Vec::new();
        fn note<'a>(trap: Option<&'a str>, crossed: &mut Vec<&'a str>, target_trap: Option<&str>) {
            if let Some(t) = trap {
                if Some(t) != target_trap && !crossed.contains(&t) {
                    crossed.push(t);
                }
            }
        }
        match start {
            None => {
                for stop in &self.stops[..target] {
                    note(stop.trap.as_deref(), &mut crossed, target_trap);
                }
            }
            Some(s) if s == target => {}
            Some(s) => {
                note(self.stops[s].trap.as_deref(), &mut crossed, target_trap);
                let mut i = (s + 1) % n;
                while i != target {
                    note(self.stops[i].trap.as_deref(), &mut crossed, target_trap);
                    i = (i + 1) % n;
                }
            }
        }
        Some(
            crossed
                .into_iter()
                .map(|t| FocusLoop {
                    trap_id: t.to_string(),
                    stops: self.trap_size(t),
                })
                .collect(),
        )
    }
}
