use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::snapshot::{Snapshot, UiNode};

/// Interaction modality of the audit agent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Policy {
    Pointer,
    Keyboard,
}

impl Policy {
    pub const ALL: [Policy; 2] = [Policy::Pointer, Policy::Keyboard];

    pub fn as_str(self) -> &'static str {
        match self {
            Policy::Pointer => "pointer",
            Policy::Keyboard => "keyboard",
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Policy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "pointer" => Ok(Policy::Pointer),
            "keyboard" => Ok(Policy::Keyboard),
            other => Err(format!("unknown policy `{other}` (pointer, keyboard)")),
        }
    }
}

/// Where the agent stands on the way to the first meaningful alternative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TraversalState {
    pub active_pane: String,
    pub scroll_offset: f64,
    /// Nodes made visible by reveal effects.
    pub revealed: BTreeSet<String>,
    /// Nodes enabled by toggle-state effects.
    pub enabled: BTreeSet<String>,
    /// Keyboard focus; always `None` under the pointer policy.
    pub focus: Option<String>,
    pub pane_depth: u32,
    pub interactions_used: u32,
    pub elapsed: f64,
}

/// The part of a state that identifies it in the interaction graph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateKey {
    pub pane: String,
    pub offset_bits: u64,
    pub revealed: BTreeSet<String>,
    pub enabled: BTreeSet<String>,
    pub focus: Option<String>,
}

impl TraversalState {
    pub fn initial(snapshot: &Snapshot) -> TraversalState {
        TraversalState {
            active_pane: snapshot.initial_pane_id().to_string(),
            scroll_offset: 0.0,
            revealed: BTreeSet::new(),
            enabled: BTreeSet::new(),
            focus: None,
            pane_depth: 0,
            interactions_used: 0,
            elapsed: 0.0,
        }
    }

    pub fn is_visible(&self, node: &UiNode) -> bool {
        node.visible || self.revealed.contains(&node.id)
    }

    pub fn is_enabled(&self, node: &UiNode) -> bool {
        node.enabled || self.enabled.contains(&node.id)
    }

    pub fn key(&self) -> StateKey {
        StateKey {
            pane: self.active_pane.clone(),
            offset_bits: self.scroll_offset.to_bits(),
            revealed: self.revealed.clone(),
            enabled: self.enabled.clone(),
            focus: self.focus.clone(),
        }
    }
}
