//! Burden audits for consent surfaces: snapshot model, alternative detection,
//! cost-ordered traversal, PSI scoring, synthetic archetypes and the stats used
//! to summarize them.

pub mod archetype;
pub mod cli;
pub mod detector;
pub mod error;
pub mod fixtures;
pub mod focus;
pub mod report;
pub mod scoring;
pub mod sensitivity;
pub mod snapshot;
pub mod state;
pub mod stats;
pub mod traversal;

pub use archetype::{generate_archetype, generate_corpus, ArchetypeKind, ArchetypeParams, CorpusSpec};
pub use detector::{Detector, LabelLexicon};
pub use error::{AuditError, SnapshotError};
pub use report::{run_audit, AuditConfig, AuditReport, PolicySelection};
pub use scoring::{named_profile, WeightProfile};
pub use snapshot::{parse_snapshot, Snapshot};
pub use state::Policy;
pub use traversal::{Budget, Engine, TimingConstants};
