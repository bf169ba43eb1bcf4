use thiserror::Error;

/// Errors raised while reading or validating a snapshot document.
#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("parse error at `{path}` (line {line}, column {column}): {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported snapshot version {0} (expected 1)")]
    Version(u32),
    #[error("duplicate ids: {}", .0.join(", "))]
    DuplicateId(Vec<String>),
    #[error("dangling references: {}", .0.join(", "))]
    DanglingReference(Vec<String>),
    #[error("consent-surface root `{0}` does not resolve to a node")]
    NoSurfaceRoot(String),
    #[error("invalid snapshot: {}", .0.join("; "))]
    Invalid(Vec<String>),
}

/// Domain errors from the detector, engine and scoring layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum AuditError {
    #[error("node `{0}` is not an interactive control")]
    NotInteractive(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("state-space exceeded ({0} states)")]
    StateSpaceExceeded(usize),
    #[error("trace does not replay against snapshot: {0}")]
    TraceMismatch(String),
    #[error("no-accept-control")]
    NoAcceptControl,
    #[error("unknown profile `{name}` (valid: {valid})")]
    UnknownProfile { name: String, valid: String },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("lexicon error: {0}")]
    Lexicon(String),
    #[error("fixture corpus: {0}")]
    Fixture(String),
}

/// Errors from the statistics utilities.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
    #[error("domain error: {0}")]
    Domain(&'static str),
}
