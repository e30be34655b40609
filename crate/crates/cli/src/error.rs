//! CLI error type; every variant is an input error (exit code 2).
//! Mathematical check failures are reported through the report's overall
//! status instead (exit code 1).

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {detail}")]
    Io { path: String, detail: String },

    #[error("cannot write {path}: {detail}")]
    Write { path: String, detail: String },

    #[error("parse error in {path}: {detail}")]
    Parse { path: String, detail: String },

    #[error("shape error in {object}: {detail}")]
    Shape { object: String, detail: String },

    #[error("unknown {kind} '{name}'")]
    UnknownName { kind: &'static str, name: String },

    #[error("invalid argument: {0}")]
    InvalidArg(String),
}
