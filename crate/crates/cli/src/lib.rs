//! The `anyonvm` command line: table dumps, axiom checks, protocol runs, gate extraction,
//! the fixture corpus and phase-density reports, all as versioned JSON.

pub mod commands;
pub mod config;
pub mod corpus;
pub mod json;

pub use commands::execute;
pub use config::{Cli, Command, ModeArg, RunConfig};

use paper_protocols::ProtocolError;
use protocol_vm::VmError;
use serde_json::{json, Value};

/// Version of every JSON document the CLI writes.
pub const SCHEMA: u32 = 1;

pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Script(String),
    #[error("{message}")]
    Verification { message: String, report: Value },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification { .. } => 1,
            CliError::Usage(_) => 2,
            CliError::Script(_) => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Verification { .. } => "verification",
            CliError::Usage(_) => "usage",
            CliError::Script(_) => "script",
        }
    }

    /// The error object written to standard output on failure.
    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "schema": SCHEMA,
            "error": { "kind": self.kind(), "code": self.exit_code(), "message": self.to_string() },
        });
        if let CliError::Verification { report, .. } = self {
            v["report"] = report.clone();
        }
        v
    }
}

impl From<ProtocolError> for CliError {
    fn from(e: ProtocolError) -> Self {
        match e {
            ProtocolError::UnknownProtocol(_) => CliError::Usage(e.to_string()),
            other => CliError::Script(other.to_string()),
        }
    }
}

impl From<VmError> for CliError {
    fn from(e: VmError) -> Self {
        CliError::Script(e.to_string())
    }
}

impl From<anyon_state::StateError> for CliError {
    fn from(e: anyon_state::StateError) -> Self {
        CliError::Script(e.to_string())
    }
}
