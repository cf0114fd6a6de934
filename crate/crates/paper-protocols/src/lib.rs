//! Protocols for the SU(2)_4 qubit `1221` and qutrit `2222`, with the tools to
//! read gates and ancillas off their executions.

use anyon_state::StateError;
use protocol_vm::VmError;
use thiserror::Error;

pub mod catalog;
pub mod entangling;
pub mod extract;
pub mod fixtures;
pub mod pipelines;
pub mod gate;
pub mod register;

pub use catalog::{
    load, names, qubit_phase_ancilla, qutrit_phase_ancilla, shipped_scripts, Protocol, ProtocolKind, PROTOCOL_DIR_ENV,
    SHIPPED,
};
pub use extract::{branch_gates, extract_gate, prepare, BranchGate, Extraction, LEAKAGE_TOL};
pub use fixtures::{braid_fixture_suite, braid_fixtures, Fixture, FixtureReport, FixtureResult};
pub use gate::{equal_up_to_phase, is_entangling, operator_schmidt_rank, swap_gate, GateMatrix, GATE_TOL};
pub use register::{phase_normalized, vector_overlap, Register};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    #[error(transparent)]
    Vm(#[from] VmError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error("expected dimension {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("expected shape {expected}, got {got}")]
    Shape { expected: String, got: String },
    #[error("matrix is not unitary (defect {0:e})")]
    NotUnitary(f64),
    #[error("leakage: {0}")]
    Leakage(String),
    #[error("run ended in {0}, not a gate")]
    NotAGate(String),
    #[error("unknown protocol {0:?}")]
    UnknownProtocol(String),
    #[error("protocol {name}: {msg}")]
    Catalog { name: String, msg: String },
}
