//! A text language for measurement-branching anyon protocols and its interpreter.
//!
//! ```text
//! name demo
//! shape 1 2 2 1 total 0
//! checkpoint top
//! measure_pair 2 {
//!   0 => emit_gate
//!   _ => braid 1 +; retry top
//! }
//! ```
//!
//! Arms run and then fall through to the step after the measurement unless they
//! end in `emit_gate`, `emit_ancilla`, `abort` or `retry`.

use anyon_state::StateError;
use thiserror::Error;

pub mod ast;
mod exec;
mod parser;
mod print;
pub mod trace;
mod validate;

pub use ast::{Address, Arm, HeaderItem, MeasureKind, Pattern, ProtocolScript, Step};
pub use exec::{enumerate, run, Enumeration, ExecutionTrace, Mode, StepRecord, Terminal, ZeroBranch, LOOP_BOUND_REASON};
pub use parser::{parse_script, parse_unchecked, DEFAULT_LOOP_BOUND};
pub use print::{normalize_whitespace, print_script};
pub use validate::validate;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VmError {
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("{at}: {msg}")]
    Static { at: String, msg: String },
    #[error("input shape {got} does not match script shape {expected}")]
    InputShape { expected: String, got: String },
    #[error("{at}: {source}")]
    Runtime {
        at: String,
        #[source]
        source: StateError,
    },
    #[error("{at}: no branch for outcome {charge}")]
    NoBranch { at: String, charge: u8 },
}
