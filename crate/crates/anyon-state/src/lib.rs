//! A line of anyons as a superposition of left-caterpillar fusion trees.
//!
//! Positions are 1-based and count anyons from the left. The internal edges of
//! a tree over leaves `l_1 .. l_n` are `c_k = charge(l_1 .. l_k)`; a state is
//! keyed by `(c_2, .., c_{n-1})`, with `c_1 = l_1` and `c_n` the total charge.

use std::sync::LazyLock;

use recoupling_core::{ChargeError, RecouplingTables};
use thiserror::Error;

mod logical;
mod shape;
mod state;

pub use logical::LogicalKind;
pub use shape::TreeShape;
pub use state::{AnyonState, Key, MeasurementOutcome, Policy};

/// Below this a forced outcome counts as impossible.
pub const MIN_PROBABILITY: f64 = 1e-12;

static TABLES: LazyLock<RecouplingTables> =
    LazyLock::new(|| RecouplingTables::build().expect("SU(2)_4 tables satisfy the axioms"));

/// Process-wide recoupling tables.
pub fn tables() -> &'static RecouplingTables {
    &TABLES
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error(transparent)]
    Charge(#[from] ChargeError),
    #[error("a shape needs at least one anyon")]
    EmptyShape,
    #[error("no admissible labeling for shape {0}")]
    NoLabeling(String),
    #[error("labeling {0:?} is not admissible for this shape")]
    InadmissibleLabeling(Vec<u8>),
    #[error("position {pos} out of range for {len} anyons")]
    Position { pos: usize, len: usize },
    #[error("impossible outcome {charge} (probability {probability:e})")]
    ImpossibleOutcome { charge: u8, probability: f64 },
    #[error("anyons {0} and {1} are not in the vacuum channel")]
    NotVacuumPair(usize, usize),
    #[error("leaf {0} does not carry the vacuum charge")]
    NotVacuumLeaf(usize),
    #[error("cannot split {leaf} into {b} and {c}")]
    InvalidSplit { leaf: u8, b: u8, c: u8 },
    #[error("shape mismatch: {0} vs {1}")]
    ShapeMismatch(String, String),
    #[error("expected {expected} amplitudes, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("state has zero norm")]
    ZeroState,
    #[error("tensor product needs vacuum total charge on both factors")]
    NonVacuumTensor,
}
