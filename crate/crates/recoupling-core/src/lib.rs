//! Recoupling data of the SU(2) level 4 Kauffman-Jones theory.
//!
//! Everything is computed once, eagerly, and then read by lookup.

pub mod axioms;
pub mod charge;
pub mod kl;
pub mod tables;

pub use axioms::{max_orthogonality_defect, verify_hexagon, verify_pentagon, AxiomReport, AXIOM_TOL};
pub use charge::{admissible, admissible_raw, fusion_outcomes, ChargeError, ChargeLabel, LEVEL, NUM_CHARGES};
pub use tables::{fmt_g17, RecouplingTables, TableError};

/// Default absolute tolerance for floating point comparisons.
pub const TOL: f64 = 1e-9;

/// Builds the tables, checking the categorical axioms.
pub fn build_tables() -> Result<RecouplingTables, TableError> {
    RecouplingTables::build()
}
