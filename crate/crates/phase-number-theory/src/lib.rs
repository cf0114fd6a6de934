//! Exact arithmetic in real quadratic fields and the checks deciding whether a tangent
//! phase is a rational multiple of pi.

pub mod density;
pub mod lemma;
pub mod phases;
pub mod quad;
pub mod tangent;

pub use density::{density_sweep, DensityReport, GAP_TOL};
pub use lemma::{calcut_quadratic_check, calcut_values, lemma3_check, Lemma3Report};
pub use quad::{is_prime, is_squarefree, QuadExt};
pub use tangent::{congruence_defect, olmsted_empirical, tan_add, tan_multiple, tangent_multiples, OlmstedReport, Tangent, DEFAULT_Q_MAX};

use num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumberError {
    #[error("mixed fields: sqrt {0} and sqrt {1}")]
    FieldMismatch(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not squarefree")]
    NotSquarefree(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("coefficient {0} must be nonzero")]
    ZeroCoefficient(&'static str),
    #[error("{0} is rational; use the rational tangent route")]
    Rational(BigRational),
    #[error("{0}")]
    Domain(String),
}
