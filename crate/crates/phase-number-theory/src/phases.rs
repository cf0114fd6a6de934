//! The tangent arguments behind the irrational phase ancillas.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_6};

use crate::quad::QuadExt;
use crate::tangent::{tan_add, tan_multiple, Tangent};
use crate::NumberError;

/// `(-14 - 5 sqrt3) / 11`, the argument of the qubit ancilla phase.
pub fn theta_prime_argument() -> QuadExt {
    QuadExt::from_ratios(-14, 11, -5, 11, 3).unwrap()
}

/// `(14 + 3 sqrt3) / 13`, the other fraction displayed for the same amplitude.
pub fn displayed_argument() -> QuadExt {
    QuadExt::from_ratios(14, 13, 3, 13, 3).unwrap()
}

/// `(-14 + 3 sqrt3) / 13`, the argument of the qutrit precursor phase.
pub fn gamma_prime_argument() -> QuadExt {
    QuadExt::from_ratios(-14, 13, 3, 13, 3).unwrap()
}

/// `2 arctan(x) + pi/6`, the relative phase of the fused qubit ancilla.
pub fn theta(x: &QuadExt) -> f64 {
    2.0 * x.to_f64().atan() + FRAC_PI_6
}

/// `2 arctan((3 sqrt3 - 14) / 13) - pi/2`, the relative phase of the fused qutrit ancilla.
pub fn gamma() -> f64 {
    2.0 * gamma_prime_argument().to_f64().atan() - FRAC_PI_2
}

/// `tan(2 arctan(x) + pi/6)`, exactly.
pub fn tan_theta(x: &QuadExt) -> Result<Tangent, NumberError> {
    let sixth = QuadExt::from_ratios(0, 1, 1, 3, 3)?;
    tan_add(&tan_multiple(x, 2)?, &sixth)
}
