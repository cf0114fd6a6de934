//! Kauffman-Lins closed forms evaluated at `A = i e^{-i pi/12}`.
//!
//! At this root of unity every bracket quantity is real, so the formulas are
//! evaluated in `f64` with the signs the complex `A` would produce.

use std::f64::consts::PI;

use crate::charge::{admissible_raw, LEVEL};

const R: f64 = (LEVEL as f64) + 2.0;

/// Quantum integer `[n] = (A^{2n} - A^{-2n}) / (A^2 - A^{-2})`.
pub fn qint(n: i32) -> f64 {
    let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
    sign * (n as f64 * PI / R).sin() / (PI / R).sin()
}

pub fn qfact(n: i32) -> f64 {
    (1..=n).map(qint).product()
}

/// Loop value `Delta_n = (-1)^n [n+1]`.
pub fn delta(n: u8) -> f64 {
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    sign * qint(n as i32 + 1)
}

/// Theta net with edges `a, b, c` (unnormalized).
pub fn theta(a: u8, b: u8, c: u8) -> f64 {
    let (a, b, c) = (a as i32, b as i32, c as i32);
    let m = (a + b - c) / 2;
    let n = (b + c - a) / 2;
    let p = (a + c - b) / 2;
    let sign = if (m + n + p) % 2 == 0 { 1.0 } else { -1.0 };
    sign * qfact(m + n + p + 1) * qfact(m) * qfact(n) * qfact(p)
        / (qfact(m + n) * qfact(n + p) * qfact(m + p))
}

/// Tetrahedral net `Tet[a b e; c d f]`.
pub fn tet(a: u8, b: u8, e: u8, c: u8, d: u8, f: u8) -> f64 {
    let (a, b, e, c, d, f) = (a as i32, b as i32, e as i32, c as i32, d as i32, f as i32);
    let ai = [(a + d + e) / 2, (b + c + e) / 2, (a + b + f) / 2, (c + d + f) / 2];
    let bj = [(b + d + e + f) / 2, (a + c + e + f) / 2, (a + b + c + d) / 2];
    let mut inner = 1.0;
    for &x in &ai {
        for &y in &bj {
            inner *= qfact(y - x);
        }
    }
    let ext = qfact(a) * qfact(b) * qfact(c) * qfact(d) * qfact(e) * qfact(f);
    let lo = *ai.iter().max().unwrap();
    let hi = *bj.iter().min().unwrap();
    let mut sum = 0.0;
    for s in lo..=hi {
        let mut den = 1.0;
        for &x in &ai {
            den *= qfact(s - x);
        }
        for &y in &bj {
            den *= qfact(y - s);
        }
        let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * qfact(s + 1) / den;
    }
    inner / ext * sum
}

/// Signed square root ratio `sqrt(num)/sqrt(den)` with `sqrt(-x) = i sqrt(x)`.
/// Returns `None` when the ratio would be imaginary.
fn sqrt_ratio(num: f64, den: f64) -> Option<f64> {
    if (num > 0.0) == (den > 0.0) {
        Some((num / den).sqrt())
    } else {
        None
    }
}

/// Unitary 6j symbol `{a b i; c d j}^u`, zero unless all four vertices are admissible.
pub fn six_j_unitary(a: u8, b: u8, i: u8, c: u8, d: u8, j: u8) -> f64 {
    if !(admissible_raw(a, d, i)
        && admissible_raw(b, c, i)
        && admissible_raw(a, b, j)
        && admissible_raw(c, d, j))
    {
        return 0.0;
    }
    let num = delta(i) * delta(j);
    let den = theta(a, d, i) * theta(b, c, i) * theta(a, b, j) * theta(c, d, j);
    let scale = sqrt_ratio(num, den).expect("unitary normalization must be real");
    tet(a, b, i, c, d, j) * scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantum_integers_alternate() {
        assert!((qint(1) - 1.0).abs() < 1e-15);
        assert!((qint(2) + 3f64.sqrt()).abs() < 1e-14);
        assert!((qint(3) - 2.0).abs() < 1e-14);
        assert!(qint(6).abs() < 1e-14);
    }

    #[test]
    fn loop_values_positive() {
        for n in 0..=LEVEL {
            assert!(delta(n) > 0.0);
        }
    }

    #[test]
    fn theta_with_vacuum_edge_is_loop() {
        for a in 0..=LEVEL {
            assert!((theta(a, a, 0) - delta(a)).abs() < 1e-12);
        }
    }
}
