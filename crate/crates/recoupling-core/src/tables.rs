use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use thiserror::Error;

use crate::axioms::{verify_hexagon, verify_pentagon, AXIOM_TOL};
use crate::charge::{admissible_raw, ChargeError, LEVEL, NUM_CHARGES};
use crate::kl;

const N: usize = NUM_CHARGES;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TableError {
    #[error(transparent)]
    Charge(#[from] ChargeError),
    #[error("{identity} violated at {instance} (deviation {deviation:e})")]
    Inconsistent {
        identity: &'static str,
        instance: String,
        deviation: f64,
    },
}

/// Immutable numeric data of the theory.
#[derive(Debug, Clone)]
pub struct RecouplingTables {
    pub kauffman_a: Complex64,
    qdim: [f64; N],
    theta_u: Vec<f64>,
    six_j_u: Vec<f64>,
    r_symbol: Vec<Complex64>,
}

fn idx3(a: u8, b: u8, c: u8) -> usize {
    (a as usize * N + b as usize) * N + c as usize
}

fn idx6(a: u8, b: u8, i: u8, c: u8, d: u8, j: u8) -> usize {
    ((((a as usize * N + b as usize) * N + i as usize) * N + c as usize) * N + d as usize) * N
        + j as usize
}

/// `A^k` for `A = e^{5 i pi / 12}`.
fn a_power(k: i32) -> Complex64 {
    Complex64::from_polar(1.0, 5.0 * PI * k as f64 / 12.0)
}

impl RecouplingTables {
    /// Computes every table eagerly and checks the pentagon and hexagon identities.
    pub fn build() -> Result<Self, TableError> {
        let t = Self::build_unchecked();
        for report in [verify_pentagon(&t), verify_hexagon(&t)] {
            if let Some(w) = report.worst {
                if report.max_deviation >= AXIOM_TOL {
                    return Err(TableError::Inconsistent {
                        identity: report.identity,
                        instance: w,
                        deviation: report.max_deviation,
                    });
                }
            }
        }
        Ok(t)
    }

    /// Same tables without the axiom guard.
    pub fn build_unchecked() -> Self {
        let mut qdim = [0.0; N];
        for (n, q) in qdim.iter_mut().enumerate() {
            *q = kl::delta(n as u8);
        }
        let mut theta_u = vec![0.0; N * N * N];
        let mut r_symbol = vec![Complex64::new(0.0, 0.0); N * N * N];
        for a in 0..=LEVEL {
            for b in 0..=LEVEL {
                for c in 0..=LEVEL {
                    if admissible_raw(a, b, c) {
                        theta_u[idx3(a, b, c)] = (qdim[a as usize] * qdim[b as usize] * qdim[c as usize]).sqrt();
                        r_symbol[idx3(a, b, c)] = r_formula(a, b, c);
                    }
                }
            }
        }
        let mut six_j_u = vec![0.0; N.pow(6)];
        for a in 0..=LEVEL {
            for b in 0..=LEVEL {
                for i in 0..=LEVEL {
                    for c in 0..=LEVEL {
                        for d in 0..=LEVEL {
                            for j in 0..=LEVEL {
                                six_j_u[idx6(a, b, i, c, d, j)] = kl::six_j_unitary(a, b, i, c, d, j);
                            }
                        }
                    }
                }
            }
        }
        RecouplingTables {
            kauffman_a: a_power(1),
            qdim,
            theta_u,
            six_j_u,
            r_symbol,
        }
    }

    pub fn qdim(&self, a: u8) -> f64 {
        self.qdim[a as usize]
    }

    pub fn theta_u(&self, a: u8, b: u8, c: u8) -> f64 {
        self.theta_u[idx3(a, b, c)]
    }

    /// `{a b i; c d j}^u`.
    pub fn six_j(&self, a: u8, b: u8, i: u8, c: u8, d: u8, j: u8) -> f64 {
        self.six_j_u[idx6(a, b, i, c, d, j)]
    }

    /// F-move coefficient: `((a b)_e c)_d = sum_f F(a,b,c,d,e,f) (a (b c)_f)_d`.
    #[inline]
    pub fn f(&self, a: u8, b: u8, c: u8, d: u8, e: u8, f: u8) -> f64 {
        self.six_j_u[idx6(a, b, f, c, d, e)]
    }

    /// Phase of one positive exchange of `a` and `b` in channel `c`.
    pub fn r_move(&self, a: u8, b: u8, c: u8) -> Result<Complex64, TableError> {
        if a > LEVEL || b > LEVEL || c > LEVEL {
            return Err(ChargeError::OutOfRange(a.max(b).max(c) as i64).into());
        }
        if !admissible_raw(a, b, c) {
            return Err(ChargeError::Inadmissible(a, b, c).into());
        }
        Ok(self.r_symbol[idx3(a, b, c)])
    }

    /// Unchecked R lookup for hot paths; zero on inadmissible triples.
    #[inline]
    pub fn r(&self, a: u8, b: u8, c: u8) -> Complex64 {
        self.r_symbol[idx3(a, b, c)]
    }

    /// Scalar picked up when a bubble on edges `i, j` hanging off an edge `k` is removed.
    pub fn bubble_coeff(&self, i: u8, j: u8, k: u8) -> f64 {
        let s = self.six_j(i, j, 0, j, i, k);
        if s == 0.0 {
            0.0
        } else {
            1.0 / s
        }
    }

    /// Square F matrix for fixed external labels, rows `e`, columns `f`, over admissible labels only.
    pub fn f_matrix(&self, a: u8, b: u8, c: u8, d: u8) -> (Vec<u8>, Vec<u8>, Vec<Vec<f64>>) {
        let es: Vec<u8> = (0..=LEVEL)
            .filter(|&e| admissible_raw(a, b, e) && admissible_raw(e, c, d))
            .collect();
        let fs: Vec<u8> = (0..=LEVEL)
            .filter(|&f| admissible_raw(b, c, f) && admissible_raw(a, f, d))
            .collect();
        let m = es
            .iter()
            .map(|&e| fs.iter().map(|&f| self.f(a, b, c, d, e, f)).collect())
            .collect();
        (es, fs, m)
    }

    /// Overwrites one 6j entry; used for fault injection in checks.
    pub fn perturb_six_j(&mut self, a: u8, b: u8, i: u8, c: u8, d: u8, j: u8, by: f64) {
        self.six_j_u[idx6(a, b, i, c, d, j)] += by;
    }

    /// Sorted `SIXJ a b i c d j = value` lines for every nonzero symbol.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for a in 0..=LEVEL {
            for b in 0..=LEVEL {
                for i in 0..=LEVEL {
                    for c in 0..=LEVEL {
                        for d in 0..=LEVEL {
                            for j in 0..=LEVEL {
                                let v = self.six_j(a, b, i, c, d, j);
                                if v != 0.0 {
                                    let _ = writeln!(out, "SIXJ {a} {b} {i} {c} {d} {j} = {}", fmt_g17(v));
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

fn r_formula(a: u8, b: u8, c: u8) -> Complex64 {
    let (a, b, c) = (a as i32, b as i32, c as i32);
    let sign = if ((a + b - c) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    a_power((c * (c + 2) - a * (a + 2) - b * (b + 2)) / 2) * sign
}

/// C-style `%.17g`.
pub fn fmt_g17(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{:.16e}", v);
    let (mant, e) = sci.split_once('e').unwrap();
    let e: i32 = e.parse().unwrap();
    if (-4..17).contains(&e) {
        let decimals = (16 - e).max(0) as usize;
        let s = format!("{:.*}", decimals, v);
        trim_zeros(&s)
    } else {
        let m = trim_zeros(mant);
        format!("{m}e{}{:02}", if e < 0 { '-' } else { '+' }, e.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17_formatting() {
        assert_eq!(fmt_g17(0.5), "0.5");
        assert_eq!(fmt_g17(-1.0), "-1");
        assert_eq!(fmt_g17(1.0 / 3.0), "0.33333333333333331");
        assert_eq!(fmt_g17(1e-20), "9.9999999999999995e-21");
    }

    #[test]
    fn r_with_vacuum_is_trivial() {
        let t = RecouplingTables::build_unchecked();
        for b in 0..=LEVEL {
            assert!((t.r_move(0, b, b).unwrap() - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn r_rejects_inadmissible() {
        let t = RecouplingTables::build_unchecked();
        assert!(t.r_move(1, 1, 1).is_err());
        assert!(t.r_move(1, 1, 7).is_err());
    }
}
