//! Pentagon and hexagon checks by exhaustive enumeration of labels.

use num_complex::Complex64;

use crate::charge::{admissible_raw, LEVEL};
use crate::tables::RecouplingTables;

pub const AXIOM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub identity: &'static str,
    pub instances: usize,
    pub max_deviation: f64,
    /// Instance with the largest deviation.
    pub worst: Option<String>,
    /// Every instance above tolerance.
    pub failures: Vec<String>,
}

impl AxiomReport {
    fn new(identity: &'static str) -> Self {
        AxiomReport {
            identity,
            instances: 0,
            max_deviation: 0.0,
            worst: None,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, dev: f64, describe: impl Fn() -> String) {
        self.instances += 1;
        if dev > self.max_deviation {
            self.max_deviation = dev;
            self.worst = Some(describe());
        }
        if dev >= AXIOM_TOL {
            self.failures.push(describe());
        }
    }

    pub fn passed(&self) -> bool {
        self.max_deviation < AXIOM_TOL
    }
}

fn labels() -> std::ops::RangeInclusive<u8> {
    0..=LEVEL
}

/// `[F^{fcd}_e]_{gl} [F^{abl}_e]_{fk} = sum_h [F^{abc}_g]_{fh} [F^{ahd}_e]_{gk} [F^{bcd}_k]_{hl}`.
pub fn verify_pentagon(t: &RecouplingTables) -> AxiomReport {
    let mut rep = AxiomReport::new("pentagon");
    for a in labels() {
        for b in labels() {
            for c in labels() {
                for d in labels() {
                    for e in labels() {
                        for f in labels().filter(|&f| admissible_raw(a, b, f)) {
                            for g in labels().filter(|&g| admissible_raw(f, c, g) && admissible_raw(g, d, e)) {
                                for k in labels().filter(|&k| admissible_raw(a, k, e)) {
                                    for l in labels().filter(|&l| admissible_raw(c, d, l) && admissible_raw(b, l, k)) {
                                        let lhs = t.f(f, c, d, e, g, l) * t.f(a, b, l, e, f, k);
                                        let rhs: f64 = labels()
                                            .map(|h| t.f(a, b, c, g, f, h) * t.f(a, h, d, e, g, k) * t.f(b, c, d, k, h, l))
                                            .sum();
                                        rep.record((lhs - rhs).abs(), || {
                                            format!("a={a} b={b} c={c} d={d} e={e} f={f} g={g} k={k} l={l}")
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    rep
}

/// `R^{ca}_e [F^{acb}_d]_{eg} R^{cb}_g = sum_f [F^{cab}_d]_{ef} R^{cf}_d [F^{abc}_d]_{fg}`,
/// plus the same identity with every R inverted.
pub fn verify_hexagon(t: &RecouplingTables) -> AxiomReport {
    let mut rep = AxiomReport::new("hexagon");
    for inverse in [false, true] {
        let r = |x: u8, y: u8, z: u8| -> Complex64 {
            let v = t.r(x, y, z);
            if inverse && v.norm() > 0.0 {
                v.inv()
            } else {
                v
            }
        };
        for a in labels() {
            for b in labels() {
                for c in labels() {
                    for d in labels() {
                        for e in labels().filter(|&e| admissible_raw(c, a, e) && admissible_raw(e, b, d)) {
                            for g in labels().filter(|&g| admissible_raw(c, b, g) && admissible_raw(a, g, d)) {
                                let lhs = r(c, a, e) * t.f(a, c, b, d, e, g) * r(c, b, g);
                                let rhs: Complex64 = labels()
                                    .map(|f| r(c, f, d) * (t.f(c, a, b, d, e, f) * t.f(a, b, c, d, f, g)))
                                    .sum();
                                rep.record((lhs - rhs).norm(), || {
                                    format!("a={a} b={b} c={c} d={d} e={e} g={g} inverse={inverse}")
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    rep
}

/// Largest deviation from orthonormality over all F matrices.
pub fn max_orthogonality_defect(t: &RecouplingTables) -> f64 {
    let mut worst: f64 = 0.0;
    for a in labels() {
        for b in labels() {
            for c in labels() {
                for d in labels() {
                    let (es, fs, m) = t.f_matrix(a, b, c, d);
                    if es.len() != fs.len() {
                        if !es.is_empty() || !fs.is_empty() {
                            worst = f64::INFINITY;
                        }
                        continue;
                    }
                    for r1 in 0..es.len() {
                        for r2 in 0..es.len() {
                            let dot: f64 = (0..fs.len()).map(|k| m[r1][k] * m[r2][k]).sum();
                            let want = if r1 == r2 { 1.0 } else { 0.0 };
                            worst = worst.max((dot - want).abs());
                        }
                    }
                }
            }
        }
    }
    worst
}
