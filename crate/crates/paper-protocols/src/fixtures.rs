//! Printed braid matrices checked against the simulator.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use anyon_state::{AnyonState, TreeShape};
use num_complex::Complex64;

use crate::gate::{equal_up_to_phase, GateMatrix};
use crate::ProtocolError;

fn polar(r: f64, t: f64) -> Complex64 {
    Complex64::from_polar(r, t)
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn im(x: f64) -> Complex64 {
    Complex64::new(0.0, x)
}

/// Matrix of a braid word between two labelled bases of a small tree.
///
/// Column `k` is the word applied to the basis state `in_keys[k]` of `leaves`,
/// read on `out_keys` of the resulting shape.
pub fn braid_matrix(
    leaves: &[u8],
    word: &[(usize, i8)],
    in_keys: &[Vec<u8>],
    out_keys: &[Vec<u8>],
) -> Result<GateMatrix, ProtocolError> {
    let shape = TreeShape::new(leaves.to_vec(), 0)?;
    let mut cols = Vec::new();
    for k in in_keys {
        let mut s = AnyonState::new_basis_state(shape.clone(), k)?;
        for &(i, sign) in word {
            s = s.braid(i, sign)?;
        }
        cols.push(out_keys.iter().map(|o| s.amplitude(o)).collect::<Vec<_>>());
    }
    if cols.len() != out_keys.len() {
        return Err(ProtocolError::Dimension { expected: in_keys.len(), got: out_keys.len() });
    }
    Ok(GateMatrix::from_columns(&cols))
}

fn keys(first: &[u8], rest: &[u8]) -> Vec<Vec<u8>> {
    first
        .iter()
        .map(|&c| {
            let mut k = vec![c];
            k.extend_from_slice(rest);
            k
        })
        .collect()
}

/// A printed matrix and its simulated counterpart.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub printed: GateMatrix,
    pub simulated: GateMatrix,
}

#[derive(Debug, Clone)]
pub struct FixtureResult {
    pub name: &'static str,
    pub fidelity: f64,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct FixtureReport {
    pub results: Vec<FixtureResult>,
}

impl FixtureReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn worst_fidelity(&self) -> f64 {
        self.results.iter().map(|r| r.fidelity).fold(1.0, f64::min)
    }
}

pub fn g2_1111() -> GateMatrix {
    let s3 = 3f64.sqrt();
    let off = polar((2.0 / 3.0f64).sqrt(), -5.0 * PI / 12.0);
    GateMatrix::from_rows(vec![vec![polar(1.0 / s3, PI / 4.0), off], vec![off, polar(1.0 / s3, -PI / 12.0)]])
        .with_basis(vec!["|0>".into(), "|2>".into()])
}

/// Rows `|1>, |3>`, columns `|0>, |2>`.
pub fn g2_1122() -> GateMatrix {
    let h = FRAC_1_SQRT_2;
    GateMatrix::from_rows(vec![vec![polar(h, 2.0 * PI / 3.0), re(h)], vec![polar(h, -5.0 * PI / 6.0), im(-h)]])
}

pub fn r_12() -> GateMatrix {
    GateMatrix::diagonal(&[-polar(1.0, PI / 3.0), -polar(1.0, -PI / 6.0)])
}

/// The half braid on `1221` and `3223`.
pub fn g2_same() -> GateMatrix {
    let h = 3f64.sqrt() / 2.0;
    GateMatrix::from_rows(vec![vec![re(-0.5), im(h)], vec![im(h), re(-0.5)]])
}

/// The half braid on `1223` and `3221`.
pub fn g2_mixed() -> GateMatrix {
    let h = 3f64.sqrt() / 2.0;
    GateMatrix::from_rows(vec![vec![im(-h), re(0.5)], vec![re(0.5), im(-h)]])
}

/// Braid on `1212`: rows `|0>, |2>`, columns `|1>, |3>`.
pub fn braid_1212() -> GateMatrix {
    let h = FRAC_1_SQRT_2;
    GateMatrix::from_rows(vec![vec![polar(h, 2.0 * PI / 3.0), polar(h, -5.0 * PI / 6.0)], vec![re(h), im(-h)]])
}

/// Braid on `3212`: rows `|2>, |4>`, columns `|1>, |3>`.
pub fn braid_3212() -> GateMatrix {
    let h = FRAC_1_SQRT_2;
    GateMatrix::from_rows(vec![vec![im(h), re(h)], vec![polar(h, -5.0 * PI / 6.0), polar(h, -PI / 3.0)]])
}

/// The pair `(M)`: left on rows `|0>, |2>`, right on rows `|2>, |4>`.
pub fn m_pair() -> (GateMatrix, GateMatrix) {
    let h = FRAC_1_SQRT_2;
    let w = polar(1.0, PI / 3.0);
    let v = polar(1.0, -PI / 6.0);
    (
        GateMatrix::from_rows(vec![vec![re(h), re(h)], vec![-w * h, w * h]]),
        GateMatrix::from_rows(vec![vec![v * h, -v * h], vec![im(h), im(h)]]),
    )
}

pub fn qutrit_braid() -> GateMatrix {
    let h = FRAC_1_SQRT_2;
    GateMatrix::from_real_rows(&[&[0.5, h, 0.5], &[h, 0.0, -h], &[0.5, -h, 0.5]])
}

/// Full twist on `1122` (basis `|0>, |2>`); the same swap with phase `-e^{2i pi/3}` holds on `3122`.
pub fn full_twist_1122() -> GateMatrix {
    let p = polar(1.0, 2.0 * PI / 3.0);
    GateMatrix::from_rows(vec![vec![re(0.0), p], vec![p, re(0.0)]])
}

pub fn full_twist_3122() -> GateMatrix {
    full_twist_1122().scaled(re(-1.0))
}

pub fn sigma1_full_twist() -> GateMatrix {
    GateMatrix::diagonal(&[re(1.0), re(-1.0)])
}

/// Every printed braid matrix next to its simulation.
pub fn braid_fixtures() -> Result<Vec<Fixture>, ProtocolError> {
    let mut out = Vec::new();
    let mut push = |name, printed: GateMatrix, simulated: GateMatrix| out.push(Fixture { name, printed, simulated });

    push("G2[1,1,1,1]", g2_1111(), braid_matrix(&[1, 1, 1, 1], &[(2, 1)], &keys(&[0, 2], &[1]), &keys(&[0, 2], &[1]))?);
    push("G2[1,1,2,2]", g2_1122(), braid_matrix(&[1, 1, 2, 2], &[(2, 1)], &keys(&[0, 2], &[2]), &keys(&[1, 3], &[2]))?);
    let r = braid_matrix(&[1, 2, 2, 1], &[(1, 1)], &keys(&[1, 3], &[1]), &keys(&[1, 3], &[1]))?;
    push("R[1,2]", r_12(), r.clone());
    for (name, leaves, last) in [("G2(1,2,2,1)", [1, 2, 2, 1], 1), ("G2(3,2,2,3)", [3, 2, 2, 3], 3)] {
        push(name, g2_same(), braid_matrix(&leaves, &[(2, 1)], &keys(&[1, 3], &[last]), &keys(&[1, 3], &[last]))?);
    }
    for (name, leaves, last) in [("G2(1,2,2,3)", [1, 2, 2, 3], 3), ("G2(3,2,2,1)", [3, 2, 2, 1], 1)] {
        push(name, g2_mixed(), braid_matrix(&leaves, &[(2, 1)], &keys(&[1, 3], &[last]), &keys(&[1, 3], &[last]))?);
    }
    let b1212 = braid_matrix(&[1, 2, 1, 2], &[(2, 1)], &keys(&[1, 3], &[2]), &keys(&[0, 2], &[2]))?;
    let b3212 = braid_matrix(&[3, 2, 1, 2], &[(2, 1)], &keys(&[1, 3], &[2]), &keys(&[2, 4], &[2]))?;
    push("braid on 1212", braid_1212(), b1212.clone());
    push("braid on 3212", braid_3212(), b3212.clone());
    let (ml, mr) = m_pair();
    push("(M) left", ml, b1212.mul(&r));
    push("(M) right", mr, b3212.mul(&r));
    let qk: Vec<Vec<u8>> = [0, 2, 4].iter().map(|&c| vec![c, 2]).collect();
    push("qutrit 2222 half twist", qutrit_braid(), braid_matrix(&[2, 2, 2, 2], &[(2, 1), (3, 1), (2, 1)], &qk, &qk)?);
    push(
        "full twist on 1122",
        full_twist_1122(),
        braid_matrix(&[1, 1, 2, 2], &[(2, 1), (2, 1)], &keys(&[0, 2], &[2]), &keys(&[0, 2], &[2]))?,
    );
    push(
        "full twist on 3122",
        full_twist_3122(),
        braid_matrix(&[3, 1, 2, 2], &[(2, 1), (2, 1)], &keys(&[2, 4], &[2]), &keys(&[2, 4], &[2]))?,
    );
    push(
        "sigma1 full twist",
        sigma1_full_twist(),
        braid_matrix(&[1, 2, 2, 1], &[(1, 1), (1, 1)], &keys(&[1, 3], &[1]), &keys(&[1, 3], &[1]))?,
    );
    push("no braid", GateMatrix::identity(2), braid_matrix(&[1, 2, 2, 1], &[], &keys(&[1, 3], &[1]), &keys(&[1, 3], &[1]))?);
    push(
        "braid then inverse",
        GateMatrix::identity(3),
        braid_matrix(&[2, 2, 2, 2], &[(2, 1), (2, -1)], &qk, &qk)?,
    );
    Ok(out)
}

pub fn braid_fixture_suite() -> Result<FixtureReport, ProtocolError> {
    let results = braid_fixtures()?
        .into_iter()
        .map(|f| {
            let (passed, fidelity) = equal_up_to_phase(&f.printed, &f.simulated);
            FixtureResult { name: f.name, fidelity, passed }
        })
        .collect();
    Ok(FixtureReport { results })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_matrices_are_unitary() {
        for m in [g2_1111(), g2_1122(), r_12(), g2_same(), g2_mixed(), braid_1212(), braid_3212(), qutrit_braid()] {
            assert!(m.is_unitary(1e-12), "{m}");
        }
        let (l, r) = m_pair();
        assert!(l.is_unitary(1e-12) && r.is_unitary(1e-12));
    }

    #[test]
    fn m_pair_is_the_braid_after_the_exchange() {
        let (l, r) = m_pair();
        assert!(braid_1212().mul(&r_12()).max_abs_diff(&l) < 1e-12);
        assert!(braid_3212().mul(&r_12()).max_abs_diff(&r) < 1e-12);
    }

    #[test]
    fn every_fixture_matches() {
        let report = braid_fixture_suite().unwrap();
        for r in &report.results {
            assert!(r.passed, "{} fidelity {}", r.name, r.fidelity);
        }
    }
}
