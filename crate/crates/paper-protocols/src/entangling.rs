//! The two-qubit entangling gates, the CNOT.SWAP construction and the permutation gates.

use std::collections::BTreeSet;

use num_complex::Complex64;
use protocol_vm::Mode;

use crate::catalog::load;
use crate::fixtures::braid_matrix;
use crate::gate::{equal_up_to_phase, swap_gate, GateMatrix};
use crate::register::Register;
use crate::{extract_gate, Extraction, ProtocolError};

/// Measurement path of the second entangling gate; later measurements take their first-listed branch.
pub const EG2_PATH: [u8; 3] = [0, 2, 2];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn quarter(rows: [[(f64, f64); 4]; 4]) -> GateMatrix {
    GateMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&(a, b)| c(a / 4.0, b / 4.0)).collect()).collect())
}

pub fn eg1_printed() -> GateMatrix {
    let s = 3f64.sqrt();
    quarter([
        [(1.0, 0.0), (0.0, s), (3.0, 0.0), (0.0, -s)],
        [(3.0, 0.0), (0.0, -s), (1.0, 0.0), (0.0, s)],
        [(0.0, s), (-3.0, 0.0), (0.0, -s), (-1.0, 0.0)],
        [(0.0, -s), (-1.0, 0.0), (0.0, s), (-3.0, 0.0)],
    ])
}

pub fn eg2_printed() -> GateMatrix {
    let s = 3f64.sqrt();
    quarter([
        [(1.0, 0.0), (0.0, -s), (3.0, 0.0), (0.0, s)],
        [(3.0, 0.0), (0.0, s), (1.0, 0.0), (0.0, -s)],
        [(0.0, s), (3.0, 0.0), (0.0, -s), (1.0, 0.0)],
        [(0.0, -s), (1.0, 0.0), (0.0, s), (3.0, 0.0)],
    ])
}

fn halves(rows: [[(f64, f64); 4]; 4]) -> GateMatrix {
    let s = 3f64.sqrt();
    GateMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&(a, b)| c(a / 2.0, b * s / 2.0)).collect()).collect())
}

/// The auxiliary entangling gate, taken as printed.
pub fn aux() -> GateMatrix {
    halves([
        [(-1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, -1.0)],
        [(0.0, 0.0), (-1.0, 0.0), (0.0, -1.0), (0.0, 0.0)],
        [(0.0, 0.0), (0.0, -1.0), (-1.0, 0.0), (0.0, 0.0)],
        [(0.0, -1.0), (0.0, 0.0), (0.0, 0.0), (-1.0, 0.0)],
    ])
}

pub fn aux_eg1_printed() -> GateMatrix {
    halves([
        [(-1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 1.0)],
        [(0.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, 0.0)],
        [(0.0, -1.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)],
        [(0.0, 0.0), (1.0, 0.0), (0.0, -1.0), (0.0, 0.0)],
    ])
}

pub fn aux_eg2_printed() -> GateMatrix {
    halves([
        [(-1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, -1.0)],
        [(0.0, 0.0), (0.0, -1.0), (-1.0, 0.0), (0.0, 0.0)],
        [(0.0, -1.0), (0.0, 0.0), (0.0, 0.0), (-1.0, 0.0)],
        [(0.0, 0.0), (-1.0, 0.0), (0.0, -1.0), (0.0, 0.0)],
    ])
}

fn signed(perm: [usize; 4], signs: [f64; 4]) -> GateMatrix {
    let mut rows = vec![vec![c(0.0, 0.0); 4]; 4];
    for (col, &row) in perm.iter().enumerate() {
        rows[row][col] = c(signs[col], 0.0);
    }
    GateMatrix::from_rows(rows)
}

/// `AUX.EG_1` after the left `sigma_2` braid.
pub fn signed_permutation_1() -> GateMatrix {
    signed([0, 3, 1, 2], [1.0, -1.0, 1.0, -1.0])
}

/// `AUX.EG_2` after the left `sigma_2` braid.
pub fn signed_permutation_2() -> GateMatrix {
    signed([0, 3, 1, 2], [1.0; 4])
}

/// `|11> -> |11>, |13> -> |33>, |31> -> |13>, |33> -> |31>`.
pub fn cnot_swap_printed() -> GateMatrix {
    GateMatrix::permutation(&[0, 3, 1, 2])
}

pub fn cnot_printed() -> GateMatrix {
    GateMatrix::permutation(&[0, 1, 3, 2])
}

fn two_qubit_braids(word: &[(usize, i8)]) -> Result<GateMatrix, ProtocolError> {
    let k = Register::TwoQubit.keys();
    braid_matrix(Register::TwoQubit.shape().leaves(), word, &k, &k)
}

/// `sigma_2` on the left qubit.
pub fn left_sigma2() -> Result<GateMatrix, ProtocolError> {
    two_qubit_braids(&[(2, 1)])
}

/// Full `sigma_1` twist on the left qubit.
pub fn left_sigma1_twist() -> Result<GateMatrix, ProtocolError> {
    two_qubit_braids(&[(1, 1), (1, 1)])
}

fn gate_of(name: &str, mode: &Mode) -> Result<Extraction, ProtocolError> {
    let p = load(name)?;
    extract_gate(&p.script, Register::TwoQubit, Register::TwoQubit, None, mode)
}

/// `EG_1` from the first-listed path of the entangling protocol.
pub fn eg1() -> Result<Extraction, ProtocolError> {
    gate_of("eg_protocol", &Mode::ForceRecorded)
}

pub fn eg2() -> Result<Extraction, ProtocolError> {
    gate_of("eg_protocol", &Mode::ForcePath(EG2_PATH.to_vec()))
}

/// Which of the two entangling gates the protocol produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EgCase {
    First,
    Second,
}

impl EgCase {
    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "eg1" => Some(EgCase::First),
            "eg2" => Some(EgCase::Second),
            _ => None,
        }
    }
}

/// Braids of the `cnot_swap_braids` script, as a gate: `sigma_2` then the `sigma_1` full twist, on the left qubit.
pub fn cnot_swap_braids() -> Result<GateMatrix, ProtocolError> {
    Ok(gate_of("cnot_swap_braids", &Mode::ForceRecorded)?.gate)
}

/// Braids that finish `AUX . EG` into CNOT.SWAP. The second gate already lands on a
/// permutation after `sigma_2`, so only the first needs the full twist that clears its two minus signs.
pub fn finishing_braids(case: EgCase) -> Result<GateMatrix, ProtocolError> {
    match case {
        EgCase::First => cnot_swap_braids(),
        EgCase::Second => left_sigma2(),
    }
}

pub fn swap() -> Result<GateMatrix, ProtocolError> {
    Ok(gate_of("swap", &Mode::ForceRecorded)?.gate)
}

pub fn ffo_left() -> Result<GateMatrix, ProtocolError> {
    Ok(gate_of("ffo_left", &Mode::ForceRecorded)?.gate)
}

pub fn ffo_right() -> Result<GateMatrix, ProtocolError> {
    Ok(gate_of("ffo_right", &Mode::ForceRecorded)?.gate)
}

/// `braids . AUX . eg`.
pub fn cnot_swap_from(eg: &GateMatrix, case: EgCase) -> Result<GateMatrix, ProtocolError> {
    Ok(finishing_braids(case)?.mul(&aux()).mul(eg))
}

/// The permutation a gate performs, if it is one up to global phase: `perm[c]` is the row hit by column `c`.
pub fn as_permutation(u: &GateMatrix, tol: f64) -> Option<Vec<usize>> {
    let n = u.phase_normalized();
    let mut perm = Vec::with_capacity(n.dim());
    for col in 0..n.dim() {
        let v = n.column(col);
        let row = (0..v.len()).find(|&r| (v[r] - c(1.0, 0.0)).norm() < tol)?;
        if v.iter().enumerate().any(|(r, z)| r != row && z.norm() > tol) {
            return None;
        }
        perm.push(row);
    }
    let distinct: BTreeSet<usize> = perm.iter().copied().collect();
    (distinct.len() == perm.len()).then_some(perm)
}

/// Generators and the group they close to.
#[derive(Debug, Clone)]
pub struct PermutationSet {
    pub generators: Vec<(String, GateMatrix)>,
    pub group: Vec<GateMatrix>,
}

/// Closes a set of permutations under composition.
pub fn closure(generators: &[Vec<usize>]) -> BTreeSet<Vec<usize>> {
    let Some(first) = generators.first() else { return BTreeSet::new() };
    let n = first.len();
    let mut group: BTreeSet<Vec<usize>> = BTreeSet::from([(0..n).collect()]);
    let mut frontier: Vec<Vec<usize>> = group.iter().cloned().collect();
    while let Some(p) = frontier.pop() {
        for g in generators {
            let q: Vec<usize> = (0..n).map(|i| g[p[i]]).collect();
            if group.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    group
}

/// The permutation gates reachable from the simulated SWAP, CNOT, CNOT.SWAP and FFO gates.
pub fn permutation_gate_set() -> Result<PermutationSet, ProtocolError> {
    let cs = cnot_swap_from(&eg1()?.gate, EgCase::First)?;
    let sw = swap()?;
    let (fl, fr) = (ffo_left()?, ffo_right()?);
    let generators = vec![
        ("SWAP (23)".to_string(), sw.clone()),
        ("CNOT (34)".to_string(), cs.mul(&sw)),
        ("CNOT.SWAP (243)".to_string(), cs),
        ("FFO_l (13)(24)".to_string(), fl.clone()),
        ("FFO_r (12)(34)".to_string(), fr.clone()),
        ("FFO_r.FFO_l (14)(23)".to_string(), fr.mul(&fl)),
    ];
    let mut perms = Vec::new();
    for (name, g) in &generators {
        let p = as_permutation(g, 1e-9).ok_or_else(|| ProtocolError::Catalog {
            name: name.clone(),
            msg: "not a permutation up to phase".into(),
        })?;
        perms.push(p);
    }
    let group = closure(&perms).into_iter().map(|p| GateMatrix::permutation(&p)).collect();
    Ok(PermutationSet { generators, group })
}

/// Whether the simulated chain lands on CNOT.SWAP for this entangling gate.
pub fn reaches_cnot_swap(eg: &GateMatrix, case: EgCase) -> Result<(bool, f64), ProtocolError> {
    Ok(equal_up_to_phase(&cnot_swap_from(eg, case)?, &cnot_swap_printed()))
}

/// SWAP followed by CNOT.SWAP, i.e. the matrix product `CNOT.SWAP * SWAP`.
pub fn cnot_from_swap() -> Result<GateMatrix, ProtocolError> {
    Ok(cnot_swap_printed().mul(&swap_gate()))
}
