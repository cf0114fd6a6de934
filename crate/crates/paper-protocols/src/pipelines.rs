//! Ancilla preparation chains: the qubit phase ancillas `A_1`, `A_f` and the qutrit ancilla `B_f`.

use anyon_state::AnyonState;
use num_complex::Complex64;
use protocol_vm::{enumerate, Terminal};

use crate::catalog::{load, Protocol};
use crate::register::{vector_overlap, Register};
use crate::{extract_gate, ProtocolError, LEAKAGE_TOL};

/// Required overlap between branches that are meant to emit the same ancilla.
pub const ANCILLA_TOL: f64 = 1e-9;

/// The logical state left by every branch ending in one `emit_ancilla` tag.
#[derive(Debug, Clone)]
pub struct Emitted {
    pub amplitudes: Vec<Complex64>,
    /// Total probability of reaching the tag.
    pub probability: f64,
    pub branches: usize,
}

/// Enumerates `script` from `input` and collects the branches emitting `tag`.
///
/// All such branches must agree up to phase; a disagreement is reported as leakage.
pub fn emitted(protocol: &Protocol, input: &AnyonState, tag: &str, output: Register) -> Result<Emitted, ProtocolError> {
    let e = enumerate(&protocol.script, input)?;
    let mut best: Option<(f64, Vec<Complex64>)> = None;
    let mut total = 0.0;
    let mut count = 0;
    let mut seen = Vec::new();
    for b in &e.branches {
        if b.terminal != Terminal::EmitAncilla(Some(tag.to_string())) || b.probability < LEAKAGE_TOL {
            continue;
        }
        let (amps, leaked) = output.decode(&b.final_state)?;
        if leaked > LEAKAGE_TOL {
            return Err(ProtocolError::Leakage(format!("{} {tag}: weight {leaked:e} outside the register", protocol.name)));
        }
        seen.push(amps.clone());
        total += b.probability;
        count += 1;
        if best.as_ref().map_or(true, |(p, _)| b.probability > *p) {
            best = Some((b.probability, amps));
        }
    }
    let (_, amplitudes) =
        best.ok_or_else(|| ProtocolError::Catalog { name: protocol.name.clone(), msg: format!("no branch emits {tag}") })?;
    if let Some(bad) = seen.iter().find(|v| vector_overlap(v, &amplitudes) < 1.0 - ANCILLA_TOL) {
        return Err(ProtocolError::Leakage(format!(
            "{} {tag}: branches disagree (overlap {})",
            protocol.name,
            vector_overlap(bad, &amplitudes)
        )));
    }
    Ok(Emitted { amplitudes, probability: total, branches: count })
}

fn prepared(name: &str, tag: &str) -> Result<Emitted, ProtocolError> {
    let p = load(name)?;
    let out = p.output.ok_or_else(|| ProtocolError::Catalog { name: name.into(), msg: "no output register".into() })?;
    emitted(&p, &p.start_state()?, tag, out)
}

fn combine(name: &str, tag: &str, input: &AnyonState, output: Register) -> Result<Emitted, ProtocolError> {
    emitted(&load(name)?, input, tag, output)
}

fn pair(reg: Register, left: &[Complex64], right: &[Complex64]) -> Result<AnyonState, ProtocolError> {
    Ok(reg.state(left)?.tensor(&reg.state(right)?)?)
}

pub fn a1() -> Result<Emitted, ProtocolError> {
    prepared("prepare_a1", "a1")
}

pub fn a1_conj() -> Result<Emitted, ProtocolError> {
    prepared("prepare_a1_conj", "a1_conj")
}

pub fn a1_prime() -> Result<Emitted, ProtocolError> {
    prepared("prepare_a1_prime", "a1_prime")
}

/// The Freedman swap applied to a qubit state.
pub fn swapped(amps: &[Complex64]) -> Result<Vec<Complex64>, ProtocolError> {
    let p = load("freedman_swap")?;
    let g = extract_gate(&p.script, Register::Qubit, Register::Qubit, None, &protocol_vm::Mode::ForceRecorded)?;
    Ok(g.gate.apply(amps))
}

/// Fuses two qubit ancillas; the `direct` tag carries `(a x, b y)`.
pub fn fuse_qubits(left: &[Complex64], right: &[Complex64], tag: &str) -> Result<Emitted, ProtocolError> {
    combine("fuse_qubit_ancillas", tag, &pair(Register::Qubit, left, right)?, Register::Qubit)
}

/// `A_f`: the conjugate of `A_1` fused with the swapped `A_1`.
pub fn a_f() -> Result<Emitted, ProtocolError> {
    let a = a1()?.amplitudes;
    let c = a1_conj()?.amplitudes;
    fuse_qubits(&c, &swapped(&a)?, "direct")
}

/// `A_1` fused with the swapped conjugate, which gives the opposite phase.
pub fn a_f_reversed() -> Result<Emitted, ProtocolError> {
    let a = a1()?.amplitudes;
    let c = a1_conj()?.amplitudes;
    fuse_qubits(&a, &swapped(&c)?, "direct")
}

pub fn bf_precursor() -> Result<Emitted, ProtocolError> {
    prepared("prepare_bf_precursor", "bf_precursor")
}

pub fn bf_precursor_conj() -> Result<Emitted, ProtocolError> {
    prepared("prepare_bf_precursor_conj", "bf_precursor_conj")
}

pub fn project_left(v: &[Complex64]) -> Result<Emitted, ProtocolError> {
    combine("qutrit_projection_left", "projected", &Register::Qutrit.state(v)?, Register::Qutrit)
}

pub fn project_right(v: &[Complex64]) -> Result<Emitted, ProtocolError> {
    combine("qutrit_projection_right", "projected", &Register::Qutrit.state(v)?, Register::Qutrit)
}

/// `(p0 q2, p2 q0 / sqrt2, 0)` for two qutrits supported on `|0>, |2>`.
pub fn qutrit_fusion(p: &[Complex64], q: &[Complex64]) -> Result<Emitted, ProtocolError> {
    combine("qutrit_fusion", "fused", &pair(Register::Qutrit, p, q)?, Register::Qutrit)
}

/// `(v2, v0 + v4, v2)`.
pub fn pair_fusion(v: &[Complex64]) -> Result<Emitted, ProtocolError> {
    combine("qutrit_pair_fusion", "paired", &Register::Qutrit.state(v)?, Register::Qutrit)
}

/// `B_f`, built from the precursor on the left and its conjugate on the right.
pub fn b_f() -> Result<Emitted, ProtocolError> {
    let l = project_left(&bf_precursor()?.amplitudes)?.amplitudes;
    let r = project_left(&bf_precursor_conj()?.amplitudes)?.amplitudes;
    pair_fusion(&qutrit_fusion(&l, &r)?.amplitudes)
}

/// Phase `arg(v[k] / v[0])`.
pub fn relative_phase(v: &[Complex64], k: usize) -> f64 {
    (v[k] / v[0]).arg()
}
