use std::f64::consts::PI;

use anyon_state::AnyonState;
use num_complex::Complex64;
use paper_protocols::{
    branch_gates, equal_up_to_phase, extract_gate, load, qubit_phase_ancilla, qutrit_phase_ancilla, shipped_scripts,
    GateMatrix, ProtocolError, ProtocolKind, Register,
};
use protocol_vm::{enumerate, parse_script, Mode, ProtocolScript, Terminal};
use proptest::prelude::*;

fn e(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, t)
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Retry budget for whole-tree enumerations. Every retry re-enters the same checkpoint,
/// so deeper paths only repeat branches already covered; the path count grows about
/// fivefold per two extra retries.
const ENUMERATION_BOUND: u32 = 3;

fn bounded(script: &ProtocolScript) -> ProtocolScript {
    script.with_loop_bound(script.loop_bound.min(ENUMERATION_BOUND))
}

/// Gate of every reachable `emit_gate` branch, keyed by tag. Each must be leak-free.
fn tagged_gates(name: &str, input: Register, ancilla: Option<&AnyonState>) -> Vec<(Option<String>, GateMatrix)> {
    let p = load(name).unwrap();
    let mut out = Vec::new();
    for b in branch_gates(&bounded(&p.script), input, input, ancilla).unwrap() {
        let Terminal::EmitGate(tag) = &b.terminal else { continue };
        if b.probabilities.iter().sum::<f64>() < 1e-12 {
            continue;
        }
        assert!(b.leakage() < 1e-9, "{name} {:?} leaks: {:?}", b.outcomes, b.probabilities);
        out.push((tag.clone(), b.gate()));
    }
    assert!(!out.is_empty(), "{name} never emits a gate");
    out
}

fn close(a: &GateMatrix, b: &GateMatrix) -> bool {
    equal_up_to_phase(a, b).0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn qubit_gate_for_any_phase(phi in -PI..PI) {
        let anc = Register::Qubit.state(&qubit_phase_ancilla(phi)).unwrap();
        let direct = GateMatrix::diagonal(&[one(), e(phi)]);
        for name in ["qubit_gate", "qubit_gate_bonderson"] {
            for (tag, g) in tagged_gates(name, Register::Qubit, Some(&anc)) {
                let want = match tag.as_deref() {
                    Some("direct") => direct.clone(),
                    Some("swapped") => direct.conj(),
                    other => panic!("unexpected tag {other:?}"),
                };
                prop_assert!(close(&g, &want), "{name} {tag:?} phi {phi}\n{g}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn qutrit_gate_for_any_phase(alpha in -PI..PI) {
        let anc = Register::Qutrit.state(&qutrit_phase_ancilla(alpha)).unwrap();
        let gate = GateMatrix::diagonal(&[one(), e(alpha), one()]);
        let mut seen = Vec::new();
        for (tag, g) in tagged_gates("theorem1", Register::Qutrit, Some(&anc)) {
            let want = match tag.as_deref() {
                Some("case_i") | Some("case_ii") => gate.clone(),
                Some("case_iii") => gate.adjoint(),
                other => panic!("unexpected tag {other:?}"),
            };
            prop_assert!(close(&g, &want), "{tag:?} alpha {alpha}\n{g}");
            seen.push(tag.unwrap());
        }
        for t in ["case_i", "case_ii", "case_iii"] {
            prop_assert!(seen.iter().any(|s| s == t), "{t} never reached");
        }
    }
}

#[test]
fn unequal_moduli_leak() {
    let p = load("qubit_gate").unwrap();
    let anc = Register::Qubit.state(&[one(), Complex64::from_polar(2.0, 0.4)]).unwrap();
    let r = extract_gate(&p.script, Register::Qubit, Register::Qubit, Some(&anc), &Mode::ForceRecorded);
    assert!(matches!(r, Err(ProtocolError::Leakage(_))), "{r:?}");
    let leaky = branch_gates(&bounded(&p.script), Register::Qubit, Register::Qubit, Some(&anc)).unwrap();
    assert!(leaky.iter().any(|b| b.leakage() > 1e-3));
}

#[test]
fn case_three_never_sees_zero_or_four() {
    let p = load("theorem1").unwrap();
    let anc = Register::Qutrit.state(&qutrit_phase_ancilla(0.7)).unwrap();
    for k in 0..3 {
        let e = enumerate(&bounded(&p.script), &Register::Qutrit.basis_state(k).tensor(&anc).unwrap()).unwrap();
        let never = e.probability_of(|t| *t == Terminal::Abort("never observed".into()));
        assert!(never < 1e-12, "{never}");
        let site = "measure_pair 3 [2] > fuse 3 [2] > fuse 3";
        for charge in [0, 4] {
            assert!(
                e.zero_branches.iter().any(|z| z.charge == charge && z.at.ends_with(site)),
                "outcome {charge} not reported as a zero branch: {:?}",
                e.zero_branches
            );
        }
    }
}

#[test]
fn sign_repair_and_freedman_swap() {
    let repair = tagged_gates("qutrit_sign_repair", Register::Qutrit, None);
    assert!(close(&repair[0].1, &GateMatrix::diagonal(&[one(), -one(), one()])));
    let swap = tagged_gates("freedman_swap", Register::Qubit, None);
    assert!(close(&swap[0].1, &GateMatrix::permutation(&[1, 0])));
}

#[test]
fn empty_script_is_the_identity() {
    let s = parse_script("shape 1 2 2 1 total 0").unwrap();
    let g = extract_gate(&s, Register::Qubit, Register::Qubit, None, &Mode::ForceRecorded);
    assert!(matches!(g, Err(ProtocolError::NotAGate(_))));
    let s = parse_script("shape 1 2 2 1 total 0\nemit_gate").unwrap();
    let g = extract_gate(&s, Register::Qubit, Register::Qubit, None, &Mode::ForceRecorded).unwrap();
    assert!(g.gate.max_abs_diff(&GateMatrix::identity(2)) < 1e-15);
}

#[test]
fn every_gate_script_is_leak_free() {
    for p in shipped_scripts().unwrap() {
        if p.kind != ProtocolKind::Gate {
            continue;
        }
        let input = p.input.unwrap();
        let anc = p.default_ancilla().unwrap();
        tagged_gates(&p.name, input, anc.as_ref());
    }
}

#[test]
fn probability_is_conserved_everywhere() {
    for p in shipped_scripts().unwrap() {
        for input in p.basis_inputs().unwrap() {
            let e = enumerate(&bounded(&p.script), &input).unwrap();
            let total = e.total_probability() + e.truncated_mass;
            assert!((total - 1.0).abs() < 1e-9, "{}: {total}", p.name);
        }
    }
}

#[test]
fn probability_is_conserved_at_the_shipped_bound() {
    let p = load("qubit_gate").unwrap();
    let anc = p.default_ancilla().unwrap().unwrap();
    let e = enumerate(&p.script, &p.basis_input(1, Some(&anc)).unwrap()).unwrap();
    assert!((e.total_probability() + e.truncated_mass - 1.0).abs() < 1e-9);
    assert!(e.truncated_mass < 1e-2, "{}", e.truncated_mass);
}
