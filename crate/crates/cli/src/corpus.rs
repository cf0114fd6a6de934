//! Every printed value the simulator is expected to reproduce, checked in one pass.

use num_complex::Complex64;
use paper_protocols::entangling::*;
use paper_protocols::pipelines::{a1, a1_prime, a_f, b_f};
use paper_protocols::{braid_fixture_suite, load, vector_overlap, GateMatrix, Register};
use protocol_vm::Mode;
use recoupling_core::RecouplingTables;
use serde_json::{json, Value};

use crate::CliError;

/// How an entry is scored: overlap-type numbers must exceed `1 - tol`, deviations must stay below `tol`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    Fidelity,
    Deviation,
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub group: &'static str,
    pub name: String,
    pub measure: Measure,
    pub value: f64,
}

impl Entry {
    pub fn passed(&self, tol: f64) -> bool {
        match self.measure {
            Measure::Fidelity => self.value > 1.0 - tol,
            Measure::Deviation => self.value < tol,
        }
    }
}

/// `(labels, power, value)`: `{a b i; c d j}^power` as printed.
pub const SYMBOLS: &[([u8; 6], i32, f64)] = &[
    ([2, 2, 2, 2, 2, 2], 1, 0.0),
    ([2, 2, 2, 2, 2, 4], 1, -std::f64::consts::FRAC_1_SQRT_2),
    ([2, 2, 0, 2, 2, 4], 1, 0.5),
    ([2, 2, 4, 2, 2, 4], 1, 0.5),
    ([2, 2, 2, 2, 2, 0], 1, std::f64::consts::FRAC_1_SQRT_2),
    ([1, 1, 2, 1, 3, 2], 1, 1.0),
    ([2, 2, 1, 1, 1, 2], 1, std::f64::consts::FRAC_1_SQRT_2),
    ([2, 2, 3, 1, 1, 2], 1, -std::f64::consts::FRAC_1_SQRT_2),
    ([4, 2, 3, 1, 1, 2], 1, 1.0),
    ([2, 1, 2, 1, 2, 1], 1, std::f64::consts::FRAC_1_SQRT_2),
    ([2, 3, 2, 1, 2, 1], 1, -std::f64::consts::FRAC_1_SQRT_2),
    ([4, 3, 2, 1, 2, 1], 1, 1.0),
    ([2, 2, 2, 2, 0, 2], 2, 1.0),
    ([2, 2, 0, 2, 2, 0], 1, 0.5),
    ([2, 2, 2, 2, 2, 0], 2, 0.5),
    ([2, 2, 2, 0, 0, 0], 1, 1.0),
    ([2, 2, 2, 2, 2, 4], 2, 0.5),
    ([2, 2, 2, 4, 4, 0], 1, 1.0),
    ([2, 2, 2, 2, 4, 2], 2, 1.0),
    ([2, 2, 4, 2, 2, 0], 1, 0.5),
];

fn gate_fidelity(group: &'static str, name: &str, got: &GateMatrix, want: &GateMatrix) -> Entry {
    Entry { group, name: name.to_string(), measure: Measure::Fidelity, value: got.phase_fidelity(want) }
}

fn vector_fidelity(name: &str, got: &[Complex64], want: &[Complex64]) -> Entry {
    Entry { group: "ancillas", name: name.to_string(), measure: Measure::Fidelity, value: vector_overlap(got, want) }
}

fn symbols(t: &RecouplingTables) -> Vec<Entry> {
    SYMBOLS
        .iter()
        .map(|(s, p, want)| {
            let got = t.six_j(s[0], s[1], s[2], s[3], s[4], s[5]).powi(*p);
            let name = format!("{{{} {} {}; {} {} {}}}^{p} = {want}", s[0], s[1], s[2], s[3], s[4], s[5]);
            Entry { group: "symbols", name, measure: Measure::Deviation, value: (got - want).abs() }
        })
        .collect()
}

fn braids() -> Result<Vec<Entry>, CliError> {
    Ok(braid_fixture_suite()?
        .results
        .into_iter()
        .map(|r| Entry { group: "braids", name: r.name.to_string(), measure: Measure::Fidelity, value: r.fidelity })
        .collect())
}

fn entangling() -> Result<Vec<Entry>, CliError> {
    let (e1, e2) = (eg1()?.gate, eg2()?.gate);
    let (a1, a2) = (aux().mul(&e1), aux().mul(&e2));
    let s = left_sigma2()?;
    let cs1 = cnot_swap_from(&e1, EgCase::First)?;
    let cs2 = cnot_swap_from(&e2, EgCase::Second)?;
    let g = "entangling";
    let order = permutation_gate_set()?.group.len();
    Ok(vec![
        gate_fidelity(g, "EG1", &e1, &eg1_printed()),
        gate_fidelity(g, "EG2", &e2, &eg2_printed()),
        gate_fidelity(g, "AUX.EG1", &a1, &aux_eg1_printed()),
        gate_fidelity(g, "AUX.EG2", &a2, &aux_eg2_printed()),
        gate_fidelity(g, "sigma2.AUX.EG1", &s.mul(&a1), &signed_permutation_1()),
        gate_fidelity(g, "sigma2.AUX.EG2", &s.mul(&a2), &signed_permutation_2()),
        gate_fidelity(g, "CNOT.SWAP from EG1", &cs1, &cnot_swap_printed()),
        gate_fidelity(g, "CNOT.SWAP from EG2", &cs2, &cnot_swap_printed()),
        gate_fidelity(g, "CNOT", &cs1.mul(&swap()?), &cnot_printed()),
        Entry { group: g, name: "permutation group order 24".into(), measure: Measure::Deviation, value: (order as f64 - 24.0).abs() },
    ])
}

fn ancillas() -> Result<Vec<Entry>, CliError> {
    let s3 = 3f64.sqrt();
    let tp = ((-14.0 - 5.0 * s3) / 11.0).atan();
    let gamma = 2.0 * ((3.0 * s3 - 14.0) / 13.0).atan() - std::f64::consts::FRAC_PI_2;
    let one = Complex64::new(1.0, 0.0);
    Ok(vec![
        vector_fidelity(
            "A1",
            &a1()?.amplitudes,
            &[Complex64::from_polar(7f64.sqrt(), tp), Complex64::from_polar(s3, -std::f64::consts::PI / 12.0)],
        ),
        vector_fidelity("A1'", &a1_prime()?.amplitudes, &[one, Complex64::new(3.0, 0.0)]),
        vector_fidelity("A_f", &a_f()?.amplitudes, &[one, Complex64::from_polar(1.0, 2.0 * tp + std::f64::consts::PI / 6.0)]),
        vector_fidelity("B_f", &b_f()?.amplitudes, &[one, Complex64::from_polar(2f64.sqrt(), gamma), one]),
    ])
}

fn gates() -> Result<Vec<Entry>, CliError> {
    let one = Complex64::new(1.0, 0.0);
    let extract = |name: &str, reg: Register| -> Result<GateMatrix, CliError> {
        let p = load(name)?;
        Ok(paper_protocols::extract_gate(&p.script, reg, reg, None, &Mode::ForceRecorded)?.gate)
    };
    Ok(vec![
        gate_fidelity("gates", "qutrit sign repair", &extract("qutrit_sign_repair", Register::Qutrit)?, &GateMatrix::diagonal(&[one, -one, one])),
        gate_fidelity("gates", "Freedman swap", &extract("freedman_swap", Register::Qubit)?, &GateMatrix::permutation(&[1, 0])),
        gate_fidelity("gates", "SWAP", &swap()?, &paper_protocols::swap_gate()),
    ])
}

/// The whole corpus, in a fixed order.
pub fn corpus(tables: &RecouplingTables) -> Result<Vec<Entry>, CliError> {
    let mut out = symbols(tables);
    out.extend(braids()?);
    out.extend(entangling()?);
    out.extend(ancillas()?);
    out.extend(gates()?);
    Ok(out)
}

pub fn report(entries: &[Entry], tol: f64) -> Value {
    let rows: Vec<Value> = entries
        .iter()
        .map(|e| {
            json!({
                "group": e.group,
                "name": e.name,
                "measure": match e.measure { Measure::Fidelity => "fidelity", Measure::Deviation => "deviation" },
                "value": e.value,
                "passed": e.passed(tol),
            })
        })
        .collect();
    let failed = entries.iter().filter(|e| !e.passed(tol)).count();
    json!({
        "schema": crate::SCHEMA,
        "tol": tol,
        "total": entries.len(),
        "failed": failed,
        "fixtures": rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_passes() {
        let t = recoupling_core::build_tables().unwrap();
        let c = corpus(&t).unwrap();
        assert!(c.len() > 40);
        for e in &c {
            assert!(e.passed(1e-9), "{} {}: {}", e.group, e.name, e.value);
        }
    }

    #[test]
    fn scoring() {
        let e = Entry { group: "g", name: "n".into(), measure: Measure::Deviation, value: 1e-6 };
        assert!(e.passed(1e-5) && !e.passed(1e-7));
        let e = Entry { measure: Measure::Fidelity, value: 1.0 - 1e-6, ..e };
        assert!(e.passed(1e-5) && !e.passed(1e-7));
    }
}
