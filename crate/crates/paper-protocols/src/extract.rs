use anyon_state::AnyonState;
use num_complex::Complex64;
use protocol_vm::{enumerate, run, Mode, ProtocolScript, Terminal};

use crate::gate::GateMatrix;
use crate::register::Register;
use crate::ProtocolError;

/// Agreement required between per-column post-selection probabilities.
pub const LEAKAGE_TOL: f64 = 1e-9;

/// A gate read off one branch path.
#[derive(Debug, Clone)]
pub struct Extraction {
    pub gate: GateMatrix,
    /// Post-selection probability shared by every column.
    pub probability: f64,
    pub outcomes: Vec<u8>,
    pub terminal: Terminal,
}

fn input_state(input: Register, k: usize, ancilla: Option<&AnyonState>) -> Result<AnyonState, ProtocolError> {
    let b = input.basis_state(k);
    Ok(match ancilla {
        Some(a) => b.tensor(a)?,
        None => b,
    })
}

/// Runs `script` on every logical basis input (tensored with `ancilla` on the right)
/// and assembles the output columns. Each column is weighted by the square root of
/// its post-selection probability; unequal weights mean the measurements learned
/// something about the input, which is reported as leakage.
pub fn extract_gate(
    script: &ProtocolScript,
    input: Register,
    output: Register,
    ancilla: Option<&AnyonState>,
    mode: &Mode,
) -> Result<Extraction, ProtocolError> {
    let mut cols = Vec::new();
    let mut probs = Vec::new();
    let mut outcomes = Vec::new();
    let mut terminal = None;
    for k in 0..input.dim() {
        let t = run(script, &input_state(input, k, ancilla)?, mode)?;
        if !matches!(t.terminal, Terminal::EmitGate(_)) {
            return Err(ProtocolError::NotAGate(t.terminal.describe()));
        }
        let (amps, leaked) = output.decode(&t.final_state)?;
        if leaked > LEAKAGE_TOL {
            return Err(ProtocolError::Leakage(format!("column {k} leaves the logical space (weight {leaked:e})")));
        }
        let w = t.probability.sqrt();
        cols.push(amps.into_iter().map(|z| z * w).collect::<Vec<_>>());
        probs.push(t.probability);
        if k == 0 {
            outcomes = t.outcomes();
            terminal = Some(t.terminal.clone());
        }
    }
    let p0 = probs[0];
    if probs.iter().any(|p| (p - p0).abs() > LEAKAGE_TOL) {
        return Err(ProtocolError::Leakage(format!("column post-selection probabilities differ: {probs:?}")));
    }
    let gate = square(cols, input, output)?;
    let s = p0.sqrt();
    let mut gate = gate.scaled(Complex64::new(1.0 / s, 0.0));
    gate.scale = s;
    Ok(Extraction { gate, probability: p0, outcomes, terminal: terminal.expect("at least one column") })
}

fn square(cols: Vec<Vec<Complex64>>, input: Register, output: Register) -> Result<GateMatrix, ProtocolError> {
    if input.dim() != output.dim() {
        return Err(ProtocolError::Dimension { expected: input.dim(), got: output.dim() });
    }
    Ok(GateMatrix::from_columns(&cols).with_basis(output.labels()))
}

/// Linear map of one enumerated branch path, columns weighted by √probability.
#[derive(Debug, Clone)]
pub struct BranchGate {
    pub outcomes: Vec<u8>,
    pub terminal: Terminal,
    pub probabilities: Vec<f64>,
    pub weighted: GateMatrix,
}

impl BranchGate {
    /// Largest difference between column probabilities (0 for a leak-free branch).
    pub fn leakage(&self) -> f64 {
        let max = self.probabilities.iter().copied().fold(0.0, f64::max);
        let min = self.probabilities.iter().copied().fold(f64::INFINITY, f64::min);
        max - min
    }

    /// The branch gate with the common post-selection factor removed.
    pub fn gate(&self) -> GateMatrix {
        let mean = self.probabilities.iter().sum::<f64>() / self.probabilities.len() as f64;
        self.weighted.scaled(Complex64::new(1.0 / mean.sqrt(), 0.0))
    }
}

/// Every branch path over all basis inputs, keyed by outcome sequence.
pub fn branch_gates(
    script: &ProtocolScript,
    input: Register,
    output: Register,
    ancilla: Option<&AnyonState>,
) -> Result<Vec<BranchGate>, ProtocolError> {
    let dim = input.dim();
    let mut out: Vec<BranchGate> = Vec::new();
    for k in 0..dim {
        let e = enumerate(script, &input_state(input, k, ancilla)?)?;
        for b in e.branches {
            let outcomes = b.outcomes();
            let idx = match out.iter().position(|g| g.outcomes == outcomes) {
                Some(i) => i,
                None => {
                    out.push(BranchGate {
                        outcomes: outcomes.clone(),
                        terminal: b.terminal.clone(),
                        probabilities: vec![0.0; dim],
                        weighted: GateMatrix::from_columns(&vec![vec![Complex64::new(0.0, 0.0); output.dim()]; dim]),
                    });
                    out.len() - 1
                }
            };
            let col: Vec<Complex64> = if matches!(b.terminal, Terminal::EmitGate(_)) || b.final_state.shape() == &output.shape() {
                let (amps, _) = output.decode(&b.final_state)?;
                amps.into_iter().map(|z| z * b.probability.sqrt()).collect()
            } else {
                vec![Complex64::new(0.0, 0.0); output.dim()]
            };
            let g = &mut out[idx];
            g.probabilities[k] = b.probability;
            let mut cols: Vec<Vec<Complex64>> = (0..dim).map(|c| g.weighted.column(c)).collect();
            cols[k] = col;
            g.weighted = GateMatrix::from_columns(&cols);
        }
    }
    out.sort_by(|a, b| a.outcomes.cmp(&b.outcomes));
    Ok(out)
}

/// Runs a preparation script from its start state and reads the logical amplitudes.
pub fn prepare(
    script: &ProtocolScript,
    start: &AnyonState,
    output: Register,
    mode: &Mode,
) -> Result<(Vec<Complex64>, protocol_vm::ExecutionTrace), ProtocolError> {
    let t = run(script, start, mode)?;
    if !matches!(t.terminal, Terminal::EmitAncilla(_) | Terminal::EmitGate(_) | Terminal::Finished) {
        return Err(ProtocolError::NotAGate(t.terminal.describe()));
    }
    let (amps, leaked) = output.decode(&t.final_state)?;
    if leaked > LEAKAGE_TOL {
        return Err(ProtocolError::Leakage(format!("prepared state leaves the logical space (weight {leaked:e})")));
    }
    Ok((amps, t))
}
