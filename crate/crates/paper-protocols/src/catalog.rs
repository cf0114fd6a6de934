//! The shipped `.anyon` scripts, compiled in and optionally overridden from disk.

use std::path::PathBuf;

use anyon_state::AnyonState;
use num_complex::Complex64;
use protocol_vm::{parse_script, ProtocolScript};

use crate::register::Register;
use crate::ProtocolError;

/// Environment variable naming a directory of `.anyon` files that replaces the built-in copies.
pub const PROTOCOL_DIR_ENV: &str = "ANYONVM_PROTOCOL_DIR";

macro_rules! shipped {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../../../protocols/", $name, ".anyon")))),*]
    };
}

/// Name and built-in source of every shipped script, in catalog order.
pub const SHIPPED: &[(&str, &str)] = shipped![
    "qubit_gate",
    "qubit_gate_bonderson",
    "qutrit_forced_fusion",
    "qutrit_sign_repair",
    "theorem1",
    "prepare_a1",
    "prepare_a1_conj",
    "prepare_a1_prime",
    "freedman_swap",
    "fuse_qubit_ancillas",
    "fuse_qubit_ancillas_alt",
    "qutrit_projection_left",
    "qutrit_projection_right",
    "qutrit_fusion",
    "qutrit_pair_fusion",
    "prepare_bf_precursor",
    "prepare_bf_precursor_conj",
    "eg_protocol",
    "cnot_swap_braids",
    "swap",
    "ffo_left",
    "ffo_right",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProtocolKind {
    /// Emits a gate on the input register.
    Gate,
    /// Prepares or combines ancillas.
    Ancilla,
    /// Rewrites the anyon configuration without a fixed logical readout.
    Transform,
}

/// A catalog script together with how its input and output are read.
#[derive(Debug, Clone)]
pub struct Protocol {
    pub name: String,
    pub script: ProtocolScript,
    pub kind: ProtocolKind,
    pub input: Option<Register>,
    /// Register of the ancilla tensored to the right of the input.
    pub ancilla: Option<Register>,
    pub output: Option<Register>,
    /// Fusion-tree labels of the starting basis state, for preparations.
    pub start: Option<Vec<u8>>,
}

fn catalog_err(name: &str, msg: impl Into<String>) -> ProtocolError {
    ProtocolError::Catalog { name: name.to_string(), msg: msg.into() }
}

impl Protocol {
    pub fn from_script(script: ProtocolScript) -> Result<Self, ProtocolError> {
        let name = script.name.clone();
        let register = |key: &str| -> Result<Option<Register>, ProtocolError> {
            script
                .meta(key)
                .map(|v| Register::from_name(v).ok_or_else(|| catalog_err(&name, format!("unknown register {v:?}"))))
                .transpose()
        };
        let kind = match script.meta("kind") {
            Some("gate") => ProtocolKind::Gate,
            Some("ancilla") => ProtocolKind::Ancilla,
            Some("transform") | None => ProtocolKind::Transform,
            Some(other) => return Err(catalog_err(&name, format!("unknown kind {other:?}"))),
        };
        let start = script
            .meta("start")
            .map(|v| {
                v.split_whitespace()
                    .map(|t| t.parse::<u8>().map_err(|_| catalog_err(&name, format!("bad start label {t:?}"))))
                    .collect::<Result<Vec<u8>, _>>()
            })
            .transpose()?;
        let p = Protocol {
            input: register("input")?,
            ancilla: register("ancilla")?,
            output: register("output")?,
            start,
            kind,
            name,
            script,
        };
        p.check_shape()?;
        Ok(p)
    }

    fn check_shape(&self) -> Result<(), ProtocolError> {
        let Some(input) = self.input else { return Ok(()) };
        let mut leaves = input.shape().leaves().to_vec();
        if let Some(a) = self.ancilla {
            leaves.extend_from_slice(a.shape().leaves());
        }
        if leaves != self.script.shape.leaves() {
            return Err(catalog_err(&self.name, format!("input registers do not match shape {}", self.script.shape)));
        }
        Ok(())
    }

    /// Starting state of a preparation script.
    pub fn start_state(&self) -> Result<AnyonState, ProtocolError> {
        let labels = self.start.as_ref().ok_or_else(|| catalog_err(&self.name, "no start state"))?;
        Ok(AnyonState::new_basis_state(self.script.shape.clone(), labels)?)
    }

    /// Input register basis state `k`, tensored with `ancilla` when the script takes one.
    pub fn basis_input(&self, k: usize, ancilla: Option<&AnyonState>) -> Result<AnyonState, ProtocolError> {
        let input = self.input.ok_or_else(|| catalog_err(&self.name, "no input register"))?;
        let b = input.basis_state(k);
        match (self.ancilla, ancilla) {
            (Some(_), Some(a)) => Ok(b.tensor(a)?),
            (Some(_), None) => Err(catalog_err(&self.name, "needs an ancilla")),
            (None, _) => Ok(b),
        }
    }

    /// Every starting state worth enumerating: the start state of a preparation, or each
    /// input basis state with the default ancilla.
    pub fn basis_inputs(&self) -> Result<Vec<AnyonState>, ProtocolError> {
        if self.start.is_some() {
            return Ok(vec![self.start_state()?]);
        }
        let input = self.input.ok_or_else(|| catalog_err(&self.name, "no input register"))?;
        let anc = self.default_ancilla()?;
        (0..input.dim()).map(|k| self.basis_input(k, anc.as_ref())).collect()
    }

    /// A generic equal-norm ancilla of the right kind, for scripts that need one.
    pub fn default_ancilla(&self) -> Result<Option<AnyonState>, ProtocolError> {
        Ok(match self.ancilla {
            None => None,
            Some(Register::Qubit) => Some(Register::Qubit.state(&qubit_phase_ancilla(1.0))?),
            Some(Register::Qutrit) => Some(Register::Qutrit.state(&qutrit_phase_ancilla(1.0))?),
            Some(Register::TwoQubit) => return Err(catalog_err(&self.name, "two-qubit ancillas are not supported")),
        })
    }
}

/// `|1> + e^{i phi}|3>`.
pub fn qubit_phase_ancilla(phi: f64) -> Vec<Complex64> {
    vec![Complex64::new(1.0, 0.0), Complex64::from_polar(1.0, phi)]
}

/// `|0> + sqrt2 e^{i alpha}|2> + |4>`.
pub fn qutrit_phase_ancilla(alpha: f64) -> Vec<Complex64> {
    vec![Complex64::new(1.0, 0.0), Complex64::from_polar(2f64.sqrt(), alpha), Complex64::new(1.0, 0.0)]
}

fn override_dir() -> Option<PathBuf> {
    std::env::var_os(PROTOCOL_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

/// Source text of a catalog script, from the override directory when it has the file.
pub fn source(name: &str) -> Result<String, ProtocolError> {
    if let Some(dir) = override_dir() {
        let path = dir.join(format!("{name}.anyon"));
        if path.exists() {
            return std::fs::read_to_string(&path).map_err(|e| catalog_err(name, format!("{}: {e}", path.display())));
        }
    }
    SHIPPED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| s.to_string())
        .ok_or_else(|| ProtocolError::UnknownProtocol(name.to_string()))
}

pub fn load(name: &str) -> Result<Protocol, ProtocolError> {
    let script = parse_script(&source(name)?)?;
    if script.name != name {
        return Err(catalog_err(name, format!("script is named {:?}", script.name)));
    }
    Protocol::from_script(script)
}

/// Every shipped script, parsed and validated.
pub fn shipped_scripts() -> Result<Vec<Protocol>, ProtocolError> {
    SHIPPED.iter().map(|(n, _)| load(n)).collect()
}

pub fn names() -> Vec<&'static str> {
    SHIPPED.iter().map(|(n, _)| *n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_shipped_script_loads() {
        let all = shipped_scripts().unwrap();
        assert_eq!(all.len(), SHIPPED.len());
        for p in &all {
            assert!(!p.basis_inputs().unwrap().is_empty(), "{}", p.name);
        }
    }

    #[test]
    fn unknown_names_are_reported() {
        assert!(matches!(load("nope"), Err(ProtocolError::UnknownProtocol(_))));
    }

    #[test]
    fn input_registers_must_tile_the_shape() {
        let s = parse_script("name x\nshape 1 2 2 1 total 0\nmeta input qutrit\nemit_gate").unwrap();
        assert!(Protocol::from_script(s).is_err());
    }
}
