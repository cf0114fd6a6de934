use num_complex::Complex64;

use crate::{AnyonState, StateError, TreeShape};

/// Encodings of logical qudits in four anyons with vacuum total charge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LogicalKind {
    /// Anyons `1 2 2 1`, basis = middle edge in `{1, 3}`.
    Qubit1221,
    /// Anyons `2 2 2 2`, basis = first internal edge in `{0, 2, 4}`.
    Qutrit2222,
}

impl LogicalKind {
    pub fn shape(self) -> TreeShape {
        match self {
            LogicalKind::Qubit1221 => TreeShape::new_unchecked(vec![1, 2, 2, 1], 0),
            LogicalKind::Qutrit2222 => TreeShape::new_unchecked(vec![2, 2, 2, 2], 0),
        }
    }

    pub fn dim(self) -> usize {
        self.labels().len()
    }

    /// Logical basis labels in order.
    pub fn labels(self) -> &'static [u8] {
        match self {
            LogicalKind::Qubit1221 => &[1, 3],
            LogicalKind::Qutrit2222 => &[0, 2, 4],
        }
    }

    pub fn basis_keys(self) -> Vec<Vec<u8>> {
        match self {
            LogicalKind::Qubit1221 => vec![vec![1, 1], vec![3, 1]],
            LogicalKind::Qutrit2222 => vec![vec![0, 2], vec![2, 2], vec![4, 2]],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LogicalKind::Qubit1221 => "qubit",
            LogicalKind::Qutrit2222 => "qutrit",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "qubit" | "qubit1221" => Some(LogicalKind::Qubit1221),
            "qutrit" | "qutrit2222" => Some(LogicalKind::Qutrit2222),
            _ => None,
        }
    }

    /// Reads the logical amplitudes back out of a state of this shape.
    pub fn decode(self, s: &AnyonState) -> Result<Vec<Complex64>, StateError> {
        let shape = self.shape();
        if s.shape() != &shape {
            return Err(StateError::ShapeMismatch(s.shape().to_string(), shape.to_string()));
        }
        Ok(self.basis_keys().iter().map(|k| s.amplitude(k)).collect())
    }
}

impl AnyonState {
    /// Normalized logical state from amplitudes in basis order.
    pub fn logical_state(kind: LogicalKind, amps: &[Complex64]) -> Result<Self, StateError> {
        if amps.len() != kind.dim() {
            return Err(StateError::Arity { expected: kind.dim(), got: amps.len() });
        }
        let map = kind.basis_keys().into_iter().zip(amps.iter().copied()).collect();
        AnyonState::from_amplitudes(kind.shape(), map)?.renormalized()
    }
}
