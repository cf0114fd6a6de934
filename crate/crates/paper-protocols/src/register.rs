use std::collections::BTreeMap;

use anyon_state::{AnyonState, Key, TreeShape};
use num_complex::Complex64;

use crate::ProtocolError;

/// A logical space embedded in a fusion-tree shape by a list of basis labelings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Register {
    /// `1221`, basis `|1>, |3>` on the middle edge.
    Qubit,
    /// `2222`, basis `|0>, |2>, |4>` on the first internal edge.
    Qutrit,
    /// `1221 1221`, basis `|11>, |13>, |31>, |33>`.
    TwoQubit,
}

impl Register {
    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "qubit" => Some(Register::Qubit),
            "qutrit" => Some(Register::Qutrit),
            "two_qubit" => Some(Register::TwoQubit),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Register::Qubit => "qubit",
            Register::Qutrit => "qutrit",
            Register::TwoQubit => "two_qubit",
        }
    }

    pub fn shape(self) -> TreeShape {
        let leaves = match self {
            Register::Qubit => vec![1, 2, 2, 1],
            Register::Qutrit => vec![2, 2, 2, 2],
            Register::TwoQubit => vec![1, 2, 2, 1, 1, 2, 2, 1],
        };
        TreeShape::new(leaves, 0).expect("register shapes are admissible")
    }

    pub fn keys(self) -> Vec<Key> {
        match self {
            Register::Qubit => vec![vec![1, 1], vec![3, 1]],
            Register::Qutrit => vec![vec![0, 2], vec![2, 2], vec![4, 2]],
            Register::TwoQubit => [(1, 1), (1, 3), (3, 1), (3, 3)].iter().map(|&(a, b)| vec![a, 1, 0, 1, b, 1]).collect(),
        }
    }

    pub fn dim(self) -> usize {
        self.keys().len()
    }

    pub fn labels(self) -> Vec<String> {
        match self {
            Register::Qubit => vec!["|1>".into(), "|3>".into()],
            Register::Qutrit => vec!["|0>".into(), "|2>".into(), "|4>".into()],
            Register::TwoQubit => ["|11>", "|13>", "|31>", "|33>"].iter().map(|s| s.to_string()).collect(),
        }
    }

    /// Normalized state with the given logical amplitudes.
    pub fn state(self, amps: &[Complex64]) -> Result<AnyonState, ProtocolError> {
        if amps.len() != self.dim() {
            return Err(ProtocolError::Dimension { expected: self.dim(), got: amps.len() });
        }
        let map: BTreeMap<Key, Complex64> = self.keys().into_iter().zip(amps.iter().copied()).collect();
        Ok(AnyonState::from_amplitudes(self.shape(), map)?.renormalized()?)
    }

    pub fn basis_state(self, k: usize) -> AnyonState {
        AnyonState::new_basis_state(self.shape(), &self.keys()[k]).expect("register keys are admissible")
    }

    /// Logical amplitudes of `s` and the weight lying outside the logical space.
    pub fn decode(self, s: &AnyonState) -> Result<(Vec<Complex64>, f64), ProtocolError> {
        if s.shape() != &self.shape() {
            return Err(ProtocolError::Shape { expected: self.shape().to_string(), got: s.shape().to_string() });
        }
        let keys = self.keys();
        let amps: Vec<Complex64> = keys.iter().map(|k| s.amplitude(k)).collect();
        let inside: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        Ok((amps, (s.norm_sqr() - inside).max(0.0)))
    }
}

/// `|<u, v>| / (|u| |v|)` for logical amplitude vectors.
pub fn vector_overlap(u: &[Complex64], v: &[Complex64]) -> f64 {
    let dot: Complex64 = u.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
    let nu: f64 = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let nv: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if nu == 0.0 || nv == 0.0 {
        0.0
    } else {
        dot.norm() / (nu * nv)
    }
}

/// Rescales `v` so its first nonzero entry is real positive and the vector has unit norm.
pub fn phase_normalized(v: &[Complex64]) -> Vec<Complex64> {
    let n: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let pivot = v.iter().copied().find(|z| z.norm() > 1e-12).unwrap_or(Complex64::new(1.0, 0.0));
    let f = pivot.conj() / (pivot.norm() * n);
    v.iter().map(|z| z * f).collect()
}
