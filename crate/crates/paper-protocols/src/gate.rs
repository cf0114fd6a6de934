use std::fmt;

use num_complex::Complex64;

use crate::ProtocolError;

/// Default closeness threshold for gate comparisons.
pub const GATE_TOL: f64 = 1e-9;

/// Square complex matrix on a labelled logical basis, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GateMatrix {
    dim: usize,
    entries: Vec<Complex64>,
    basis: Vec<String>,
    /// Post-selection amplitude factor removed during extraction (1 for exact unitaries).
    pub scale: f64,
}

fn default_basis(dim: usize) -> Vec<String> {
    match dim {
        2 => vec!["|1>".into(), "|3>".into()],
        3 => vec!["|0>".into(), "|2>".into(), "|4>".into()],
        4 => ["|11>", "|13>", "|31>", "|33>"].iter().map(|s| s.to_string()).collect(),
        _ => (0..dim).map(|i| format!("|{i}>")).collect(),
    }
}

impl GateMatrix {
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "gate rows must form a square matrix");
        GateMatrix { dim, entries: rows.into_iter().flatten().collect(), basis: default_basis(dim), scale: 1.0 }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect())
    }

    /// Builds the matrix whose `k`-th column is `cols[k]`.
    pub fn from_columns(cols: &[Vec<Complex64>]) -> Self {
        let dim = cols.len();
        let rows = (0..dim).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
        Self::from_rows(rows)
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![Complex64::new(1.0, 0.0); dim])
    }

    pub fn diagonal(d: &[Complex64]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n);
        for (i, &v) in d.iter().enumerate() {
            m.entries[i * n + i] = v;
        }
        m
    }

    fn zeros(dim: usize) -> Self {
        GateMatrix { dim, entries: vec![Complex64::new(0.0, 0.0); dim * dim], basis: default_basis(dim), scale: 1.0 }
    }

    /// Permutation matrix sending basis state `j` to `perm[j]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zeros(n);
        for (j, &i) in perm.iter().enumerate() {
            m.entries[i * n + j] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn with_basis(mut self, basis: Vec<String>) -> Self {
        assert_eq!(basis.len(), self.dim);
        self.basis = basis;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.dim + c]
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.dim).map(|r| self.get(r, c)).collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    m.entries[i * n + j] += a * other.get(k, j);
                }
            }
        }
        m.basis = self.basis.clone();
        m
    }

    /// Kronecker product, `self` acting on the left factor.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim()).map(|r| (0..v.len()).map(|c| self.get(r, c) * v[c]).sum()).collect()
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (a, b) = (self.dim, other.dim);
        let n = a * b;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.entries[i * n + j] = self.get(i / b, j / b) * other.get(i % b, j % b);
            }
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.entries[j * n + i] = self.get(i, j).conj();
            }
        }
        m.basis = self.basis.clone();
        m
    }

    pub fn conj(&self) -> Self {
        let mut m = self.clone();
        m.entries.iter_mut().for_each(|z| *z = z.conj());
        m
    }

    pub fn scaled(&self, by: Complex64) -> Self {
        let mut m = self.clone();
        m.entries.iter_mut().for_each(|z| *z *= by);
        m
    }

    /// Largest entrywise deviation of `U†U` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.adjoint().mul(self);
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((p.get(i, j) - target).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() < tol
    }

    /// `|tr(U†V)| / (‖U‖_F ‖V‖_F)`; equals 1 exactly when the matrices agree up to a global phase and scale.
    pub fn phase_fidelity(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        let mut tr = Complex64::new(0.0, 0.0);
        for (a, b) in self.entries.iter().zip(&other.entries) {
            tr += a.conj() * b;
        }
        let na: f64 = self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let nb: f64 = other.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if na == 0.0 || nb == 0.0 {
            return 0.0;
        }
        tr.norm() / (na * nb)
    }

    /// The global phase `φ` minimizing `‖e^{iφ}U − V‖`.
    pub fn relative_phase(&self, other: &Self) -> Complex64 {
        let mut tr = Complex64::new(0.0, 0.0);
        for (a, b) in self.entries.iter().zip(&other.entries) {
            tr += a.conj() * b;
        }
        if tr.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            tr / tr.norm()
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Entries rescaled so the largest-modulus entry is real and positive.
    pub fn phase_normalized(&self) -> Self {
        let pivot = self.entries.iter().copied().fold(Complex64::new(0.0, 0.0), |best, z| {
            if z.norm() > best.norm() + 1e-12 {
                z
            } else {
                best
            }
        });
        if pivot.norm() == 0.0 {
            return self.clone();
        }
        self.scaled(pivot.conj() / pivot.norm())
    }
}

/// Whether `u` and `v` agree up to a global phase, with the phase fidelity.
pub fn equal_up_to_phase(u: &GateMatrix, v: &GateMatrix) -> (bool, f64) {
    let f = u.phase_fidelity(v);
    (f > 1.0 - GATE_TOL, f)
}

fn rank(rows: &mut [Vec<Complex64>], tol: f64) -> usize {
    let (n, m) = (rows.len(), rows.first().map_or(0, Vec::len));
    let mut r = 0;
    for c in 0..m {
        let Some(p) = (r..n).max_by(|&a, &b| rows[a][c].norm().total_cmp(&rows[b][c].norm())) else { break };
        if rows[p][c].norm() < tol {
            continue;
        }
        rows.swap(r, p);
        for i in 0..n {
            if i != r {
                let f = rows[i][c] / rows[r][c];
                for k in c..m {
                    let v = rows[r][k];
                    rows[i][k] -= f * v;
                }
            }
        }
        r += 1;
    }
    r
}

/// Rank of `U` reshuffled across the split into two qubits.
pub fn operator_schmidt_rank(u: &GateMatrix) -> usize {
    let mut re: Vec<Vec<Complex64>> = vec![vec![Complex64::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            // U[(a b),(c d)] -> M[(a c),(b d)]
            let (a, b, c, d) = (i / 2, i % 2, j / 2, j % 2);
            re[a * 2 + c][b * 2 + d] = u.get(i, j);
        }
    }
    rank(&mut re, 1e-9)
}

pub fn swap_gate() -> GateMatrix {
    GateMatrix::permutation(&[0, 2, 1, 3])
}

/// Two-qubit entangling test: neither a product of local gates nor one composed with SWAP.
pub fn is_entangling(u: &GateMatrix) -> Result<bool, ProtocolError> {
    if u.dim() != 4 {
        return Err(ProtocolError::Dimension { expected: 4, got: u.dim() });
    }
    if !u.is_unitary(1e-9) {
        return Err(ProtocolError::NotUnitary(u.unitarity_defect()));
    }
    Ok(operator_schmidt_rank(u) > 1 && operator_schmidt_rank(&swap_gate().mul(u)) > 1)
}

impl fmt::Display for GateMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.dim {
            let cells: Vec<String> = (0..self.dim)
                .map(|c| {
                    let z = self.get(r, c);
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "{:>6} [{}]", self.basis[r], cells.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn global_phase_is_ignored() {
        let u = GateMatrix::from_rows(vec![vec![c(0.0, 1.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 1.0)]])
            .scaled(c(std::f64::consts::FRAC_1_SQRT_2, 0.0));
        let v = u.scaled(Complex64::from_polar(1.0, 0.7));
        assert!(equal_up_to_phase(&u, &v).0);
        assert!(!equal_up_to_phase(&u, &u.conj()).0);
    }

    #[test]
    fn kron_orders_the_left_factor_first() {
        let x = GateMatrix::permutation(&[1, 0]);
        let i = GateMatrix::identity(2);
        assert_eq!(x.kron(&i), GateMatrix::permutation(&[2, 3, 0, 1]));
        assert_eq!(i.kron(&x), GateMatrix::permutation(&[1, 0, 3, 2]));
    }

    #[test]
    fn schmidt_rank_of_standard_gates() {
        let cnot = GateMatrix::permutation(&[0, 1, 3, 2]);
        assert_eq!(operator_schmidt_rank(&cnot), 2);
        assert_eq!(operator_schmidt_rank(&swap_gate()), 4);
        let h = GateMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, -1.0]]).scaled(c(std::f64::consts::FRAC_1_SQRT_2, 0.0));
        assert_eq!(operator_schmidt_rank(&h.kron(&GateMatrix::identity(2))), 1);
        assert!(is_entangling(&cnot).unwrap());
        assert!(!is_entangling(&swap_gate()).unwrap());
        assert!(!is_entangling(&swap_gate().mul(&h.kron(&h))).unwrap());
        assert!(is_entangling(&GateMatrix::identity(3)).is_err());
    }
}
