use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use recoupling_core::{admissible_raw, fmt_g17, ChargeLabel, LEVEL};

use crate::{tables, StateError, TreeShape, MIN_PROBABILITY};

/// Internal edge labels `(c_2, .., c_{n-1})`.
pub type Key = Vec<u8>;

/// Marks an edge that a block rewrite has absorbed.
const HOLE: u8 = u8::MAX;

/// Amplitudes below this are dropped after every move.
const PRUNE: f64 = 1e-15;

/// How a charge measurement picks its outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Policy {
    /// Born-rule draw; the payload is a uniform variate in `[0, 1)` supplied by the caller.
    Sample(f64),
    /// Post-select this charge.
    Force(u8),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementOutcome {
    pub charge: ChargeLabel,
    pub probability: f64,
    pub forced: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnyonState {
    shape: TreeShape,
    amps: BTreeMap<Key, Complex64>,
}

type BlockMap = BTreeMap<(Vec<u8>, Vec<u8>), Complex64>;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn key_of(edges: &[u8]) -> Key {
    if edges.len() <= 2 {
        Vec::new()
    } else {
        edges[1..edges.len() - 1].to_vec()
    }
}

impl AnyonState {
    pub fn from_amplitudes(shape: TreeShape, amps: BTreeMap<Key, Complex64>) -> Result<Self, StateError> {
        let valid = shape.labelings();
        for k in amps.keys() {
            if !valid.contains(k) {
                return Err(StateError::InadmissibleLabeling(k.clone()));
            }
        }
        Ok(Self::raw(shape, amps))
    }

    fn raw(shape: TreeShape, mut amps: BTreeMap<Key, Complex64>) -> Self {
        amps.retain(|_, v| v.norm() > PRUNE);
        AnyonState { shape, amps }
    }

    pub fn new_basis_state(shape: TreeShape, labeling: &[u8]) -> Result<Self, StateError> {
        let mut m = BTreeMap::new();
        m.insert(labeling.to_vec(), Complex64::new(1.0, 0.0));
        Self::from_amplitudes(shape, m)
    }

    pub fn shape(&self) -> &TreeShape {
        &self.shape
    }

    pub fn leaves(&self) -> &[u8] {
        self.shape.leaves()
    }

    pub fn amplitudes(&self) -> &BTreeMap<Key, Complex64> {
        &self.amps
    }

    pub fn amplitude(&self, key: &[u8]) -> Complex64 {
        self.amps.get(key).copied().unwrap_or_else(zero)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|v| v.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn renormalized(&self) -> Result<Self, StateError> {
        let n = self.norm();
        if n < PRUNE {
            return Err(StateError::ZeroState);
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, by: Complex64) -> Self {
        Self::raw(self.shape.clone(), self.amps.iter().map(|(k, v)| (k.clone(), v * by)).collect())
    }

    /// Superposition of two states of the same shape.
    pub fn add(&self, other: &Self) -> Result<Self, StateError> {
        self.check_same_shape(other)?;
        let mut m = self.amps.clone();
        for (k, v) in &other.amps {
            *m.entry(k.clone()).or_insert_with(zero) += v;
        }
        Ok(Self::raw(self.shape.clone(), m))
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), StateError> {
        if self.shape != other.shape {
            return Err(StateError::ShapeMismatch(self.shape.to_string(), other.shape.to_string()));
        }
        Ok(())
    }

    /// `<self|other>`.
    pub fn overlap(&self, other: &Self) -> Result<Complex64, StateError> {
        self.check_same_shape(other)?;
        Ok(self.amps.iter().map(|(k, v)| v.conj() * other.amplitude(k)).sum())
    }

    /// `|<self|other>| / (|self| |other|)`.
    pub fn fidelity(&self, other: &Self) -> Result<f64, StateError> {
        let o = self.overlap(other)?;
        Ok(o.norm() / (self.norm() * other.norm()))
    }

    fn edges(&self, key: &[u8]) -> Vec<u8> {
        let l = self.shape.leaves();
        if l.len() == 1 {
            return vec![l[0]];
        }
        let mut e = Vec::with_capacity(l.len());
        e.push(l[0]);
        e.extend_from_slice(key);
        e.push(self.shape.total());
        e
    }

    fn check_pos(&self, i: usize, width: usize) -> Result<(), StateError> {
        let len = self.shape.len();
        if i == 0 || i + width - 1 > len {
            return Err(StateError::Position { pos: i + width - 1, len });
        }
        Ok(())
    }

    /// Exchanges anyons `i` and `i+1`; `sign > 0` is the positive crossing.
    pub fn braid(&self, i: usize, sign: i8) -> Result<Self, StateError> {
        self.check_pos(i, 2)?;
        let t = tables();
        let lv = self.shape.leaves();
        let (a, b) = (lv[i - 1], lv[i]);
        let mut nl = lv.to_vec();
        nl.swap(i - 1, i);
        let r = |x: u8, y: u8, z: u8| -> Complex64 {
            if sign > 0 {
                t.r(x, y, z)
            } else {
                t.r(y, x, z).conj()
            }
        };
        let mut out: BTreeMap<Key, Complex64> = BTreeMap::new();
        for (key, &v) in &self.amps {
            let c = self.edges(key);
            if i == 1 {
                *out.entry(key.clone()).or_insert_with(zero) += v * r(a, b, c[1]);
                continue;
            }
            let (x, e, w) = (c[i - 2], c[i - 1], c[i]);
            for f in 0..=LEVEL {
                let fv = t.f(x, a, b, w, e, f);
                if fv == 0.0 {
                    continue;
                }
                let phase = v * fv * r(a, b, f);
                for e2 in 0..=LEVEL {
                    let gv = t.f(x, b, a, w, e2, f);
                    if gv == 0.0 {
                        continue;
                    }
                    let mut nc = c.clone();
                    nc[i - 1] = e2;
                    *out.entry(key_of(&nc)).or_insert_with(zero) += phase * gv;
                }
            }
        }
        Ok(Self::raw(TreeShape::new_unchecked(nl, self.shape.total()), out))
    }

    /// Rewrites into a basis where leaves `i..=j` fuse among themselves first.
    /// Entries are keyed by the outer edges (block edges replaced by holes) and
    /// the running block charges `g_i .. g_j`.
    fn to_block(&self, i: usize, j: usize) -> BlockMap {
        let t = tables();
        let lv = self.shape.leaves();
        let mut out = BlockMap::new();
        for (key, &v) in &self.amps {
            let c = self.edges(key);
            let mut cur: Vec<(Complex64, Vec<u8>)> = vec![(v, vec![lv[i - 1]])];
            for k in i + 1..=j {
                let mut next = Vec::new();
                for (amp, g) in cur {
                    if i == 1 {
                        let mut g2 = g.clone();
                        g2.push(c[k - 1]);
                        next.push((amp, g2));
                        continue;
                    }
                    let x = c[i - 2];
                    let gp = *g.last().unwrap();
                    let lk = lv[k - 1];
                    let (e, w) = (c[k - 2], c[k - 1]);
                    for h in 0..=LEVEL {
                        let fv = t.f(x, gp, lk, w, e, h);
                        if fv != 0.0 {
                            let mut g2 = g.clone();
                            g2.push(h);
                            next.push((amp * fv, g2));
                        }
                    }
                }
                cur = next;
            }
            let mut outer = c.clone();
            for slot in outer.iter_mut().take(j - 1).skip(i - 1) {
                *slot = HOLE;
            }
            for (amp, g) in cur {
                *out.entry((outer.clone(), g)).or_insert_with(zero) += amp;
            }
        }
        // the same rule as after every move, so cancelled block charges read as exactly zero
        out.retain(|_, v| v.norm() > PRUNE);
        out
    }

    fn from_block(shape: TreeShape, block: &BlockMap, i: usize, j: usize) -> Self {
        let t = tables();
        let lv = shape.leaves();
        let mut out: BTreeMap<Key, Complex64> = BTreeMap::new();
        for ((outer, g), &v) in block {
            let mut cur: Vec<(Complex64, Vec<u8>, Vec<u8>)> = vec![(v, outer.clone(), g.clone())];
            for k in (i + 1..=j).rev() {
                let mut next = Vec::new();
                for (amp, c, gg) in cur {
                    if i == 1 {
                        let mut c2 = c.clone();
                        c2[k - 2] = gg[k - i - 1];
                        next.push((amp, c2, gg[..gg.len() - 1].to_vec()));
                        continue;
                    }
                    let x = c[i - 2];
                    let h = gg[gg.len() - 1];
                    let gp = gg[gg.len() - 2];
                    let lk = lv[k - 1];
                    let w = c[k - 1];
                    for e in 0..=LEVEL {
                        let fv = t.f(x, gp, lk, w, e, h);
                        if fv != 0.0 {
                            let mut c2 = c.clone();
                            c2[k - 2] = e;
                            next.push((amp * fv, c2, gg[..gg.len() - 1].to_vec()));
                        }
                    }
                }
                cur = next;
            }
            for (amp, c, _) in cur {
                *out.entry(key_of(&c)).or_insert_with(zero) += amp;
            }
        }
        Self::raw(shape, out)
    }

    /// Outcome distribution for the total charge of leaves `i..=j`.
    pub fn block_probabilities(&self, i: usize, j: usize) -> Result<BTreeMap<u8, f64>, StateError> {
        self.check_block(i, j)?;
        let n = self.norm_sqr();
        if n < PRUNE {
            return Err(StateError::ZeroState);
        }
        let mut p: BTreeMap<u8, f64> = BTreeMap::new();
        for ((_, g), v) in self.to_block(i, j) {
            *p.entry(*g.last().unwrap()).or_insert(0.0) += v.norm_sqr() / n;
        }
        Ok(p)
    }

    fn check_block(&self, i: usize, j: usize) -> Result<(), StateError> {
        if i == 0 || j < i || j > self.shape.len() {
            return Err(StateError::Position { pos: j, len: self.shape.len() });
        }
        Ok(())
    }

    /// Unnormalized projection onto block charge `b`.
    pub fn project_block(&self, i: usize, j: usize, b: u8) -> Result<Self, StateError> {
        self.check_block(i, j)?;
        let mut d = self.to_block(i, j);
        d.retain(|(_, g), _| *g.last().unwrap() == b);
        Ok(Self::from_block(self.shape.clone(), &d, i, j))
    }

    fn choose(&self, i: usize, j: usize, policy: Policy) -> Result<MeasurementOutcome, StateError> {
        let probs = self.block_probabilities(i, j)?;
        let (charge, probability, forced) = match policy {
            Policy::Force(c) => {
                let p = probs.get(&c).copied().unwrap_or(0.0);
                if p < MIN_PROBABILITY {
                    return Err(StateError::ImpossibleOutcome { charge: c, probability: p });
                }
                (c, p, true)
            }
            Policy::Sample(u) => {
                let live: Vec<(u8, f64)> = probs.into_iter().filter(|&(_, p)| p >= MIN_PROBABILITY).collect();
                let total: f64 = live.iter().map(|x| x.1).sum();
                let target = u.clamp(0.0, 1.0) * total;
                let mut acc = 0.0;
                let mut pick = *live.last().ok_or(StateError::ZeroState)?;
                for &(c, p) in &live {
                    acc += p;
                    if target < acc {
                        pick = (c, p);
                        break;
                    }
                }
                (pick.0, pick.1, false)
            }
        };
        Ok(MeasurementOutcome {
            charge: ChargeLabel::new(charge as i64)?,
            probability,
            forced,
        })
    }

    /// Ideal projective measurement of the total charge of leaves `i..=j`.
    pub fn measure_block(&self, i: usize, j: usize, policy: Policy) -> Result<(MeasurementOutcome, Self), StateError> {
        let m = self.choose(i, j, policy)?;
        let s = self.project_block(i, j, m.charge.value())?.renormalized()?;
        Ok((m, s))
    }

    pub fn measure_pair(&self, i: usize, policy: Policy) -> Result<(MeasurementOutcome, Self), StateError> {
        self.check_pos(i, 2)?;
        self.measure_block(i, i + 1, policy)
    }

    /// Measures the charge of anyons `i, i+1` and merges them into one anyon of that charge.
    pub fn fuse_pair(&self, i: usize, policy: Policy) -> Result<(MeasurementOutcome, Self), StateError> {
        let (m, s) = self.measure_pair(i, policy)?;
        Ok((m, s.merge(i, m.charge.value())))
    }

    /// Replaces leaves `i, i+1` of a state already projected onto charge `b` by one leaf.
    fn merge(&self, i: usize, b: u8) -> Self {
        let d = self.to_block(i, i + 1);
        let mut out: BTreeMap<Key, Complex64> = BTreeMap::new();
        for ((outer, g), v) in d {
            if g[1] != b {
                continue;
            }
            let mut c = outer.clone();
            c.remove(i - 1);
            if i == 1 {
                c[0] = b;
            }
            *out.entry(key_of(&c)).or_insert_with(zero) += v;
        }
        let lv = self.shape.leaves();
        let mut nl = lv[..i - 1].to_vec();
        nl.push(b);
        nl.extend_from_slice(&lv[i + 1..]);
        Self::raw(TreeShape::new_unchecked(nl, self.shape.total()), out)
    }

    /// Deletes a single leaf of charge 0 at position `i`.
    pub fn drop_vacuum_leaf(&self, i: usize) -> Result<Self, StateError> {
        self.check_pos(i, 1)?;
        if self.shape.leaf(i) != 0 || self.shape.len() < 2 {
            return Err(StateError::NotVacuumLeaf(i));
        }
        let lv = self.shape.leaves();
        let mut nl = lv[..i - 1].to_vec();
        nl.extend_from_slice(&lv[i..]);
        let mut out: BTreeMap<Key, Complex64> = BTreeMap::new();
        for (key, &v) in &self.amps {
            let mut c = self.edges(key);
            c.remove(i - 1);
            if i == 1 {
                c[0] = nl[0];
            }
            *out.entry(key_of(&c)).or_insert_with(zero) += v;
        }
        Ok(Self::raw(TreeShape::new_unchecked(nl, self.shape.total()), out))
    }

    /// Splits leaf `i` into two adjacent leaves `b, c` fusing back to it.
    pub fn unfuse(&self, i: usize, b: u8, c: u8) -> Result<Self, StateError> {
        self.check_pos(i, 1)?;
        let leaf = self.shape.leaf(i);
        if b > LEVEL || c > LEVEL || !admissible_raw(b, c, leaf) {
            return Err(StateError::InvalidSplit { leaf, b, c });
        }
        let lv = self.shape.leaves();
        let mut nl = lv[..i - 1].to_vec();
        nl.extend_from_slice(&[b, c]);
        nl.extend_from_slice(&lv[i..]);
        let mut d = BlockMap::new();
        for (key, &v) in &self.amps {
            let cc = self.edges(key);
            let mut c2 = cc[..i - 1].to_vec();
            c2.push(HOLE);
            c2.extend_from_slice(&cc[i - 1..]);
            if i == 1 {
                c2[0] = b;
            }
            *d.entry((c2, vec![b, leaf])).or_insert_with(zero) += v;
        }
        let shape = TreeShape::new_unchecked(nl, self.shape.total());
        Ok(Self::from_block(shape, &d, i, i + 1))
    }

    /// Inserts a pair `(c, c)` with vacuum total charge before position `pos` (`1..=n+1`).
    pub fn create_pair(&self, pos: usize, c: u8) -> Result<Self, StateError> {
        let n = self.shape.len();
        if pos == 0 || pos > n + 1 {
            return Err(StateError::Position { pos, len: n });
        }
        if c > LEVEL {
            return Err(recoupling_core::ChargeError::OutOfRange(c as i64).into());
        }
        let t = tables();
        let lv = self.shape.leaves();
        let mut nl = lv[..pos - 1].to_vec();
        nl.extend_from_slice(&[c, c]);
        nl.extend_from_slice(&lv[pos - 1..]);
        let mut out: BTreeMap<Key, Complex64> = BTreeMap::new();
        for (key, &v) in &self.amps {
            let cc = self.edges(key);
            if pos == 1 {
                let mut c2 = vec![c, 0];
                c2.extend_from_slice(&cc);
                *out.entry(key_of(&c2)).or_insert_with(zero) += v;
                continue;
            }
            let x = cc[pos - 2];
            for e in 0..=LEVEL {
                let fv = t.f(x, c, c, x, e, 0);
                if fv != 0.0 {
                    let mut c2 = cc[..pos - 1].to_vec();
                    c2.push(e);
                    c2.extend_from_slice(&cc[pos - 2..]);
                    *out.entry(key_of(&c2)).or_insert_with(zero) += v * fv;
                }
            }
        }
        Ok(Self::raw(TreeShape::new_unchecked(nl, self.shape.total()), out))
    }

    /// Deletes anyons `i, i+1`, which must sit in the vacuum channel.
    pub fn remove_pair(&self, i: usize) -> Result<Self, StateError> {
        self.check_pos(i, 2)?;
        let p0 = self.block_probabilities(i, i + 1)?.get(&0).copied().unwrap_or(0.0);
        if (p0 - 1.0).abs() > 1e-9 {
            return Err(StateError::NotVacuumPair(i, i + 1));
        }
        let scale = self.norm();
        let merged = self.project_block(i, i + 1, 0)?.merge(i, 0);
        let dropped = merged.drop_vacuum_leaf(i)?;
        let n = dropped.norm();
        Ok(dropped.scaled(Complex64::new(scale / n, 0.0)))
    }

    /// Places `other` to the right of `self`; both must have vacuum total charge.
    pub fn tensor(&self, other: &Self) -> Result<Self, StateError> {
        if self.shape.total() != 0 || other.shape.total() != 0 {
            return Err(StateError::NonVacuumTensor);
        }
        let mut leaves = self.shape.leaves().to_vec();
        leaves.extend_from_slice(other.shape.leaves());
        let mut out = BTreeMap::new();
        for (k1, v1) in &self.amps {
            let mut c = self.edges(k1);
            for (k2, v2) in &other.amps {
                let keep = c.len();
                c.extend(other.edges(k2));
                out.insert(key_of(&c), v1 * v2);
                c.truncate(keep);
            }
        }
        Ok(Self::raw(TreeShape::new_unchecked(leaves, 0), out))
    }

    /// `LABELS (c_2, ..) AMP re im` lines in lexicographic key order.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.amps {
            let labels: Vec<String> = k.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(s, "LABELS ({}) AMP {} {}", labels.join(","), fmt_g17(v.re), fmt_g17(v.im));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::LogicalKind;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn qubit_shape_has_two_labelings() {
        assert_eq!(LogicalKind::Qubit1221.shape().labelings(), vec![vec![1, 1], vec![3, 1]]);
    }

    #[test]
    fn braid_inverse_is_identity() {
        let s = AnyonState::logical_state(LogicalKind::Qutrit2222, &[c(0.3), c(0.5), Complex64::new(0.1, 0.7)]).unwrap();
        for i in 1..4 {
            let t = s.braid(i, 1).unwrap().braid(i, -1).unwrap();
            assert!((t.overlap(&s).unwrap() - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn create_then_remove() {
        let s = AnyonState::logical_state(LogicalKind::Qubit1221, &[c(0.6), c(0.8)]).unwrap();
        for pos in 1..=5 {
            for ch in 0..=4 {
                let t = s.create_pair(pos, ch).unwrap();
                assert!((t.norm() - 1.0).abs() < 1e-12);
                let (m, _) = t.measure_pair(pos, Policy::Force(0)).unwrap();
                assert!((m.probability - 1.0).abs() < 1e-12);
                let back = t.remove_pair(pos).unwrap();
                assert_eq!(back.shape(), s.shape());
                assert!((back.overlap(&s).unwrap() - 1.0).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn single_leaf_block() {
        let s = AnyonState::logical_state(LogicalKind::Qubit1221, &[c(0.6), c(0.8)]).unwrap();
        let p = s.block_probabilities(2, 2).unwrap();
        assert_eq!(p.len(), 1);
        assert!((p[&2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn remove_rejects_charged_pair() {
        let s = AnyonState::logical_state(LogicalKind::Qutrit2222, &[c(1.0), c(1.0), c(1.0)]).unwrap();
        let (_, t) = s.measure_pair(1, Policy::Force(2)).unwrap();
        assert!(matches!(t.remove_pair(1), Err(StateError::NotVacuumPair(1, 2))));
    }
}
