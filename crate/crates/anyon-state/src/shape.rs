use std::fmt;

use recoupling_core::{admissible_raw, LEVEL};

use crate::StateError;

/// Ordered anyon charges plus the total charge of the line.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeShape {
    leaves: Vec<u8>,
    total: u8,
}

impl TreeShape {
    pub fn new(leaves: Vec<u8>, total: u8) -> Result<Self, StateError> {
        let s = TreeShape { leaves, total };
        if s.leaves.is_empty() {
            return Err(StateError::EmptyShape);
        }
        if let Some(&bad) = s.leaves.iter().chain(std::iter::once(&s.total)).find(|&&c| c > LEVEL) {
            return Err(StateError::Charge(recoupling_core::ChargeError::OutOfRange(bad as i64)));
        }
        if s.labelings().is_empty() {
            return Err(StateError::NoLabeling(s.to_string()));
        }
        Ok(s)
    }

    /// Skips the admissibility scan; callers guarantee a valid shape.
    pub(crate) fn new_unchecked(leaves: Vec<u8>, total: u8) -> Self {
        TreeShape { leaves, total }
    }

    pub fn leaves(&self) -> &[u8] {
        &self.leaves
    }

    pub fn total(&self) -> u8 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }

    /// Leaf charge at 1-based position `i`.
    pub fn leaf(&self, i: usize) -> u8 {
        self.leaves[i - 1]
    }

    /// Every admissible assignment of internal edges `c_2 .. c_{n-1}`, sorted.
    pub fn labelings(&self) -> Vec<Vec<u8>> {
        let n = self.leaves.len();
        if n == 0 {
            return vec![];
        }
        if n == 1 {
            return if self.leaves[0] == self.total { vec![vec![]] } else { vec![] };
        }
        let mut out = Vec::new();
        let mut acc = Vec::with_capacity(n - 2);
        self.extend(1, self.leaves[0], &mut acc, &mut out);
        out
    }

    fn extend(&self, k: usize, prev: u8, acc: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        let n = self.leaves.len();
        if k == n - 1 {
            if admissible_raw(prev, self.leaves[n - 1], self.total) {
                out.push(acc.clone());
            }
            return;
        }
        for c in 0..=LEVEL {
            if admissible_raw(prev, self.leaves[k], c) {
                acc.push(c);
                self.extend(k + 1, c, acc, out);
                acc.pop();
            }
        }
    }

    /// Charges the contiguous block `i..=j` (1-based) can carry given the rest of the shape.
    pub fn block_outcomes(&self, i: usize, j: usize) -> Vec<u8> {
        let fold = |set: Vec<u8>, leaf: u8| -> Vec<u8> {
            (0..=LEVEL)
                .filter(|&z| set.iter().any(|&s| admissible_raw(s, leaf, z)))
                .collect()
        };
        let block = self.leaves[i..j].iter().fold(vec![self.leaves[i - 1]], |s, &l| fold(s, l));
        let prefix = if i > 1 {
            Some(self.leaves[1..i - 1].iter().fold(vec![self.leaves[0]], |s, &l| fold(s, l)))
        } else {
            None
        };
        block
            .into_iter()
            .filter(|&g| {
                let start = match &prefix {
                    None => vec![g],
                    Some(xs) => fold(xs.clone(), g),
                };
                self.leaves[j..].iter().fold(start, |s, &l| fold(s, l)).contains(&self.total)
            })
            .collect()
    }
}

impl fmt::Display for TreeShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l: Vec<String> = self.leaves.iter().map(|c| c.to_string()).collect();
        write!(f, "{} total {}", l.join(" "), self.total)
    }
}
