use std::fmt;

use thiserror::Error;

/// Level of the theory. Charges run over `0..=LEVEL`.
pub const LEVEL: u8 = 4;

/// Number of distinct charges.
pub const NUM_CHARGES: usize = LEVEL as usize + 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChargeError {
    #[error("charge {0} outside 0..={max}", max = LEVEL)]
    OutOfRange(i64),
    #[error("inadmissible triple ({0}, {1}, {2})")]
    Inadmissible(u8, u8, u8),
}

/// Topological charge of an anyon or of a fusion-tree edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChargeLabel(u8);

impl ChargeLabel {
    pub const VACUUM: ChargeLabel = ChargeLabel(0);

    pub fn new(value: i64) -> Result<Self, ChargeError> {
        if (0..=LEVEL as i64).contains(&value) {
            Ok(ChargeLabel(value as u8))
        } else {
            Err(ChargeError::OutOfRange(value))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = ChargeLabel> {
        (0..=LEVEL).map(ChargeLabel)
    }
}

impl TryFrom<u8> for ChargeLabel {
    type Error = ChargeError;
    fn try_from(v: u8) -> Result<Self, ChargeError> {
        ChargeLabel::new(v as i64)
    }
}

impl From<ChargeLabel> for u8 {
    fn from(c: ChargeLabel) -> u8 {
        c.0
    }
}

impl fmt::Display for ChargeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Fusion rule on raw labels: triangle inequalities, `a+b+c <= 2k` and even parity.
pub fn admissible_raw(a: u8, b: u8, c: u8) -> bool {
    let (a, b, c) = (a as u16, b as u16, c as u16);
    let s = a + b + c;
    a <= b + c && b <= a + c && c <= a + b && s <= 2 * LEVEL as u16 && s % 2 == 0
}

pub fn admissible(a: ChargeLabel, b: ChargeLabel, c: ChargeLabel) -> bool {
    admissible_raw(a.0, b.0, c.0)
}

/// Charges `c` with `a x b -> c`.
pub fn fusion_outcomes(a: u8, b: u8) -> impl Iterator<Item = u8> {
    (0..=LEVEL).filter(move |&c| admissible_raw(a, b, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range() {
        assert!(ChargeLabel::new(5).is_err());
        assert!(ChargeLabel::new(-1).is_err());
        assert_eq!(ChargeLabel::new(4).unwrap().value(), 4);
    }

    #[test]
    fn fusion_rule_examples() {
        assert!(admissible_raw(1, 1, 2));
        assert!(admissible_raw(0, 0, 0));
        assert!(!admissible_raw(1, 1, 1));
        assert!(admissible_raw(2, 2, 2));
        assert!(!admissible_raw(4, 4, 2));
    }

    #[test]
    fn two_by_two() {
        assert_eq!(fusion_outcomes(2, 2).collect::<Vec<_>>(), vec![0, 2, 4]);
        assert_eq!(fusion_outcomes(1, 3).collect::<Vec<_>>(), vec![2, 4]);
        assert_eq!(fusion_outcomes(4, 4).collect::<Vec<_>>(), vec![0]);
    }
}
