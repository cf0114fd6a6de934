//! Sufficient conditions for `arctan(a + b sqrt p)` to be irrational in degrees.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::quad::{is_prime, QuadExt};
use crate::NumberError;

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma3Report {
    pub a: BigRational,
    pub b: BigRational,
    pub p: u64,
    /// `a^2 != 1 + p b^2`.
    pub star: bool,
    /// `a != ±1 ± sqrt(2 + p b^2)`.
    pub star_star: bool,
    /// `2a / (1 - a^2 + p b^2)`, computed only when both conditions hold.
    pub key_rational: Option<BigRational>,
    /// The key rational avoids `0, 1, -1`.
    pub key_ok: Option<bool>,
}

impl Lemma3Report {
    pub fn applies(&self) -> bool {
        self.star && self.star_star && self.key_ok == Some(true)
    }
}

pub fn lemma3_check(a: &BigRational, b: &BigRational, p: u64) -> Result<Lemma3Report, NumberError> {
    if !is_prime(p) {
        return Err(NumberError::NotPrime(p));
    }
    if a.is_zero() {
        return Err(NumberError::ZeroCoefficient("a"));
    }
    if b.is_zero() {
        return Err(NumberError::ZeroCoefficient("b"));
    }
    let one = BigRational::one();
    let pb2 = BigRational::from_integer(BigInt::from(p)) * b * b;
    let a2 = a * a;
    let star = a2 != &one + &pb2;
    // a = s + t sqrt(r) with s = ±1 means (a - s)^2 = r for one of the two choices of t
    let r = BigRational::from_integer(BigInt::from(2)) + &pb2;
    let star_star = [&one, &-one.clone()].iter().all(|s| {
        let d = a - *s;
        &d * &d != r
    });
    let (key_rational, key_ok) = if star && star_star {
        let k = (a + a) / (&one - &a2 + &pb2);
        let ok = !(k.is_zero() || k.is_one() || (-k.clone()).is_one());
        (Some(k), Some(ok))
    } else {
        (None, None)
    };
    Ok(Lemma3Report { a: a.clone(), b: b.clone(), p, star, star_star, key_rational, key_ok })
}

/// The quadratic irrationals that occur as tangents of rational angles.
pub fn calcut_values() -> Vec<QuadExt> {
    let mut out = Vec::new();
    for s in [1, -1] {
        out.push(QuadExt::from_ratios(0, 1, s, 1, 3).unwrap());
        out.push(QuadExt::from_ratios(0, 1, s, 3, 3).unwrap());
    }
    for s in [1, -1] {
        for t in [1, -1] {
            out.push(QuadExt::from_ratios(s, 1, t, 1, 2).unwrap());
            out.push(QuadExt::from_ratios(2 * s, 1, t, 1, 3).unwrap());
        }
    }
    out
}

/// True when `x` is not a tangent of a rational angle, by the quadratic classification.
pub fn calcut_quadratic_check(x: &QuadExt) -> Result<bool, NumberError> {
    if let Some(r) = x.as_rational() {
        return Err(NumberError::Rational(r.clone()));
    }
    Ok(!calcut_values().contains(x))
}
