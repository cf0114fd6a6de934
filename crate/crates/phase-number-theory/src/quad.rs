//! Numbers `a + b sqrt(p)` with exact rational parts.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::NumberError;

pub fn is_squarefree(p: u64) -> bool {
    if p == 0 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % (d * d) == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    a: BigRational,
    b: BigRational,
    p: u64,
}

impl QuadExt {
    pub fn new(a: BigRational, b: BigRational, p: u64) -> Result<Self, NumberError> {
        if !is_squarefree(p) {
            return Err(NumberError::NotSquarefree(p));
        }
        Ok(QuadExt { a, b, p })
    }

    /// `(an/ad) + (bn/bd) sqrt(p)`.
    pub fn from_ratios(an: i64, ad: i64, bn: i64, bd: i64, p: u64) -> Result<Self, NumberError> {
        if ad == 0 || bd == 0 {
            return Err(NumberError::DivisionByZero);
        }
        Self::new(ratio(an, ad), ratio(bn, bd), p)
    }

    pub fn rational(a: BigRational, p: u64) -> Result<Self, NumberError> {
        Self::new(a, BigRational::zero(), p)
    }

    pub fn integer(n: i64, p: u64) -> Result<Self, NumberError> {
        Self::rational(ratio(n, 1), p)
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// The rational value, if the surd part vanishes.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn conjugate(&self) -> Self {
        QuadExt { a: self.a.clone(), b: -self.b.clone(), p: self.p }
    }

    /// `x * conj(x) = a^2 - p b^2`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - self.p_rat() * &self.b * &self.b
    }

    fn p_rat(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.p))
    }

    fn same_field(&self, o: &Self) -> Result<(), NumberError> {
        if self.p != o.p {
            return Err(NumberError::FieldMismatch(self.p, o.p));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self, NumberError> {
        self.same_field(o)?;
        Ok(QuadExt { a: &self.a + &o.a, b: &self.b + &o.b, p: self.p })
    }

    pub fn sub(&self, o: &Self) -> Result<Self, NumberError> {
        self.same_field(o)?;
        Ok(QuadExt { a: &self.a - &o.a, b: &self.b - &o.b, p: self.p })
    }

    pub fn neg(&self) -> Self {
        QuadExt { a: -self.a.clone(), b: -self.b.clone(), p: self.p }
    }

    pub fn mul(&self, o: &Self) -> Result<Self, NumberError> {
        self.same_field(o)?;
        let a = &self.a * &o.a + self.p_rat() * &self.b * &o.b;
        let b = &self.a * &o.b + &self.b * &o.a;
        Ok(QuadExt { a, b, p: self.p })
    }

    pub fn recip(&self) -> Result<Self, NumberError> {
        // a^2 - p b^2 vanishes only at zero since p is squarefree and not a square
        let n = self.norm();
        if n.is_zero() {
            return Err(NumberError::DivisionByZero);
        }
        Ok(QuadExt { a: &self.a / &n, b: -(&self.b / &n), p: self.p })
    }

    pub fn div(&self, o: &Self) -> Result<Self, NumberError> {
        self.same_field(o)?;
        self.mul(&o.recip()?)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        QuadExt { a: &self.a * r, b: &self.b * r, p: self.p }
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * (self.p as f64).sqrt()
    }

    /// Exact sign of `a + b sqrt(p)`.
    pub fn signum(&self) -> i8 {
        let sa = sign(&self.a);
        let sb = sign(&self.b);
        if sa == sb || sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        // opposite signs: the larger of a^2 and p b^2 wins
        let a2 = &self.a * &self.a;
        let pb2 = self.p_rat() * &self.b * &self.b;
        if a2 > pb2 {
            sa
        } else {
            sb
        }
    }
}

fn sign(r: &BigRational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let sqrt = format!("sqrt({})", self.p);
        let surd = if self.b.is_one() {
            sqrt
        } else if (-self.b.clone()).is_one() {
            format!("-{sqrt}")
        } else {
            format!("{}*{sqrt}", self.b)
        };
        if self.a.is_zero() {
            write!(f, "{surd}")
        } else if surd.starts_with('-') {
            write!(f, "{} - {}", self.a, &surd[1..])
        } else {
            write!(f, "{} + {surd}", self.a)
        }
    }
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
