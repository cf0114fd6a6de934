//! Exact multiples of an arctangent, and finite evidence that it is not a rational angle.

use std::f64::consts::PI;

use num_traits::{One, Zero};

use crate::quad::QuadExt;
use crate::NumberError;

pub const DEFAULT_Q_MAX: u32 = 200;

/// `tan(q arctan x)`, or a pole when `q arctan x` is an odd multiple of `pi/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tangent {
    Finite(QuadExt),
    Pole,
}

impl Tangent {
    /// `Some(v)` when the value is one of `0, 1, -1`.
    pub fn special_value(&self) -> Option<i8> {
        let Tangent::Finite(t) = self else { return None };
        let r = t.as_rational()?;
        if r.is_zero() {
            Some(0)
        } else if r.is_one() {
            Some(1)
        } else if (-r.clone()).is_one() {
            Some(-1)
        } else {
            None
        }
    }

    pub fn conjugate(&self) -> Self {
        match self {
            Tangent::Finite(t) => Tangent::Finite(t.conjugate()),
            Tangent::Pole => Tangent::Pole,
        }
    }
}

/// The addition formula: `tan(phi + arctan x)` from `tan(phi)`.
pub fn tan_add(t: &Tangent, x: &QuadExt) -> Result<Tangent, NumberError> {
    match t {
        Tangent::Finite(t) => {
            let den = QuadExt::integer(1, x.p())?.sub(&t.mul(x)?)?;
            if den.is_zero() {
                return Ok(Tangent::Pole);
            }
            Ok(Tangent::Finite(t.add(x)?.div(&den)?))
        }
        // tan(pi/2 + y) = -1 / tan(y)
        Tangent::Pole if x.is_zero() => Ok(Tangent::Pole),
        Tangent::Pole => Ok(Tangent::Finite(x.recip()?.neg())),
    }
}

/// All of `tan(q arctan x)` for `q = 1..=q_max`.
pub fn tangent_multiples(x: &QuadExt, q_max: u32) -> Result<Vec<Tangent>, NumberError> {
    let mut out = Vec::with_capacity(q_max as usize);
    let mut t = Tangent::Finite(x.clone());
    for q in 1..=q_max {
        if q > 1 {
            t = tan_add(&t, x)?;
        }
        out.push(t.clone());
    }
    Ok(out)
}

pub fn tan_multiple(x: &QuadExt, q: u32) -> Result<Tangent, NumberError> {
    if q == 0 {
        return Err(NumberError::Domain("q must be at least 1".into()));
    }
    Ok(tangent_multiples(x, q)?.pop().expect("q >= 1"))
}

#[derive(Debug, Clone)]
pub struct OlmstedReport {
    pub x: QuadExt,
    pub q_max: u32,
    /// `(q, v)` where `tan(q arctan x) = v` with `v` in `{0, 1, -1}`.
    pub hits: Vec<(u32, i8)>,
    pub poles: Vec<u32>,
}

impl OlmstedReport {
    pub fn no_hits(&self) -> bool {
        self.hits.is_empty() && self.poles.is_empty()
    }

    /// A hit or a pole at `q` means `arctan x` is a rational multiple of `pi`.
    pub fn first_rational_multiple(&self) -> Option<u32> {
        self.hits.iter().map(|h| h.0).chain(self.poles.iter().copied()).min()
    }

    pub fn coverage(&self) -> String {
        if self.no_hits() {
            format!("no rational tangent for q = 1..{}; larger q not examined", self.q_max)
        } else {
            format!("rational multiple of pi found at q = {}", self.first_rational_multiple().unwrap())
        }
    }
}

pub fn olmsted_empirical(x: &QuadExt, q_max: u32) -> Result<OlmstedReport, NumberError> {
    if q_max < 2 {
        return Err(NumberError::Domain("q_max must be at least 2".into()));
    }
    let mut hits = Vec::new();
    let mut poles = Vec::new();
    for (i, t) in tangent_multiples(x, q_max)?.iter().enumerate() {
        let q = i as u32 + 1;
        if *t == Tangent::Pole {
            poles.push(q);
        } else if let Some(v) = t.special_value() {
            hits.push((q, v));
        }
    }
    Ok(OlmstedReport { x: x.clone(), q_max, hits, poles })
}

/// Distance from `atan x + atan y - atan((x+y)/(1-xy))` to the nearest multiple of `pi`.
pub fn congruence_defect(x: f64, y: f64) -> f64 {
    let d = x.atan() + y.atan() - ((x + y) / (1.0 - x * y)).atan();
    let r = d.rem_euclid(PI);
    r.min(PI - r)
}
