use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// A dyadic rational `mantissa * 2^exponent` with odd mantissa, or zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic::default()
    }

    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        if mantissa.is_zero() {
            return Dyadic::zero();
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0);
        Dyadic { mantissa: mantissa >> tz, exponent: exponent + tz as i64 }
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        Dyadic::new(v.into(), 0)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.exponent >= 0
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        let e = u64::try_from(self.exponent).ok()?;
        Some(&self.mantissa << e)
    }

    /// `self * 2^k`.
    pub fn shl(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mantissa: self.mantissa.clone(), exponent: self.exponent + k }
    }

    pub fn to_f64(&self) -> f64 {
        self.mantissa.to_f64().unwrap_or(f64::NAN) * 2f64.powi(self.exponent.clamp(-2000, 2000) as i32)
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exponent.min(rhs.exponent);
        let a = &self.mantissa << (self.exponent - e) as u64;
        let b = &rhs.mantissa << (rhs.exponent - e) as u64;
        Dyadic::new(a + b, e)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mantissa: -&self.mantissa, exponent: self.exponent }
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.to_integer() {
            return write!(f, "{v}");
        }
        let q = -self.exponent;
        if q < 63 {
            write!(f, "{}/{}", self.mantissa, 1u64 << q)
        } else {
            write!(f, "{}/2^{}", self.mantissa, q)
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let d = self - other;
        if d.mantissa.is_negative() {
            std::cmp::Ordering::Less
        } else if d.is_zero() {
            std::cmp::Ordering::Equal
        } else {
            std::cmp::Ordering::Greater
        }
    }
}
