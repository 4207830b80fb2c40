use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::bs12::Dyadic;
use crate::word::{Letter, Word, WordError};

/// An element `(r, m)` of `Z[1/2] ⋊ Z`, with `a = (1, 0)` and `t = (0, 1)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BsElement {
    pub r: Dyadic,
    pub m: i64,
}

impl BsElement {
    pub fn new(r: Dyadic, m: i64) -> Self {
        BsElement { r, m }
    }

    pub fn from_ints(r: i64, m: i64) -> Self {
        BsElement { r: Dyadic::from_int(r), m }
    }

    pub fn identity() -> Self {
        BsElement::default()
    }

    pub fn a_pow(k: impl Into<BigInt>) -> Self {
        BsElement { r: Dyadic::from_int(k), m: 0 }
    }

    pub fn t_pow(k: i64) -> Self {
        BsElement { r: Dyadic::zero(), m: k }
    }

    pub fn is_identity(&self) -> bool {
        self.r.is_zero() && self.m == 0
    }

    /// `(r, m)(s, q) = (r + 2^m s, m + q)`.
    pub fn mul(&self, other: &BsElement) -> BsElement {
        BsElement { r: &self.r + &other.r.shl(self.m), m: self.m + other.m }
    }

    /// `(r, m)⁻¹ = (-r 2^-m, -m)`.
    pub fn inv(&self) -> BsElement {
        BsElement { r: -&self.r.shl(-self.m), m: -self.m }
    }

    /// `z self z⁻¹`.
    pub fn conjugate_by(&self, z: &BsElement) -> BsElement {
        z.mul(self).mul(&z.inv())
    }

    /// Left-to-right product of the letters of a word over `a, A, t, T`.
    pub fn eval_word(w: &Word) -> Result<BsElement, WordError> {
        Self::eval_letters(w.letters())
    }

    pub fn eval_letters(letters: &[Letter]) -> Result<BsElement, WordError> {
        let mut m: i64 = 0;
        let mut low: i64 = 0;
        for (offset, &l) in letters.iter().enumerate() {
            match l {
                Letter::T => m += 1,
                Letter::TInv => {
                    m -= 1;
                    low = low.min(m);
                }
                Letter::A | Letter::AInv => {}
                Letter::B | Letter::BInv => {
                    return Err(WordError::Disallowed { ch: l.as_char(), offset })
                }
            }
        }
        let mut acc = BigInt::zero();
        m = 0;
        for &l in letters {
            match l {
                Letter::T => m += 1,
                Letter::TInv => m -= 1,
                Letter::A => acc += BigInt::one() << (m - low) as u64,
                Letter::AInv => acc -= BigInt::one() << (m - low) as u64,
                _ => unreachable!(),
            }
        }
        Ok(BsElement { r: Dyadic::new(acc, low), m })
    }

    pub fn parse(s: &str) -> Result<BsElement, WordError> {
        Self::eval_word(&Word::parse(s, false)?)
    }

    /// A word over `a, t` for this element, if one of at most `max_len` letters
    /// of the form `t^-e a^p t^(e+m)` exists.
    pub fn to_word(&self, max_len: usize) -> Option<Word> {
        // (r, m) = t^-e a^p t^(e+m) with r = p 2^-e.
        let e = (-self.r.exponent()).max(0);
        let p = if self.r.is_zero() { BigInt::zero() } else { self.r.mantissa() << (self.r.exponent() + e) as u64 };
        let p: i64 = i64::try_from(&p).ok()?;
        let len = e.unsigned_abs() as u128 + p.unsigned_abs() as u128 + (e + self.m).unsigned_abs() as u128;
        if len > max_len as u128 {
            return None;
        }
        let mut w = Word::power(Letter::T, -e);
        w.0.extend(Word::power(Letter::A, p).0);
        w.0.extend(Word::power(Letter::T, e + self.m).0);
        Some(w.free_reduce())
    }
}

impl fmt::Display for BsElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.r, self.m)
    }
}

/// `[u, v, w]`, denoting the element `(2^u v, u + w)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Triple {
    pub u: i64,
    pub v: BigInt,
    pub w: i64,
}

impl Triple {
    pub fn new(u: i64, v: impl Into<BigInt>, w: i64) -> Self {
        Triple { u, v: v.into(), w }
    }

    /// Moves the factors of two out of `v`, keeping the element fixed.
    pub fn normalize(&self) -> Triple {
        if self.v.is_zero() {
            return Triple { u: 0, v: BigInt::zero(), w: self.u + self.w };
        }
        let tz = self.v.trailing_zeros().unwrap_or(0) as i64;
        Triple { u: self.u + tz, v: &self.v >> tz as u64, w: self.w - tz }
    }

    pub fn to_element(&self) -> BsElement {
        BsElement { r: Dyadic::new(self.v.clone(), self.u), m: self.u + self.w }
    }

    /// The normalized triple of an element.
    pub fn from_element(g: &BsElement) -> Triple {
        let k = g.r.exponent();
        Triple { u: k, v: g.r.mantissa().clone(), w: g.m - k }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.u, self.v, self.w)
    }
}
