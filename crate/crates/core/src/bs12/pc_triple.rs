use std::cmp::Ordering;

use num_bigint::BigInt;

use crate::bs12::{BsElement, Dyadic};
use crate::power_circuit::{BitBudget, Marking, PcError, ReducedCircuit};

/// `[K, S, L]` over a reduced circuit, denoting `(2^ε(K) ε(S), ε(K) + ε(L))`.
///
/// All operations take the circuit explicitly; the markings are only
/// meaningful relative to the circuit they were built in. Results of the
/// arithmetic operations are normalized: `S` is odd or empty, and `K` is
/// empty when `S` is.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PcTriple {
    pub k: Marking,
    pub s: Marking,
    pub l: Marking,
}

impl PcTriple {
    pub fn identity() -> Self {
        PcTriple::default()
    }

    pub fn new(k: Marking, s: Marking, l: Marking) -> Self {
        PcTriple { k, s, l }
    }

    /// `t^ε(m)`.
    pub fn t_pow(m: Marking) -> Self {
        PcTriple { k: Marking::empty(), s: Marking::empty(), l: m }
    }

    /// `a^ε(v)`.
    pub fn a_pow(rc: &mut ReducedCircuit, v: &Marking) -> Self {
        let (x, u) = rc.decompose_odd(v);
        let l = rc.sub(&Marking::empty(), &x);
        PcTriple { k: x, s: u, l }
    }

    pub fn from_element(rc: &mut ReducedCircuit, g: &BsElement) -> Self {
        if g.r.is_zero() {
            return PcTriple::t_pow(rc.from_i64(g.m));
        }
        let e = g.r.exponent();
        PcTriple {
            k: rc.from_i64(e),
            s: rc.from_int(g.r.mantissa()),
            l: rc.from_i64(g.m - e),
        }
    }

    /// The `t`-exponent `ε(K) + ε(L)`.
    pub fn m(&self, rc: &mut ReducedCircuit) -> Marking {
        rc.add(&self.k, &self.l)
    }

    /// The `a`-coordinate `r = 2^ε(K) ε(S)` as a marking; requires `ε(K) >= 0`
    /// unless `S` is empty.
    pub fn r_integral(&self, rc: &mut ReducedCircuit) -> Result<Marking, PcError> {
        if self.s.is_empty() {
            return Ok(Marking::empty());
        }
        rc.mul_pow2(&self.k, &self.s)
    }

    pub fn normalize(&self, rc: &mut ReducedCircuit) -> PcTriple {
        if self.s.is_empty() {
            return PcTriple::t_pow(rc.add(&self.k, &self.l));
        }
        let (x, u) = rc.decompose_odd(&self.s);
        if x.is_empty() {
            return self.clone();
        }
        PcTriple { k: rc.add(&self.k, &x), s: u, l: rc.sub(&self.l, &x) }
    }

    pub fn mul(&self, other: &PcTriple, rc: &mut ReducedCircuit) -> PcTriple {
        let m1 = self.m(rc);
        if self.s.is_empty() {
            let k = rc.add(&m1, &other.k);
            return PcTriple { k, s: other.s.clone(), l: other.l.clone() }.normalize(rc);
        }
        if other.s.is_empty() {
            let m2 = other.m(rc);
            let l = rc.add(&self.l, &m2);
            return PcTriple { k: self.k.clone(), s: self.s.clone(), l };
        }
        // (2^k1 s1, m1)(2^k2 s2, m2) = (2^e (2^(k1-e) s1 + 2^(m1+k2-e) s2), m1 + m2)
        let e1 = self.k.clone();
        let e2 = rc.add(&m1, &other.k);
        let e = if rc.compare(&e1, &e2) == Ordering::Greater { e2.clone() } else { e1.clone() };
        let d1 = rc.sub(&e1, &e);
        let d2 = rc.sub(&e2, &e);
        let s1 = rc.mul_pow2(&d1, &self.s).expect("shift is non-negative");
        let s2 = rc.mul_pow2(&d2, &other.s).expect("shift is non-negative");
        let s = rc.add(&s1, &s2);
        let m2 = other.m(rc);
        let m = rc.add(&m1, &m2);
        let l = rc.sub(&m, &e);
        PcTriple { k: e, s, l }.normalize(rc)
    }

    /// `(r, m)⁻¹ = (-r 2^-m, -m)`, i.e. `[k - m, -s, -k]`.
    pub fn inv(&self, rc: &mut ReducedCircuit) -> PcTriple {
        if self.s.is_empty() {
            let m = self.m(rc);
            return PcTriple::t_pow(rc.sub(&Marking::empty(), &m));
        }
        let k = rc.sub(&Marking::empty(), &self.l);
        let l = rc.sub(&Marking::empty(), &self.k);
        PcTriple { k, s: self.s.negated(), l }
    }

    /// `z self z⁻¹`.
    pub fn conjugate_by(&self, z: &PcTriple, rc: &mut ReducedCircuit) -> PcTriple {
        let zi = z.inv(rc);
        z.mul(self, rc).mul(&zi, rc)
    }

    /// Equality of denoted elements; both sides must be normalized.
    pub fn equals(&self, other: &PcTriple, rc: &mut ReducedCircuit) -> bool {
        if rc.compare(&self.s, &other.s) != Ordering::Equal {
            return false;
        }
        if !self.s.is_empty() && rc.compare(&self.k, &other.k) != Ordering::Equal {
            return false;
        }
        let (m1, m2) = (self.m(rc), other.m(rc));
        rc.compare(&m1, &m2) == Ordering::Equal
    }

    pub fn is_identity(&self, rc: &mut ReducedCircuit) -> bool {
        if !self.s.is_empty() && rc.sign(&self.s) != Ordering::Equal {
            return false;
        }
        let m = self.m(rc);
        rc.sign(&m) == Ordering::Equal
    }

    /// If the element lies in `<a>`, its exponent. Requires normalization.
    pub fn a_exponent(&self, rc: &mut ReducedCircuit) -> Option<Marking> {
        let m = self.m(rc);
        if rc.sign(&m) != Ordering::Equal {
            return None;
        }
        if self.s.is_empty() {
            return Some(Marking::empty());
        }
        if rc.sign(&self.k) == Ordering::Less {
            return None;
        }
        Some(rc.mul_pow2(&self.k, &self.s).expect("checked non-negative"))
    }

    /// If the element lies in `<t>`, its exponent. Requires normalization.
    pub fn t_exponent(&self, rc: &mut ReducedCircuit) -> Option<Marking> {
        if !self.s.is_empty() {
            return None;
        }
        Some(self.m(rc))
    }

    /// Expands into an explicit element within the budget.
    pub fn to_element(&self, rc: &ReducedCircuit, budget: BitBudget) -> Result<BsElement, PcError> {
        let small = |m: &Marking| -> Result<i64, PcError> {
            let v = rc.evaluate(m, budget)?;
            i64::try_from(&v).map_err(|_| PcError::BudgetExceeded { max_bits: budget.max_bits() })
        };
        let k = small(&self.k)?;
        let l = small(&self.l)?;
        let s: BigInt = rc.evaluate(&self.s, budget)?;
        let m = k.checked_add(l).ok_or(PcError::BudgetExceeded { max_bits: budget.max_bits() })?;
        Ok(BsElement::new(Dyadic::new(s, k), m))
    }

    /// Re-expresses the triple in another circuit.
    pub fn import(&self, into: &mut ReducedCircuit, from: &ReducedCircuit) -> PcTriple {
        let mut ms = into.import(from, &[self.k.clone(), self.s.clone(), self.l.clone()]);
        let l = ms.pop().expect("three markings");
        let s = ms.pop().expect("three markings");
        let k = ms.pop().expect("three markings");
        PcTriple { k, s, l }
    }

    pub fn markings(&self) -> [&Marking; 3] {
        [&self.k, &self.s, &self.l]
    }
}
