use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::bs12::{BsElement, Dyadic, PcTriple};
use crate::power_circuit::{BitBudget, Marking, PcError, ReducedCircuit};

/// Outcome of a conjugacy test in `BS(1,2)`; a witness `z` satisfies `z f z⁻¹ = g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BsConjugacy<W> {
    Yes(W),
    No,
}

impl<W> BsConjugacy<W> {
    pub fn is_yes(&self) -> bool {
        matches!(self, BsConjugacy::Yes(_))
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            BsConjugacy::Yes(w) => Some(w),
            BsConjugacy::No => None,
        }
    }
}

/// The least `j >= 0` making `2^j r` an integer.
fn integral_shift(r: &Dyadic) -> i64 {
    (-r.exponent()).max(0)
}

/// For integral `(r, m)` and `(s, m)` with `m >= 2`, a `z = (x, k)` with
/// `z (r, m) z⁻¹ = (s, m)`, if one exists.
fn modular_witness(r: &BigInt, s: &BigInt, m: u64) -> Option<BsElement> {
    let modulus = (BigInt::one() << m) - 1;
    let mut shifted = r.clone();
    for k in 0..m {
        let diff = &shifted - s;
        if diff.is_multiple_of(&modulus) {
            let x = diff / &modulus;
            return Some(BsElement::new(Dyadic::from_int(x), k as i64));
        }
        shifted <<= 1;
    }
    None
}

/// Decides conjugacy of explicit elements of `BS(1,2)`.
pub fn conj_bs12(f: &BsElement, g: &BsElement) -> BsConjugacy<BsElement> {
    if f.m != g.m {
        return BsConjugacy::No;
    }
    let (f1, g1) = if f.m < 0 { (f.inv(), g.inv()) } else { (f.clone(), g.clone()) };
    let (jf, jg) = (integral_shift(&f1.r), integral_shift(&g1.r));
    let tf = BsElement::t_pow(jf);
    let tg = BsElement::t_pow(jg);
    let f2 = f1.conjugate_by(&tf);
    let g2 = g1.conjugate_by(&tg);
    let r = f2.r.to_integer().expect("made integral");
    let s = g2.r.to_integer().expect("made integral");
    let m = f2.m;
    let core = match m {
        0 => {
            if r.is_zero() || s.is_zero() {
                (r.is_zero() && s.is_zero()).then(BsElement::identity)
            } else {
                // Odd parts must agree; then s = r 2^k.
                let (vr, vs) = (f2.r.exponent(), g2.r.exponent());
                (f2.r.mantissa() == g2.r.mantissa()).then(|| BsElement::t_pow(vs - vr))
            }
        }
        1 => Some(BsElement::new(Dyadic::from_int(&r - &s), 0)),
        _ => modular_witness(&r, &s, m as u64),
    };
    match core {
        Some(z) => {
            // z f2 z⁻¹ = g2 with f2 = tf f1 tf⁻¹, g2 = tg g1 tg⁻¹.
            let z = tg.inv().mul(&z).mul(&tf);
            debug_assert_eq!(&f.conjugate_by(&z), g);
            BsConjugacy::Yes(z)
        }
        None => BsConjugacy::No,
    }
}

/// Decides conjugacy of power-circuit elements of `BS(1,2)`.
///
/// Everything except the modular scan is done on the circuit. The scan
/// expands `m`, `r` and `s`, which fails with `BudgetExceeded` when they do
/// not fit.
pub fn conj_bs12_pc(
    rc: &mut ReducedCircuit,
    f: &PcTriple,
    g: &PcTriple,
    budget: BitBudget,
) -> Result<BsConjugacy<PcTriple>, PcError> {
    let f = f.normalize(rc);
    let g = g.normalize(rc);
    let mf = f.m(rc);
    let mg = g.m(rc);
    if rc.compare(&mf, &mg) != Ordering::Equal {
        return Ok(BsConjugacy::No);
    }
    if f.equals(&g, rc) {
        return Ok(BsConjugacy::Yes(PcTriple::identity()));
    }
    let negative = rc.sign(&mf) == Ordering::Less;
    let (f1, g1) = if negative { (f.inv(rc), g.inv(rc)) } else { (f, g) };
    let shift = |x: &PcTriple, rc: &mut ReducedCircuit| {
        if !x.s.is_empty() && rc.sign(&x.k) == Ordering::Less {
            rc.sub(&Marking::empty(), &x.k)
        } else {
            Marking::empty()
        }
    };
    let jf = shift(&f1, rc);
    let jg = shift(&g1, rc);
    let tf = PcTriple::t_pow(jf);
    let tg = PcTriple::t_pow(jg);
    let f2 = f1.conjugate_by(&tf, rc);
    let g2 = g1.conjugate_by(&tg, rc);
    let m = f2.m(rc);
    let core = match rc.sign(&m) {
        Ordering::Equal => {
            if f2.s.is_empty() || g2.s.is_empty() {
                (f2.s.is_empty() && g2.s.is_empty()).then(PcTriple::identity)
            } else if rc.compare(&f2.s, &g2.s) == Ordering::Equal {
                Some(PcTriple::t_pow(rc.sub(&g2.k, &f2.k)))
            } else {
                None
            }
        }
        _ if rc.compare(&m, &rc.unit()) == Ordering::Equal => {
            let r = f2.r_integral(rc)?;
            let s = g2.r_integral(rc)?;
            let x = rc.sub(&r, &s);
            Some(PcTriple::a_pow(rc, &x))
        }
        _ => {
            let mv = rc.evaluate(&m, budget)?;
            let mv = mv
                .to_u64()
                .filter(|&v| v <= budget.max_bits())
                .ok_or(PcError::BudgetExceeded { max_bits: budget.max_bits() })?;
            let r = f2.r_integral(rc)?;
            let s = g2.r_integral(rc)?;
            let rv = rc.evaluate(&r, budget)?;
            let sv = rc.evaluate(&s, budget)?;
            modular_witness(&rv, &sv, mv).map(|z| PcTriple::from_element(rc, &z))
        }
    };
    Ok(match core {
        Some(z) => {
            let tgi = tg.inv(rc);
            let z = tgi.mul(&z, rc).mul(&tf, rc);
            BsConjugacy::Yes(z)
        }
        None => BsConjugacy::No,
    })
}
