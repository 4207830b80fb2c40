//! The Baumslag group as an HNN extension of `BS(1,2)` by a stable letter
//! `b` with `b a b⁻¹ = t`: β-factorizations, Britton reduction, the word
//! problem and conjugacy.

mod conjugacy;
mod factorization;
mod words;

pub use conjugacy::{
    conj_bg, conj_bg_core, verify_witness, ConjugacyAnswer, ConjugacyError, ConjugacyPath,
};
pub use factorization::{
    conjugate_by, word_problem, Beta, BetaFactorization, FactorizationParseError,
};
pub use words::{blowup_word, division_to_conjugacy, WordBuildError, DEFAULT_WORD_CAP, MAX_BLOWUP};

use crate::power_circuit::{PowerCircuit, ReducedCircuit};

/// `t^tower(n)` as a one-factor element over a chain circuit.
pub fn tower_t_power(n: usize) -> BetaFactorization {
    let (c, m) = PowerCircuit::tower(n);
    let (rc, ms) = c.reduce(&[m]).expect("chains are valid circuits");
    BetaFactorization::t_power(rc, ms.into_iter().next().expect("one marking"))
}

/// `t^(tower(n) + delta)` for small offsets.
pub fn tower_t_power_offset(n: usize, delta: i64) -> BetaFactorization {
    let (c, m) = PowerCircuit::tower(n);
    let (mut rc, ms): (ReducedCircuit, _) = c.reduce(&[m]).expect("chains are valid circuits");
    let d = rc.from_i64(delta);
    let e = rc.add(&ms[0], &d);
    BetaFactorization::t_power(rc, e)
}
