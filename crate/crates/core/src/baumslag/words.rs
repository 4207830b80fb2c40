use std::cmp::Ordering;
use std::collections::HashMap;

use thiserror::Error;

use crate::power_circuit::{Marking, NodeId, ReducedCircuit, UNIT};
use crate::word::{Letter, Word};

/// Largest `n` accepted by [`blowup_word`]; `w_20` has about four million letters.
pub const MAX_BLOWUP: u32 = 20;

/// Default output cap for [`division_to_conjugacy`], in letters.
pub const DEFAULT_WORD_CAP: usize = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordBuildError {
    #[error("blow-up index {n} exceeds the cap {MAX_BLOWUP}")]
    BlowupCap { n: u32 },
    #[error("output would have {len} letters, above the cap {cap}")]
    LengthCap { len: u128, cap: usize },
    #[error("marking must have value at least 1")]
    NonPositive,
}

/// `w_0 = t`, `w_(n+1) = b w_n a w_n⁻¹ b⁻¹`; it has `2^(n+2) - 3` letters and
/// equals `t^tower(n+1)`.
pub fn blowup_word(n: u32) -> Result<Word, WordBuildError> {
    if n > MAX_BLOWUP {
        return Err(WordBuildError::BlowupCap { n });
    }
    let mut w = Word(vec![Letter::T]);
    for _ in 0..n {
        let inv = w.inverse();
        let mut next = Vec::with_capacity(2 * w.len() + 3);
        next.push(Letter::B);
        next.extend_from_slice(w.letters());
        next.push(Letter::A);
        next.extend_from_slice(inv.letters());
        next.push(Letter::BInv);
        w = Word(next);
    }
    Ok(w)
}

/// Words `x = t^m` and `y = a^(2^s - 1) t^m`, spelled without expanding
/// `m` or `s`: every node `P` gets a word `w(P) = b W a W⁻¹ b⁻¹` equal to
/// `t^ε(P)`, where `W` spells `t^ε(Λ_P)`.
///
/// `x ~ y` holds exactly when `m` divides `s`.
pub fn division_to_conjugacy(
    rc: &ReducedCircuit,
    m: &Marking,
    s: &Marking,
    cap: usize,
) -> Result<(Word, Word), WordBuildError> {
    let unit = rc.unit();
    if rc.compare(m, &unit) == Ordering::Less || rc.compare(s, &unit) == Ordering::Less {
        return Err(WordBuildError::NonPositive);
    }
    let mut lens: HashMap<NodeId, u128> = HashMap::new();
    let len_x = marking_len(rc, m, &mut lens);
    let len_s = marking_len(rc, s, &mut lens);
    let total = 2 * len_s + 2 + 2 * len_x;
    if total > cap as u128 {
        return Err(WordBuildError::LengthCap { len: total, cap });
    }
    let mut words: HashMap<NodeId, Word> = HashMap::new();
    let x = marking_word(rc, m, &mut words);
    let ws = marking_word(rc, s, &mut words);
    let mut y = ws.clone();
    y.0.push(Letter::A);
    y.0.extend(ws.inverse().0);
    y.0.push(Letter::AInv);
    y.0.extend_from_slice(x.letters());
    Ok((x, y))
}

fn node_len(rc: &ReducedCircuit, p: NodeId, memo: &mut HashMap<NodeId, u128>) -> u128 {
    if let Some(&l) = memo.get(&p) {
        return l;
    }
    let l = 3u128.saturating_add(2u128.saturating_mul(marking_len(rc, rc.successors(p), memo)));
    memo.insert(p, l);
    l
}

fn marking_len(rc: &ReducedCircuit, m: &Marking, memo: &mut HashMap<NodeId, u128>) -> u128 {
    m.nodes().fold(0u128, |acc, p| acc.saturating_add(node_len(rc, p, memo)))
}

fn node_word(rc: &ReducedCircuit, p: NodeId, memo: &mut HashMap<NodeId, Word>) -> Word {
    if let Some(w) = memo.get(&p) {
        return w.clone();
    }
    let inner = if p == UNIT { Word::new() } else { marking_word(rc, rc.successors(p), memo) };
    let mut w = vec![Letter::B];
    w.extend_from_slice(inner.letters());
    w.push(Letter::A);
    w.extend(inner.inverse().0);
    w.push(Letter::BInv);
    let w = Word(w);
    memo.insert(p, w.clone());
    w
}

fn marking_word(rc: &ReducedCircuit, m: &Marking, memo: &mut HashMap<NodeId, Word>) -> Word {
    let mut out = Word::new();
    for &(p, sign) in m.terms() {
        let w = node_word(rc, p, memo);
        out.0.extend(if sign > 0 { w } else { w.inverse() }.0);
    }
    out
}
