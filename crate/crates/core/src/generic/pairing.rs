//! Pairing of words with Dyck words over their β-letters.

use crate::generic::base::{Baumslag, HnnInstance};
use crate::generic::dyck::DyckWord;
use crate::generic::GenericError;
use crate::word::{Letter, Word};

fn betas(x: &Word, d: &DyckWord) -> Result<Vec<bool>, GenericError> {
    let bs: Vec<bool> = x.letters().iter().filter(|l| l.is_beta()).map(|&l| l == Letter::B).collect();
    if bs.len() != d.len() {
        return Err(GenericError::LengthMismatch { betas: bs.len(), expected: d.len() });
    }
    Ok(bs)
}

fn matches_betas(bs: &[bool], d: &DyckWord) -> bool {
    // Adjacent () exactly where b b⁻¹ occurs.
    let adjacent = (0..bs.len().saturating_sub(1))
        .all(|i| (d.is_open(i) && !d.is_open(i + 1)) == (bs[i] && !bs[i + 1]));
    adjacent && d.pairs().all(|(i, j)| bs[i] != bs[j])
}

/// Whether the β-sequence of `x` fits `d`: `()` at `i, i+1` exactly when
/// `β_i β_(i+1) = b b⁻¹`, and every matching pair carries `β, β⁻¹`.
pub fn matches(x: &Word, d: &DyckWord) -> Result<bool, GenericError> {
    Ok(matches_betas(&betas(x, d)?, d))
}

/// Whether `x` and `d` match and pinching the pairs of `d` innermost first
/// reduces `x` into the base group.
pub fn successful(x: &Word, d: &DyckWord) -> Result<bool, GenericError> {
    let bs = betas(x, d)?;
    if !matches_betas(&bs, d) {
        return Ok(false);
    }
    let g = Baumslag::base_generated();
    let mut stack: Vec<(bool, <Baumslag as HnnInstance>::Elem)> = Vec::new();
    let mut cur = g.identity();
    let mut k = 0;
    for &l in x.letters() {
        if !l.is_beta() {
            g.mul_letter(&mut cur, l);
            continue;
        }
        let positive = l == Letter::B;
        if d.is_open(k) {
            stack.push((positive, std::mem::replace(&mut cur, g.identity())));
        } else {
            let (top, before) = stack.pop().expect("Dyck words close what they open");
            let image = match (top, positive) {
                (true, false) if g.in_a(&cur) => g.phi(&cur),
                (false, true) if g.in_b(&cur) => g.phi_inv(&cur),
                _ => return Ok(false),
            };
            cur = g.mul(&before, &image);
        }
        k += 1;
    }
    Ok(true)
}
