#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use pcgroup::power_circuit::{Marking, NodeId, PowerCircuit};
use rand::Rng;

/// Node values by direct recursion, independent of the library evaluator.
/// `None` when some exponent is negative or at least `max_exp`.
pub fn oracle_node_values(c: &PowerCircuit, max_exp: u64) -> Option<Vec<BigInt>> {
    let mut vals: Vec<Option<BigInt>> = vec![None; c.len()];
    fn go(c: &PowerCircuit, p: usize, vals: &mut Vec<Option<BigInt>>, max_exp: u64) -> Option<BigInt> {
        if let Some(v) = &vals[p] {
            return Some(v.clone());
        }
        let mut e = BigInt::zero();
        for &(q, s) in c.successors(NodeId(p as u32)).terms() {
            let v = go(c, q.index(), vals, max_exp)?;
            e += BigInt::from(s) * v;
        }
        if e.is_negative() {
            return None;
        }
        let e = e.to_u64().filter(|&e| e < max_exp)?;
        let v = BigInt::one() << e;
        vals[p] = Some(v.clone());
        Some(v)
    }
    (0..c.len()).map(|p| go(c, p, &mut vals, max_exp)).collect()
}

pub fn oracle_marking(vals: &[BigInt], m: &Marking) -> BigInt {
    m.terms().iter().map(|&(p, s)| BigInt::from(s) * &vals[p.index()]).sum()
}

/// A random acyclic circuit with at most `max_nodes` nodes whose values all
/// stay below `2^max_exp`.
pub fn random_circuit<R: Rng>(rng: &mut R, max_nodes: usize, max_exp: u64) -> (PowerCircuit, Vec<BigInt>) {
    loop {
        let n = rng.gen_range(1..=max_nodes);
        let mut c = PowerCircuit::new();
        for i in 0..n {
            let m = random_marking(rng, i, 0.4);
            c.add_node(m);
        }
        if let Some(vals) = oracle_node_values(&c, max_exp) {
            return (c, vals);
        }
    }
}

pub fn random_marking<R: Rng>(rng: &mut R, n: usize, density: f64) -> Marking {
    let mut terms = Vec::new();
    for q in 0..n {
        if rng.gen_bool(density) {
            terms.push((NodeId(q as u32), if rng.gen_bool(0.5) { 1 } else { -1 }));
        }
    }
    Marking::new(terms).unwrap()
}

pub mod britton {
    //! Britton reduction over explicit dyadic elements, independent of the
    //! power-circuit implementation. Only suitable for short words.

    use num_traits::ToPrimitive;
    use pcgroup::bs12::BsElement;
    use pcgroup::word::{Letter, Word};

    #[derive(Clone, Debug, PartialEq)]
    pub enum Tok {
        H(BsElement),
        B(bool),
    }

    pub fn tokens(w: &Word) -> Vec<Tok> {
        let mut out = vec![Tok::H(BsElement::identity())];
        for &l in w.letters() {
            let g = match l {
                Letter::A => BsElement::a_pow(1),
                Letter::AInv => BsElement::a_pow(-1),
                Letter::T => BsElement::t_pow(1),
                Letter::TInv => BsElement::t_pow(-1),
                Letter::B | Letter::BInv => {
                    out.push(Tok::B(l == Letter::B));
                    out.push(Tok::H(BsElement::identity()));
                    continue;
                }
            };
            if let Some(Tok::H(h)) = out.last_mut() {
                *h = h.mul(&g);
            }
        }
        out
    }

    /// Fully reduced (γ0, [(positive, γi)]), by repeated pinching.
    pub fn reduce(w: &Word) -> (BsElement, Vec<(bool, BsElement)>) {
        let mut gam = Vec::new();
        let mut bet = Vec::new();
        for t in tokens(w) {
            match t {
                Tok::H(h) => gam.push(h),
                Tok::B(p) => bet.push(p),
            }
        }
        // gam[i] sits between bet[i-1] and bet[i].
        'outer: loop {
            for i in 0..bet.len().saturating_sub(1) {
                let mid = &gam[i + 1];
                let rep = if bet[i] && !bet[i + 1] && mid.m == 0 && mid.r.is_integer() {
                    BsElement::t_pow(mid.r.to_integer().unwrap().to_i64().unwrap())
                } else if !bet[i] && bet[i + 1] && mid.r.is_zero() {
                    BsElement::a_pow(mid.m)
                } else {
                    continue;
                };
                let merged = gam[i].mul(&rep).mul(&gam[i + 2]);
                gam.splice(i..i + 3, [merged]);
                bet.drain(i..i + 2);
                continue 'outer;
            }
            break;
        }
        let g0 = gam.remove(0);
        (g0, bet.into_iter().zip(gam).collect())
    }

    pub fn is_identity(w: &Word) -> bool {
        let (g0, f) = reduce(w);
        f.is_empty() && g0.is_identity()
    }

    pub fn equal(x: &Word, y: &Word) -> bool {
        is_identity(&x.concat(&y.inverse()))
    }
}
