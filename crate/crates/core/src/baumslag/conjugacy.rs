use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::baumslag::factorization::{Beta, BetaFactorization, Parts, Token};
use crate::bs12::{conj_bs12_pc, BsConjugacy, PcTriple};
use crate::power_circuit::{BitBudget, Marking, PcError, ReducedCircuit};

/// Which branch of the decision procedure produced the answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConjugacyPath {
    /// Cyclically reduced forms have different β-lengths.
    BetaLength,
    NonHCaseN1,
    NonHEpsPlus,
    NonHEpsMinus,
    HDirect,
    HVerdi,
    HNixH,
}

impl ConjugacyPath {
    pub fn name(self) -> &'static str {
        match self {
            ConjugacyPath::BetaLength => "beta-length",
            ConjugacyPath::NonHCaseN1 => "nonH-case-n1",
            ConjugacyPath::NonHEpsPlus => "nonH-eps-plus",
            ConjugacyPath::NonHEpsMinus => "nonH-eps-minus",
            ConjugacyPath::HDirect => "H-direct",
            ConjugacyPath::HVerdi => "H-verdi",
            ConjugacyPath::HNixH => "H-nixH",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [
            ConjugacyPath::BetaLength,
            ConjugacyPath::NonHCaseN1,
            ConjugacyPath::NonHEpsPlus,
            ConjugacyPath::NonHEpsMinus,
            ConjugacyPath::HDirect,
            ConjugacyPath::HVerdi,
            ConjugacyPath::HNixH,
        ]
        .into_iter()
        .find(|p| p.name() == s)
    }

    /// Whether this path may have needed budgeted expansion.
    pub fn is_h_path(self) -> bool {
        matches!(self, ConjugacyPath::HDirect | ConjugacyPath::HVerdi | ConjugacyPath::HNixH)
    }
}

impl fmt::Display for ConjugacyPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A decision; on `yes` the witness `z` satisfies `z x z⁻¹ = y`.
#[derive(Clone, Debug)]
pub struct ConjugacyAnswer {
    pub decision: bool,
    pub witness: Option<BetaFactorization>,
    pub path: ConjugacyPath,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConjugacyError {
    #[error("input is not cyclically Britton-reduced")]
    NotCyclicallyReduced,
    #[error("input has β-length zero")]
    ZeroBetaLength,
}

struct Decided {
    decision: bool,
    witness: Option<Parts>,
    path: ConjugacyPath,
}

impl Decided {
    fn no(path: ConjugacyPath) -> Self {
        Decided { decision: false, witness: None, path }
    }
}

fn all_positive(p: &Parts) -> bool {
    p.factors.iter().all(|f| f.0 == Beta::B)
}

/// Collins-style search over transpositions of `y`, for cyclically reduced
/// `x` and `y` with `|x|_β > 0`, in a shared circuit.
fn core(rc: &mut ReducedCircuit, x: &Parts, y: &Parts) -> Decided {
    let n = x.beta_len();
    debug_assert!(n > 0);
    let flip = all_positive(x);
    let (x, y) = if flip { (x.inverse(rc), y.inverse(rc)) } else { (x.clone(), y.clone()) };
    let first = x.factors.iter().position(|f| f.0 == Beta::BInv).expect("orientation has a b⁻¹");
    let (x1, cx) = x.transposition(first, rc);
    let path = if n == 1 {
        ConjugacyPath::NonHCaseN1
    } else if x1.factors[1].0 == Beta::B {
        ConjugacyPath::NonHEpsPlus
    } else {
        ConjugacyPath::NonHEpsMinus
    };
    if y.beta_len() != n {
        return Decided::no(ConjugacyPath::BetaLength);
    }
    let sig = x1.signature();
    let g = x1.factors[0].1.clone();
    for j in 0..n {
        if y.factors[j].0 != Beta::BInv {
            continue;
        }
        let (y1, cy) = y.transposition(j, rc);
        if y1.signature() != sig {
            continue;
        }
        let h = y1.factors[0].1.clone();
        let k = match path {
            ConjugacyPath::NonHEpsPlus => {
                // a^k passes b⁻¹ as t^k, and only <t> passes the following b,
                // so the a-coordinates must agree exactly.
                if rc.compare(&g.s, &h.s) != Ordering::Equal {
                    continue;
                }
                rc.sub(&h.k, &g.k)
            }
            _ => {
                let (m, q) = (g.m(rc), h.m(rc));
                rc.sub(&q, &m)
            }
        };
        let ak = Parts::h(PcTriple::a_pow(rc, &k));
        let found = if path == ConjugacyPath::NonHCaseN1 {
            // (0,k)(r,m) = (s,q)(k,0)
            let tk = PcTriple::t_pow(k.clone());
            let lhs = tk.mul(&g, rc);
            let rhs = h.mul(&ak.gamma0, rc);
            lhs.equals(&rhs, rc)
        } else {
            x1.conjugate_by(&ak, rc).equals(&y1, rc)
        };
        if found {
            let cyi = cy.inverse(rc);
            let z = cyi.concat(&ak, rc).concat(&cx, rc).reduce(rc);
            return Decided { decision: true, witness: Some(z), path };
        }
    }
    Decided::no(path)
}

/// Decides `x ~ y` for cyclically reduced `x` with `|x|_β > 0`. This path
/// never expands power-circuit values.
pub fn conj_bg_core(
    x: &BetaFactorization,
    y: &BetaFactorization,
) -> Result<ConjugacyAnswer, ConjugacyError> {
    if x.beta_length() == 0 {
        return Err(ConjugacyError::ZeroBetaLength);
    }
    if !x.is_cyclically_reduced() || !y.is_cyclically_reduced() {
        return Err(ConjugacyError::NotCyclicallyReduced);
    }
    let (mut rc, xp, yp) = x.joint(y);
    let xp = normalize_head(&xp, &mut rc);
    let yp = normalize_head(&yp, &mut rc);
    let d = core(&mut rc, &xp.0, &yp.0);
    Ok(finish(rc, d, &xp.1, &yp.1))
}

/// Moves `γ0` to the end so the factorization starts with a β.
fn normalize_head(p: &Parts, rc: &mut ReducedCircuit) -> (Parts, Parts) {
    if p.factors.is_empty() {
        return (p.clone(), Parts::default());
    }
    p.transposition(0, rc)
}

fn finish(mut rc: ReducedCircuit, d: Decided, ux: &Parts, uy: &Parts) -> ConjugacyAnswer {
    let witness = d.witness.map(|zc| {
        let uyi = uy.inverse(&mut rc);
        let z = uyi.concat(&zc, &mut rc).concat(ux, &mut rc).reduce(&mut rc);
        BetaFactorization::from_parts(rc.clone(), z).compact()
    });
    ConjugacyAnswer { decision: d.decision, witness, path: d.path }
}

/// Conjugates `g ∈ BS(1,2)` into the form `(r, m)` with `r` integral and
/// `m != 0`. Returns the new element and `u` with `u g u⁻¹` equal to it.
fn to_integral_nonzero_m(rc: &mut ReducedCircuit, g: &PcTriple) -> (PcTriple, Vec<Token>) {
    let mut tokens = Vec::new();
    let mut g = g.normalize(rc);
    if !g.s.is_empty() && rc.sign(&g.k) == Ordering::Less {
        let j = rc.sub(&Marking::empty(), &g.k);
        let tj = PcTriple::t_pow(j);
        g = g.conjugate_by(&tj, rc);
        tokens.push(Token::H(tj));
    }
    let m = g.m(rc);
    if rc.sign(&m) == Ordering::Equal {
        // b a^r b⁻¹ = t^r
        let r = g.r_integral(rc).expect("made integral");
        g = PcTriple::t_pow(r);
        tokens.insert(0, Token::Beta(Beta::B));
    }
    (g, tokens)
}

fn h_path(
    rc: &mut ReducedCircuit,
    x: &PcTriple,
    y: &PcTriple,
    budget: BitBudget,
) -> Result<Decided, PcError> {
    if x.is_identity(rc) || y.is_identity(rc) {
        let both = x.is_identity(rc) && y.is_identity(rc);
        return Ok(Decided {
            decision: both,
            witness: both.then(Parts::default),
            path: ConjugacyPath::HDirect,
        });
    }
    if let BsConjugacy::Yes(z) = conj_bs12_pc(rc, x, y, budget)? {
        return Ok(Decided { decision: true, witness: Some(Parts::h(z)), path: ConjugacyPath::HDirect });
    }
    let (x1, ux) = to_integral_nonzero_m(rc, x);
    let (y1, uy) = to_integral_nonzero_m(rc, y);
    let ux = Parts::from_tokens(rc, &ux);
    let uy = Parts::from_tokens(rc, &uy);
    let wrap = |rc: &mut ReducedCircuit, core: Parts| {
        let uyi = uy.inverse(rc);
        uyi.concat(&core, rc).concat(&ux, rc).reduce(rc)
    };
    // A lift through b can make (r,0) and (s,q) conjugate in H.
    if let BsConjugacy::Yes(z) = conj_bs12_pc(rc, &x1, &y1, budget)? {
        let w = wrap(rc, Parts::h(z));
        return Ok(Decided { decision: true, witness: Some(w), path: ConjugacyPath::HDirect });
    }
    let mx = x1.m(rc);
    let my = y1.m(rc);
    let zx = conj_bs12_pc(rc, &x1, &PcTriple::t_pow(mx.clone()), budget)?;
    let zy = conj_bs12_pc(rc, &y1, &PcTriple::t_pow(my.clone()), budget)?;
    let (BsConjugacy::Yes(z1), BsConjugacy::Yes(z2)) = (zx, zy) else {
        return Ok(Decided::no(ConjugacyPath::HNixH));
    };
    let (ex, ox) = rc.decompose_odd(&mx);
    let (ey, oy) = rc.decompose_odd(&my);
    if rc.compare(&ox, &oy) != Ordering::Equal {
        return Ok(Decided::no(ConjugacyPath::HVerdi));
    }
    // t^mx -> a^mx (by b⁻¹) -> a^my (by t^j) -> t^my (by b).
    let j = rc.sub(&ey, &ex);
    let z2i = z2.inv(rc);
    let tokens = [
        Token::H(z2i),
        Token::Beta(Beta::B),
        Token::H(PcTriple::t_pow(j)),
        Token::Beta(Beta::BInv),
        Token::H(z1),
    ];
    let core = Parts::from_tokens(rc, &tokens).reduce(rc);
    let w = wrap(rc, core);
    Ok(Decided { decision: true, witness: Some(w), path: ConjugacyPath::HVerdi })
}

/// Decides conjugacy for arbitrary elements. Only classes meeting the base
/// group can need budgeted expansion.
pub fn conj_bg(
    x: &BetaFactorization,
    y: &BetaFactorization,
    budget: BitBudget,
) -> Result<ConjugacyAnswer, PcError> {
    let (mut rc, xp, yp) = x.joint(y);
    let (xh, ux) = xp.cyclically_reduce(&mut rc);
    let (yh, uy) = yp.cyclically_reduce(&mut rc);
    let d = if xh.beta_len() != yh.beta_len() {
        Decided::no(ConjugacyPath::BetaLength)
    } else if xh.beta_len() > 0 {
        let (xh, cx) = normalize_head(&xh, &mut rc);
        let (yh, cy) = normalize_head(&yh, &mut rc);
        let d = core(&mut rc, &xh, &yh);
        let ux = cx.concat(&ux, &mut rc);
        let uy = cy.concat(&uy, &mut rc);
        return Ok(finish(rc, d, &ux, &uy));
    } else {
        h_path(&mut rc, &xh.gamma0, &yh.gamma0, budget)?
    };
    Ok(finish(rc, d, &ux, &uy))
}

/// Checks `z x z⁻¹ = y`.
pub fn verify_witness(x: &BetaFactorization, y: &BetaFactorization, z: &BetaFactorization) -> bool {
    let (mut rc, xp, yp) = x.joint(y);
    let zp = z.parts().import(&mut rc, z.circuit());
    xp.conjugate_by(&zp, &mut rc).equals(&yp, &mut rc)
}
