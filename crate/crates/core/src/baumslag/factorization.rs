use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::bs12::{BsElement, PcTriple};
use crate::power_circuit::text::{self, ParseError};
use crate::power_circuit::{BitBudget, Marking, NodeId, PcError, PowerCircuit, ReducedCircuit};
use crate::word::{Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Beta {
    B,
    BInv,
}

impl Beta {
    pub fn inverse(self) -> Beta {
        match self {
            Beta::B => Beta::BInv,
            Beta::BInv => Beta::B,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Beta::B => 'b',
            Beta::BInv => 'B',
        }
    }

    fn letter(self) -> Letter {
        match self {
            Beta::B => Letter::B,
            Beta::BInv => Letter::BInv,
        }
    }
}

/// `γ0 β1 γ1 ... βk γk` with `γi` in `BS(1,2)` and `βi` in `{b, b⁻¹}`, without
/// the circuit the triples live in.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct Parts {
    pub gamma0: PcTriple,
    pub factors: Vec<(Beta, PcTriple)>,
}

/// A word-like token used to assemble products in a shared circuit.
#[derive(Clone, Debug)]
pub(crate) enum Token {
    H(PcTriple),
    Beta(Beta),
}

impl Parts {
    pub fn h(g: PcTriple) -> Parts {
        Parts { gamma0: g, factors: Vec::new() }
    }

    pub fn beta_len(&self) -> usize {
        self.factors.len()
    }

    pub fn signature(&self) -> Vec<Beta> {
        self.factors.iter().map(|f| f.0).collect()
    }

    fn last_gamma_mut(&mut self) -> &mut PcTriple {
        match self.factors.last_mut() {
            Some(f) => &mut f.1,
            None => &mut self.gamma0,
        }
    }

    pub fn from_tokens(rc: &mut ReducedCircuit, tokens: &[Token]) -> Parts {
        let mut p = Parts::default();
        for t in tokens {
            match t {
                Token::H(g) => {
                    let last = p.last_gamma_mut();
                    *last = last.mul(g, rc);
                }
                Token::Beta(b) => p.factors.push((*b, PcTriple::identity())),
            }
        }
        p
    }

    pub fn inverse(&self, rc: &mut ReducedCircuit) -> Parts {
        let mut gammas: Vec<&PcTriple> = vec![&self.gamma0];
        gammas.extend(self.factors.iter().map(|f| &f.1));
        let k = self.factors.len();
        let gamma0 = gammas[k].inv(rc);
        let factors = (0..k)
            .rev()
            .map(|i| (self.factors[i].0.inverse(), gammas[i].inv(rc)))
            .collect();
        Parts { gamma0, factors }
    }

    pub fn concat(&self, other: &Parts, rc: &mut ReducedCircuit) -> Parts {
        let mut out = self.clone();
        let last = out.last_gamma_mut();
        *last = last.mul(&other.gamma0, rc);
        out.factors.extend(other.factors.iter().cloned());
        out
    }

    pub fn mul(&self, other: &Parts, rc: &mut ReducedCircuit) -> Parts {
        self.concat(other, rc).reduce(rc)
    }

    /// `z self z⁻¹`, Britton-reduced.
    pub fn conjugate_by(&self, z: &Parts, rc: &mut ReducedCircuit) -> Parts {
        let zi = z.inverse(rc);
        z.concat(self, rc).concat(&zi, rc).reduce(rc)
    }

    /// Britton reduction by a single left-to-right stack pass.
    pub fn reduce(&self, rc: &mut ReducedCircuit) -> Parts {
        let mut head = self.gamma0.clone();
        let mut stack: Vec<(Beta, PcTriple)> = Vec::with_capacity(self.factors.len());
        for (beta, gamma) in &self.factors {
            if let Some((top, g)) = stack.last() {
                if *top == beta.inverse() {
                    if let Some(h) = pinch(rc, *top, g) {
                        stack.pop();
                        let prev = match stack.last_mut() {
                            Some(x) => &mut x.1,
                            None => &mut head,
                        };
                        *prev = prev.mul(&h, rc).mul(gamma, rc);
                        continue;
                    }
                }
            }
            stack.push((*beta, gamma.clone()));
        }
        Parts { gamma0: head, factors: stack }
    }

    pub fn is_reduced(&self, rc: &mut ReducedCircuit) -> bool {
        self.factors.windows(2).all(|w| {
            let ((b1, g), (b2, _)) = (&w[0], &w[1]);
            *b2 != b1.inverse() || pinch(rc, *b1, g).is_none()
        })
    }

    pub fn is_identity(&self, rc: &mut ReducedCircuit) -> bool {
        let r = self.reduce(rc);
        r.factors.is_empty() && r.gamma0.is_identity(rc)
    }

    pub fn equals(&self, other: &Parts, rc: &mut ReducedCircuit) -> bool {
        let oi = other.inverse(rc);
        self.concat(&oi, rc).is_identity(rc)
    }

    /// Cyclic Britton reduction. Returns `(x̂, u)` with `u self u⁻¹ = x̂`.
    pub fn cyclically_reduce(&self, rc: &mut ReducedCircuit) -> (Parts, Parts) {
        let mut cur = self.reduce(rc);
        let mut steps: Vec<Vec<Token>> = Vec::new();
        while !cur.factors.is_empty() {
            if !cur.gamma0.is_identity(rc) {
                let g0 = std::mem::take(&mut cur.gamma0);
                steps.push(vec![Token::H(g0.inv(rc))]);
                let last = cur.last_gamma_mut();
                *last = last.mul(&g0, rc);
            }
            let k = cur.factors.len();
            if k < 2 || cur.factors[0].0 != cur.factors[k - 1].0.inverse() {
                break;
            }
            let (bk, delta) = cur.factors[k - 1].clone();
            let Some(h) = pinch(rc, bk, &delta) else { break };
            steps.push(vec![Token::Beta(bk), Token::H(delta)]);
            let gamma1 = cur.factors[0].1.clone();
            cur.gamma0 = h.mul(&gamma1, rc);
            cur.factors = cur.factors[1..k - 1].to_vec();
        }
        let tokens: Vec<Token> = steps.into_iter().rev().flatten().collect();
        let u = Parts::from_tokens(rc, &tokens).reduce(rc);
        (cur, u)
    }

    /// Cyclic permutation starting at factor `i` (0-based): returns
    /// `(z', c)` with `c self c⁻¹ = z'`.
    pub fn transposition(&self, i: usize, rc: &mut ReducedCircuit) -> (Parts, Parts) {
        let k = self.factors.len();
        assert!(i < k, "transposition index out of range");
        let mut rotated: Vec<(Beta, PcTriple)> = self.factors.clone();
        let last = rotated[k - 1].1.mul(&self.gamma0, rc);
        rotated[k - 1].1 = last;
        rotated.rotate_left(i);
        let prefix = Parts { gamma0: self.gamma0.clone(), factors: self.factors[..i].to_vec() };
        let c = prefix.inverse(rc);
        (Parts { gamma0: PcTriple::identity(), factors: rotated }, c)
    }

    pub fn import(&self, into: &mut ReducedCircuit, from: &ReducedCircuit) -> Parts {
        let mut memo: HashMap<NodeId, NodeId> = HashMap::new();
        let mut tr = |g: &PcTriple| PcTriple {
            k: into.import_with(from, &g.k, &mut memo),
            s: into.import_with(from, &g.s, &mut memo),
            l: into.import_with(from, &g.l, &mut memo),
        };
        Parts {
            gamma0: tr(&self.gamma0),
            factors: self.factors.iter().map(|(b, g)| (*b, tr(g))).collect(),
        }
    }

    fn markings(&self) -> Vec<Marking> {
        let mut out = Vec::new();
        for g in std::iter::once(&self.gamma0).chain(self.factors.iter().map(|f| &f.1)) {
            out.extend(g.markings().into_iter().cloned());
        }
        out
    }

    fn with_markings(&self, ms: Vec<Marking>) -> Parts {
        let mut it = ms.into_iter();
        let mut next = || PcTriple {
            k: it.next().expect("k"),
            s: it.next().expect("s"),
            l: it.next().expect("l"),
        };
        let gamma0 = next();
        let factors = self.factors.iter().map(|(b, _)| (*b, next())).collect();
        Parts { gamma0, factors }
    }
}

/// The replacement for `β γ β⁻¹` when it pinches: `b a^l b⁻¹ = t^l` and
/// `b⁻¹ t^l b = a^l`.
pub(crate) fn pinch(rc: &mut ReducedCircuit, beta: Beta, gamma: &PcTriple) -> Option<PcTriple> {
    match beta {
        Beta::B => gamma.a_exponent(rc).map(PcTriple::t_pow),
        Beta::BInv => {
            let l = gamma.t_exponent(rc)?;
            Some(PcTriple::a_pow(rc, &l))
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactorizationParseError {
    #[error(transparent)]
    Pc(#[from] ParseError),
    #[error("missing `# beta:` signature line")]
    MissingSignature,
    #[error("bad signature character `{0}`")]
    BadSignature(char),
    #[error("missing marking `{0}`")]
    MissingMarking(String),
    #[error(transparent)]
    Circuit(#[from] PcError),
}

/// A β-factorization together with the reduced circuit its triples live in.
#[derive(Clone, Debug)]
pub struct BetaFactorization {
    circuit: ReducedCircuit,
    parts: Parts,
}

impl Default for BetaFactorization {
    fn default() -> Self {
        Self::identity()
    }
}

impl BetaFactorization {
    pub fn identity() -> Self {
        BetaFactorization { circuit: ReducedCircuit::new(), parts: Parts::default() }
    }

    pub(crate) fn from_parts(circuit: ReducedCircuit, parts: Parts) -> Self {
        BetaFactorization { circuit, parts }
    }

    pub(crate) fn parts(&self) -> &Parts {
        &self.parts
    }

    /// Splits a word at its `b`/`B` letters and evaluates each segment in `BS(1,2)`.
    pub fn from_word(w: &Word) -> Self {
        let mut rc = ReducedCircuit::new();
        let mut segments: Vec<(Option<Beta>, &[Letter])> = Vec::new();
        let letters = w.letters();
        let mut start = 0;
        let mut beta = None;
        for (i, &l) in letters.iter().enumerate() {
            if l.is_beta() {
                segments.push((beta, &letters[start..i]));
                beta = Some(if l == Letter::B { Beta::B } else { Beta::BInv });
                start = i + 1;
            }
        }
        segments.push((beta, &letters[start..]));
        let mut parts = Parts::default();
        for (beta, seg) in segments {
            let g = BsElement::eval_letters(seg).expect("segments contain no beta letters");
            let g = PcTriple::from_element(&mut rc, &g);
            match beta {
                None => parts.gamma0 = g,
                Some(b) => parts.factors.push((b, g)),
            }
        }
        BetaFactorization { circuit: rc, parts }
    }

    /// An element of the base group given by a triple over `circuit`.
    pub fn from_h(circuit: ReducedCircuit, g: PcTriple) -> Self {
        BetaFactorization { circuit, parts: Parts::h(g) }
    }

    pub fn from_bs(g: &BsElement) -> Self {
        let mut rc = ReducedCircuit::new();
        let g = PcTriple::from_element(&mut rc, g);
        BetaFactorization { circuit: rc, parts: Parts::h(g) }
    }

    /// `t^ε(m)` for a marking over `circuit`.
    pub fn t_power(circuit: ReducedCircuit, m: Marking) -> Self {
        Self::from_h(circuit, PcTriple::t_pow(m))
    }

    pub fn circuit(&self) -> &ReducedCircuit {
        &self.circuit
    }

    pub fn beta_length(&self) -> usize {
        self.parts.beta_len()
    }

    pub fn signature(&self) -> Vec<Beta> {
        self.parts.signature()
    }

    pub fn gamma0(&self) -> &PcTriple {
        &self.parts.gamma0
    }

    pub fn factors(&self) -> &[(Beta, PcTriple)] {
        &self.parts.factors
    }

    /// The element of `BS(1,2)` when the β-length is zero.
    pub fn h_value(&self) -> Option<&PcTriple> {
        self.parts.factors.is_empty().then_some(&self.parts.gamma0)
    }

    pub fn inverse(&self) -> Self {
        let mut rc = self.circuit.clone();
        let parts = self.parts.inverse(&mut rc);
        BetaFactorization { circuit: rc, parts }
    }

    /// Brings `other` into a copy of this circuit; returns the copy and both parts.
    pub(crate) fn joint(&self, other: &BetaFactorization) -> (ReducedCircuit, Parts, Parts) {
        let mut rc = self.circuit.clone();
        let o = other.parts.import(&mut rc, &other.circuit);
        (rc, self.parts.clone(), o)
    }

    /// The product, Britton-reduced.
    pub fn mul(&self, other: &BetaFactorization) -> Self {
        let (mut rc, a, b) = self.joint(other);
        let parts = a.mul(&b, &mut rc);
        BetaFactorization { circuit: rc, parts }
    }

    pub fn britton_reduce(&self) -> Self {
        let mut rc = self.circuit.clone();
        let parts = self.parts.reduce(&mut rc);
        BetaFactorization { circuit: rc, parts }
    }

    /// Whether no factor `b γ b⁻¹` with `γ ∈ <a>` or `b⁻¹ γ b` with `γ ∈ <t>` occurs.
    pub fn is_britton_reduced(&self) -> bool {
        let mut rc = self.circuit.clone();
        self.parts.is_reduced(&mut rc)
    }

    /// Returns `(x̂, u)` with `x̂` cyclically Britton-reduced and `u self u⁻¹ = x̂`.
    pub fn cyclically_reduce(&self) -> (Self, Self) {
        let mut rc = self.circuit.clone();
        let (x, u) = self.parts.cyclically_reduce(&mut rc);
        let (rc, ms) = rc.compact(&[x.markings(), u.markings()].concat());
        let split = 3 * (x.beta_len() + 1);
        let xs = x.with_markings(ms[..split].to_vec());
        let us = u.with_markings(ms[split..].to_vec());
        (
            BetaFactorization { circuit: rc.clone(), parts: xs },
            BetaFactorization { circuit: rc, parts: us },
        )
    }

    /// Whether every cyclic permutation of the factors is Britton-reduced.
    pub fn is_cyclically_reduced(&self) -> bool {
        let mut rc = self.circuit.clone();
        if !self.parts.is_reduced(&mut rc) {
            return false;
        }
        let k = self.parts.factors.len();
        if k < 2 {
            return true;
        }
        let (b1, bk) = (self.parts.factors[0].0, self.parts.factors[k - 1].0);
        if b1 != bk.inverse() {
            return true;
        }
        let wrap = self.parts.factors[k - 1].1.mul(&self.parts.gamma0, &mut rc);
        pinch(&mut rc, bk, &wrap).is_none()
    }

    /// The cyclic permutation starting at factor `i` (0-based) and the
    /// conjugator `c` with `c self c⁻¹` equal to it.
    pub fn transposition(&self, i: usize) -> (Self, Self) {
        let mut rc = self.circuit.clone();
        let (z, c) = self.parts.transposition(i, &mut rc);
        (
            BetaFactorization { circuit: rc.clone(), parts: z },
            BetaFactorization { circuit: rc, parts: c },
        )
    }

    /// A smaller circuit holding only what this factorization references.
    pub fn compact(&self) -> Self {
        let (rc, ms) = self.circuit.compact(&self.parts.markings());
        let parts = self.parts.with_markings(ms);
        BetaFactorization { circuit: rc, parts }
    }

    /// Each `γi` expanded into `BS(1,2)`, when all fit in the budget.
    pub fn expand(&self, budget: BitBudget) -> Result<(BsElement, Vec<(Beta, BsElement)>), PcError> {
        let g0 = self.parts.gamma0.to_element(&self.circuit, budget)?;
        let fs = self
            .parts
            .factors
            .iter()
            .map(|(b, g)| Ok((*b, g.to_element(&self.circuit, budget)?)))
            .collect::<Result<Vec<_>, PcError>>()?;
        Ok((g0, fs))
    }

    /// A word for this element if every `γi` expands to a short word.
    pub fn to_word(&self, max_len: usize) -> Option<Word> {
        let (g0, fs) = self.expand(BitBudget::new(BitBudget::MIN_BITS).ok()?).ok()?;
        let mut w = g0.to_word(max_len)?;
        for (b, g) in fs {
            w.0.push(b.letter());
            w.0.extend(g.to_word(max_len)?.0);
            if w.len() > max_len {
                return None;
            }
        }
        Some(w)
    }

    /// `pc v1` text with markings `g<i>_k`, `g<i>_s`, `g<i>_l` and a
    /// `# beta:` comment carrying the signature.
    pub fn to_pc_text(&self) -> String {
        let (rc, ms) = self.circuit.compact(&self.parts.markings());
        let names: Vec<String> = (0..=self.beta_length())
            .flat_map(|i| ["k", "s", "l"].map(|c| format!("g{i}_{c}")))
            .collect();
        let pairs: Vec<(&str, &Marking)> = names.iter().map(|n| n.as_str()).zip(ms.iter()).collect();
        let sig: String = self.signature().iter().map(|b| b.as_char()).collect();
        let body = text::serialize(rc.circuit(), &pairs);
        let (header, rest) = body.split_once('\n').expect("header line");
        format!("{header}\n# beta: {sig}\n{rest}")
    }

    pub fn from_pc_text(s: &str) -> Result<Self, FactorizationParseError> {
        let sig_line = s
            .lines()
            .find_map(|l| l.trim().strip_prefix("# beta:"))
            .ok_or(FactorizationParseError::MissingSignature)?;
        let sig = sig_line
            .trim()
            .chars()
            .map(|c| match c {
                'b' => Ok(Beta::B),
                'B' => Ok(Beta::BInv),
                other => Err(FactorizationParseError::BadSignature(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let doc = text::parse(s)?;
        let mut ms = Vec::new();
        for i in 0..=sig.len() {
            for c in ["k", "s", "l"] {
                let name = format!("g{i}_{c}");
                let m = doc
                    .marking(&name)
                    .ok_or_else(|| FactorizationParseError::MissingMarking(name.clone()))?;
                ms.push(m.clone());
            }
        }
        let (rc, ms) = doc.circuit.reduce(&ms)?;
        let shape = Parts {
            gamma0: PcTriple::identity(),
            factors: sig.into_iter().map(|b| (b, PcTriple::identity())).collect(),
        };
        let mut parts = shape.with_markings(ms);
        let mut rc = rc;
        parts.gamma0 = parts.gamma0.normalize(&mut rc);
        for f in &mut parts.factors {
            f.1 = f.1.normalize(&mut rc);
        }
        Ok(BetaFactorization { circuit: rc, parts })
    }

    pub fn circuit_size(&self) -> usize {
        self.circuit.len()
    }

    pub fn raw_circuit(&self) -> &PowerCircuit {
        self.circuit.circuit()
    }
}

impl fmt::Display for BetaFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let budget = BitBudget::new(4096).expect("above minimum");
        let show = |g: &PcTriple| match g.to_element(&self.circuit, budget) {
            Ok(e) => e.to_string(),
            Err(_) => "(large)".to_string(),
        };
        write!(f, "{}", show(&self.parts.gamma0))?;
        for (b, g) in &self.parts.factors {
            write!(f, " {} {}", b.as_char(), show(g))?;
        }
        Ok(())
    }
}

/// Whether `x = y` in the group.
pub fn word_problem(x: &BetaFactorization, y: &BetaFactorization) -> bool {
    let (mut rc, a, b) = x.joint(y);
    a.equals(&b, &mut rc)
}

/// `z x z⁻¹`, Britton-reduced.
pub fn conjugate_by(z: &BetaFactorization, x: &BetaFactorization) -> BetaFactorization {
    let (mut rc, zp, xp) = z.joint(x);
    let parts = xp.conjugate_by(&zp, &mut rc);
    BetaFactorization { circuit: rc, parts }
}
