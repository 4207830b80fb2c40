//! Online Britton reduction of a letter stream.

use rand::Rng;

use crate::generic::base::HnnInstance;
use crate::word::Letter;

/// The Britton-reduced form of the prefix read so far: a stack of
/// `(β, γ)` pairs, where `γ` is the base element preceding `β`, and the
/// current base element after the last β.
#[derive(Debug)]
pub struct WalkState<'a, G: HnnInstance> {
    inst: &'a G,
    stack: Vec<(bool, G::Elem)>,
    cur: G::Elem,
}

impl<G: HnnInstance> Clone for WalkState<'_, G> {
    fn clone(&self) -> Self {
        WalkState { inst: self.inst, stack: self.stack.clone(), cur: self.cur.clone() }
    }
}

impl<'a, G: HnnInstance> WalkState<'a, G> {
    pub fn new(inst: &'a G) -> Self {
        WalkState { inst, stack: Vec::new(), cur: inst.identity() }
    }

    /// Reads one letter; returns `Some(±1)` on a β-letter, the change in
    /// the reduced β-length.
    pub fn push(&mut self, l: Letter) -> Option<i8> {
        match l {
            Letter::B | Letter::BInv => Some(self.push_beta(l == Letter::B)),
            _ => {
                self.inst.mul_letter(&mut self.cur, l);
                None
            }
        }
    }

    /// Reads `b` (`positive`) or `b⁻¹`.
    pub fn push_beta(&mut self, positive: bool) -> i8 {
        if let Some((top, _)) = self.stack.last() {
            if *top != positive {
                // b γ b⁻¹ with γ ∈ A, or b⁻¹ γ b with γ ∈ B.
                let pinch = if *top { self.inst.in_a(&self.cur) } else { self.inst.in_b(&self.cur) };
                if pinch {
                    let image =
                        if *top { self.inst.phi(&self.cur) } else { self.inst.phi_inv(&self.cur) };
                    let (_, before) = self.stack.pop().expect("checked non-empty");
                    self.cur = self.inst.mul(&before, &image);
                    return -1;
                }
            }
        }
        let before = std::mem::replace(&mut self.cur, self.inst.identity());
        self.stack.push((positive, before));
        1
    }

    pub fn push_base(&mut self, g: &G::Elem) {
        self.cur = self.inst.mul(&self.cur, g);
    }

    /// Reduced β-length of the prefix.
    pub fn depth(&self) -> usize {
        self.stack.len()
    }

    /// Sign of the top β-letter, if any.
    pub fn top(&self) -> Option<bool> {
        self.stack.last().map(|e| e.0)
    }

    pub fn current(&self) -> &G::Elem {
        &self.cur
    }

    /// Whether the prefix lies in the base group.
    pub fn in_base(&self) -> bool {
        self.stack.is_empty()
    }

    /// Whether the prefix is the identity.
    pub fn is_identity(&self) -> bool {
        self.stack.is_empty() && self.inst.is_identity(&self.cur)
    }
}

/// The β-steps of a walk: `ys[i]` is `Y_(i+1)` and `xs[i]` is `X_i`, so
/// `xs[0] = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub ys: Vec<i8>,
    pub xs: Vec<usize>,
    pub in_base: bool,
}

/// A uniform random walk of `steps` letters over `Δ`.
pub fn hnn_walk_trace<G: HnnInstance, R: Rng>(inst: &G, steps: usize, rng: &mut R) -> Trace {
    let sigma = inst.sigma();
    let delta = sigma.len() + 2;
    let mut w = WalkState::new(inst);
    let mut ys = Vec::new();
    let mut xs = vec![0];
    for _ in 0..steps {
        let i = rng.gen_range(0..delta);
        let l = if i < sigma.len() {
            sigma[i]
        } else if i == sigma.len() {
            Letter::B
        } else {
            Letter::BInv
        };
        if let Some(y) = w.push(l) {
            ys.push(y);
            xs.push(w.depth());
        }
    }
    Trace { ys, xs, in_base: w.in_base() }
}

/// Whether a word over `Δ` of the instance evaluates into the base group.
pub fn walk_in_base<G: HnnInstance>(inst: &G, letters: &[Letter]) -> bool {
    let mut w = WalkState::new(inst);
    for &l in letters {
        w.push(l);
    }
    w.in_base()
}
