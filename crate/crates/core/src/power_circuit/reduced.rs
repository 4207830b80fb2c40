use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::power_circuit::{steps, BitBudget, Marking, NodeId, PcError, PowerCircuit};

/// The leaf node. Every reduced circuit has it, and it is the smallest node.
pub const UNIT: NodeId = NodeId(0);

const LABEL_SPACING: u64 = 1 << 32;

/// A power circuit in which distinct nodes have distinct values.
///
/// Nodes are kept in a value-sorted order with order-preserving labels, and
/// every node knows whether its upper neighbour has exactly twice its value.
/// Together these make comparison a single top-down scan with no expansion.
///
/// The circuit only ever grows: ids are stable, so every marking handed out
/// earlier stays valid after further operations.
#[derive(Clone, Debug)]
pub struct ReducedCircuit {
    circuit: PowerCircuit,
    label: Vec<u64>,
    order: Vec<NodeId>,
    next: Vec<Option<NodeId>>,
    doubles: Vec<bool>,
}

impl Default for ReducedCircuit {
    fn default() -> Self {
        Self::new()
    }
}

impl ReducedCircuit {
    pub fn new() -> Self {
        let mut circuit = PowerCircuit::new();
        circuit.add_node(Marking::empty());
        ReducedCircuit {
            circuit,
            label: vec![LABEL_SPACING],
            order: vec![UNIT],
            next: vec![None],
            doubles: vec![false],
        }
    }

    pub fn circuit(&self) -> &PowerCircuit {
        &self.circuit
    }

    pub fn len(&self) -> usize {
        self.circuit.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Node ids in increasing order of value.
    pub fn value_order(&self) -> &[NodeId] {
        &self.order
    }

    pub fn successors(&self, p: NodeId) -> &Marking {
        self.circuit.successors(p)
    }

    pub fn unit(&self) -> Marking {
        Marking::single(UNIT, 1)
    }

    /// Whether `upper` is the node right above `lower` and has twice its value.
    fn is_double_pair(&self, lower: NodeId, upper: NodeId) -> bool {
        self.doubles[lower.index()] && self.next[lower.index()] == Some(upper)
    }

    /// Sign of `Σ d_P ε(P)`. Digits must be distinct nodes with `|d| <= 2`,
    /// except at the unit node where `|d| <= 3` is allowed.
    fn sign_of_digits(&self, digits: &mut Vec<(NodeId, i64)>) -> Ordering {
        steps::bump(digits.len() as u64 + 1);
        digits.retain(|d| d.1 != 0);
        digits.sort_unstable_by_key(|d| std::cmp::Reverse(self.label[d.0.index()]));
        let mut p: i64 = 0;
        let mut prev = UNIT;
        for &(node, d) in digits.iter() {
            debug_assert!(d.abs() <= if node == UNIT { 3 } else { 2 });
            if p != 0 {
                // With |p| = 1, a gap of two or more doublings dominates the rest.
                if !self.is_double_pair(node, prev) {
                    return p.cmp(&0);
                }
                p *= 2;
            }
            p += d;
            if node != UNIT && p.abs() >= 2 {
                return p.cmp(&0);
            }
            prev = node;
        }
        p.cmp(&0)
    }

    fn merged_digits(&self, a: &Marking, b: &Marking, b_sign: i64) -> Vec<(NodeId, i64)> {
        let mut out = Vec::with_capacity(a.len() + b.len() + 1);
        let (x, y) = (a.terms(), b.terms());
        let (mut i, mut j) = (0, 0);
        while i < x.len() || j < y.len() {
            if j == y.len() || (i < x.len() && x[i].0 < y[j].0) {
                out.push((x[i].0, x[i].1 as i64));
                i += 1;
            } else if i == x.len() || y[j].0 < x[i].0 {
                out.push((y[j].0, b_sign * y[j].1 as i64));
                j += 1;
            } else {
                out.push((x[i].0, x[i].1 as i64 + b_sign * y[j].1 as i64));
                i += 1;
                j += 1;
            }
        }
        out
    }

    pub fn sign(&self, m: &Marking) -> Ordering {
        let mut digits: Vec<(NodeId, i64)> = m.terms().iter().map(|&(n, s)| (n, s as i64)).collect();
        self.sign_of_digits(&mut digits)
    }

    /// Compares `ε(a)` with `ε(b)` without expanding any value.
    pub fn compare(&self, a: &Marking, b: &Marking) -> Ordering {
        let mut digits = self.merged_digits(a, b, -1);
        self.sign_of_digits(&mut digits)
    }

    fn is_exact_double(&self, lower: NodeId, upper: NodeId) -> bool {
        let mut digits = self.merged_digits(self.successors(upper), self.successors(lower), -1);
        match digits.iter_mut().find(|d| d.0 == UNIT) {
            Some(d) => d.1 -= 1,
            None => digits.push((UNIT, -1)),
        }
        self.sign_of_digits(&mut digits) == Ordering::Equal
    }

    /// Returns the node with successor marking value `ε(lam)`, creating it if
    /// no node of that value exists yet.
    pub fn insert_node(&mut self, lam: Marking) -> Result<NodeId, PcError> {
        self.circuit.check_structure(std::slice::from_ref(&lam))?;
        if self.sign(&lam) == Ordering::Less {
            return Err(PcError::NegativeExponent);
        }
        let (mut lo, mut hi) = (0, self.order.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            let q = self.order[mid];
            match self.compare(&lam, self.successors(q)) {
                Ordering::Equal => return Ok(q),
                Ordering::Less => hi = mid,
                Ordering::Greater => lo = mid + 1,
            }
        }
        // The unit node has the least possible value, so lo >= 1 here.
        debug_assert!(lo >= 1);
        steps::bump(1);
        let id = self.circuit.add_node(lam);
        let below = self.order[lo - 1];
        let above = self.order.get(lo).copied();
        self.order.insert(lo, id);
        self.next.push(above);
        self.next[below.index()] = Some(id);
        self.doubles.push(false);
        self.label.push(0);
        self.assign_label(lo);
        self.doubles[below.index()] = self.is_exact_double(below, id);
        if let Some(a) = above {
            self.doubles[id.index()] = self.is_exact_double(id, a);
        }
        Ok(id)
    }

    fn assign_label(&mut self, pos: usize) {
        let lo = self.label[self.order[pos - 1].index()];
        let hi = match self.order.get(pos + 1) {
            Some(q) => self.label[q.index()],
            None => lo.saturating_add(2 * LABEL_SPACING),
        };
        if hi - lo >= 2 {
            self.label[self.order[pos].index()] = lo + (hi - lo) / 2;
        } else {
            for (i, q) in self.order.iter().enumerate() {
                self.label[q.index()] = (i as u64 + 1) * LABEL_SPACING;
            }
        }
    }

    /// The node of value `2 ε(p)`.
    fn double_of(&mut self, p: NodeId) -> NodeId {
        if self.doubles[p.index()] {
            return self.next[p.index()].expect("double flag implies a successor");
        }
        let lam = self.successors(p).clone();
        let unit = self.unit();
        let lam = self.add(&lam, &unit);
        self.insert_node(lam).expect("doubling keeps exponents non-negative")
    }

    /// Turns a digit vector (`|d| <= 2`) into a marking of the same value.
    fn normalize(&mut self, mut digits: Vec<(NodeId, i64)>) -> Marking {
        digits.retain(|d| d.1 != 0);
        digits.sort_unstable_by_key(|d| self.label[d.0.index()]);
        let mut i = 0;
        while i < digits.len() {
            let (n, v) = digits[i];
            if v.abs() >= 2 {
                let r = if v.is_odd() { v.signum() } else { 0 };
                let carry = (v - r) / 2;
                digits[i].1 = r;
                let target = self.double_of(n);
                let tl = self.label[target.index()];
                let pos = i + 1 + digits[i + 1..].partition_point(|d| self.label[d.0.index()] < tl);
                if pos < digits.len() && digits[pos].0 == target {
                    digits[pos].1 += carry;
                } else {
                    digits.insert(pos, (target, carry));
                }
            }
            i += 1;
        }
        steps::bump(digits.len() as u64);
        let mut terms: Vec<(NodeId, i8)> =
            digits.into_iter().filter(|d| d.1 != 0).map(|(n, d)| (n, d as i8)).collect();
        terms.sort_unstable_by_key(|t| t.0);
        Marking::from_sorted_unchecked(terms)
    }

    /// `ε(a) + ε(b)`.
    pub fn add(&mut self, a: &Marking, b: &Marking) -> Marking {
        let digits = self.merged_digits(a, b, 1);
        self.normalize(digits)
    }

    /// `ε(a) - ε(b)`.
    pub fn sub(&mut self, a: &Marking, b: &Marking) -> Marking {
        let digits = self.merged_digits(a, b, -1);
        self.normalize(digits)
    }

    /// `ε(a) + sign * ε(b)`.
    pub fn add_signed(&mut self, a: &Marking, b: &Marking, sign: i8) -> Marking {
        if sign < 0 {
            self.sub(a, b)
        } else {
            self.add(a, b)
        }
    }

    /// A marking of value `ε(m) * 2^ε(shift)`. The shift must be non-negative.
    pub fn mul_pow2(&mut self, shift: &Marking, m: &Marking) -> Result<Marking, PcError> {
        match self.sign(shift) {
            Ordering::Less => return Err(PcError::NegativeExponent),
            Ordering::Equal => return Ok(m.clone()),
            Ordering::Greater => {}
        }
        let mut terms = Vec::with_capacity(m.len());
        for &(p, s) in m.terms() {
            let lam = self.successors(p).clone();
            let lam = self.add(&lam, shift);
            terms.push((self.insert_node(lam)?, s));
        }
        Marking::new(terms)
    }

    /// Splits `ε(m) = 2^ε(x) * ε(u)` with `ε(u)` odd. Zero gives two empty markings.
    pub fn decompose_odd(&mut self, m: &Marking) -> (Marking, Marking) {
        let lowest = match m.nodes().min_by_key(|p| self.label[p.index()]) {
            Some(p) => p,
            None => return (Marking::empty(), Marking::empty()),
        };
        let x = self.successors(lowest).clone();
        if x.is_empty() {
            return (x, m.clone());
        }
        let mut terms = Vec::with_capacity(m.len());
        for &(p, s) in m.terms() {
            let lam = self.successors(p).clone();
            let lam = self.sub(&lam, &x);
            terms.push((self.insert_node(lam).expect("lowest node has the least exponent"), s));
        }
        (x, Marking::new(terms).expect("shifting is injective on nodes"))
    }

    /// Whether `ε(d)` divides `ε(m)`. Expands both values within the budget.
    pub fn divides(&self, d: &Marking, m: &Marking, budget: BitBudget) -> Result<bool, PcError> {
        if self.sign(d) == Ordering::Equal {
            return Err(PcError::ZeroDivisor);
        }
        if self.sign(m) == Ordering::Equal {
            return Ok(true);
        }
        let dv = self.evaluate(d, budget)?;
        let mv = self.evaluate(m, budget)?;
        Ok(mv.is_multiple_of(&dv))
    }

    pub fn evaluate(&self, m: &Marking, budget: BitBudget) -> Result<BigInt, PcError> {
        self.circuit.evaluate(m, budget)
    }

    /// A marking of value `v`, built from its binary expansion.
    pub fn from_int(&mut self, v: &BigInt) -> Marking {
        let sign: i8 = if v.is_negative() { -1 } else { 1 };
        let mag = v.magnitude();
        let mut terms = Vec::new();
        for i in 0..mag.bits() {
            if mag.bit(i) {
                terms.push((self.pow2_node(i), sign));
            }
        }
        Marking::new(terms).expect("distinct powers give distinct nodes")
    }

    pub fn from_i64(&mut self, v: i64) -> Marking {
        self.from_int(&BigInt::from(v))
    }

    /// The node of value `2^e`.
    pub fn pow2_node(&mut self, e: u64) -> NodeId {
        if e == 0 {
            return UNIT;
        }
        let lam = self.from_int(&BigInt::from(e));
        self.insert_node(lam).expect("positive exponent")
    }

    /// Value of `Σ σ image(Q)` for a marking over another circuit.
    pub(crate) fn translate(&mut self, m: &Marking, image: &[NodeId]) -> Marking {
        let mut acc = Marking::empty();
        for &(q, s) in m.terms() {
            acc = self.add_signed(&acc, &Marking::single(image[q.index()], 1), s);
        }
        acc
    }

    /// Copies markings of `other` into this circuit, returning the translated markings.
    pub fn import(&mut self, other: &ReducedCircuit, markings: &[Marking]) -> Vec<Marking> {
        let mut memo: HashMap<NodeId, NodeId> = HashMap::new();
        markings.iter().map(|m| self.import_with(other, m, &mut memo)).collect()
    }

    /// Like [`ReducedCircuit::import`], sharing a memo table across calls.
    pub fn import_with(
        &mut self,
        other: &ReducedCircuit,
        m: &Marking,
        memo: &mut HashMap<NodeId, NodeId>,
    ) -> Marking {
        memo.insert(UNIT, UNIT);
        let mut terms = Vec::with_capacity(m.len());
        for &(root, sign) in m.terms() {
            let mut stack = vec![root];
            while let Some(&p) = stack.last() {
                if memo.contains_key(&p) {
                    stack.pop();
                    continue;
                }
                let lam = other.successors(p);
                if let Some(q) = lam.nodes().find(|q| !memo.contains_key(q)) {
                    stack.push(q);
                    continue;
                }
                let t: Vec<(NodeId, i8)> = lam.terms().iter().map(|&(q, s)| (memo[&q], s)).collect();
                let lam = Marking::new(t).expect("distinct values map to distinct nodes");
                let id = self.insert_node(lam).expect("imported node is valid");
                memo.insert(p, id);
                stack.pop();
            }
            terms.push((memo[&root], sign));
        }
        Marking::new(terms).expect("distinct values map to distinct nodes")
    }

    /// A fresh circuit holding only the nodes reachable from `markings`.
    pub fn compact(&self, markings: &[Marking]) -> (ReducedCircuit, Vec<Marking>) {
        let mut rc = ReducedCircuit::new();
        let out = rc.import(self, markings);
        (rc, out)
    }

    /// Checks the order and doubling flags against exact values. Only usable
    /// while every node fits in the budget; intended for tests.
    pub fn check_invariants(&self, budget: BitBudget) -> Result<(), String> {
        let values: Vec<BigInt> = self
            .order
            .iter()
            .map(|&p| self.evaluate(&Marking::single(p, 1), budget))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        if self.order[0] != UNIT {
            return Err("unit node is not the smallest".into());
        }
        for i in 1..values.len() {
            let (a, b) = (self.order[i - 1], self.order[i]);
            if values[i - 1] >= values[i] {
                return Err(format!("order violated between {a} and {b}"));
            }
            if self.label[a.index()] >= self.label[b.index()] {
                return Err(format!("labels not increasing between {a} and {b}"));
            }
            if self.next[a.index()] != Some(b) {
                return Err(format!("next pointer of {a} is wrong"));
            }
            let is_double = &values[i - 1] * 2 == values[i];
            if self.doubles[a.index()] != is_double {
                return Err(format!("doubling flag of {a} is wrong"));
            }
        }
        let top = *self.order.last().expect("non-empty");
        if self.next[top.index()].is_some() || self.doubles[top.index()] {
            return Err("top node has a successor".into());
        }
        if !values.iter().all(|v| !v.is_zero()) {
            return Err("zero-valued node".into());
        }
        Ok(())
    }
}
