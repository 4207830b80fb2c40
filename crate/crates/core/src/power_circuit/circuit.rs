use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::power_circuit::{BitBudget, Marking, NodeId, PcError, ReducedCircuit};

/// A power circuit: a DAG whose node `P` carries the successor marking
/// `Λ_P`, and whose value is `ε(P) = 2^ε(Λ_P)`.
///
/// Nodes may reference ids that do not exist yet (the text parser needs
/// this); [`PowerCircuit::check_structure`] reports dangling edges.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PowerCircuit {
    succ: Vec<Marking>,
}

impl PowerCircuit {
    pub fn new() -> Self {
        PowerCircuit { succ: Vec::new() }
    }

    pub fn from_successors(succ: Vec<Marking>) -> Self {
        PowerCircuit { succ }
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    pub fn add_node(&mut self, successors: Marking) -> NodeId {
        let id = NodeId(u32::try_from(self.succ.len()).expect("node count fits in u32"));
        self.succ.push(successors);
        id
    }

    pub fn successors(&self, p: NodeId) -> &Marking {
        &self.succ[p.index()]
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.succ.len() as u32).map(NodeId)
    }

    /// Number of edges, i.e. the total support size of all successor markings.
    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Marking::len).sum()
    }

    pub fn check_structure(&self, markings: &[Marking]) -> Result<(), PcError> {
        let n = self.succ.len();
        let all = self.succ.iter().chain(markings.iter());
        for m in all {
            if let Some(node) = m.nodes().find(|q| q.index() >= n) {
                return Err(PcError::DanglingNode { node });
            }
        }
        Ok(())
    }

    /// Nodes ordered so that every node comes after all of its successors.
    pub fn topological_order(&self) -> Result<Vec<NodeId>, PcError> {
        self.check_structure(&[])?;
        const WHITE: u8 = 0;
        const GREY: u8 = 1;
        const BLACK: u8 = 2;
        let n = self.succ.len();
        let mut colour = vec![WHITE; n];
        let mut out = Vec::with_capacity(n);
        let mut stack: Vec<(usize, usize)> = Vec::new();
        for root in 0..n {
            if colour[root] != WHITE {
                continue;
            }
            colour[root] = GREY;
            stack.push((root, 0));
            while let Some(&mut (p, ref mut next)) = stack.last_mut() {
                let terms = self.succ[p].terms();
                if *next < terms.len() {
                    let q = terms[*next].0.index();
                    *next += 1;
                    match colour[q] {
                        WHITE => {
                            colour[q] = GREY;
                            stack.push((q, 0));
                        }
                        GREY => return Err(PcError::Cycle { node: NodeId(q as u32) }),
                        _ => {}
                    }
                } else {
                    colour[p] = BLACK;
                    out.push(NodeId(p as u32));
                    stack.pop();
                }
            }
        }
        Ok(out)
    }

    /// `Ok(true)` when the circuit is acyclic and every node reachable from
    /// `markings` has a non-negative exponent. Dangling references are errors.
    pub fn validate(&self, markings: &[Marking]) -> Result<bool, PcError> {
        self.check_structure(markings)?;
        match self.reduce(markings) {
            Ok(_) => Ok(true),
            Err(PcError::Cycle { .. }) | Err(PcError::NotIntegral { .. }) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// Exact value of `m`, provided every node value on the way fits in
    /// `budget.max_bits()` bits.
    pub fn evaluate(&self, m: &Marking, budget: BitBudget) -> Result<BigInt, PcError> {
        let mut exps: Vec<Option<u64>> = vec![None; self.succ.len()];
        let mut total = BigInt::zero();
        for &(p, sign) in m.terms() {
            let e = self.node_exponent(p, budget, &mut exps)?;
            let v = BigInt::one() << e;
            if sign > 0 {
                total += v;
            } else {
                total -= v;
            }
        }
        Ok(total)
    }

    /// Exponent `ε(Λ_p)`, so that `ε(p) = 2^exponent`.
    fn node_exponent(
        &self,
        root: NodeId,
        budget: BitBudget,
        exps: &mut [Option<u64>],
    ) -> Result<u64, PcError> {
        if root.index() >= self.succ.len() {
            return Err(PcError::DanglingNode { node: root });
        }
        if let Some(e) = exps[root.index()] {
            return Ok(e);
        }
        let mut on_stack = vec![false; self.succ.len()];
        let mut stack = vec![root];
        on_stack[root.index()] = true;
        while let Some(&p) = stack.last() {
            let mut pending = None;
            for &(q, _) in self.succ[p.index()].terms() {
                if q.index() >= self.succ.len() {
                    return Err(PcError::DanglingNode { node: q });
                }
                if exps[q.index()].is_none() {
                    if on_stack[q.index()] {
                        return Err(PcError::Cycle { node: q });
                    }
                    pending = Some(q);
                    break;
                }
            }
            if let Some(q) = pending {
                on_stack[q.index()] = true;
                stack.push(q);
                continue;
            }
            let mut acc = BigInt::zero();
            for &(q, sign) in self.succ[p.index()].terms() {
                let v = BigInt::one() << exps[q.index()].expect("successor evaluated");
                if sign > 0 {
                    acc += v;
                } else {
                    acc -= v;
                }
            }
            if acc.is_negative() {
                return Err(PcError::NotIntegral { node: p });
            }
            // 2^e needs e + 1 bits.
            let e = match acc.to_u64() {
                Some(e) if e < budget.max_bits() => e,
                _ => return Err(PcError::BudgetExceeded { max_bits: budget.max_bits() }),
            };
            exps[p.index()] = Some(e);
            on_stack[p.index()] = false;
            stack.pop();
        }
        Ok(exps[root.index()].expect("root evaluated"))
    }

    /// Binary expansion of `v`: node `P_i` has value `2^i` and successor
    /// marking equal to the binary expansion of `i` over earlier nodes.
    pub fn from_int(v: &BigInt) -> (PowerCircuit, Marking) {
        let mut c = PowerCircuit::new();
        if v.is_zero() {
            return (c, Marking::empty());
        }
        let bits = v.bits();
        for i in 0..bits {
            let terms: Vec<(NodeId, i8)> = (0..64)
                .filter(|j| (i >> j) & 1 == 1)
                .map(|j| (NodeId(j as u32), 1))
                .collect();
            c.add_node(Marking::from_sorted_unchecked(terms));
        }
        let sign: i8 = if v.is_negative() { -1 } else { 1 };
        let mag = v.magnitude();
        let terms = (0..bits)
            .filter(|&i| mag.bit(i))
            .map(|i| (NodeId(i as u32), sign))
            .collect();
        (c, Marking::from_sorted_unchecked(terms))
    }

    /// A chain of `n` nodes whose top node has value [`tower`]`(n)`.
    /// `tower(0) = 0` is the empty marking over a one-node circuit.
    pub fn tower(n: usize) -> (PowerCircuit, Marking) {
        let mut c = PowerCircuit::new();
        let mut prev = c.add_node(Marking::empty());
        for _ in 1..n {
            prev = c.add_node(Marking::single(prev, 1));
        }
        let m = if n == 0 { Marking::empty() } else { Marking::single(prev, 1) };
        (c, m)
    }

    /// Disjoint union; markings are renumbered into the merged circuit.
    pub fn merge(parts: &[(&PowerCircuit, &[Marking])]) -> (PowerCircuit, Vec<Vec<Marking>>) {
        let mut out = PowerCircuit::new();
        let mut all = Vec::with_capacity(parts.len());
        for (circuit, markings) in parts {
            let offset = out.succ.len() as u32;
            let shift = |m: &Marking| {
                Marking::from_sorted_unchecked(
                    m.terms().iter().map(|&(q, s)| (NodeId(q.0 + offset), s)).collect(),
                )
            };
            for s in &circuit.succ {
                out.succ.push(shift(s));
            }
            all.push(markings.iter().map(shift).collect());
        }
        (out, all)
    }

    /// Translates the circuit and markings into an equivalent reduced circuit.
    pub fn reduce(&self, markings: &[Marking]) -> Result<(ReducedCircuit, Vec<Marking>), PcError> {
        self.check_structure(markings)?;
        let topo = self.topological_order()?;
        let mut rc = ReducedCircuit::new();
        let mut image = vec![NodeId(0); self.succ.len()];
        for p in topo {
            let lam = rc.translate(self.successors(p), &image);
            if rc.sign(&lam) == std::cmp::Ordering::Less {
                return Err(PcError::NotIntegral { node: p });
            }
            image[p.index()] = rc.insert_node(lam)?;
        }
        let out = markings.iter().map(|m| rc.translate(m, &image)).collect();
        Ok((rc, out))
    }
}

/// `tower(0) = 0`, `tower(i + 1) = 2^tower(i)`, when it fits in `max_bits` bits.
pub fn tower(n: usize, budget: BitBudget) -> Result<BigInt, PcError> {
    let mut v = BigInt::zero();
    for _ in 0..n {
        let e = match v.to_u64() {
            Some(e) if e < budget.max_bits() => e,
            _ => return Err(PcError::BudgetExceeded { max_bits: budget.max_bits() }),
        };
        v = BigInt::one() << e;
    }
    Ok(v)
}
